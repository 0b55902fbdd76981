// Binary portable graymap / pixmap I/O (P5 / P6, 8 bit, maxval 255).

#pragma once

#include "curvcomplex/energy.hpp"
#include "curvcomplex/inpaint.hpp"

#include <iosfwd>
#include <string>

namespace curvcomplex {

/// Reads a P5 or P6 image; P5 yields one channel, P6 three. Header comments
/// are skipped. Throws std::runtime_error on malformed input.
ColorImage read_image(std::istream& in);
ColorImage read_image(const std::string& path);

/// Single-channel read; P6 input is rejected.
GrayImage read_pgm(const std::string& path);

/// Values are rounded half away from zero; anything outside [0, 255] or
/// non-finite is an error.
void write_image(const ColorImage& image, std::ostream& out);
void write_image(const ColorImage& image, const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

/// Seed mask: 0 none, 1 background, 2 foreground.
SeedMask read_seed_mask(const std::string& path);
/// Damage mask: any nonzero value is damaged.
DamageMask read_damage_mask(const std::string& path);

}  // namespace curvcomplex
