#include "curvcomplex/image_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace curvcomplex {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n' && c != '\r') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw std::runtime_error("image: truncated header");
  return tok;
}

int header_int(std::istream& in) {
  const std::string tok = header_token(in);
  for (char ch : tok)
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::runtime_error("image: bad header field '" + tok + "'");
  if (tok.size() > 9) throw std::runtime_error("image: header value too large");
  return std::stoi(tok);
}

unsigned char to_byte(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("image: non-finite pixel value");
  const double r = std::round(v);
  if (r < 0.0 || r > 255.0) throw std::invalid_argument("image: pixel value outside [0, 255]");
  return static_cast<unsigned char>(r);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

ColorImage read_image(std::istream& in) {
  char magic[2];
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw std::runtime_error("image: expected a binary P5 or P6 file");
  const int channels = magic[1] == '5' ? 1 : 3;
  // header_int consumes exactly one whitespace character after maxval.
  const int w = header_int(in), h = header_int(in), maxval = header_int(in);
  if (w <= 0 || h <= 0) throw std::runtime_error("image: empty raster");
  if (maxval != 255) throw std::runtime_error("image: only maxval 255 is supported");
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h * channels);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw std::runtime_error("image: truncated pixel data");
  ColorImage img;
  img.channels.assign(static_cast<std::size_t>(channels), Eigen::ArrayXXd(h, w));
  std::size_t k = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c) img.channels[c](y, x) = buf[k++];
  return img;
}

ColorImage read_image(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return read_image(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

GrayImage read_pgm(const std::string& path) {
  ColorImage img = read_image(path);
  if (img.channels.size() != 1) throw std::runtime_error(path + ": expected a grayscale (P5) image");
  return std::move(img.channels[0]);
}

void write_image(const ColorImage& image, std::ostream& out) {
  const std::size_t channels = image.channels.size();
  if (channels != 1 && channels != 3) throw std::invalid_argument("image: one or three channels expected");
  const int w = image.width(), h = image.height();
  for (const auto& ch : image.channels)
    if (ch.rows() != h || ch.cols() != w) throw std::invalid_argument("image: channel sizes differ");
  out << (channels == 1 ? "P5" : "P6") << '\n' << w << ' ' << h << "\n255\n";
  std::vector<unsigned char> buf;
  buf.reserve(static_cast<std::size_t>(w) * h * channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (std::size_t c = 0; c < channels; ++c) buf.push_back(to_byte(image.channels[c](y, x)));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_image(const ColorImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_image(image, out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_pgm(const GrayImage& image, const std::string& path) {
  ColorImage img;
  img.channels.push_back(image);
  write_image(img, path);
}

SeedMask read_seed_mask(const std::string& path) {
  const GrayImage g = read_pgm(path);
  SeedMask seeds(g.rows(), g.cols());
  for (Eigen::Index y = 0; y < g.rows(); ++y)
    for (Eigen::Index x = 0; x < g.cols(); ++x) {
      const int v = static_cast<int>(g(y, x));
      if (v > 2) throw std::runtime_error(path + ": seed values must be 0 (none), 1 (background) or 2 (foreground)");
      seeds(y, x) = static_cast<Seed>(v);
    }
  return seeds;
}

DamageMask read_damage_mask(const std::string& path) {
  const GrayImage g = read_pgm(path);
  return g != 0.0;
}

}  // namespace curvcomplex
