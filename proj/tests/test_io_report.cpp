#include "curvcomplex/image_io.hpp"
#include "curvcomplex/report.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <json.hpp>

#include <random>
#include <sstream>

using namespace curvcomplex;

TEST_CASE("write then read is the identity on random rasters") {
  std::mt19937_64 rng(1);
  for (int channels : {1, 3}) {
    ColorImage img;
    for (int c = 0; c < channels; ++c) {
      Eigen::ArrayXXd a(5, 7);
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = static_cast<double>(rng() % 256);
      img.channels.push_back(a);
    }
    std::stringstream buf;
    write_image(img, buf);
    const ColorImage back = read_image(buf);
    REQUIRE(back.channels.size() == img.channels.size());
    for (int c = 0; c < channels; ++c) CHECK((back.channels[c] == img.channels[c]).all());
  }
}

TEST_CASE("header comments are skipped and bad headers rejected") {
  std::string data = "P5\n# made by hand\n2 # width\n1\n# max\n255\n";
  data += static_cast<char>(7);
  data += static_cast<char>(200);
  std::istringstream in(data);
  const ColorImage img = read_image(in);
  REQUIRE(img.channels.size() == 1);
  CHECK(img.channels[0](0, 0) == 7.0);
  CHECK(img.channels[0](0, 1) == 200.0);

  std::istringstream wrong_max("P5\n1 1\n65535\n\x01\x02");
  CHECK_THROWS_AS(read_image(wrong_max), std::runtime_error);
  std::istringstream wrong_magic("P2\n1 1\n255\n1");
  CHECK_THROWS_AS(read_image(wrong_magic), std::runtime_error);
  std::istringstream truncated("P6\n2 2\n255\n\x01\x02");
  CHECK_THROWS_AS(read_image(truncated), std::runtime_error);
}

TEST_CASE("writer rounds half away from zero and rejects out-of-range values") {
  ColorImage img;
  img.channels.push_back(Eigen::ArrayXXd(1, 3));
  img.channels[0] << 127.5, 0.49, 254.5;
  std::stringstream buf;
  write_image(img, buf);
  const ColorImage back = read_image(buf);
  CHECK(back.channels[0](0, 0) == 128.0);
  CHECK(back.channels[0](0, 1) == 0.0);
  CHECK(back.channels[0](0, 2) == 255.0);
  img.channels[0](0, 0) = 256.0;
  std::stringstream bad;
  CHECK_THROWS(write_image(img, bad));
}

TEST_CASE("the shipped images load") {
  for (const char* name : {"disk", "squares", "annulus", "triangle", "blob"}) {
    const GrayImage img = read_pgm(fixtures::data_dir() + "/" + name + ".pgm");
    CHECK(img.rows() == 32);
    CHECK(img.cols() == 32);
  }
}

TEST_CASE("shortest round-trip numbers") {
  for (double v : {0.1, 1.0 / 3.0, 2893545.6484119836, 1e-300, -0.0, 6.0}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(6.0) == "6");
}

TEST_CASE("reports keep insertion order and render as text and JSON") {
  Report r;
  r.set("status", "optimal");
  r.set("objective", 2.5);
  r.set("passes", 3);
  r.set("ok", true);
  r.set("bounds", std::vector<double>{1.0, 1.5});
  r.set("objective", 2.75);
  CHECK(r.entries().size() == 5);
  CHECK(r.number("objective") == 2.75);
  CHECK(r.number("passes") == 3.0);
  CHECK(r.find("missing") == nullptr);
  CHECK(r.to_text() == "status = optimal\nobjective = 2.75\npasses = 3\nok = true\nbounds = 1 1.5\n");
  const auto j = nlohmann::ordered_json::parse(r.to_json());
  CHECK(j.begin().key() == "status");
  CHECK(j["passes"].get<int>() == 3);
  CHECK(j["objective"].get<double>() == 2.75);
  CHECK(j["bounds"].size() == 2);

  Report outer;
  outer.set("command", "x");
  outer.merge(r, "lp.");
  CHECK(outer.find("lp.objective") != nullptr);
}

TEST_CASE("energy report carries the required keys") {
  SegmentationResult res;
  res.energy = 10.0;
  res.lower_bound = 9.5;
  res.relative_gap = 0.05;
  res.pass_bounds = {9.0, 9.5};
  const Report r = energy_report(res);
  for (const char* key : {"objective", "lower_bound", "relative_gap", "constant_offset", "passes", "fractional_count",
                          "pass_bounds"})
    CHECK(r.find(key) != nullptr);
  CHECK(r.number("relative_gap") == 0.05);
}
