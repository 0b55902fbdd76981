#include "curvcomplex/report.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace curvcomplex {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Report::set(const std::string& key, Value value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = std::move(value);
      return;
    }
  entries_.emplace_back(key, std::move(value));
}

const Report::Value* Report::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

double Report::number(const std::string& key) const {
  const Value* v = find(key);
  if (!v) throw std::out_of_range("report: no key '" + key + "'");
  if (const double* d = std::get_if<double>(v)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  throw std::invalid_argument("report: '" + key + "' is not a number");
}

std::string Report::to_text() const {
  std::ostringstream out;
  for (const auto& [key, value] : entries_) {
    out << key << " = ";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) out << v;
          else if constexpr (std::is_same_v<T, double>) out << format_number(v);
          else if constexpr (std::is_same_v<T, bool>) out << (v ? "true" : "false");
          else if constexpr (std::is_same_v<T, std::int64_t>) out << v;
          else {
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_number(v[i]);
          }
        },
        value);
    out << '\n';
  }
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : entries_)
    std::visit([&](const auto& v) { j[key] = v; }, value);
  return j.dump(2) + "\n";
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) set(prefix + k, v);
}

Report energy_report(const SegmentationResult& r) {
  Report rep;
  rep.set("status", to_string(r.status));
  rep.set("objective", r.energy);
  rep.set("lower_bound", r.lower_bound);
  rep.set("relative_gap", r.relative_gap);
  rep.set("constant_offset", r.constant_offset);
  rep.set("data_energy", r.data_part);
  rep.set("length_energy", r.length_part);
  rep.set("curvature_energy", r.curvature_part);
  rep.set("relaxation_passes", r.relaxation_passes);
  rep.set("passes", r.passes);
  rep.set("pass_bounds", r.pass_bounds);
  rep.set("fractional_count", r.fractional_count);
  rep.set("ambiguous_regions", r.ambiguous_count);
  rep.set("iterations", static_cast<std::int64_t>(r.iterations));
  return rep;
}

}  // namespace curvcomplex
