#include "curvcomplex/mps.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace curvcomplex {

namespace {

template <class TagOf>
std::vector<std::string> names_for(Index count, TagOf tag_of, char fallback) {
  std::vector<std::string> names(static_cast<std::size_t>(count));
  std::unordered_set<std::string> seen;
  bool ok = true;
  for (Index k = 0; k < count && ok; ++k) {
    names[k] = element_name(tag_of(k));
    ok = names[k].size() <= 8 && seen.insert(names[k]).second;
  }
  if (!ok)
    for (Index k = 0; k < count; ++k) names[k] = fallback + std::to_string(k);
  return names;
}

// Left-justified field starting at a 1-based column.
void put(std::string& line, std::size_t column, const std::string& text) {
  if (line.size() < column - 1) line.resize(column - 1, ' ');
  line += text;
}

std::string data_line(const std::string& f1, const std::string& f2, const std::string& f3, const std::string& f4,
                      const std::string& f5 = {}, const std::string& f6 = {}) {
  std::string line;
  put(line, 2, f1);
  put(line, 5, f2);
  if (!f3.empty()) {
    put(line, 15, f3);
    put(line, 25, f4);
  }
  if (!f5.empty()) {
    put(line, 40, f5);
    put(line, 50, f6);
  }
  return line;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("mps: bad number '" + s + "'");
  }
  if (used != s.size()) throw std::runtime_error("mps: bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<std::string> variable_names(const LinearModel& model) {
  return names_for(model.num_variables(), [&](Index j) { return model.variable_tag(j); }, 'V');
}

std::vector<std::string> row_names(const LinearModel& model) {
  return names_for(model.num_rows(), [&](Index r) { return model.row_tag(r); }, 'W');
}

std::string mps_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  for (int precision = 17; precision >= 1; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    std::string s = buf;
    if (s.size() <= 12) {
      // Prefer the shortest rendering that still round-trips exactly.
      for (int shorter = 1; shorter < precision; ++shorter) {
        std::snprintf(buf, sizeof buf, "%.*g", shorter, v);
        if (std::strtod(buf, nullptr) == std::strtod(s.c_str(), nullptr)) return buf;
      }
      return s;
    }
  }
  throw std::invalid_argument("mps: number does not fit a 12-character field");
}

void write_mps(const LinearModel& model, std::ostream& out, const MpsOptions& options) {
  model.validate();
  const auto vnames = variable_names(model);
  const auto rnames = row_names(model);
  out << "NAME          " << options.name << "\n";
  out << "ROWS\n";
  out << data_line("N", "COST", {}, {}) << "\n";
  for (Index r = 0; r < model.num_rows(); ++r)
    out << data_line(model.relation(r) == Relation::Equal ? "E" : "L", rnames[r], {}, {}) << "\n";

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<Index, double>>> columns(static_cast<std::size_t>(model.num_variables()));
  for (Index r = 0; r < model.num_rows(); ++r) {
    const auto cols = model.row_columns(r);
    const auto vals = model.row_coefficients(r);
    for (std::size_t k = 0; k < cols.size(); ++k) columns[cols[k]].emplace_back(r, vals[k]);
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (Index j = 0; j < model.num_variables(); ++j) {
    const bool want_int = options.integrality_markers && model.integral(j);
    if (want_int != in_int) {
      const std::string mname = "MARKER" + std::to_string(marker++);
      out << data_line({}, mname, "'MARKER'", {}, want_int ? "'INTORG'" : "'INTEND'", {}) << "\n";
      in_int = want_int;
    }
    std::vector<std::pair<std::string, double>> entries;
    if (model.cost(j) != 0.0) entries.emplace_back("COST", model.cost(j));
    for (const auto& [r, v] : columns[j]) entries.emplace_back(rnames[r], v);
    if (entries.empty()) entries.emplace_back("COST", 0.0);
    for (std::size_t k = 0; k < entries.size(); k += 2) {
      if (k + 1 < entries.size())
        out << data_line({}, vnames[j], entries[k].first, mps_number(entries[k].second), entries[k + 1].first,
                         mps_number(entries[k + 1].second))
            << "\n";
      else
        out << data_line({}, vnames[j], entries[k].first, mps_number(entries[k].second)) << "\n";
    }
  }
  if (in_int) out << data_line({}, "MARKER" + std::to_string(marker), "'MARKER'", {}, "'INTEND'", {}) << "\n";

  out << "RHS\n";
  for (Index r = 0; r < model.num_rows(); ++r)
    if (model.rhs(r) != 0.0) out << data_line({}, "RHS", rnames[r], mps_number(model.rhs(r))) << "\n";

  out << "BOUNDS\n";
  for (Index j = 0; j < model.num_variables(); ++j) {
    const double lo = model.lower(j), up = model.upper(j);
    const std::string& n = vnames[j];
    if (lo == up) {
      out << data_line("FX", "BND", n, mps_number(lo)) << "\n";
      continue;
    }
    if (std::isinf(lo) && std::isinf(up)) {
      out << data_line("FR", "BND", n, {}) << "\n";
      continue;
    }
    if (std::isinf(lo)) out << data_line("MI", "BND", n, {}) << "\n";
    else if (lo != 0.0) out << data_line("LO", "BND", n, mps_number(lo)) << "\n";
    if (!std::isinf(up)) out << data_line("UP", "BND", n, mps_number(up)) << "\n";
  }
  out << "ENDATA\n";
}

LinearModel read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  struct RowInfo {
    char type;
    std::vector<std::pair<Index, double>> entries;
    double rhs = 0.0;
  };
  struct ColInfo {
    double cost = 0.0, lo = 0.0, up = kInfinity;
    bool integral = false;
  };
  Section section = Section::None;
  std::string objective;
  std::vector<RowInfo> rows;
  std::unordered_map<std::string, Index> row_index, col_index;
  std::vector<ColInfo> cols;
  bool integral = false;

  auto find_row = [&](const std::string& name) -> Index {
    auto it = row_index.find(name);
    if (it == row_index.end()) throw std::runtime_error("mps: unknown row '" + name + "'");
    return it->second;
  };
  auto find_col = [&](const std::string& name) -> Index {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw std::runtime_error("mps: unknown column '" + name + "'");
    return it->second;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string tok; ss >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = f[0];
      if (head == "NAME") continue;
      if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") section = Section::Done;
      else if (head == "RANGES") throw std::runtime_error("mps: RANGES are not supported");
      else throw std::runtime_error("mps: unknown section '" + head + "'");
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (f.size() != 2) throw std::runtime_error("mps: malformed ROWS line");
        const char t = f[0].size() == 1 ? f[0][0] : '?';
        if (t == 'N') {
          if (objective.empty()) objective = f[1];
          continue;
        }
        if (t != 'E' && t != 'L' && t != 'G') throw std::runtime_error("mps: bad row type '" + f[0] + "'");
        row_index.emplace(f[1], static_cast<Index>(rows.size()));
        rows.push_back({t, {}, 0.0});
        break;
      }
      case Section::Columns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          const std::string& kind = f.back();
          if (kind == "'INTORG'") integral = true;
          else if (kind == "'INTEND'") integral = false;
          else throw std::runtime_error("mps: bad marker");
          continue;
        }
        if (f.size() != 3 && f.size() != 5) throw std::runtime_error("mps: malformed COLUMNS line");
        auto [it, fresh] = col_index.emplace(f[0], static_cast<Index>(cols.size()));
        if (fresh) cols.push_back({0.0, 0.0, kInfinity, integral});
        const Index j = it->second;
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const double v = parse_number(f[k + 1]);
          if (f[k] == objective) cols[j].cost += v;
          else rows[find_row(f[k])].entries.emplace_back(j, v);
        }
        break;
      }
      case Section::Rhs: {
        if (f.size() != 3 && f.size() != 5) throw std::runtime_error("mps: malformed RHS line");
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          if (f[k] == objective) continue;
          rows[find_row(f[k])].rhs = parse_number(f[k + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (f.size() < 3) throw std::runtime_error("mps: malformed BOUNDS line");
        ColInfo& c = cols[find_col(f[2])];
        const std::string& t = f[0];
        const bool needs_value = t == "UP" || t == "LO" || t == "FX";
        if (needs_value && f.size() != 4) throw std::runtime_error("mps: bound without value");
        const double v = needs_value ? parse_number(f[3]) : 0.0;
        if (t == "UP") {
          c.up = v;
          if (v < 0.0 && c.lo == 0.0) c.lo = -kInfinity;
        } else if (t == "LO") c.lo = v;
        else if (t == "FX") c.lo = c.up = v;
        else if (t == "FR") c.lo = -kInfinity, c.up = kInfinity;
        else if (t == "MI") c.lo = -kInfinity;
        else if (t == "PL") c.up = kInfinity;
        else if (t == "BV") c.lo = 0.0, c.up = 1.0, c.integral = true;
        else throw std::runtime_error("mps: unsupported bound type '" + t + "'");
        break;
      }
      default: throw std::runtime_error("mps: data outside a section");
    }
  }
  if (section != Section::Done) throw std::runtime_error("mps: missing ENDATA");

  LinearModel model;
  Index k = 0;
  for (const ColInfo& c : cols) model.add_variable(c.cost, c.lo, c.up, c.integral, {Tag::Generic, k++});
  k = 0;
  std::vector<Index> idx;
  std::vector<double> val;
  for (const RowInfo& r : rows) {
    const double sign = r.type == 'G' ? -1.0 : 1.0;
    idx.clear();
    val.clear();
    for (const auto& [j, v] : r.entries) {
      idx.push_back(j);
      val.push_back(sign * v);
    }
    model.add_row(idx, val, r.type == 'E' ? Relation::Equal : Relation::LessEqual, sign * r.rhs, {Tag::Generic, k++});
  }
  return model;
}

void write_solution(const LinearModel& model, const Eigen::VectorXd& values, std::ostream& out) {
  const auto names = variable_names(model);
  for (Index j = 0; j < model.num_variables(); ++j) out << names[j] << ' ' << mps_number(values[j]) << '\n';
}

}  // namespace curvcomplex
