#include "curvcomplex/model.hpp"

#include <array>
#include <stdexcept>

namespace curvcomplex {

namespace {

struct PairProgram {
  std::vector<char> active;               // per face
  Eigen::VectorXd region_cost;            // per face
  std::vector<double> region_lower, region_upper;
  Eigen::VectorXd pair_length, pair_curvature;  // per complex pair
  double capacity = 1.0;
  bool include_crossings = false;
};

// Active incident faces of an edge.
int active_count(const std::vector<char>& active, const Edge& e) {
  return (e.positive_face >= 0 && active[e.positive_face] ? 1 : 0) +
         (e.negative_face >= 0 && active[e.negative_face] ? 1 : 0);
}

// A line can carry a boundary if its edge touches the active set; along the
// rim of the active set only the orientation of the inner face is kept.
bool line_allowed(const CellComplex& cx, const std::vector<char>& active, Index l) {
  if (!cx.line_in_use(l)) return false;
  const OrientedLine& line = cx.lines()[l];
  const Edge& e = cx.edges()[line.edge];
  const int n = active_count(active, e);
  if (n == 2) return true;
  if (n == 0) return false;
  const bool pos_active = e.positive_face >= 0 && active[e.positive_face];
  return line.sign == (pos_active ? +1 : -1);
}

ModelBundle build_pair_program(const CellComplex& cx, const PairProgram& prog) {
  ModelBundle out;
  LinearModel& m = out.model;
  VariableMap& map = out.map;
  map.capacity = prog.capacity;
  map.region.assign(static_cast<std::size_t>(cx.num_faces()), -1);
  map.pair.assign(static_cast<std::size_t>(cx.num_pairs()), -1);

  for (Index f = 0; f < cx.num_faces(); ++f) {
    if (!prog.active[f]) continue;
    map.region[f] = m.add_variable(prog.region_cost[f], prog.region_lower[f], prog.region_upper[f], true,
                                   {Tag::Region, f});
  }
  std::vector<char> allowed(static_cast<std::size_t>(cx.num_lines()));
  for (Index l = 0; l < cx.num_lines(); ++l) allowed[l] = line_allowed(cx, prog.active, l) ? 1 : 0;

  std::vector<std::vector<Index>> starts(static_cast<std::size_t>(cx.num_lines()));
  std::vector<std::vector<Index>> ends(static_cast<std::size_t>(cx.num_lines()));
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const LinePair& pr = cx.pairs()[p];
    if (!allowed[pr.first] || !allowed[pr.second]) continue;
    const Index v = m.add_variable(prog.pair_length[p] + prog.pair_curvature[p], 0.0, prog.capacity, true,
                                   {Tag::Pair, p});
    map.pair[p] = v;
    starts[pr.first].push_back(v);
    ends[pr.second].push_back(v);
  }
  map.length_cost = Eigen::VectorXd::Zero(m.num_variables());
  map.curvature_cost = Eigen::VectorXd::Zero(m.num_variables());
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    if (map.pair[p] < 0) continue;
    map.length_cost[map.pair[p]] = prog.pair_length[p];
    map.curvature_cost[map.pair[p]] = prog.pair_curvature[p];
  }

  std::vector<Index> cols;
  std::vector<double> vals;
  auto flush = [&](Relation rel, double rhs, ElementTag tag) {
    if (!cols.empty()) m.add_row(cols, vals, rel, rhs, tag);
    cols.clear();
    vals.clear();
  };

  // Surface continuation: sum_f m_e^f y_R^f - sum_p m_e^p y_p = 0.
  for (Index e = 0; e < cx.num_edges(); ++e) {
    const Edge& edge = cx.edges()[e];
    if (active_count(prog.active, edge) == 0) continue;
    for (Index f : {edge.positive_face, edge.negative_face}) {
      if (f < 0 || map.region[f] < 0) continue;
      cols.push_back(map.region[f]);
      vals.push_back(cx.incidence_region(e, f));
    }
    for (int sign : {+1, -1}) {
      for (Index v : starts[cx.line_of(e, sign)]) {
        cols.push_back(v);
        vals.push_back(-sign);
      }
    }
    flush(Relation::Equal, 0.0, {Tag::SurfaceContinuation, e});
  }

  // Boundary continuation: flow into l equals flow out of l.
  for (Index l = 0; l < cx.num_lines(); ++l) {
    if (!allowed[l]) continue;
    for (Index v : ends[l]) {
      cols.push_back(v);
      vals.push_back(1.0);
    }
    for (Index v : starts[l]) {
      cols.push_back(v);
      vals.push_back(-1.0);
    }
    flush(Relation::Equal, 0.0, {Tag::BoundaryContinuation, l});
  }

  // Boundary consistency: pairs ending in e<- plus pairs starting with e->.
  for (Index e = 0; e < cx.num_edges(); ++e) {
    if (active_count(prog.active, cx.edges()[e]) == 0) continue;
    for (Index v : ends[cx.line_of(e, -1)]) {
      cols.push_back(v);
      vals.push_back(1.0);
    }
    for (Index v : starts[cx.line_of(e, +1)]) {
      cols.push_back(v);
      vals.push_back(1.0);
    }
    flush(Relation::LessEqual, prog.capacity, {Tag::Consistency, e});
  }

  for (const auto& [p, q] : cx.crossings())
    if (map.pair[p] >= 0 && map.pair[q] >= 0) map.crossings.emplace_back(map.pair[p], map.pair[q]);
  if (prog.include_crossings) add_crossing_rows(m, map);
  return out;
}

}  // namespace

void add_crossing_rows(LinearModel& model, const VariableMap& map) {
  const std::array<double, 2> ones{1.0, 1.0};
  Index k = 0;
  for (const auto& [a, b] : map.crossings) {
    const std::array<Index, 2> cols{a, b};
    model.add_row(cols, ones, Relation::LessEqual, map.capacity, {Tag::Crossing, k++});
  }
}

ModelBundle build_length_model(const CellComplex& cx, const DataCost& data, double nu) {
  if (data.region.size() != cx.num_faces()) throw std::invalid_argument("length model: data cost size mismatch");
  if (!(nu >= 0.0)) throw std::invalid_argument("length model: nu must be >= 0");
  ModelBundle out;
  LinearModel& m = out.model;
  VariableMap& map = out.map;
  map.region.resize(static_cast<std::size_t>(cx.num_faces()));
  map.line.resize(static_cast<std::size_t>(cx.num_lines()));
  for (Index f = 0; f < cx.num_faces(); ++f) map.region[f] = m.add_variable(data.region[f], 0.0, 1.0, true, {Tag::Region, f});
  for (Index l = 0; l < cx.num_lines(); ++l)
    map.line[l] = m.add_variable(length_cost(cx, l, nu), 0.0, 1.0, true, {Tag::Line, l});
  map.length_cost = Eigen::VectorXd::Zero(m.num_variables());
  map.curvature_cost = Eigen::VectorXd::Zero(m.num_variables());
  for (Index l = 0; l < cx.num_lines(); ++l) map.length_cost[map.line[l]] = m.cost(map.line[l]);

  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index e = 0; e < cx.num_edges(); ++e) {
    cols.clear();
    vals.clear();
    const Edge& edge = cx.edges()[e];
    for (Index f : {edge.positive_face, edge.negative_face}) {
      if (f < 0) continue;
      cols.push_back(map.region[f]);
      vals.push_back(cx.incidence_region(e, f));
    }
    cols.push_back(map.line[cx.line_of(e, +1)]);
    vals.push_back(-1.0);
    cols.push_back(map.line[cx.line_of(e, -1)]);
    vals.push_back(1.0);
    m.add_row(cols, vals, Relation::Equal, 0.0, {Tag::SurfaceContinuation, e});
  }
  return out;
}

ModelBundle build_curvature_model(const CellComplex& cx, const DataCost& data, const EnergyParams& params,
                                  bool include_crossings) {
  validate(params);
  if (data.region.size() != cx.num_faces()) throw std::invalid_argument("curvature model: data cost size mismatch");
  PairProgram prog;
  prog.active.assign(static_cast<std::size_t>(cx.num_faces()), 1);
  prog.region_cost = data.region;
  prog.region_lower.assign(static_cast<std::size_t>(cx.num_faces()), 0.0);
  prog.region_upper.assign(static_cast<std::size_t>(cx.num_faces()), 1.0);
  prog.pair_length.resize(cx.num_pairs());
  prog.pair_curvature.resize(cx.num_pairs());
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const PairCostParts parts = pair_cost_parts(cx, cx.pairs()[p], params);
    prog.pair_length[p] = parts.length;
    prog.pair_curvature[p] = parts.curvature;
  }
  prog.include_crossings = include_crossings;
  return build_pair_program(cx, prog);
}

ModelBundle build_inpaint_model(const CellComplex& cx, const InpaintDomain& domain, const EnergyParams& params,
                                const std::optional<Eigen::VectorXd>& pair_costs, bool include_crossings) {
  validate(params);
  if (domain.role.size() != static_cast<std::size_t>(cx.num_faces()) || domain.known.size() != cx.num_faces())
    throw std::invalid_argument("inpaint model: domain size mismatch");
  if (pair_costs && pair_costs->size() != cx.num_pairs())
    throw std::invalid_argument("inpaint model: pair cost override size mismatch");
  if (!(domain.range >= 0.0)) throw std::invalid_argument("inpaint model: negative intensity range");

  PairProgram prog;
  prog.active.resize(static_cast<std::size_t>(cx.num_faces()));
  prog.region_cost = Eigen::VectorXd::Zero(cx.num_faces());
  prog.region_lower.resize(static_cast<std::size_t>(cx.num_faces()));
  prog.region_upper.resize(static_cast<std::size_t>(cx.num_faces()));
  bool any_fixed = false;
  for (Index f = 0; f < cx.num_faces(); ++f) {
    prog.active[f] = domain.role[f] != FaceRole::Inactive;
    if (domain.role[f] == FaceRole::Fixed) {
      prog.region_lower[f] = prog.region_upper[f] = domain.known[f];
      any_fixed = true;
    } else {
      prog.region_lower[f] = 0.0;
      prog.region_upper[f] = domain.range;
    }
  }
  if (!any_fixed) throw std::invalid_argument("inpaint model: no known faces around the damaged component");

  prog.pair_length.resize(cx.num_pairs());
  prog.pair_curvature.resize(cx.num_pairs());
  std::vector<char> touches_free(static_cast<std::size_t>(cx.num_edges()), 0);
  for (Index e = 0; e < cx.num_edges(); ++e)
    for (Index f : {cx.edges()[e].positive_face, cx.edges()[e].negative_face})
      if (f >= 0 && domain.role[f] == FaceRole::Free) touches_free[e] = 1;
  PairCostOptions opts;
  opts.border_rules = false;
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const LinePair& pr = cx.pairs()[p];
    if (!touches_free[cx.lines()[pr.first].edge] && !touches_free[cx.lines()[pr.second].edge]) {
      // band and rim flows are fixed by the data
      prog.pair_length[p] = prog.pair_curvature[p] = 0.0;
      continue;
    }
    const PairCostParts parts = pair_cost_parts(cx, pr, params, opts);
    prog.pair_length[p] = parts.length;
    prog.pair_curvature[p] = pair_costs ? (*pair_costs)[p] - parts.length : parts.curvature;
  }
  prog.capacity = domain.range;
  prog.include_crossings = include_crossings;
  ModelBundle out = build_pair_program(cx, prog);
  // Fixed-region objective terms are zero: the inpainting energy is the
  // boundary cost alone.
  return out;
}

LinearModel fix_seeds(const LinearModel& model, const VariableMap& map, const CellComplex& cx, const SeedMask& seeds) {
  if (seeds.rows() != cx.height() || seeds.cols() != cx.width())
    throw std::invalid_argument("fix_seeds: seed mask size does not match the complex");
  LinearModel out = model;
  for (Index f = 0; f < cx.num_faces(); ++f) {
    const Face& face = cx.faces()[f];
    const Seed s = seeds(face.pixel_y, face.pixel_x);
    if (s == Seed::None || map.region[f] < 0) continue;
    if (s != Seed::Foreground && s != Seed::Background) throw std::invalid_argument("fix_seeds: invalid seed label");
    const double v = s == Seed::Foreground ? 1.0 : 0.0;
    out.set_bounds(map.region[f], v, v);
  }
  return out;
}

}  // namespace curvcomplex
