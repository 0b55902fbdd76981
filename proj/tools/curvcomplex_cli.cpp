// Command-line front end: segmentation, inpainting, LP export and the
// min-cut comparison.

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/energy.hpp"
#include "curvcomplex/image_io.hpp"
#include "curvcomplex/inpaint.hpp"
#include "curvcomplex/mincut.hpp"
#include "curvcomplex/model.hpp"
#include "curvcomplex/mps.hpp"
#include "curvcomplex/optimize.hpp"
#include "curvcomplex/report.hpp"
#include "curvcomplex/simplex.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

using namespace curvcomplex;

namespace {

struct RunConfig {
  std::string command;
  int connectivity = 8;
  std::optional<double> nu, lambda;
  double p = 2.0;
  std::string weights = "angle";
  std::string crossings = "lazy";
  double threshold = 0.5;
  std::string model = "curvature";
  std::string image, seeds, mask, output, report, report_json, export_mps;
  std::optional<double> mu0, mu1;
  int bins = 8;
  double smoothing = 1.0;
  double sigma = 1.5, rho = 4.0;
  bool no_coherence = false;
  int max_passes = 25;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Connectivity parse_connectivity(int c) {
  if (c == 8) return Connectivity::Conn8;
  if (c == 16) return Connectivity::Conn16;
  throw CLI::ValidationError("--connectivity", "must be 8 or 16");
}

EnergyParams energy_params(const RunConfig& cfg, double default_nu, double default_lambda) {
  EnergyParams e;
  e.nu = cfg.nu.value_or(default_nu);
  e.lambda = cfg.lambda.value_or(default_lambda);
  e.p = cfg.p;
  e.weight_mode = cfg.weights == "bruckstein" ? WeightMode::Bruckstein : WeightMode::AnglePower;
  validate(e);
  return e;
}

SegmentationOptions solver_options(const RunConfig& cfg) {
  SegmentationOptions o;
  o.crossings = cfg.crossings == "off" ? CrossingPolicy::Off
                : cfg.crossings == "eager" ? CrossingPolicy::Eager
                                           : CrossingPolicy::Lazy;
  o.threshold = cfg.threshold;
  o.max_passes = cfg.max_passes;
  if (const char* cap = std::getenv("CURVCOMPLEX_ITER_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(cap, &end, 10);
    if (end == cap || *end != '\0' || v <= 0)
      throw std::runtime_error("CURVCOMPLEX_ITER_CAP must be a positive integer");
    o.simplex.iteration_limit = v;
  }
  return o;
}

void common_report(Report& rep, const RunConfig& cfg, const EnergyParams& e) {
  rep.set("command", cfg.command);
  rep.set("connectivity", cfg.connectivity);
  rep.set("nu", e.nu);
  rep.set("lambda", e.lambda);
  rep.set("p", e.p);
  rep.set("weights", cfg.weights);
  rep.set("crossings", cfg.crossings);
  rep.set("threshold", cfg.threshold);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void export_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mps(model, out);
}

GrayImage mask_image(const CellComplex& cx, const SegmentationResult& r) {
  // A pixel is foreground when the larger part of its area is.
  GrayImage out = GrayImage::Zero(cx.height(), cx.width());
  for (int y = 0; y < cx.height(); ++y)
    for (int x = 0; x < cx.width(); ++x) {
      const Index first = cx.first_face_of_pixel(x, y);
      double area = 0.0;
      for (int k = 0; k < faces_per_pixel(cx.connectivity()); ++k)
        if (r.label(first + k)) area += cx.face_area(first + k);
      out(y, x) = area > 0.5 ? 255.0 : 0.0;
    }
  return out;
}

GrayImage gray_of(const ColorImage& img) {
  GrayImage g = img.channels[0];
  if (img.channels.size() == 3) g = (img.channels[0] + img.channels[1] + img.channels[2]) / 3.0;
  return g;
}

struct Segmentation {
  CellComplex complex;
  DataCost data;
  ModelBundle bundle;
};

Segmentation build_segmentation(const RunConfig& cfg, const EnergyParams& e, bool length_only) {
  const ColorImage img = read_image(cfg.image);
  Segmentation s{build_complex(img.width(), img.height(), parse_connectivity(cfg.connectivity)), {}, {}};
  if (!cfg.seeds.empty()) {
    const SeedMask seeds = read_seed_mask(cfg.seeds);
    HistogramOptions h;
    h.bins = cfg.bins;
    h.smoothing = cfg.smoothing;
    s.data = data_cost_histogram(img, seeds, s.complex, h);
    s.bundle = length_only ? build_length_model(s.complex, s.data, e.nu) : build_curvature_model(s.complex, s.data, e);
    s.bundle.model = fix_seeds(s.bundle.model, s.bundle.map, s.complex, seeds);
  } else {
    s.data = data_cost_unsupervised(gray_of(img), s.complex, cfg.mu0, cfg.mu1);
    s.bundle = length_only ? build_length_model(s.complex, s.data, e.nu) : build_curvature_model(s.complex, s.data, e);
  }
  return s;
}

Report run_segment(const RunConfig& cfg, double default_nu, double default_lambda) {
  const EnergyParams e = energy_params(cfg, default_nu, default_lambda);
  Segmentation s = build_segmentation(cfg, e, cfg.model == "length");
  if (!cfg.export_mps.empty()) export_model(s.bundle.model, cfg.export_mps);
  const SegmentationResult r =
      segment(s.bundle.model, s.bundle.map, s.complex, s.data.constant_offset, solver_options(cfg));
  Report rep;
  common_report(rep, cfg, e);
  rep.set("model", cfg.model);
  rep.set("width", s.complex.width());
  rep.set("height", s.complex.height());
  rep.set("faces", s.complex.num_faces());
  rep.set("variables", s.bundle.model.num_variables());
  rep.set("rows", s.bundle.model.num_rows());
  rep.merge(energy_report(r));
  if (r.status != SolveStatus::Optimal) throw SolverFailure("solver finished with status " + to_string(r.status));
  if (!cfg.output.empty()) write_pgm(mask_image(s.complex, r), cfg.output);
  return rep;
}

Report run_inpaint(const RunConfig& cfg) {
  const EnergyParams e = energy_params(cfg, 0.0, 1.0);
  const GrayImage img = read_pgm(cfg.image);
  const DamageMask mask = read_damage_mask(cfg.mask);
  InpaintOptions o;
  o.connectivity = parse_connectivity(cfg.connectivity);
  o.params = e;
  o.use_coherence = !cfg.no_coherence;
  o.sigma = cfg.sigma;
  o.rho = cfg.rho;
  o.solver = solver_options(cfg);
  const InpaintRun run = inpaint(img, mask, o);
  Report rep;
  common_report(rep, cfg, e);
  rep.set("sigma", o.sigma);
  rep.set("rho", o.rho);
  rep.set("coherence", o.use_coherence);
  rep.set("components", static_cast<std::int64_t>(run.components.size()));
  double energy = 0.0, bound = 0.0;
  int passes = 0, fractional = 0;
  std::int64_t iterations = 0;
  for (const ComponentFill& f : run.fills) {
    energy += f.energy;
    bound += f.lower_bound;
    passes = std::max(passes, f.passes);
    fractional += f.fractional_count;
    iterations += f.iterations;
  }
  rep.set("objective", energy);
  rep.set("lower_bound", bound);
  rep.set("relative_gap", energy != 0.0 ? (energy - bound) / std::abs(energy) : 0.0);
  rep.set("passes", passes);
  rep.set("fractional_count", fractional);
  rep.set("iterations", iterations);
  if (!cfg.output.empty()) write_pgm(run.output, cfg.output);
  return rep;
}

Report run_export(const RunConfig& cfg) {
  const EnergyParams e = energy_params(cfg, cfg.seeds.empty() ? 10.0 : 0.2, cfg.seeds.empty() ? 1000.0 : 4.0);
  Segmentation s = build_segmentation(cfg, e, cfg.model == "length");
  if (cfg.export_mps.empty()) throw CLI::ValidationError("--export-mps", "export-lp needs an output path");
  if (cfg.crossings == "eager") add_crossing_rows(s.bundle.model, s.bundle.map);
  export_model(s.bundle.model, cfg.export_mps);
  std::ifstream in(cfg.export_mps);
  const LinearModel back = read_mps(in);
  const SegmentationOptions so = solver_options(cfg);
  const LPSolution a = solve(s.bundle.model, so.simplex);
  const LPSolution b = solve(back, so.simplex);
  Report rep;
  common_report(rep, cfg, e);
  rep.set("model", cfg.model);
  rep.set("variables", s.bundle.model.num_variables());
  rep.set("rows", s.bundle.model.num_rows());
  rep.set("status", to_string(a.status));
  rep.set("objective", a.objective);
  rep.set("reimported_objective", b.objective);
  rep.set("roundtrip_difference", std::abs(a.objective - b.objective));
  if (!a.optimal() || !b.optimal()) throw SolverFailure("solver did not reach optimality");
  return rep;
}

Report run_compare(const RunConfig& cfg) {
  const EnergyParams e = energy_params(cfg, 10.0, 0.0);
  Segmentation s = build_segmentation(cfg, e, true);
  const SegmentationOptions so = solver_options(cfg);
  const LPSolution lp = solve(s.bundle.model, so.simplex);
  const FlowNetwork net = build_network(s.complex, s.data, e.nu);
  const CutResult cut = min_cut(net);
  Report rep;
  common_report(rep, cfg, e);
  rep.set("status", to_string(lp.status));
  rep.set("lp_energy", lp.objective + s.data.constant_offset);
  rep.set("mincut_energy", cut.value + net.constant + s.data.constant_offset);
  rep.set("difference", std::abs(lp.objective - cut.value - net.constant));
  if (!lp.optimal()) throw SolverFailure("solver did not reach optimality");
  if (!cfg.output.empty()) {
    GrayImage out = GrayImage::Zero(s.complex.height(), s.complex.width());
    for (int y = 0; y < s.complex.height(); ++y)
      for (int x = 0; x < s.complex.width(); ++x) {
        const Index first = s.complex.first_face_of_pixel(x, y);
        double area = 0.0;
        for (int k = 0; k < faces_per_pixel(s.complex.connectivity()); ++k)
          if (cut.source_side[first + k]) area += s.complex.face_area(first + k);
        out(y, x) = area > 0.5 ? 255.0 : 0.0;
      }
    write_pgm(out, cfg.output);
  }
  return rep;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_image = true) {
  auto* img = sub->add_option("--image", cfg.image, "input image (P5, or P6 for seeded runs)")->check(CLI::ExistingFile);
  if (needs_image) img->required();
  sub->add_option("--connectivity", cfg.connectivity, "8 or 16")->check(CLI::IsMember({8, 16}));
  sub->add_option("--nu", cfg.nu, "length weight");
  sub->add_option("--lambda", cfg.lambda, "curvature weight");
  sub->add_option("--p", cfg.p, "curvature exponent");
  sub->add_option("--weights", cfg.weights, "angle or bruckstein")->check(CLI::IsMember({"angle", "bruckstein"}));
  sub->add_option("--crossings", cfg.crossings, "off, lazy or eager")->check(CLI::IsMember({"off", "lazy", "eager"}));
  sub->add_option("--threshold", cfg.threshold, "region threshold")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--max-passes", cfg.max_passes, "crossing pass cap")->check(CLI::PositiveNumber);
  sub->add_option("--output", cfg.output, "output image");
  sub->add_option("--report", cfg.report, "key/value report path");
  sub->add_option("--report-json", cfg.report_json, "JSON report path");
  sub->add_option("--export-mps", cfg.export_mps, "write the model as fixed-column MPS");
}

void add_segmentation(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "curvature or length")->check(CLI::IsMember({"curvature", "length"}));
  sub->add_option("--mu0", cfg.mu0, "background mean (default: image minimum)");
  sub->add_option("--mu1", cfg.mu1, "foreground mean (default: image maximum)");
  sub->add_option("--bins", cfg.bins, "histogram bins per channel")->check(CLI::PositiveNumber);
  sub->add_option("--smoothing", cfg.smoothing, "histogram smoothing in bins")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segmentation and inpainting with length and curvature regularity"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* unsup = app.add_subcommand("segment-unsup", "two-phase piecewise-constant segmentation");
  add_common(unsup, cfg);
  add_segmentation(unsup, cfg);

  auto* seeded = app.add_subcommand("segment-seeds", "histogram segmentation from a seed mask");
  add_common(seeded, cfg);
  add_segmentation(seeded, cfg);
  seeded->add_option("--seeds", cfg.seeds, "seed mask: 0 none, 1 background, 2 foreground")
      ->required()
      ->check(CLI::ExistingFile);

  auto* inp = app.add_subcommand("inpaint", "fill damaged pixels");
  add_common(inp, cfg);
  inp->add_option("--mask", cfg.mask, "damage mask, nonzero = damaged")->required()->check(CLI::ExistingFile);
  inp->add_option("--sigma", cfg.sigma, "pre-smoothing scale")->check(CLI::PositiveNumber);
  inp->add_option("--rho", cfg.rho, "structure tensor scale")->check(CLI::PositiveNumber);
  inp->add_flag("--no-coherence", cfg.no_coherence, "use purely geometric turning angles");

  auto* exp = app.add_subcommand("export-lp", "write the model as MPS and check the round trip");
  add_common(exp, cfg);
  add_segmentation(exp, cfg);
  exp->add_option("--seeds", cfg.seeds, "optional seed mask")->check(CLI::ExistingFile);

  auto* cmp = app.add_subcommand("compare-mincut", "length model LP against the max-flow baseline");
  add_common(cmp, cfg);
  add_segmentation(cmp, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    if (unsup->parsed()) {
      cfg.command = "segment-unsup";
      rep = run_segment(cfg, 10.0, 1000.0);
    } else if (seeded->parsed()) {
      cfg.command = "segment-seeds";
      if (!app.get_subcommand("segment-seeds")->count("--connectivity")) cfg.connectivity = 16;
      rep = run_segment(cfg, 0.2, 4.0);
    } else if (inp->parsed()) {
      cfg.command = "inpaint";
      rep = run_inpaint(cfg);
    } else if (exp->parsed()) {
      cfg.command = "export-lp";
      rep = run_export(cfg);
    } else {
      cfg.command = "compare-mincut";
      rep = run_compare(cfg);
    }
    rep.set("wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (!cfg.report.empty()) write_text(cfg.report, rep.to_text());
    if (!cfg.report_json.empty()) write_text(cfg.report_json, rep.to_json());
    std::cout << rep.to_text();
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
