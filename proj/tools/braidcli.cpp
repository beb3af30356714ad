#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "braidrec/config.hpp"
#include "braidrec/fit.hpp"
#include "braidrec/io.hpp"
#include "braidrec/losses.hpp"
#include "braidrec/refine.hpp"

namespace {

using namespace braidrec;

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_path(const std::string& value, const char* key) {
  if (value.empty()) {
    throw ValidationError("missing-path", std::string("config key '") + key + "' is required");
  }
}

GrayImage load_edges(const RunConfig& cfg) {
  require_path(cfg.in_edges, "in_edges");
  GrayImage raw = load_mask(cfg.in_edges);
  if (cfg.edge_source == "canny") return canny(raw, cfg.canny);
  return raw;
}

std::vector<std::vector<double>> centerline_depths(const SyntheticBraid& braid) {
  std::vector<std::vector<double>> z;
  for (const auto& c : braid.centerlines()) {
    std::vector<double> zi;
    zi.reserve(c.size());
    for (const auto& p : c.points()) zi.push_back(p.z);
    z.push_back(std::move(zi));
  }
  return z;
}

// Mid-line annotation implied by the parameters: the braid axis sampled along
// y, with width chosen so that initialization recovers the amplitude.
MidLineAnnotation annotation_from_params(const BraidParams& p) {
  std::vector<Point2> pts;
  const int stride = std::max(1, p.n_points / 16);
  for (int k = 0; k < p.n_points; k += stride) {
    const double x = p.shift_x.empty() ? 0.0 : p.shift_x[k];
    const double y = p.shift_y.empty() ? p.t_at(k) : p.shift_y[k];
    pts.emplace_back(x, y);
  }
  const int last = p.n_points - 1;
  if ((last % stride) != 0) {
    pts.emplace_back(p.shift_x.empty() ? 0.0 : p.shift_x[last],
                     p.shift_y.empty() ? p.t_at(last) : p.shift_y[last]);
  }
  return MidLineAnnotation(std::move(pts), 1.75 * p.amplitude);
}

void write_trace_csv(const FitTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "epoch,l_pc,l_proj,l_reg,l_total,lr\n";
  for (std::size_t i = 0; i < trace.reports.size(); ++i) {
    const auto& r = trace.reports[i];
    out << (i + 1) << "," << g17(r.l_pc) << "," << g17(r.l_proj) << "," << g17(r.l_reg) << ","
        << g17(r.l_total) << "," << g17(trace.lrs[i]) << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

int run_synth(const RunConfig& cfg) {
  require_path(cfg.out_strands, "out_strands");
  const SyntheticBraid braid = generate(cfg.synthesis_params(), cfg.braid_seed);
  save_strands(braid.tube_strands(), cfg.out_strands);
  if (!cfg.out_ply.empty()) {
    Allocation alloc;
    alloc.bunch_of = braid.bunch_of();
    export_ply(braid.tube_strands(), alloc, cfg.out_ply);
  }
  if (!cfg.out_params.empty()) save_params(braid.params(), cfg.out_params);
  return 0;
}

int run_fit(const RunConfig& cfg) {
  require_path(cfg.in_strands, "in_strands");
  require_path(cfg.in_mask, "in_mask");
  require_path(cfg.in_annotation, "in_annotation");
  require_path(cfg.out_params, "out_params");

  const StrandSet strands = load_strands(cfg.in_strands);
  const GrayImage mask = load_mask(cfg.in_mask);
  const GrayImage edges = load_edges(cfg);
  const MidLineAnnotation midline = load_annotation(cfg.in_annotation);

  const ProjectionSpec mask_spec{mask.width(), mask.height()};
  auto [region, rest] = mask_strands(strands, mask, mask_spec, cfg.refine.mask_threshold);
  (void)rest;

  const FitTrace trace = fit(region, edges, midline, cfg.weights, cfg.fit);
  save_params(trace.final_params, cfg.out_params);
  if (!cfg.out_trace.empty()) write_trace_csv(trace, cfg.out_trace);

  if (!trace.reports.empty()) {
    std::cout << "initial_l_total=" << g17(trace.reports.front().l_total) << "\n";
  }
  std::cout << "final_l_total=" << g17(trace.final_report.l_total) << "\n";
  std::cout << "epochs=" << trace.reports.size() << "\n";
  std::cout << "diverged=" << (trace.diverged ? "true" : "false") << "\n";
  std::cout << "wall_seconds=" << g17(trace.wall_seconds) << "\n";
  return 0;
}

int run_refine(const RunConfig& cfg) {
  require_path(cfg.in_strands, "in_strands");
  require_path(cfg.in_mask, "in_mask");
  require_path(cfg.in_params, "in_params");
  require_path(cfg.out_strands, "out_strands");

  const StrandSet strands = load_strands(cfg.in_strands);
  const GrayImage mask = load_mask(cfg.in_mask);
  const BraidParams params = load_params(cfg.in_params);
  const SyntheticBraid braid = generate(params, cfg.braid_seed);
  const ProjectionSpec spec{mask.width(), mask.height()};

  const StrandSet refined = refine_all(strands, mask, braid, cfg.refine, spec);
  save_strands(refined, cfg.out_strands);

  if (!cfg.out_ply.empty()) {
    auto [region, rest] = mask_strands(strands, mask, spec, cfg.refine.mask_threshold);
    (void)rest;
    std::optional<Allocation> alloc;
    if (!region.empty()) alloc = allocate(region, braid, cfg.refine);
    export_ply(refined, alloc, cfg.out_ply);
  }
  return 0;
}

int run_eval(const RunConfig& cfg) {
  require_path(cfg.in_strands, "in_strands");
  require_path(cfg.in_mask, "in_mask");
  require_path(cfg.in_params, "in_params");

  const StrandSet strands = load_strands(cfg.in_strands);
  const GrayImage mask = load_mask(cfg.in_mask);
  const GrayImage edges = load_edges(cfg);
  const BraidParams params = load_params(cfg.in_params);
  const SyntheticBraid braid = generate(params, cfg.braid_seed);

  const ProjectionSpec mask_spec{mask.width(), mask.height()};
  auto [region, rest] = mask_strands(strands, mask, mask_spec, cfg.refine.mask_threshold);
  (void)rest;

  const ProjectionSpec edge_spec{edges.width(), edges.height()};
  const GrayImage synth = edge_image_synthetic(braid, edge_spec, cfg.fit.softness);
  const LossReport report = total(braid.tube_strands(), region, edges, synth,
                                  centerline_depths(braid), params, cfg.weights);
  std::cout << "l_pc=" << g17(report.l_pc) << "\n";
  std::cout << "l_proj=" << g17(report.l_proj) << "\n";
  std::cout << "l_reg=" << g17(report.l_reg) << "\n";
  std::cout << "l_total=" << g17(report.l_total) << "\n";
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  require_path(cfg.out_strands, "out_strands");
  require_path(cfg.out_mask, "out_mask");
  require_path(cfg.out_edges, "out_edges");

  const BraidParams truth = cfg.synthesis_params();
  const SimulatedCoarse sim =
      simulate_coarse(truth, cfg.sim_noise_sigma, cfg.sim_strands_per_bunch, cfg.sim_seed,
                      cfg.proj);
  save_strands(sim.strands, cfg.out_strands);
  save_pgm(sim.mask, cfg.out_mask);
  save_pgm(sim.edges, cfg.out_edges);
  if (!cfg.out_params.empty()) {
    save_params(generate(truth, cfg.sim_seed).params(), cfg.out_params);
  }
  if (!cfg.out_annotation.empty()) {
    save_annotation(annotation_from_params(truth), cfg.out_annotation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strand-based braid synthesis, fitting and refinement"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  bool dump_defaults = false;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--set", overrides, "override a config key (key=value), repeatable");
  app.add_flag("--dump-config", dump_defaults, "print every config key with its default and exit");

  auto* synth = app.add_subcommand("synth", "generate a synthetic braid");
  auto* fit_cmd = app.add_subcommand("fit", "fit braid parameters to coarse strands");
  auto* refine_cmd = app.add_subcommand("refine", "rebuild clean strands from a fitted braid");
  auto* eval_cmd = app.add_subcommand("eval", "report the loss of fitted parameters");
  auto* simulate = app.add_subcommand("simulate", "write synthetic coarse test data");
  for (auto* sub : {synth, fit_cmd, refine_cmd, eval_cmd, simulate}) {
    sub->fallthrough();  // --config/--set may follow the subcommand name
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (dump_defaults) {
      std::cout << braidrec::default_config_text();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << "error: expected a subcommand (synth, fit, refine, eval, simulate)\n";
      return 1;
    }

    braidrec::RunConfig cfg;
    if (!config_path.empty()) cfg = braidrec::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw braidrec::ValidationError("invalid-config", "--set expects key=value, got '" + kv + "'");
      }
      braidrec::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();

    if (synth->parsed()) return run_synth(cfg);
    if (fit_cmd->parsed()) return run_fit(cfg);
    if (refine_cmd->parsed()) return run_refine(cfg);
    if (eval_cmd->parsed()) return run_eval(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
    return 1;
  } catch (const braidrec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const braidrec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
