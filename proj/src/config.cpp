#include "braidrec/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace braidrec {

namespace {

double to_double(const std::string& value, long line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad numeric value: '" + value + "'");
  }
}

int to_int(const std::string& value, long line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad integer value: '" + value + "'");
  }
}

std::uint64_t to_u64(const std::string& value, long line) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad unsigned value: '" + value + "'");
  }
}

bool to_bool(const std::string& value, long line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError(line, "bad boolean value: '" + value + "' (use true/false)");
}

std::vector<int> to_int_list(const std::string& value, long line) {
  std::vector<int> out;
  if (value.empty()) return out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_int(item, line));
  return out;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  if (edge_source != "file" && edge_source != "canny") {
    throw ValidationError("invalid-config", "edge_source must be 'file' or 'canny'");
  }
  proj.validate();
  weights.validate();
  fit.validate();
  refine.validate();
  canny.validate();
  if (sim_strands_per_bunch < 1) {
    throw ValidationError("invalid-config", "sim.strands_per_bunch must be >= 1");
  }
  if (!(sim_noise_sigma >= 0.0)) {
    throw ValidationError("invalid-config", "sim.noise_sigma must be >= 0");
  }
}

BraidParams RunConfig::synthesis_params() const {
  BraidParams p = braid;
  if (p.shift_x.empty() && braid_shift_x0 != 0.0) {
    p.shift_x.assign(static_cast<std::size_t>(p.n_points), braid_shift_x0);
  }
  return p;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, long line) {
  if (key == "in_strands") cfg.in_strands = value;
  else if (key == "out_strands") cfg.out_strands = value;
  else if (key == "in_mask") cfg.in_mask = value;
  else if (key == "in_edges") cfg.in_edges = value;
  else if (key == "in_annotation") cfg.in_annotation = value;
  else if (key == "in_params") cfg.in_params = value;
  else if (key == "out_params") cfg.out_params = value;
  else if (key == "out_trace") cfg.out_trace = value;
  else if (key == "out_ply") cfg.out_ply = value;
  else if (key == "out_mask") cfg.out_mask = value;
  else if (key == "out_edges") cfg.out_edges = value;
  else if (key == "out_annotation") cfg.out_annotation = value;
  else if (key == "edge_source") cfg.edge_source = value;
  else if (key == "proj.width") cfg.proj.width = to_int(value, line);
  else if (key == "proj.height") cfg.proj.height = to_int(value, line);
  else if (key == "loss.lambda_pc") cfg.weights.lambda_pc = to_double(value, line);
  else if (key == "loss.lambda_proj") cfg.weights.lambda_proj = to_double(value, line);
  else if (key == "loss.lambda_reg") cfg.weights.lambda_reg = to_double(value, line);
  else if (key == "loss.lambda_reg_b") cfg.weights.lambda_reg_b = to_double(value, line);
  else if (key == "loss.b_anchor") cfg.weights.b_anchor = to_double(value, line);
  else if (key == "loss.bce_epsilon") cfg.weights.bce_epsilon = to_double(value, line);
  else if (key == "fit.epochs") cfg.fit.epochs = to_int(value, line);
  else if (key == "fit.lr") cfg.fit.lr = to_double(value, line);
  else if (key == "fit.lr_drop_epochs") cfg.fit.lr_drop_epochs = to_int_list(value, line);
  else if (key == "fit.lr_drop_factor") cfg.fit.lr_drop_factor = to_double(value, line);
  else if (key == "fit.adam_beta1") cfg.fit.adam_beta1 = to_double(value, line);
  else if (key == "fit.adam_beta2") cfg.fit.adam_beta2 = to_double(value, line);
  else if (key == "fit.adam_eps") cfg.fit.adam_eps = to_double(value, line);
  else if (key == "fit.seed") cfg.fit.seed = to_u64(value, line);
  else if (key == "fit.n_points") cfg.fit.n_points = to_int(value, line);
  else if (key == "fit.n_bunches") cfg.fit.n_bunches = to_int(value, line);
  else if (key == "fit.softness") cfg.fit.softness = to_double(value, line);
  else if (key == "fit.learn.amplitude") cfg.fit.learnable.amplitude = to_bool(value, line);
  else if (key == "fit.learn.depth_amplitude")
    cfg.fit.learnable.depth_amplitude = to_bool(value, line);
  else if (key == "fit.learn.frequency") cfg.fit.learnable.frequency = to_bool(value, line);
  else if (key == "fit.learn.t_scale") cfg.fit.learnable.t_scale = to_bool(value, line);
  else if (key == "fit.learn.radius") cfg.fit.learnable.radius = to_bool(value, line);
  else if (key == "fit.learn.shift_z") cfg.fit.learnable.shift_z = to_bool(value, line);
  else if (key == "fit.fd.amplitude")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kAmplitude)] = to_double(value, line);
  else if (key == "fit.fd.depth_amplitude")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kDepthAmplitude)] = to_double(value, line);
  else if (key == "fit.fd.frequency")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kFrequency)] = to_double(value, line);
  else if (key == "fit.fd.t_scale")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kTScale)] = to_double(value, line);
  else if (key == "fit.fd.radius")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kRadius)] = to_double(value, line);
  else if (key == "fit.fd.shift_z")
    cfg.fit.fd_step[static_cast<int>(LearnableParam::kShiftZ)] = to_double(value, line);
  else if (key == "refine.inclusion_factor") cfg.refine.inclusion_factor = to_double(value, line);
  else if (key == "refine.downsample_keep_every")
    cfg.refine.downsample_keep_every = to_int(value, line);
  else if (key == "refine.smooth_window") cfg.refine.smooth_window = to_int(value, line);
  else if (key == "refine.balance") cfg.refine.balance = to_bool(value, line);
  else if (key == "refine.mask_threshold") cfg.refine.mask_threshold = to_double(value, line);
  else if (key == "canny.sigma") cfg.canny.gaussian_sigma = to_double(value, line);
  else if (key == "canny.low") cfg.canny.low_threshold = to_double(value, line);
  else if (key == "canny.high") cfg.canny.high_threshold = to_double(value, line);
  else if (key == "braid.amplitude") cfg.braid.amplitude = to_double(value, line);
  else if (key == "braid.depth_amplitude") cfg.braid.depth_amplitude = to_double(value, line);
  else if (key == "braid.frequency") cfg.braid.frequency = to_double(value, line);
  else if (key == "braid.t_step") cfg.braid.t_step = to_double(value, line);
  else if (key == "braid.t_scale") cfg.braid.t_scale = to_double(value, line);
  else if (key == "braid.n_points") cfg.braid.n_points = to_int(value, line);
  else if (key == "braid.n_bunches") cfg.braid.n_bunches = to_int(value, line);
  else if (key == "braid.radius") cfg.braid.radius = to_double(value, line);
  else if (key == "braid.shift_z") cfg.braid.shift_z = to_double(value, line);
  else if (key == "braid.shift_x0") cfg.braid_shift_x0 = to_double(value, line);
  else if (key == "braid.seed") cfg.braid_seed = to_u64(value, line);
  else if (key == "sim.noise_sigma") cfg.sim_noise_sigma = to_double(value, line);
  else if (key == "sim.strands_per_bunch") cfg.sim_strands_per_bunch = to_int(value, line);
  else if (key == "sim.seed") cfg.sim_seed = to_u64(value, line);
  else throw ValidationError("unknown-config-key", "unknown config key: '" + key + "'");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RunConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    const auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed[0] == '#') continue;
    const auto last = trimmed.find_last_not_of(" \t\r");
    trimmed = trimmed.substr(0, last + 1);
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    apply_setting(cfg, trimmed.substr(0, eq), trimmed.substr(eq + 1), line_no);
  }
  return cfg;
}

std::string default_config_text() {
  const RunConfig d;
  std::ostringstream out;
  out << "# paths (empty = unused)\n";
  for (const char* k : {"in_strands", "out_strands", "in_mask", "in_edges", "in_annotation",
                        "in_params", "out_params", "out_trace", "out_ply", "out_mask",
                        "out_edges", "out_annotation"}) {
    out << k << "=\n";
  }
  out << "edge_source=" << d.edge_source << "\n";
  out << "proj.width=" << d.proj.width << "\n";
  out << "proj.height=" << d.proj.height << "\n";
  out << "loss.lambda_pc=" << fmt_g(d.weights.lambda_pc) << "\n";
  out << "loss.lambda_proj=" << fmt_g(d.weights.lambda_proj) << "\n";
  out << "loss.lambda_reg=" << fmt_g(d.weights.lambda_reg) << "\n";
  out << "loss.lambda_reg_b=" << fmt_g(d.weights.lambda_reg_b) << "\n";
  out << "loss.b_anchor=" << fmt_g(d.weights.b_anchor) << "\n";
  out << "loss.bce_epsilon=" << fmt_g(d.weights.bce_epsilon) << "\n";
  out << "fit.epochs=" << d.fit.epochs << "\n";
  out << "fit.lr=" << fmt_g(d.fit.lr) << "\n";
  out << "fit.lr_drop_epochs=100,133\n";
  out << "fit.lr_drop_factor=" << fmt_g(d.fit.lr_drop_factor) << "\n";
  out << "fit.adam_beta1=" << fmt_g(d.fit.adam_beta1) << "\n";
  out << "fit.adam_beta2=" << fmt_g(d.fit.adam_beta2) << "\n";
  out << "fit.adam_eps=" << fmt_g(d.fit.adam_eps) << "\n";
  out << "fit.seed=" << d.fit.seed << "\n";
  out << "fit.n_points=" << d.fit.n_points << "\n";
  out << "fit.n_bunches=" << d.fit.n_bunches << "\n";
  out << "fit.softness=" << fmt_g(d.fit.softness) << "\n";
  out << "fit.learn.amplitude=" << (d.fit.learnable.amplitude ? "true" : "false") << "\n";
  out << "fit.learn.depth_amplitude=" << (d.fit.learnable.depth_amplitude ? "true" : "false")
      << "\n";
  out << "fit.learn.frequency=" << (d.fit.learnable.frequency ? "true" : "false") << "\n";
  out << "fit.learn.t_scale=" << (d.fit.learnable.t_scale ? "true" : "false") << "\n";
  out << "fit.learn.radius=" << (d.fit.learnable.radius ? "true" : "false") << "\n";
  out << "fit.learn.shift_z=" << (d.fit.learnable.shift_z ? "true" : "false") << "\n";
  out << "fit.fd.amplitude=" << fmt_g(d.fit.fd_step[0]) << "\n";
  out << "fit.fd.depth_amplitude=" << fmt_g(d.fit.fd_step[1]) << "\n";
  out << "fit.fd.frequency=" << fmt_g(d.fit.fd_step[2]) << "\n";
  out << "fit.fd.t_scale=" << fmt_g(d.fit.fd_step[3]) << "\n";
  out << "fit.fd.radius=" << fmt_g(d.fit.fd_step[4]) << "\n";
  out << "fit.fd.shift_z=" << fmt_g(d.fit.fd_step[5]) << "\n";
  out << "refine.inclusion_factor=" << fmt_g(d.refine.inclusion_factor) << "\n";
  out << "refine.downsample_keep_every=" << d.refine.downsample_keep_every << "\n";
  out << "refine.smooth_window=" << d.refine.smooth_window << "\n";
  out << "refine.balance=" << (d.refine.balance ? "true" : "false") << "\n";
  out << "refine.mask_threshold=" << fmt_g(d.refine.mask_threshold) << "\n";
  out << "canny.sigma=" << fmt_g(d.canny.gaussian_sigma) << "\n";
  out << "canny.low=" << fmt_g(d.canny.low_threshold) << "\n";
  out << "canny.high=" << fmt_g(d.canny.high_threshold) << "\n";
  out << "braid.amplitude=" << fmt_g(d.braid.amplitude) << "\n";
  out << "braid.depth_amplitude=" << fmt_g(d.braid.depth_amplitude) << "\n";
  out << "braid.frequency=" << fmt_g(d.braid.frequency) << "\n";
  out << "braid.t_step=" << fmt_g(d.braid.t_step) << "\n";
  out << "braid.t_scale=" << fmt_g(d.braid.t_scale) << "\n";
  out << "braid.n_points=" << d.braid.n_points << "\n";
  out << "braid.n_bunches=" << d.braid.n_bunches << "\n";
  out << "braid.radius=" << fmt_g(d.braid.radius) << "\n";
  out << "braid.shift_z=" << fmt_g(d.braid.shift_z) << "\n";
  out << "braid.shift_x0=" << fmt_g(d.braid_shift_x0) << "\n";
  out << "braid.seed=" << d.braid_seed << "\n";
  out << "sim.noise_sigma=" << fmt_g(d.sim_noise_sigma) << "\n";
  out << "sim.strands_per_bunch=" << d.sim_strands_per_bunch << "\n";
  out << "sim.seed=" << d.sim_seed << "\n";
  return out.str();
}

}  // namespace braidrec
