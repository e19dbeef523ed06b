// Command-line front end: sampling, DTM evaluation, bound sweeps,
// concentration verification, and built-in experiment reproduction.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtm/bounds.hpp"
#include "dtm/distance.hpp"
#include "dtm/empirical.hpp"
#include "dtm/experiments.hpp"
#include "dtm/geometry.hpp"
#include "dtm/process.hpp"
#include "dtm/regularity.hpp"
#include "dtm/rng.hpp"

namespace {

using namespace dtm;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

// Flat key-value config files: one "key = value" per line, '#' comments.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r\n") != std::string::npos)
        throw std::runtime_error(path + ": line " + std::to_string(row) +
                                 ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Common per-run options; `seed_given` distinguishes an explicit seed from
// the recorded entropy seed.
struct RunOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::string config_path;
};

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--seed", opt.seed, "master seed (default: entropy)")
      ->each([&opt](const std::string&) { opt.seed_given = true; });
  cmd->add_option("--threads", opt.threads, "worker threads");
  cmd->add_option("--out-dir", opt.out_dir, "output directory");
  cmd->add_option("--config", opt.config_path, "key=value config file");
}

std::uint64_t entropy_seed() {
  return static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count());
}

void finalize_seed(RunOptions& opt) {
  if (!opt.seed_given) opt.seed = entropy_seed();
}

void write_manifest(const RunOptions& opt, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& extra,
                    const std::vector<std::string>& outputs, double wall_seconds) {
  std::filesystem::create_directories(opt.out_dir);
  const std::string path = opt.out_dir + "/manifest.txt";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "command = " << command << '\n';
  out << "seed = " << opt.seed << '\n';
  out << "threads = " << opt.threads << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  for (const auto& f : outputs) out << "output = " << f << '\n';
  out << "wall_time = " << num(wall_seconds) << '\n';
}

struct ShapeOptions {
  std::string shape = "segment";
  double seg_a = 0.0;
  double seg_b = 1.0;
  double tangle_level = 10.0;
  std::string noise = "noiseless";
  double pi = 0.1;
  double sigma = 0.5;
};

void add_shape_options(CLI::App* cmd, ShapeOptions& opt) {
  cmd->add_option("--shape", opt.shape, "segment | 2d-shape | tangle-cube");
  cmd->add_option("--seg-a", opt.seg_a, "segment left endpoint");
  cmd->add_option("--seg-b", opt.seg_b, "segment right endpoint");
  cmd->add_option("--tangle-level", opt.tangle_level, "tangle-cube level");
  cmd->add_option("--noise", opt.noise, "noiseless | clutter | gaussian");
  cmd->add_option("--pi", opt.pi, "clutter probability");
  cmd->add_option("--sigma", opt.sigma, "gaussian noise sd");
}

void apply_config(const std::map<std::string, std::string>& kv, ShapeOptions& s,
                  CLI::App* cmd) {
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto overridden = [&](const char* flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  if (auto v = get("shape"); v && !overridden("--shape")) s.shape = *v;
  if (auto v = get("seg_a"); v && !overridden("--seg-a")) s.seg_a = std::stod(*v);
  if (auto v = get("seg_b"); v && !overridden("--seg-b")) s.seg_b = std::stod(*v);
  if (auto v = get("tangle_level"); v && !overridden("--tangle-level"))
    s.tangle_level = std::stod(*v);
  if (auto v = get("noise"); v && !overridden("--noise")) s.noise = *v;
  if (auto v = get("pi"); v && !overridden("--pi")) s.pi = std::stod(*v);
  if (auto v = get("sigma"); v && !overridden("--sigma")) s.sigma = std::stod(*v);
}

// Non-convex planar test shape.
Polygon2D builtin_polygon() {
  Polygon2D poly;
  poly.vertices = {{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0},
                   {1.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}};
  return poly;
}

Shape make_shape(const ShapeOptions& opt) {
  if (opt.shape == "segment") return Segment{opt.seg_a, opt.seg_b};
  if (opt.shape == "2d-shape") return builtin_polygon();
  if (opt.shape == "tangle-cube") return TangleCube{opt.tangle_level};
  throw CLI::ValidationError("--shape", "unknown shape '" + opt.shape + "'");
}

NoiseModel make_noise(const ShapeOptions& opt, const Shape& shape) {
  if (opt.noise == "noiseless") return noise::Noiseless{};
  if (opt.noise == "clutter")
    return noise::Clutter{opt.pi, default_clutter_box(shape)};
  if (opt.noise == "gaussian") return noise::Gaussian{opt.sigma};
  throw CLI::ValidationError("--noise", "unknown noise model '" + opt.noise + "'");
}

Point default_observation_point(const Shape& shape) {
  if (std::holds_alternative<Segment>(shape)) return {0.5};
  if (std::holds_alternative<Polygon2D>(shape)) return {0.5, 0.5};
  return {0.0, 0.0, 0.0};
}

ExperimentConfig build_experiment(const ShapeOptions& shape_opt,
                                  const std::vector<double>& x,
                                  const std::vector<double>& m_grid, double r,
                                  std::size_t n, std::size_t trials,
                                  std::size_t n_ref, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.shape = make_shape(shape_opt);
  cfg.noise = make_noise(shape_opt, cfg.shape);
  cfg.x = x.empty() ? default_observation_point(cfg.shape) : x;
  cfg.r = r;
  cfg.n = n;
  cfg.trials = trials;
  cfg.m_grid = m_grid.empty() ? default_m_grid() : m_grid;
  cfg.n_ref = n_ref == 0 ? 100 * n : n_ref;
  cfg.master_seed = seed;
  cfg.validate();
  return cfg;
}

int run_curve_outputs(const ExperimentConfig& cfg, const RunOptions& opt,
                      const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(opt.out_dir);
  TabulatedQuantile reference = estimate_reference_quantile(cfg);
  ErrorCurve curve = error_curve(cfg, reference, opt.threads);

  const std::string curve_path = opt.out_dir + "/error_curve.csv";
  save_error_curve(curve, curve_path);

  const std::string psi_path = opt.out_dir + "/psi_curve.csv";
  {
    std::ofstream out(psi_path);
    if (!out) throw std::runtime_error("cannot write " + psi_path);
    out << "# config: " << curve.config_hash << '\n';
    out << "m,psi_tilde\n";
    for (const auto& [m, v] : psi_curve(reference, cfg.m_grid))
      out << num(m) << ',' << num(v) << '\n';
  }

  const std::string ref_path = opt.out_dir + "/reference_quantile.csv";
  save_quantile(reference, ref_path);

  for (double m : curve.skipped_m)
    std::cerr << "warning: m = " << num(m) << " rounds to k = 0; row skipped\n";
  std::cout << "monotonicity_agreement = " << num(monotonicity_agreement(curve))
            << '\n';

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(opt, command,
                 {{"config_digest", curve.config_hash},
                  {"n", std::to_string(cfg.n)},
                  {"r", num(cfg.r)},
                  {"trials", std::to_string(cfg.trials)}},
                 {curve_path, psi_path, ref_path}, wall);
  return 0;
}

int run_verify_process(std::size_t n, std::size_t trials, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(opt.out_dir);
  const std::string path = opt.out_dir + "/process_report.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "kind,n,param,lambda,bound,estimate,half_width,pass\n";

  const std::vector<double> params = {0.05, 0.2, 0.4};
  const std::vector<double> lambdas = {0.5, 1.0, 1.5, 2.0};
  const std::vector<ProcessKind> kinds = {
      ProcessKind::EcdfPointwise, ProcessKind::EcdfLocalSup,
      ProcessKind::QuantilePointwise, ProcessKind::QuantileLocalSup,
      ProcessKind::GlobalSup};

  bool all_pass = true;
  std::size_t stream = 0;
  for (ProcessKind kind : kinds) {
    const bool uses_param = kind != ProcessKind::GlobalSup;
    for (double param : uses_param ? params : std::vector<double>{0.0}) {
      if ((kind == ProcessKind::EcdfLocalSup ||
           kind == ProcessKind::QuantileLocalSup) &&
          param >= 0.5)
        continue;
      for (double lambda : lambdas) {
        double bound;
        switch (kind) {
          case ProcessKind::EcdfPointwise:
            bound = empirical_pointwise_bound(n, param, lambda).bennett;
            break;
          case ProcessKind::EcdfLocalSup:
            bound = empirical_local_sup_bound(n, param, lambda).bennett;
            break;
          case ProcessKind::QuantilePointwise:
            bound = quantile_pointwise_bound(n, param, lambda).bennett;
            break;
          case ProcessKind::QuantileLocalSup: {
            auto b = quantile_local_sup_bound(n, param, lambda);
            if (!b) continue;  // outside the bound's validity domain
            bound = b->bennett;
            break;
          }
          case ProcessKind::GlobalSup:
            bound = dkw_bound(lambda);
            break;
        }
        TailEstimate est = simulate_process_tail(
            kind, n, param, lambda, trials, Rng::derive(opt.seed, stream++),
            opt.threads);
        const bool pass = est.probability + est.half_width <= bound;
        all_pass = all_pass && pass;
        out << to_string(kind) << ',' << n << ',' << num(param) << ','
            << num(lambda) << ',' << num(bound) << ',' << num(est.probability)
            << ',' << num(est.half_width) << ',' << (pass ? "pass" : "fail")
            << '\n';
      }
    }
  }
  out.close();
  std::cout << (all_pass ? "all rows pass" : "some rows FAIL") << '\n';

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(opt, "verify-process",
                 {{"n", std::to_string(n)}, {"trials", std::to_string(trials)}},
                 {path}, wall);
  return 0;
}

int run_bounds(const std::string& kind, const ShapeOptions& shape_opt,
               const std::vector<double>& x, double r, std::size_t n,
               std::size_t k, double C, double lambda_min, double lambda_max,
               std::size_t lambda_points, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(opt.out_dir);

  ExperimentConfig cfg = build_experiment(shape_opt, x, default_m_grid(), r, n,
                                          1, 0, opt.seed);
  TabulatedQuantile reference = estimate_reference_quantile(cfg);
  std::vector<double> v_grid;
  for (std::size_t i = 1; i <= 256; ++i) v_grid.push_back(i / 256.0);
  ModulusFunction omega =
      least_concave_majorant(modulus_of_continuity(reference, v_grid));

  BoundInputs in;
  in.n = n;
  in.k = k;
  in.r = r;
  in.omega = omega;
  in.quantile = reference;
  in.C_abs = C;

  const std::string path = opt.out_dir + "/bounds.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  if (kind == "deviation") {
    out << "# deviation bound sweep, n=" << n << " k=" << k << " r=" << num(r)
        << '\n';
    out << "lambda,bound\n";
    for (std::size_t i = 0; i < lambda_points; ++i) {
      const double frac = lambda_points == 1
                              ? 0.0
                              : static_cast<double>(i) /
                                    static_cast<double>(lambda_points - 1);
      const double lambda =
          lambda_min * std::pow(lambda_max / lambda_min, frac);
      out << num(lambda) << ',' << num(deviation_bound_bounded(in, lambda))
          << '\n';
    }
  } else if (kind == "expectation" || kind == "supnorm" || kind == "lecam" ||
             kind == "wasserstein") {
    out << "# " << kind << " bound sweep, n=" << n << " r=" << num(r) << '\n';
    out << "m,bound\n";
    for (double m : cfg.m_grid) {
      const auto km = static_cast<std::size_t>(
          std::max<long long>(1, std::llround(m * static_cast<double>(n))));
      in.k = std::min(km, n);
      double value;
      if (kind == "expectation") {
        value = expectation_bound_bounded(in).final;
      } else if (kind == "supnorm") {
        if (2 * in.k > n) continue;
        CoveringParams cov;
        cov.c = C;
        cov.nu = static_cast<double>(shape_dim(cfg.shape));
        cov.omega_D = omega;
        value = supnorm_expectation_bound(in, cov);
      } else if (kind == "lecam") {
        value = lecam_lower_bound(omega, C, in.k, n).value();
      } else {
        PointCloud cloud = sample_noisy(cfg.shape, cfg.noise, n,
                                        Rng::derive(opt.seed, 7));
        PushForwardSample pf = push_forward(cloud, cfg.x, cfg.r);
        PointCloud big = sample_noisy(cfg.shape, cfg.noise, cfg.n_ref,
                                      Rng::derive(opt.seed, 8));
        PushForwardSample pf_ref = push_forward(big, cfg.x, cfg.r);
        value = w1_pointwise_stability_bound(m, wasserstein1_1d(pf, pf_ref));
      }
      out << num(m) << ',' << num(value) << '\n';
    }
  } else {
    throw CLI::ValidationError("--bound", "unknown bound kind '" + kind + "'");
  }
  out.close();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(opt, "bounds",
                 {{"bound", kind},
                  {"n", std::to_string(n)},
                  {"k", std::to_string(k)},
                  {"r", num(r)}},
                 {path}, wall);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distance-to-measure toolkit"};
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw a noisy point cloud");
  RunOptions sample_run;
  ShapeOptions sample_shape;
  std::size_t sample_n = 500;
  add_run_options(sample_cmd, sample_run);
  add_shape_options(sample_cmd, sample_shape);
  sample_cmd->add_option("--n", sample_n, "sample size");

  // dtm
  auto* dtm_cmd = app.add_subcommand("dtm", "evaluate the DTEM on a cloud");
  RunOptions dtm_run;
  std::string dtm_cloud, dtm_x, dtm_grid;
  double dtm_m = 0.1, dtm_r = 2.0;
  add_run_options(dtm_cmd, dtm_run);
  dtm_cmd->add_option("--cloud", dtm_cloud, "point cloud CSV")->required();
  dtm_cmd->add_option("--x", dtm_x, "observation point, comma separated");
  dtm_cmd->add_option("--grid", dtm_grid, "grid CSV for a field evaluation");
  dtm_cmd->add_option("--m", dtm_m, "mass parameter");
  dtm_cmd->add_option("--r", dtm_r, "power");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "Monte-Carlo error curve");
  RunOptions curve_run;
  ShapeOptions curve_shape;
  std::string curve_x, curve_m_grid;
  double curve_r = 1.0;
  std::size_t curve_n = 500, curve_trials = 100, curve_n_ref = 0;
  add_run_options(curve_cmd, curve_run);
  add_shape_options(curve_cmd, curve_shape);
  curve_cmd->add_option("--x", curve_x, "observation point");
  curve_cmd->add_option("--m-grid", curve_m_grid, "comma-separated m values");
  curve_cmd->add_option("--r", curve_r, "power");
  curve_cmd->add_option("--n", curve_n, "sample size");
  curve_cmd->add_option("--trials", curve_trials, "Monte-Carlo trials");
  curve_cmd->add_option("--n-ref", curve_n_ref, "reference sample size");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "sweep a closed-form bound");
  RunOptions bounds_run;
  ShapeOptions bounds_shape;
  std::string bounds_kind = "deviation", bounds_x;
  double bounds_r = 1.0, bounds_C = 1.0;
  double lambda_min = 0.001, lambda_max = 1.0;
  std::size_t bounds_n = 500, bounds_k = 50, lambda_points = 20;
  add_run_options(bounds_cmd, bounds_run);
  add_shape_options(bounds_cmd, bounds_shape);
  bounds_cmd->add_option("--bound", bounds_kind,
                         "deviation | expectation | supnorm | lecam | wasserstein");
  bounds_cmd->add_option("--x", bounds_x, "observation point");
  bounds_cmd->add_option("--r", bounds_r, "power");
  bounds_cmd->add_option("--n", bounds_n, "sample size");
  bounds_cmd->add_option("--k", bounds_k, "order statistic count");
  bounds_cmd->add_option("--C", bounds_C, "absolute constant");
  bounds_cmd->add_option("--lambda-min", lambda_min, "sweep start");
  bounds_cmd->add_option("--lambda-max", lambda_max, "sweep end");
  bounds_cmd->add_option("--lambda-points", lambda_points, "sweep size");

  // verify-process
  auto* verify_cmd =
      app.add_subcommand("verify-process", "bound-vs-simulation report");
  RunOptions verify_run;
  std::size_t verify_n = 500, verify_trials = 10000;
  add_run_options(verify_cmd, verify_run);
  verify_cmd->add_option("--n", verify_n, "sample size");
  verify_cmd->add_option("--trials", verify_trials, "Monte-Carlo trials");

  // reproduce
  auto* repro_cmd =
      app.add_subcommand("reproduce", "built-in experiment configurations");
  RunOptions repro_run;
  std::string repro_name;
  std::string repro_noise = "noiseless", repro_x;
  double repro_r = 1.0;
  std::size_t repro_n = 0, repro_trials = 100, repro_n_ref = 0;
  add_run_options(repro_cmd, repro_run);
  repro_cmd->add_option("name", repro_name, "segment | 2d-shape | tangle-cube")
      ->required();
  repro_cmd->add_option("--noise", repro_noise, "noiseless | clutter | gaussian");
  repro_cmd->add_option("--x", repro_x, "observation point");
  repro_cmd->add_option("--r", repro_r, "power");
  repro_cmd->add_option("--n", repro_n, "sample size");
  repro_cmd->add_option("--trials", repro_trials, "Monte-Carlo trials");
  repro_cmd->add_option("--n-ref", repro_n_ref, "reference sample size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*sample_cmd) {
      finalize_seed(sample_run);
      if (!sample_run.config_path.empty())
        apply_config(read_config(sample_run.config_path), sample_shape,
                     sample_cmd);
      const auto t0 = std::chrono::steady_clock::now();
      Shape shape = make_shape(sample_shape);
      NoiseModel noise_model = make_noise(sample_shape, shape);
      PointCloud cloud =
          sample_noisy(shape, noise_model, sample_n, sample_run.seed);
      std::filesystem::create_directories(sample_run.out_dir);
      const std::string path = sample_run.out_dir + "/cloud.csv";
      save_point_cloud(cloud, path, CloudFormat::Csv);
      const double wall = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
      write_manifest(sample_run, "sample",
                     {{"shape", sample_shape.shape},
                      {"noise", sample_shape.noise},
                      {"n", std::to_string(sample_n)}},
                     {path}, wall);
      return 0;
    }
    if (*dtm_cmd) {
      finalize_seed(dtm_run);
      PointCloud cloud = load_point_cloud(dtm_cloud, CloudFormat::Csv);
      if (!dtm_grid.empty()) {
        PointCloud grid = load_point_cloud(dtm_grid, CloudFormat::Csv);
        const auto t0 = std::chrono::steady_clock::now();
        auto values =
            dtm_field(cloud, grid.points, dtm_m, dtm_r, dtm_run.threads);
        std::filesystem::create_directories(dtm_run.out_dir);
        const std::string path = dtm_run.out_dir + "/dtm_field.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (std::size_t d = 1; d <= grid.dim; ++d) out << 'x' << d << ',';
        out << "m,powered,root\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
          for (double c : grid.points[i]) out << num(c) << ',';
          out << num(values[i].m) << ',' << num(values[i].powered) << ','
              << num(values[i].root) << '\n';
        }
        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        write_manifest(dtm_run, "dtm",
                       {{"m", num(dtm_m)}, {"r", num(dtm_r)}}, {path}, wall);
        return 0;
      }
      if (dtm_x.empty())
        throw CLI::RequiredError("--x (or --grid)");
      Point x = parse_list(dtm_x);
      const auto k = static_cast<std::size_t>(std::max<long long>(
          1, std::llround(dtm_m * static_cast<double>(cloud.size()))));
      DtmValue v = dtem(cloud, x, std::min(k, cloud.size()), dtm_r);
      std::cout << num(v.powered) << ',' << num(v.root) << '\n';
      return 0;
    }
    if (*curve_cmd) {
      finalize_seed(curve_run);
      if (!curve_run.config_path.empty()) {
        auto kv = read_config(curve_run.config_path);
        apply_config(kv, curve_shape, curve_cmd);
        auto overridden = [&](const char* flag) {
          const CLI::Option* o = curve_cmd->get_option_no_throw(flag);
          return o != nullptr && o->count() > 0;
        };
        if (kv.count("x") && !overridden("--x")) curve_x = kv["x"];
        if (kv.count("m_grid") && !overridden("--m-grid"))
          curve_m_grid = kv["m_grid"];
        if (kv.count("r") && !overridden("--r")) curve_r = std::stod(kv["r"]);
        if (kv.count("n") && !overridden("--n")) curve_n = std::stoull(kv["n"]);
        if (kv.count("trials") && !overridden("--trials"))
          curve_trials = std::stoull(kv["trials"]);
        if (kv.count("n_ref") && !overridden("--n-ref"))
          curve_n_ref = std::stoull(kv["n_ref"]);
        if (kv.count("seed") && !curve_run.seed_given) {
          curve_run.seed = std::stoull(kv["seed"]);
          curve_run.seed_given = true;
        }
      }
      ExperimentConfig cfg = build_experiment(
          curve_shape, parse_list(curve_x), parse_list(curve_m_grid), curve_r,
          curve_n, curve_trials, curve_n_ref, curve_run.seed);
      return run_curve_outputs(cfg, curve_run, "curve");
    }
    if (*bounds_cmd) {
      finalize_seed(bounds_run);
      return run_bounds(bounds_kind, bounds_shape, parse_list(bounds_x),
                        bounds_r, bounds_n, bounds_k, bounds_C, lambda_min,
                        lambda_max, lambda_points, bounds_run);
    }
    if (*verify_cmd) {
      finalize_seed(verify_run);
      return run_verify_process(verify_n, verify_trials, verify_run);
    }
    if (*repro_cmd) {
      finalize_seed(repro_run);
      ShapeOptions shape_opt;
      shape_opt.shape = repro_name;
      shape_opt.noise = repro_noise;
      if (repro_n == 0)
        repro_n = (repro_name == "segment" || repro_name == "2d-shape") ? 500 : 2000;
      ExperimentConfig cfg = build_experiment(
          shape_opt, parse_list(repro_x), {}, repro_r, repro_n, repro_trials,
          repro_n_ref, repro_run.seed);
      return run_curve_outputs(cfg, repro_run, "reproduce " + repro_name);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
