#include "dtm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dtm/parallel.hpp"
#include "dtm/regularity.hpp"
#include "dtm/rng.hpp"

namespace dtm {

namespace {

// RNG stream ids reserved next to the per-trial streams 0..trials-1.
constexpr std::uint64_t kRefStream = 1ull << 32;
constexpr std::uint64_t kRefCheckStream = (1ull << 32) + 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void describe(const Shape& shape, std::ostringstream& out) {
  struct Visitor {
    std::ostringstream& out;
    void operator()(const Segment& s) {
      out << "segment " << num(s.a) << ' ' << num(s.b);
    }
    void operator()(const Polygon2D& p) {
      out << "polygon";
      for (const auto& v : p.vertices) out << ' ' << num(v[0]) << ' ' << num(v[1]);
    }
    void operator()(const PointCloudSupport& s) {
      out << "support " << s.cloud.dim;
      for (const auto& p : s.cloud.points)
        for (double c : p) out << ' ' << num(c);
    }
    void operator()(const TangleCube& t) { out << "tangle " << num(t.level); }
  };
  std::visit(Visitor{out}, shape);
}

void describe(const NoiseModel& noise, std::ostringstream& out) {
  struct Visitor {
    std::ostringstream& out;
    void operator()(const noise::Noiseless&) { out << "noiseless"; }
    void operator()(const noise::Clutter& c) {
      out << "clutter " << num(c.pi);
      for (std::size_t i = 0; i < c.box.dim(); ++i)
        out << ' ' << num(c.box.lo[i]) << ' ' << num(c.box.hi[i]);
    }
    void operator()(const noise::Gaussian& g) { out << "gaussian " << num(g.sigma); }
  };
  std::visit(Visitor{out}, noise);
}

std::string canonical_form(const ExperimentConfig& cfg) {
  std::ostringstream out;
  describe(cfg.shape, out);
  out << '|';
  describe(cfg.noise, out);
  out << "|x";
  for (double c : cfg.x) out << ' ' << num(c);
  out << "|r " << num(cfg.r) << "|n " << cfg.n << "|trials " << cfg.trials
      << "|m";
  for (double m : cfg.m_grid) out << ' ' << num(m);
  out << "|nref " << cfg.n_ref << "|seed " << cfg.master_seed;
  return out.str();
}

TabulatedQuantile reference_from_sample_size(const ExperimentConfig& cfg,
                                             std::size_t n_ref,
                                             std::uint64_t stream) {
  PointCloud cloud =
      sample_noisy(cfg.shape, cfg.noise, n_ref, Rng::derive(cfg.master_seed, stream));
  PushForwardSample pf = push_forward(cloud, cfg.x, cfg.r);
  const double u_min = 1.0 / static_cast<double>(n_ref);
  std::vector<double> grid = geometric_grid(2000, 2000, u_min);
  return TabulatedQuantile::tabulate(
      [&](double u) { return quantile_eval(pf, u); }, grid);
}

struct Trim {
  static std::string ws(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
};

double parse_double(const std::string& token, const std::string& path,
                    std::size_t row) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != token.size() || token.empty())
    throw std::runtime_error(path + ": row " + std::to_string(row) +
                             ": bad number '" + token + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(Trim::ws(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(Trim::ws(cur));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (m_grid.empty()) throw std::invalid_argument("m_grid must be nonempty");
  for (double m : m_grid)
    if (!(m > 0.0 && m <= 1.0))
      throw std::invalid_argument("m_grid entries must lie in (0,1]");
  if (x.size() != shape_dim(shape))
    throw std::invalid_argument("observation point dimension mismatch");
  if (!(r >= 1.0)) throw std::invalid_argument("r >= 1 required");
}

std::vector<double> default_m_grid() {
  std::vector<double> g;
  const double lo = 0.005, knee = 0.5;
  const double ratio = std::pow(knee / lo, 1.0 / 39.0);
  double m = lo;
  for (int i = 0; i < 40; ++i) {
    g.push_back(m);
    m *= ratio;
  }
  g.back() = knee;
  for (int i = 1; i <= 10; ++i) g.push_back(knee + 0.05 * i);
  g.back() = 1.0;
  return g;
}

std::string config_digest(const ExperimentConfig& cfg) {
  const std::string s = canonical_form(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TabulatedQuantile estimate_reference_quantile(const ExperimentConfig& cfg) {
  if (cfg.n_ref < 10000)
    throw std::invalid_argument("reference sample size must be >= 10000");
  return reference_from_sample_size(cfg, cfg.n_ref, kRefStream);
}

double reference_convergence_gap(const ExperimentConfig& cfg,
                                 const TabulatedQuantile& reference) {
  TabulatedQuantile refined =
      reference_from_sample_size(cfg, 2 * cfg.n_ref, kRefCheckStream);
  double worst = 0.0;
  for (double m : cfg.m_grid) {
    const double a = reference.integral_to(m) / m;
    const double b = refined.integral_to(m) / m;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    worst = std::max(worst, std::abs(a - b) / scale);
  }
  return worst;
}

ErrorCurve error_curve(const ExperimentConfig& cfg,
                       const TabulatedQuantile& reference, unsigned threads) {
  cfg.validate();
  ErrorCurve out;
  out.config_hash = config_digest(cfg);
  out.n = cfg.n;
  out.r = cfg.r;
  out.trials = cfg.trials;
  out.seed = cfg.master_seed;

  const double dn = static_cast<double>(cfg.n);
  std::vector<std::size_t> ks;
  for (double m : cfg.m_grid) {
    const auto k = static_cast<std::size_t>(std::llround(m * dn));
    if (k == 0) {
      out.skipped_m.push_back(m);
      continue;
    }
    ks.push_back(std::min(k, cfg.n));
  }
  const std::size_t cols = ks.size();

  // trial-major matrix so aggregation order is independent of threading
  std::vector<double> deltas(cfg.trials * cols);
  parallel_for(cfg.trials, threads, [&](std::size_t t) {
    PointCloud cloud =
        sample_noisy(cfg.shape, cfg.noise, cfg.n, Rng::derive(cfg.master_seed, t));
    PushForwardSample pf = push_forward(cloud, cfg.x, cfg.r);
    std::vector<double> prefix(cfg.n + 1, 0.0);
    for (std::size_t i = 0; i < cfg.n; ++i) prefix[i + 1] = prefix[i] + pf.values[i];
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t k = ks[c];
      const double m = static_cast<double>(k) / dn;
      const double emp = prefix[k] / static_cast<double>(k);
      const double ref = reference.integral_to(m) / m;
      deltas[t * cols + c] = emp - ref;
    }
  });

  out.rows.resize(cols);
  const double dt = static_cast<double>(cfg.trials);
  for (std::size_t c = 0; c < cols; ++c) {
    double sum_abs = 0.0, sum_signed = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const double d = deltas[t * cols + c];
      sum_abs += std::abs(d);
      sum_signed += d;
    }
    const double mean_abs = sum_abs / dt;
    double ss = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const double dev = std::abs(deltas[t * cols + c]) - mean_abs;
      ss += dev * dev;
    }
    const double sd = cfg.trials > 1 ? std::sqrt(ss / (dt - 1.0)) : 0.0;

    ErrorRow& row = out.rows[c];
    row.k = ks[c];
    row.m = static_cast<double>(ks[c]) / dn;
    row.mean_abs_delta = mean_abs;
    row.mean_signed_delta = sum_signed / dt;
    row.std_error = sd / std::sqrt(dt);
    row.psi_tilde = psi_tilde(reference, row.m);
  }
  return out;
}

std::vector<std::pair<double, double>> psi_curve(const TabulatedQuantile& reference,
                                                 const std::vector<double>& m_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(m_grid.size());
  for (double m : m_grid) out.emplace_back(m, psi_tilde(reference, m));
  return out;
}

double monotonicity_agreement(const ErrorCurve& curve) {
  if (curve.rows.size() < 3)
    throw std::invalid_argument("monotonicity_agreement needs >= 3 rows");
  std::size_t agree = 0, pairs = 0;
  for (std::size_t i = 0; i + 1 < curve.rows.size(); ++i) {
    const ErrorRow& a = curve.rows[i];
    const ErrorRow& b = curve.rows[i + 1];
    ++pairs;
    const double de = b.mean_abs_delta - a.mean_abs_delta;
    const double width =
        2.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    if (std::abs(de) < width) {  // not resolved by the Monte-Carlo noise
      ++agree;
      continue;
    }
    const double dp = b.psi_tilde - a.psi_tilde;
    if (dp == 0.0 || (de > 0.0) == (dp > 0.0)) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

double rate_regression(const std::vector<ErrorCurve>& curves, double m_fixed) {
  std::vector<std::pair<double, double>> pts;  // (log n, log mean)
  std::vector<std::size_t> seen_n;
  for (const auto& curve : curves) {
    if (curve.rows.empty()) throw std::invalid_argument("empty error curve");
    const ErrorRow* best = &curve.rows.front();
    for (const auto& row : curve.rows)
      if (std::abs(row.m - m_fixed) < std::abs(best->m - m_fixed)) best = &row;
    if (!(best->mean_abs_delta > 0.0))
      throw std::invalid_argument("rate_regression: nonpositive mean error");
    pts.emplace_back(std::log(static_cast<double>(curve.n)),
                     std::log(best->mean_abs_delta));
    seen_n.push_back(curve.n);
  }
  std::sort(seen_n.begin(), seen_n.end());
  seen_n.erase(std::unique(seen_n.begin(), seen_n.end()), seen_n.end());
  if (seen_n.size() < 4)
    throw std::invalid_argument("rate_regression needs >= 4 distinct n");

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

void save_quantile(const TabulatedQuantile& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# interp: "
      << (q.interp == TabulatedQuantile::Interp::Step ? "step" : "linear") << '\n';
  out << "u,value\n";
  for (std::size_t i = 0; i < q.grid.size(); ++i)
    out << num(q.grid[i]) << ',' << num(q.values[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TabulatedQuantile load_quantile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  TabulatedQuantile q;
  q.interp = TabulatedQuantile::Interp::Linear;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string s = Trim::ws(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      if (s.find("interp: step") != std::string::npos)
        q.interp = TabulatedQuantile::Interp::Step;
      continue;
    }
    if (!header_seen) {
      if (s != "u,value")
        throw std::runtime_error(path + ": row " + std::to_string(row) +
                                 ": expected header 'u,value'");
      header_seen = true;
      continue;
    }
    auto cells = split_csv(s);
    if (cells.size() != 2)
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               ": expected 2 columns");
    q.grid.push_back(parse_double(cells[0], path, row));
    q.values.push_back(parse_double(cells[1], path, row));
  }
  q.validate();
  return q;
}

void save_error_curve(const ErrorCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# config: " << curve.config_hash << " n=" << curve.n << " r="
      << num(curve.r) << " trials=" << curve.trials << " seed=" << curve.seed
      << '\n';
  out << "m,k,mean_abs_delta,mean_signed_delta,std_error,psi_tilde\n";
  for (const auto& row : curve.rows)
    out << num(row.m) << ',' << row.k << ',' << num(row.mean_abs_delta) << ','
        << num(row.mean_signed_delta) << ',' << num(row.std_error) << ','
        << num(row.psi_tilde) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

ErrorCurve load_error_curve(const std::string& path,
                            const std::optional<std::string>& expected_digest,
                            std::string* warning) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  ErrorCurve curve;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string s = Trim::ws(line);
    if (s.empty()) continue;
    if (s.rfind("# config:", 0) == 0) {
      std::istringstream meta(s.substr(9));
      meta >> curve.config_hash;
      std::string kv;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "n") curve.n = std::stoull(val);
        else if (key == "r") curve.r = std::stod(val);
        else if (key == "trials") curve.trials = std::stoull(val);
        else if (key == "seed") curve.seed = std::stoull(val);
      }
      continue;
    }
    if (s[0] == '#') continue;
    if (!header_seen) {
      if (s != "m,k,mean_abs_delta,mean_signed_delta,std_error,psi_tilde")
        throw std::runtime_error(path + ": row " + std::to_string(row) +
                                 ": unexpected header");
      header_seen = true;
      continue;
    }
    auto cells = split_csv(s);
    if (cells.size() != 6)
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               ": expected 6 columns");
    ErrorRow r;
    r.m = parse_double(cells[0], path, row);
    r.k = static_cast<std::size_t>(
        std::llround(parse_double(cells[1], path, row)));
    r.mean_abs_delta = parse_double(cells[2], path, row);
    r.mean_signed_delta = parse_double(cells[3], path, row);
    r.std_error = parse_double(cells[4], path, row);
    r.psi_tilde = parse_double(cells[5], path, row);
    curve.rows.push_back(r);
  }
  if (expected_digest && *expected_digest != curve.config_hash && warning)
    *warning = path + ": config digest mismatch (file " + curve.config_hash +
               ", expected " + *expected_digest + ")";
  return curve;
}

}  // namespace dtm
