#include "hrigid/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hrigid/hcalc.hpp"
#include "hrigid/linalg.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/version.hpp"

namespace hrigid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Splits "name(123)" into the base name and a seed override.
struct FamilyName {
  std::string base;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

FamilyName parse_family_name(const std::string& family) {
  FamilyName out;
  auto open = family.find('(');
  if (open == std::string::npos) {
    out.base = family;
    return out;
  }
  if (family.back() != ')') {
    throw std::invalid_argument("make_family: malformed family '" + family + "'");
  }
  out.base = family.substr(0, open);
  std::string inside = family.substr(open + 1, family.size() - open - 2);
  try {
    size_t used = 0;
    out.seed = std::stoull(inside, &used);
    if (used != inside.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("make_family: bad seed in family '" + family + "'");
  }
  out.has_seed = true;
  return out;
}

}  // namespace

MapFamily make_family(int n, const std::string& family, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_family: n must be >= 1");
  FamilyName name = parse_family_name(family);
  if (name.has_seed) seed = name.seed;

  MapFamily fam;
  fam.n = n;
  fam.label = family;
  if (name.base == "dilation") {
    fam.at = [n](double eps) { return dilation_map(n, 1.0 + eps); };
  } else if (name.base == "reflected_dilation") {
    Isometry iota(MatrixXcd::Identity(n, n), HPoint::origin(n), true);
    fam.at = [n, iota](double eps) {
      return compose_maps(isometry_map(iota), dilation_map(n, 1.0 + eps));
    };
  } else if (name.base == "conjugated_dilation") {
    Rng rng(seed ^ 0xc28f5bull);
    Isometry t1 = random_isometry(n, rng, 0.4, 0.4, false);
    Isometry t2 = random_isometry(n, rng, 0.4, 0.4, false);
    fam.at = [n, t1, t2](double eps) {
      return compose_maps(isometry_map(t1),
                          compose_maps(dilation_map(n, 1.0 + eps), isometry_map(t2)));
    };
  } else if (name.base == "pure_isometry") {
    Rng rng(seed ^ 0x7a6e15ull);
    Isometry t = random_isometry(n, rng, 0.3, 0.3, false);
    fam.at = [t](double) { return isometry_map(t); };
  } else {
    throw std::invalid_argument("make_family: unknown family '" + family + "'");
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

namespace {

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

template <typename T>
T fetch(const nlohmann::ordered_json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config error: key '") + key + "': " + e.what());
  }
}

template <typename T>
T fetch_or(const nlohmann::ordered_json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return fetch<T>(j, key);
}

void check_keys(const nlohmann::ordered_json& j, const std::set<std::string>& known,
                const char* where) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError(std::string("config error: unknown key '") + item.key() + "' in " + where);
    }
  }
}

void validate(const ExperimentConfig& c) {
  if (c.n < 1 || c.n > 6) throw ConfigError("config error: key 'n': must be in [1, 6]");
  if (c.epsilons.empty()) throw ConfigError("config error: key 'epsilons': must be non-empty");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (!(c.epsilons[i] > 0.0)) {
      throw ConfigError("config error: key 'epsilons': entries must be positive");
    }
    if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1])) {
      throw ConfigError("config error: key 'epsilons': entries must be strictly descending");
    }
  }
  if (c.ball.center.n() != c.n) {
    throw ConfigError("config error: key 'ball': center must have 2n+1 coordinates");
  }
  if (!(c.ball.radius > 0.0)) throw ConfigError("config error: key 'ball': radius must be positive");
  if (!(c.sup_region_scale > 0.0 && c.sup_region_scale < 1.0)) {
    throw ConfigError("config error: key 'sup_region_scale': must lie in (0, 1)");
  }
  if (!(c.p >= 1.0)) throw ConfigError("config error: key 'p': must be >= 1");
  if (c.samples < 100) throw ConfigError("config error: key 'samples': must be >= 100");
  if (c.quad_order < 2 || c.quad_order > 40) {
    throw ConfigError("config error: key 'quad_order': must be in [2, 40]");
  }
  if (c.fitter != "coercive" && c.fitter != "oracle" && c.fitter != "both") {
    throw ConfigError("config error: key 'fitter': must be coercive, oracle or both");
  }
  try {
    (void)parse_family_name(c.family);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: key 'family': ") + e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    std::ostringstream msg;
    msg << "config parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(msg.str());
  }
  if (!j.is_object()) throw ConfigError("config error: root must be a JSON object");
  check_keys(j,
             {"n", "family", "epsilons", "ball", "sup_region_scale", "p", "samples", "quad_order",
              "seed", "fitter", "output"},
             "the config root");

  ExperimentConfig c;
  c.n = fetch<int>(j, "n");
  // checked before anything derives lengths from n, so a bad n is blamed on
  // 'n' rather than on the first key it corrupts
  if (c.n < 1 || c.n > 6) throw ConfigError("config error: key 'n': must be in [1, 6]");
  c.family = fetch<std::string>(j, "family");
  c.epsilons = fetch<std::vector<double>>(j, "epsilons");

  if (!j.contains("ball")) throw ConfigError("config error: missing key 'ball'");
  const auto& jb = j.at("ball");
  if (!jb.is_object()) throw ConfigError("config error: key 'ball': must be an object");
  check_keys(jb, {"center", "radius"}, "'ball'");
  auto center = fetch<std::vector<double>>(jb, "center");
  if (static_cast<int>(center.size()) != 2 * c.n + 1) {
    throw ConfigError("config error: key 'ball': center must have 2n+1 coordinates");
  }
  VectorXd coords = Eigen::Map<const VectorXd>(center.data(), static_cast<int>(center.size()));
  c.ball = Ball{HPoint::from_coords(coords), fetch<double>(jb, "radius")};

  c.sup_region_scale = fetch_or<double>(j, "sup_region_scale", 0.5);
  c.p = fetch_or<double>(j, "p", 2.0);
  c.samples = fetch_or<int>(j, "samples", 20000);
  c.quad_order = fetch_or<int>(j, "quad_order", 12);
  c.seed = fetch_or<std::uint64_t>(j, "seed", 0);
  c.fitter = fetch_or<std::string>(j, "fitter", "coercive");
  c.output = fetch_or<std::string>(j, "output", "");

  validate(c);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config error: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["family"] = family;
  j["epsilons"] = epsilons;
  nlohmann::ordered_json jb;
  VectorXd coords = ball.center.coords();
  jb["center"] = std::vector<double>(coords.data(), coords.data() + coords.size());
  jb["radius"] = ball.radius;
  j["ball"] = jb;
  j["sup_region_scale"] = sup_region_scale;
  j["p"] = p;
  j["samples"] = samples;
  j["quad_order"] = quad_order;
  j["seed"] = seed;
  j["fitter"] = fitter;
  j["output"] = output;
  return j;
}

// ---------------------------------------------------------------------------
// Regression
// ---------------------------------------------------------------------------

Regression loglog_regression(const std::vector<double>& x, const std::vector<double>& y,
                             double x_max, double y_floor) {
  Regression reg;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] <= x_max && y[i] > y_floor) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  reg.points = static_cast<int>(lx.size());
  if (reg.points < 2) return reg;

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < reg.points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= reg.points;
  my /= reg.points;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < reg.points; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) return reg;
  reg.slope = sxy / sxx;
  reg.intercept = my - reg.slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < reg.points; ++i) {
    double fit = reg.intercept + reg.slope * lx[i];
    ss_res += (ly[i] - fit) * (ly[i] - fit);
  }
  reg.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  reg.valid = true;
  return reg;
}

// ---------------------------------------------------------------------------
// run_rigidity
// ---------------------------------------------------------------------------

namespace {

// |D_h f - D_h theta| / eps at low-discrepancy points of the region.
std::vector<double> scaled_diff_samples(const HMap& f, const HMap& theta, const Ball& region,
                                        double eps, int proposals) {
  std::vector<HPoint> pts = ball_lowdisc_points(region, proposals);
  std::vector<double> vals;
  vals.reserve(pts.size());
  for (const HPoint& x : pts) {
    MatrixXd d = horiz_diff_auto(f, x).M - horiz_diff_auto(theta, x).M;
    vals.push_back(opnorm(d) / eps);
  }
  return vals;
}

// Mean of exp(scale * v_i), evaluated through the peak for overflow safety.
double exp_mean(const std::vector<double>& v, double scale) {
  if (v.empty()) return 1.0;
  double peak = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double value : v) sum += std::exp(scale * (value - peak));
  return std::exp(scale * peak + std::log(sum / static_cast<double>(v.size())));
}

// Largest N with mean exp(N v) <= 16; NaN when no finite N saturates the bound.
double largest_exponent_at_16(const std::vector<double>& v) {
  const double cap = 256.0;
  if (exp_mean(v, cap) <= 16.0) return kNaN;
  double lo = 0.0, hi = cap;  // F(lo) = 1 <= 16 < F(hi)
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (exp_mean(v, mid) <= 16.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

RigidityReport run_rigidity(const ExperimentConfig& cfg) {
  validate(cfg);
  MapFamily fam = make_family(cfg.n, cfg.family, cfg.seed);
  const Ball fit_region = cfg.ball;
  const Ball sup_region{cfg.ball.center, cfg.ball.radius * cfg.sup_region_scale};

  CoerciveFitOptions copts;
  copts.quad_order = cfg.quad_order;
  OracleFitOptions oopts;
  oopts.seed = cfg.seed * 0x9e3779b9u + 17u;

  RigidityReport report;
  report.config = cfg;

  for (double eps : cfg.epsilons) {
    HMap f = fam.at(eps);
    RigidityRecord rec;
    rec.epsilon = eps;

    FitReport primary = cfg.fitter == "oracle"
                            ? fit_isometry(f, fit_region, FitterKind::oracle, copts, oopts)
                            : fit_isometry(f, fit_region, FitterKind::coercive, copts, oopts);
    rec.fitter_used = cfg.fitter == "both" ? "both" : primary.fitter_used;
    rec.fit_fallback = primary.fallback;
    rec.isometry = primary.isometry;
    rec.measured_eps = primary.measured_eps;

    rec.sup_dev = sup_deviation(f, primary.isometry, sup_region, cfg.samples);
    rec.sobolev_dev = sobolev_deviation(f, primary.isometry, fit_region, cfg.p, cfg.samples);
    rec.exp_int_at_ln16 =
        exp_integrability(f, primary.isometry, fit_region, std::log(16.0), eps, cfg.samples);
    rec.sup_ratio = rec.sup_dev / (std::sqrt(eps) + eps);
    rec.exp_N_at_16 = largest_exponent_at_16(
        scaled_diff_samples(f, isometry_map(primary.isometry), fit_region, eps, cfg.samples));

    if (cfg.fitter == "both") {
      FitReport alt = fit_isometry(f, fit_region, FitterKind::oracle, copts, oopts);
      double sup_alt = sup_deviation(f, alt.isometry, sup_region, cfg.samples);
      if (rec.sup_dev < 1e-12 && sup_alt < 1e-12) {
        rec.cross_check_ratio = 1.0;
        rec.cross_check_pass = true;
      } else {
        rec.cross_check_ratio = sup_alt / std::max(rec.sup_dev, 1e-300);
        rec.cross_check_pass = rec.cross_check_ratio >= 0.5 && rec.cross_check_ratio <= 2.0;
      }
    } else {
      rec.cross_check_ratio = kNaN;
      rec.cross_check_pass = true;
    }
    report.records.push_back(std::move(rec));
  }

  std::vector<double> ev, sup_v, sob_v;
  for (const RigidityRecord& rec : report.records) {
    ev.push_back(rec.epsilon);
    sup_v.push_back(rec.sup_dev);
    sob_v.push_back(rec.sobolev_dev);
  }
  const double x_max = 1e-2 * (1.0 + 1e-9);  // asymptotic regime only
  // Floors sit at each measurement's own resolution: gauge distances bottom
  // out near sqrt(coordinate roundoff), differential means near FD noise.
  // Deviations below the floor are indistinguishable from zero and would
  // only feed noise slopes into the fit.
  report.sup_fit = loglog_regression(ev, sup_v, x_max, 1e-7);
  report.sobolev_fit = loglog_regression(ev, sob_v, x_max, 1e-10);
  return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json isometry_to_json(const Isometry& t) {
  nlohmann::ordered_json j;
  j["reflect"] = t.reflect;
  nlohmann::ordered_json rot = nlohmann::ordered_json::array();
  for (int i = 0; i < t.A.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < t.A.cols(); ++k) {
      row.push_back({t.A(i, k).real(), t.A(i, k).imag()});
    }
    rot.push_back(row);
  }
  j["rotation"] = rot;
  VectorXd coords = t.a.coords();
  j["translation"] = std::vector<double>(coords.data(), coords.data() + coords.size());
  return j;
}

nlohmann::ordered_json regression_to_json(const Regression& reg, const char* slope_key,
                                          const char* intercept_key) {
  nlohmann::ordered_json j;
  if (reg.valid) {
    j[slope_key] = reg.slope;
    j[intercept_key] = reg.intercept;
  } else {
    j[slope_key] = nullptr;
    j[intercept_key] = nullptr;
  }
  return j;
}

}  // namespace

nlohmann::ordered_json RigidityReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  nlohmann::ordered_json env;
  env["n"] = config.n;
  env["seed"] = config.seed;
  env["version"] = kVersion;
  j["environment"] = env;
  j["sup_metric"] = "rho_sup";  // sup deviations are measured in the gauge metric

  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const RigidityRecord& rec : records) {
    nlohmann::ordered_json r;
    r["epsilon"] = rec.epsilon;
    r["sup_dev"] = rec.sup_dev;
    r["sobolev_dev"] = rec.sobolev_dev;
    r["exp_int_at_ln16"] = rec.exp_int_at_ln16;
    r["fitter_used"] = rec.fitter_used;
    r["fit_fallback"] = rec.fit_fallback;
    r["measured_eps"] = rec.measured_eps;
    r["sup_ratio"] = rec.sup_ratio;
    r["exp_N_at_16"] = rec.exp_N_at_16;  // NaN serializes to null
    r["cross_check_ratio"] = rec.cross_check_ratio;
    r["cross_check_pass"] = rec.cross_check_pass;
    r["isometry_params"] = isometry_to_json(rec.isometry);
    recs.push_back(std::move(r));
  }
  j["records"] = recs;

  nlohmann::ordered_json ex;
  ex.update(regression_to_json(sup_fit, "sup_slope", "sup_intercept"));
  ex.update(regression_to_json(sobolev_fit, "sobolev_slope", "sobolev_intercept"));
  ex["r2_sup"] = sup_fit.valid ? nlohmann::ordered_json(sup_fit.r2) : nlohmann::ordered_json(nullptr);
  ex["r2_sobolev"] =
      sobolev_fit.valid ? nlohmann::ordered_json(sobolev_fit.r2) : nlohmann::ordered_json(nullptr);
  ex["points_sup"] = sup_fit.points;
  ex["points_sobolev"] = sobolev_fit.points;
  j["exponents"] = ex;
  return j;
}

std::string RigidityReport::to_csv() const {
  std::string out = "epsilon,sup_dev,sobolev_dev,exp_int_ln16,fitter,fallback\n";
  char buf[256];
  for (const RigidityRecord& rec : records) {
    std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%.12e,%.12e,%s,%d\n", rec.epsilon, rec.sup_dev,
                  rec.sobolev_dev, rec.exp_int_at_ln16, rec.fitter_used.c_str(),
                  rec.fit_fallback ? 1 : 0);
    out += buf;
  }
  return out;
}

void write_report(const RigidityReport& report, const std::string& stem) {
  std::string base = stem;
  for (const char* suffix : {".json", ".csv"}) {
    std::string s(suffix);
    if (base.size() > s.size() && base.compare(base.size() - s.size(), s.size(), s) == 0) {
      base.resize(base.size() - s.size());
    }
  }
  std::filesystem::path path(base);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(base + ".json", std::ios::binary);
    if (!out) throw std::runtime_error("write_report: cannot open '" + base + ".json'");
    out << report.to_json().dump(2) << "\n";
  }
  {
    std::ofstream out(base + ".csv", std::ios::binary);
    if (!out) throw std::runtime_error("write_report: cannot open '" + base + ".csv'");
    out << report.to_csv();
  }
}

// ---------------------------------------------------------------------------
// Growth suite
// ---------------------------------------------------------------------------

namespace {

double sup_displacement(const Isometry& t, const Ball& region, int proposals) {
  double sup = 0.0;
  for (const HPoint& x : ball_lowdisc_points(region, proposals)) {
    sup = std::max(sup, kdist(t.apply(x), x));
  }
  return sup;
}

}  // namespace

GrowthReport isometry_growth_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("isometry_growth_suite: trials must be >= 1");
  GrowthReport rep;
  Rng rng(seed ^ 0x2545f4914f6cdd1dull);
  const int n = 2;
  const double r = 1.0;
  const int proposals = 4000;

  for (int trial = 0; trial < trials; ++trial) {
    HPoint a(0.5 * rng.normal_cvector(n), rng.uniform(-0.5, 0.5));
    Ball base{a, r};

    // Pure translation, then a rotation + translation; each shrunk until the
    // base-ball displacement is safely below r/2.
    for (int kind = 0; kind < 2; ++kind) {
      VectorXd kparams = VectorXd::Zero(n * n);
      if (kind == 1) {
        for (int i = 0; i < kparams.size(); ++i) kparams(i) = 0.1 * rng.normal();
      }
      VectorXcd w = 0.05 * rng.normal_cvector(n);
      double s0 = 0.002 * rng.normal();

      Isometry theta = Isometry::identity(n);
      double eps_measured = 0.0;
      for (int shrink = 0; shrink < 60; ++shrink) {
        theta = Isometry(exp_skew(skew_from_params(kparams, n)), HPoint(w, s0), false);
        eps_measured = sup_displacement(theta, base, proposals);
        if (eps_measured < 0.4 * r) break;
        kparams *= 0.5;
        w *= 0.5;
        s0 *= 0.25;
      }

      const double factor = kind == 0 ? 3.0 : 5.0;
      for (int s : {1, 2, 5}) {
        GrowthRow row;
        row.trial = trial;
        row.kind = kind == 0 ? "translation" : "general";
        row.eps_measured = eps_measured;
        row.s = s;
        row.sup_measured = sup_displacement(theta, Ball{a, s * r}, proposals);
        row.bound = factor * s * eps_measured;
        row.pass = row.sup_measured <= row.bound * (1.0 + 1e-9) + 1e-15;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Embedding suite
// ---------------------------------------------------------------------------

double embedding_ratio(const HMap& f, const HPoint& a, double r, double eps, int samples) {
  if (kdist(f.eval(a), a) > 1e-10 * (1.0 + r)) {
    throw std::invalid_argument("embedding_ratio: map must fix the center point");
  }
  double sup = 0.0;
  for (const HPoint& x : ball_lowdisc_points(Ball{a, 0.5 * r}, samples)) {
    sup = std::max(sup, kdist(f.eval(x), x));
  }
  return sup / (r * (std::sqrt(eps) + eps));
}

EmbeddingReport embedding_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("embedding_suite: trials must be >= 1");
  EmbeddingReport rep;
  Rng rng(seed ^ 0x94d049bb133111ebull);
  const int n = 2;
  const double r = 1.0;
  const std::vector<double> eps_list = {1e-2, 1e-3, 1e-4};

  std::vector<HPoint> centers;
  for (int trial = 0; trial < trials; ++trial) {
    centers.emplace_back(0.5 * rng.normal_cvector(n), rng.uniform(-0.5, 0.5));
  }

  for (double eps : eps_list) {
    EmbeddingRow row;
    row.epsilon = eps;
    for (const HPoint& a : centers) {
      Isometry ta = Isometry::translation(a);
      HMap f = compose_maps(isometry_map(ta),
                            compose_maps(dilation_map(n, 1.0 + eps), isometry_map(invert(ta))));
      row.ratio = std::max(row.ratio, embedding_ratio(f, a, r, eps, 20000));
    }
    rep.rows.push_back(row);
  }

  double lo = rep.rows.front().ratio, hi = rep.rows.front().ratio;
  for (const EmbeddingRow& row : rep.rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
    if (!std::isfinite(row.ratio) || row.ratio > 2.0) rep.bounded = false;
  }
  if (lo > 0.0 && hi / lo > 1.3) rep.bounded = false;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON export of geometric objects
// ---------------------------------------------------------------------------

nlohmann::ordered_json ball_to_json(const Ball& b) {
  nlohmann::ordered_json j;
  VectorXd coords = b.center.coords();
  j["center"] = std::vector<double>(coords.data(), coords.data() + coords.size());
  j["radius"] = b.radius;
  return j;
}

nlohmann::ordered_json chain_to_json(const BallChain& chain) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json balls = nlohmann::ordered_json::array();
  for (const Ball& b : chain.balls) balls.push_back(ball_to_json(b));
  nlohmann::ordered_json conns = nlohmann::ordered_json::array();
  for (const Ball& g : chain.connectors) conns.push_back(ball_to_json(g));
  j["balls"] = balls;
  j["connectors"] = conns;
  j["k"] = chain.k;
  j["certified"] = true;  // the builder certifies before returning
  return j;
}

nlohmann::ordered_json cover_to_json(const WhitneyFamily& fam) {
  nlohmann::ordered_json j;
  j["count"] = fam.balls.size();
  j["multiplicity_bound"] = fam.multiplicity_bound;
  nlohmann::ordered_json balls = nlohmann::ordered_json::array();
  for (const Ball& b : fam.balls) balls.push_back(ball_to_json(b));
  j["balls"] = balls;
  return j;
}

}  // namespace hrigid
