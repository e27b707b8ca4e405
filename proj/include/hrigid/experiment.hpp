#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrigid/domains.hpp"
#include "hrigid/fitting.hpp"
#include "hrigid/isometry.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/types.hpp"

namespace hrigid {

// ---------------------------------------------------------------------------
// Map families
// ---------------------------------------------------------------------------

// A one-parameter family eps -> map, used by the deviation experiments.
struct MapFamily {
  int n = 0;
  std::string label;
  std::function<HMap(double eps)> at;
};

// Families: "dilation" (delta_{1+eps}), "reflected_dilation" (iota o delta_{1+eps}),
// "conjugated_dilation" (theta1 o delta_{1+eps} o theta2, seeded),
// "pure_isometry" (eps-independent seeded isometry, zero-deviation control).
// A trailing "(k)" in the name overrides the seed, e.g. "conjugated_dilation(7)".
// Throws std::invalid_argument for unknown names.
MapFamily make_family(int n, const std::string& family, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

// Raised for malformed configuration files; the message carries the offending
// key or the line/column of the JSON syntax error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int n = 2;
  std::string family = "dilation";
  std::vector<double> epsilons;       // positive, strictly descending
  Ball ball{HPoint::origin(2), 1.0};  // fit/measurement region
  double sup_region_scale = 0.5;      // q in (0,1): sup measured on q*ball
  double p = 2.0;                     // integral-mean exponent, >= 1
  int samples = 20000;                // low-discrepancy proposal budget
  int quad_order = 12;
  std::uint64_t seed = 0;
  std::string fitter = "coercive";  // coercive | oracle | both
  std::string output;               // report path stem ("" = do not write)

  // Parses and validates; rejects unknown keys. Syntax errors are reported
  // with line/column; value errors name the key.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  nlohmann::ordered_json to_json() const;
};

// ---------------------------------------------------------------------------
// Deviation runs
// ---------------------------------------------------------------------------

struct RigidityRecord {
  double epsilon = 0.0;
  double sup_dev = 0.0;           // sup of rho(f(x), theta(x)) on q*ball
  double sobolev_dev = 0.0;       // p-mean of |D_h f - D_h theta| on ball
  double exp_int_at_ln16 = 0.0;   // mean of exp(ln16 * |D_h f - D_h theta| / eps)
  std::string fitter_used;        // coercive | oracle | both
  bool fit_fallback = false;      // coercive fit rejected, oracle substituted
  Isometry isometry;              // fitted isometry
  double measured_eps = 0.0;      // fitter's own closeness measure
  double sup_ratio = 0.0;         // sup_dev / (sqrt(eps) + eps)
  double exp_N_at_16 = 0.0;       // largest N with the functional <= 16 (NaN = unbounded)
  double cross_check_ratio = 0.0; // oracle/coercive sup ratio (NaN unless fitter = both)
  bool cross_check_pass = true;   // within factor 2 when fitter = both
};

// Least-squares line through (log x, log y); only points with x <= x_max and
// y > floor participate. `valid` is false with fewer than two usable points.
struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool valid = false;
  int points = 0;
};
Regression loglog_regression(const std::vector<double>& x, const std::vector<double>& y,
                             double x_max, double y_floor = 1e-12);

struct RigidityReport {
  ExperimentConfig config;
  std::vector<RigidityRecord> records;
  Regression sup_fit;      // on records with epsilon <= 1e-2
  Regression sobolev_fit;  // on records with epsilon <= 1e-2

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;  // columns: epsilon,sup_dev,sobolev_dev,exp_int_ln16,fitter,fallback
};

// Runs the full per-epsilon pipeline: fit, deviations, exponential functional,
// surrogate constants, regressions. Fit failures fall back to the oracle
// fitter and are flagged; the run continues.
RigidityReport run_rigidity(const ExperimentConfig& cfg);

// Writes <stem>.json and <stem>.csv (a trailing .json/.csv on `stem` is
// stripped first); creates parent directories.
void write_report(const RigidityReport& report, const std::string& stem);

// ---------------------------------------------------------------------------
// Growth / embedding suites
// ---------------------------------------------------------------------------

struct GrowthRow {
  int trial = 0;
  std::string kind;  // "translation" | "general"
  double eps_measured = 0.0;
  int s = 1;
  double sup_measured = 0.0;
  double bound = 0.0;  // 3*s*eps (translation) or 5*s*eps (general)
  bool pass = false;
};
struct GrowthReport {
  std::vector<GrowthRow> rows;
  bool all_pass = true;
};

// Random isometries calibrated so sup_{B(a,r)} rho(theta x, x) < r/2; checks
// the linear growth of that sup on B(a, s*r) for s in {1,2,5}: factor 3s for
// pure translations, 5s in general.
GrowthReport isometry_growth_suite(std::uint64_t seed, int trials);

// sup_{B(a, r/2)} rho(f(x), x) / (r * (sqrt(eps) + eps)); requires f(a) = a
// (throws std::invalid_argument otherwise).
double embedding_ratio(const HMap& f, const HPoint& a, double r, double eps, int samples);

struct EmbeddingRow {
  double epsilon = 0.0;
  double ratio = 0.0;  // max over trials
};
struct EmbeddingReport {
  std::vector<EmbeddingRow> rows;  // eps in {1e-2, 1e-3, 1e-4}
  bool bounded = true;
};

// Dilations re-centered to fix a random point a; the deviation ratio must stay
// bounded (it increases mildly as eps decreases, toward its limit).
EmbeddingReport embedding_suite(std::uint64_t seed, int trials);

// ---------------------------------------------------------------------------
// JSON export of geometric objects
// ---------------------------------------------------------------------------

nlohmann::ordered_json ball_to_json(const Ball& b);
nlohmann::ordered_json chain_to_json(const BallChain& chain);
nlohmann::ordered_json cover_to_json(const WhitneyFamily& fam);

}  // namespace hrigid
