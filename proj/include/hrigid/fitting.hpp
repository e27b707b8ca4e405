#pragma once

#include <cstdint>
#include <string>

#include "hrigid/hcalc.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/moments.hpp"

namespace hrigid {

struct FitReport {
  Isometry isometry;
  std::string fitter_used;    // "coercive" | "oracle"
  bool fallback = false;      // coercive was requested but the oracle stepped in
  double measured_eps = 0.0;  // coercive: sup |u - z| on the check region;
                              // oracle: best max-residual over the sample set
};

struct CoerciveFitOptions {
  int mean_samples = 64;       // accepted points for the differential mean on B(0, 1/2)
  int check_proposals = 4096;  // proposal budget for measuring sup |u - z| on B(0, 3/10)
  int quad_order = 12;
};

struct OracleFitOptions {
  int samples = 16;  // accepted sample points (raised to 2n+2 when lower)
  int restarts = 2;  // extra seeded starts around the least-squares init
  std::uint64_t seed = 2024;
  double init_step = 0.25;
  double tol_step = 1e-11;
  int max_sweeps = 240;
};

/// Constructive fit (n > 1): normalize f to the unit ball, read the initial
/// isometry off the mean horizontal differential and the image of the
/// center, then straighten the rotation with the unitary moment correction.
/// Throws std::invalid_argument for n = 1 and std::domain_error when the
/// measured sup |u - z| leaves the correction's admissible range (the
/// message carries the measured value).
FitReport fit_isometry_coercive(const HMap& f, const Ball& region,
                                const CoerciveFitOptions& opts = {});

/// Independent optimization fit: least-squares/polar initialization plus a
/// seeded multi-start compass search over the isometry parameters, both
/// reflection flags tried. Deterministic for a fixed seed; never throws on
/// non-convergence (the best residual found lands in measured_eps).
FitReport fit_isometry_oracle(const HMap& f, const Ball& region,
                              const OracleFitOptions& opts = {});

enum class FitterKind { coercive, oracle };

/// Runs the requested fitter; when the coercive route refuses (n = 1 or its
/// admissibility check fails) the oracle takes over and `fallback` is set.
FitReport fit_isometry(const HMap& f, const Ball& region, FitterKind kind,
                       const CoerciveFitOptions& copts = {},
                       const OracleFitOptions& oopts = {});

/// Max of the gauge distance between f and the isometry over deterministic
/// low-discrepancy points of the region; `proposals` is the Halton budget.
double sup_deviation(const HMap& f, const Isometry& theta, const Ball& region,
                     int proposals = 100000);

/// Normalized L^p mean of |D_h f - D_h theta| (operator norm) over the
/// region, self-normalized over the accepted low-discrepancy points (exact
/// for constant integrands).
double sobolev_deviation(const HMap& f, const Isometry& theta, const Ball& region, double p,
                         int proposals = 20000);

/// Normalized mean of exp(N |D_h f - D_h theta| / eps) over the region.
/// Accumulated in log space so large exponents cannot overflow
/// intermediates; the returned value may still be infinite when the true
/// mean exceeds the double range.
double exp_integrability(const HMap& f, const Isometry& theta, const Ball& region, double N,
                         double eps, int proposals = 20000);

}  // namespace hrigid
