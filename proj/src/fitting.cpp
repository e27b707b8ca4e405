#include "hrigid/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hrigid/linalg.hpp"
#include "hrigid/sampling.hpp"

namespace hrigid {

namespace {

// g = dil(1/r) o trans(-a) o f o trans(a) o dil(r), defined on B(0, 1).
HMap normalize_to_unit_ball(const HMap& f, const Ball& region) {
  const int n = f.n;
  HMap pre = compose_maps(isometry_map(Isometry::translation(region.center)),
                          dilation_map(n, region.radius));
  HMap post = compose_maps(dilation_map(n, 1.0 / region.radius),
                           isometry_map(Isometry::translation(inv(region.center))));
  return compose_maps(post, compose_maps(f, pre));
}

// pi_a o dil(r) o theta o dil(1/r) o pi_{-a}.
Isometry denormalize(const Isometry& theta, const Ball& region) {
  Isometry mid = conjugate_by_dilation(theta, region.radius);
  return compose(Isometry::translation(region.center),
                 compose(mid, Isometry::translation(inv(region.center))));
}

// At least `want` accepted low-discrepancy points of the ball.
std::vector<HPoint> lowdisc_at_least(const Ball& region, int want) {
  int budget = std::max(64, 8 * want);
  for (;;) {
    std::vector<HPoint> pts = ball_lowdisc_points(region, budget);
    if (static_cast<int>(pts.size()) >= want) return pts;
    budget *= 2;
  }
}

}  // namespace

FitReport fit_isometry_coercive(const HMap& f, const Ball& region,
                                const CoerciveFitOptions& opts) {
  const int n = f.n;
  if (n <= 1) {
    throw std::invalid_argument("fit_isometry_coercive: requires n > 1");
  }
  HMap g = normalize_to_unit_ball(f, region);
  const HPoint o = HPoint::origin(n);

  bool reflect = horiz_diff_auto(g, o).lambda < 0.0;

  MatrixXd mean = MatrixXd::Zero(2 * n, 2 * n);
  std::vector<HPoint> mean_pts = lowdisc_at_least(Ball{o, 0.5}, opts.mean_samples);
  for (const HPoint& p : mean_pts) mean += horiz_diff_auto(g, p).M;
  mean /= static_cast<double>(mean_pts.size());
  if (reflect) mean.bottomRows(n) *= -1.0;

  MatrixXcd rot;
  try {
    MatrixXcd c1, c2;
    complex_parts(mean, c1, c2);
    rot = polar_unitary(c1);
  } catch (const std::domain_error&) {
    rot = MatrixXcd::Identity(n, n);
  }
  HPoint g0 = g.eval(o);
  Isometry phi(rot, reflect ? conj_flip(g0) : g0, reflect);

  HMap straightened = compose_maps(isometry_map(invert(phi)), g);
  CnMap u = horizontal_projection(straightened);

  double eps = 0.0;
  for (const HPoint& p : ball_lowdisc_points(Ball{o, 0.3}, opts.check_proposals)) {
    eps = std::max(eps, (u.eval(p) - p.z).norm());
  }
  if (eps >= correction_eps_bound(n)) {
    std::ostringstream msg;
    msg << "fit_isometry_coercive: measured sup |u - z| = " << eps
        << " exceeds the admissible bound " << correction_eps_bound(n);
    throw std::domain_error(msg.str());
  }

  UnitaryCorrection corr = lemma_correction(u, eps, opts.quad_order);
  Isometry corrected = compose(phi, Isometry::rotation(corr.V.adjoint()));

  FitReport out;
  out.isometry = denormalize(corrected, region);
  out.fitter_used = "coercive";
  out.measured_eps = eps;
  return out;
}

namespace {

struct OracleProblem {
  const HMap* g;  // normalized map on B(0, 1)
  std::vector<HPoint> samples;
  int n;

  Isometry make(const MatrixXcd& base_rot, const VectorXd& params, bool reflect) const {
    VectorXd kpar = params.head(n * n);
    MatrixXcd A = base_rot * exp_skew(skew_from_params(kpar, n));
    VectorXcd bz(n);
    for (int i = 0; i < n; ++i) {
      bz(i) = cd(params(n * n + 2 * i), params(n * n + 2 * i + 1));
    }
    return Isometry(A, HPoint(bz, params(n * n + 2 * n)), reflect);
  }

  double objective(const Isometry& theta) const {
    double worst = 0.0;
    for (const HPoint& x : samples) {
      worst = std::max(worst, kdist(g->eval(x), theta.apply(x)));
    }
    return worst;
  }
};

// Least-squares initialization for a fixed reflection flag: complex linear
// regression of the horizontal image, polar factor for the rotation, then
// the translation as the mean residual group factor.
Isometry procrustes_init(const OracleProblem& prob, bool reflect) {
  const int n = prob.n;
  const int m = static_cast<int>(prob.samples.size());

  MatrixXcd design(m, n + 1);
  MatrixXcd target(m, n);
  for (int k = 0; k < m; ++k) {
    HPoint img = prob.g->eval(prob.samples[k]);
    if (reflect) img = conj_flip(img);
    design.row(k).head(n) = prob.samples[k].z.transpose();
    design(k, n) = 1.0;
    target.row(k) = img.z.transpose();
  }
  MatrixXcd sol = design.colPivHouseholderQr().solve(target);
  MatrixXcd rot;
  try {
    rot = polar_unitary(sol.topRows(n).transpose());
  } catch (const std::domain_error&) {
    rot = MatrixXcd::Identity(n, n);
  }

  VectorXcd bz = VectorXcd::Zero(n);
  double bt = 0.0;
  for (int k = 0; k < m; ++k) {
    HPoint img = prob.g->eval(prob.samples[k]);
    if (reflect) img = conj_flip(img);
    HPoint rotated(rot * prob.samples[k].z, prob.samples[k].t);
    HPoint resid = mul(img, inv(rotated));
    bz += resid.z;
    bt += resid.t;
  }
  return Isometry(rot, HPoint(bz / m, bt / m), reflect);
}

// Coordinate-wise pattern search; returns the best parameters found.
double compass_search(const OracleProblem& prob, const MatrixXcd& base_rot, bool reflect,
                      VectorXd& params, const OracleFitOptions& opts) {
  double best = prob.objective(prob.make(base_rot, params, reflect));
  double step = opts.init_step;
  int sweeps = 0;
  while (step > opts.tol_step && sweeps < opts.max_sweeps) {
    ++sweeps;
    bool improved = false;
    for (int i = 0; i < params.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        VectorXd trial = params;
        trial(i) += sign * step;
        double val = prob.objective(prob.make(base_rot, trial, reflect));
        if (val < best * (1.0 - 1e-14)) {
          best = val;
          params = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

FitReport fit_isometry_oracle(const HMap& f, const Ball& region, const OracleFitOptions& opts) {
  const int n = f.n;
  HMap g = normalize_to_unit_ball(f, region);

  OracleProblem prob;
  prob.g = &g;
  prob.n = n;
  const int want = std::max(opts.samples, 2 * n + 2);
  std::vector<HPoint> pts = lowdisc_at_least(Ball{HPoint::origin(n), 1.0}, want);
  prob.samples.assign(pts.begin(), pts.begin() + want);

  const int dim = n * n + 2 * n + 1;
  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  Isometry winner = Isometry::identity(n);

  for (bool reflect : {false, true}) {
    Isometry init = procrustes_init(prob, reflect);
    for (int start = 0; start <= opts.restarts; ++start) {
      VectorXd params = VectorXd::Zero(dim);
      for (int i = 0; i < n; ++i) {
        params(n * n + 2 * i) = init.a.z(i).real();
        params(n * n + 2 * i + 1) = init.a.z(i).imag();
      }
      params(n * n + 2 * n) = init.a.t;
      if (start > 0) {
        for (int i = 0; i < dim; ++i) params(i) += 0.15 * rng.normal();
      }
      double val = compass_search(prob, init.A, reflect, params, opts);
      if (val < best) {
        best = val;
        winner = prob.make(init.A, params, reflect);
      }
    }
  }

  FitReport out;
  out.isometry = denormalize(winner, region);
  out.fitter_used = "oracle";
  out.measured_eps = best * region.radius;  // residual back in source units
  return out;
}

FitReport fit_isometry(const HMap& f, const Ball& region, FitterKind kind,
                       const CoerciveFitOptions& copts, const OracleFitOptions& oopts) {
  if (kind == FitterKind::coercive && f.n > 1) {
    try {
      return fit_isometry_coercive(f, region, copts);
    } catch (const std::domain_error&) {
      // admissibility failure: fall through to the oracle
    }
  }
  FitReport out = fit_isometry_oracle(f, region, oopts);
  out.fallback = (kind == FitterKind::coercive);
  return out;
}

double sup_deviation(const HMap& f, const Isometry& theta, const Ball& region, int proposals) {
  double worst = 0.0;
  for (const HPoint& x : ball_lowdisc_points(region, proposals)) {
    worst = std::max(worst, kdist(f.eval(x), theta.apply(x)));
  }
  return worst;
}

double sobolev_deviation(const HMap& f, const Isometry& theta, const Ball& region, double p,
                         int proposals) {
  if (p < 1.0) throw std::invalid_argument("sobolev_deviation: p must be >= 1");
  const MatrixXd dtheta = theta.dh();
  double acc = 0.0;
  std::size_t count = 0;
  for (const HPoint& x : ball_lowdisc_points(region, proposals)) {
    acc += std::pow(opnorm(MatrixXd(horiz_diff_auto(f, x).M - dtheta)), p);
    ++count;
  }
  if (count == 0) throw std::runtime_error("sobolev_deviation: empty sample set");
  return std::pow(acc / static_cast<double>(count), 1.0 / p);
}

double exp_integrability(const HMap& f, const Isometry& theta, const Ball& region, double N,
                         double eps, int proposals) {
  if (!(eps > 0.0)) throw std::invalid_argument("exp_integrability: eps must be positive");
  const MatrixXd dtheta = theta.dh();
  std::vector<double> exponents;
  for (const HPoint& x : ball_lowdisc_points(region, proposals)) {
    exponents.push_back(N * opnorm(MatrixXd(horiz_diff_auto(f, x).M - dtheta)) / eps);
  }
  if (exponents.empty()) throw std::runtime_error("exp_integrability: empty sample set");
  double peak = *std::max_element(exponents.begin(), exponents.end());
  double sum = 0.0;
  for (double e : exponents) sum += std::exp(e - peak);
  return std::exp(peak + std::log(sum) - std::log(static_cast<double>(exponents.size())));
}

}  // namespace hrigid
