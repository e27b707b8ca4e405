// Acceptance gate: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line. Tolerances and runtime limits are
// pinned here, not configurable. Exit status 0 only if every line passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hrigid/domains.hpp"
#include "hrigid/experiment.hpp"
#include "hrigid/fitting.hpp"
#include "hrigid/hcalc.hpp"
#include "hrigid/isometry.hpp"
#include "hrigid/kernel.hpp"
#include "hrigid/linalg.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/moments.hpp"
#include "hrigid/quadrature.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/types.hpp"
#include "test_support.hpp"

#ifndef HRIGID_CONFIG_DIR
#define HRIGID_CONFIG_DIR "configs"
#endif

using namespace hrigid;

namespace {

struct Gate {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename T>
  void close(T got, T want, T tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream msg;
      msg << what << " (got " << got << ", want " << want << " +- " << tol << ")";
      failures.push_back(msg.str());
    }
  }
};

HPoint random_point(int n, Rng& rng, double scale = 1.0) {
  return HPoint(scale * rng.normal_cvector(n), scale * scale * rng.uniform(-2.0, 2.0));
}

// Central difference of g along direction v. The integrands this is used on
// are polynomials of degree <= 2 in the step, so h = 1/2 is exact.
VectorXd central_diff(const std::function<VectorXd(const VectorXd&)>& g, const VectorXd& at,
                      const VectorXd& v, double h) {
  return (g(at + h * v) - g(at - h * v)) / (2.0 * h);
}

double lgamma_beta(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

CnMap complex_linear_map(int n, const MatrixXcd& B) {
  CnMap m;
  m.n = n;
  m.m = n;
  m.eval = [B](const HPoint& p) -> VectorXcd { return B * p.z; };
  m.jac = [B, n](const HPoint&) -> MatrixXcd {
    MatrixXcd j(n, 2 * n + 1);
    j.leftCols(n) = B;
    j.middleCols(n, n) = cd(0.0, 1.0) * B;
    j.col(2 * n).setZero();
    return j;
  };
  return m;
}

// --------------------------------------------------------------------------
// 1. frame bracket table and left invariance
// --------------------------------------------------------------------------
void criterion_frame(Gate& g) {
  for (int n : {1, 2, 3}) {
    const int dim = 2 * n + 1;
    Rng rng(401 + n);
    auto field = [&](int i) {
      return [i](const VectorXd& c) -> VectorXd {
        return frame_vectors(HPoint::from_coords(c)).col(i);
      };
    };
    for (int rep = 0; rep < 5; ++rep) {
      HPoint p = random_point(n, rng);
      VectorXd c = p.coords();
      MatrixXd frame = frame_vectors(p);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          VectorXd bracket = central_diff(field(j), c, frame.col(i), 0.5) -
                             central_diff(field(i), c, frame.col(j), 0.5);
          VectorXd expected = VectorXd::Zero(dim);
          if (i < n && j == i + n) expected(2 * n) = -4.0;
          if (j < n && i == j + n) expected(2 * n) = 4.0;
          g.require((bracket - expected).lpNorm<Eigen::Infinity>() < 1e-12,
                    "bracket table mismatch at n = " + std::to_string(n));
        }
      }
    }
    for (int rep = 0; rep < 100; ++rep) {
      HPoint a = random_point(n, rng), p = random_point(n, rng);
      auto left = [&](const VectorXd& c) -> VectorXd {
        return mul(a, HPoint::from_coords(c)).coords();
      };
      MatrixXd frame_p = frame_vectors(p);
      MatrixXd frame_ap = frame_vectors(mul(a, p));
      for (int i = 0; i < dim; ++i) {
        VectorXd pushed = central_diff(left, p.coords(), frame_p.col(i), 0.5);
        g.require((pushed - frame_ap.col(i)).lpNorm<Eigen::Infinity>() < 1e-12,
                  "left invariance violated at n = " + std::to_string(n));
      }
    }
  }
}

// --------------------------------------------------------------------------
// 2. gauge metric axioms
// --------------------------------------------------------------------------
void criterion_metric(Gate& g) {
  const int n = 2;
  Rng rng(512);

  int triangle_violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    HPoint x = random_point(n, rng), y = random_point(n, rng), w = random_point(n, rng);
    if (kdist(x, w) > kdist(x, y) + kdist(y, w)) ++triangle_violations;
  }
  g.require(triangle_violations == 0,
            "triangle inequality violated " + std::to_string(triangle_violations) + " times");

  // powers of two commute with IEEE rounding, so homogeneity holds bitwise
  int homogeneity_misses = 0;
  for (int rep = 0; rep < 100; ++rep) {
    HPoint x = random_point(n, rng);
    for (double s : {0.5, 2.0, 1024.0, 1.0 / (1 << 20)}) {
      if (knorm(dilate(s, x)) != s * knorm(x)) ++homogeneity_misses;
    }
  }
  g.require(homogeneity_misses == 0, "dyadic homogeneity not exact");

  double iso_gap = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    Isometry theta = random_isometry(n, rng, 1.0, 1.0, rep % 2 == 1);
    HPoint x = random_point(n, rng), y = random_point(n, rng);
    iso_gap = std::max(iso_gap, std::abs(kdist(theta.apply(x), theta.apply(y)) - kdist(x, y)));
  }
  g.require(iso_gap < 1e-12, "isometry distorted kdist by " + std::to_string(iso_gap));
}

// --------------------------------------------------------------------------
// 3. moment normalization and box integrals
// --------------------------------------------------------------------------
void criterion_moments(Gate& g) {
  const int n = 2;
  const int order = 12;
  Rng rng(613);

  VectorXcd c0 = rng.normal_cvector(n);
  CnMap constant;
  constant.n = n;
  constant.eval = [c0](const HPoint&) { return c0; };
  constant.jac = [n](const HPoint&) { return MatrixXcd::Zero(n, 2 * n + 1); };
  MomentData mc = moments(constant, order, false);
  g.require((mc.a - c0).norm() < 1e-10, "a(const) != const");
  g.require(mc.A.norm() < 1e-10, "A(const) != 0");

  MomentData mz = moments(complex_linear_map(n, MatrixXcd::Identity(n, n)), order, false);
  g.require((mz.A - MatrixXcd::Identity(n, n)).norm() < 1e-10, "A(z) != I");
  g.require(mz.a.norm() < 1e-10, "a(z) != 0");

  MatrixXcd B = polar_unitary(MatrixXcd::Random(n, n) + cd(0.0, 1.0) * MatrixXcd::Random(n, n));
  MomentData mb = moments(complex_linear_map(n, B), order, false);
  g.require((mb.A - B).norm() < 1e-10, "A(Bz) != B for a random unitary B");

  // box volume and per-coordinate second moment against the closed forms
  for (double r : {1.0, 0.8}) {
    std::vector<double> half(2 * n + 1, r);
    half[2 * n] = r * r;
    double vol = 0.0, second = 0.0;
    tensor_box_quadrature(half, order, [&](const std::vector<double>& c, double w) {
      vol += w;
      second += w * (c[0] * c[0] + c[n] * c[n]);  // |z_1|^2
    });
    const double nu = 2.0 * n + 2.0;
    g.close(vol, std::pow(2.0, 2 * n + 1) * std::pow(r, nu), 1e-10, "box volume closed form");
    g.close(second, std::pow(2.0, nu) * std::pow(r, nu + 2.0) / 3.0, 1e-10,
            "box |z_i|^2 moment closed form");
  }
  g.close(box_volume(2, 1.0), 32.0, 1e-10, "box volume at n = 2");
  g.close(box_second_moment(2, 1.0), 64.0 / 3.0, 1e-10, "box second moment at n = 2");
}

// --------------------------------------------------------------------------
// 4. kernel annihilation and detection
// --------------------------------------------------------------------------
void criterion_kernel(Gate& g) {
  for (int n : {1, 2, 3}) {
    Rng rng(701 + n);
    std::vector<HPoint> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(random_point(n, rng));

    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      KernelElement el = random_kernel_element(n, rng);
      CnMap u = el.as_map();
      for (const HPoint& p : pts) worst = std::max(worst, q_apply(u, p).norm());
    }
    g.require(worst <= 1e-8, "kernel element not annihilated at n = " + std::to_string(n) +
                                 " (|Qu| = " + std::to_string(worst) + ")");

    // detection sanity: Hermitian linear maps are never in the kernel
    for (int rep = 0; rep < 20; ++rep) {
      MatrixXcd raw = MatrixXcd::Random(n, n) + cd(0.0, 1.0) * MatrixXcd::Random(n, n);
      MatrixXcd H = 0.5 * (raw + raw.adjoint());
      H += MatrixXcd::Identity(n, n);  // keep it away from zero
      CnMap u = complex_linear_map(n, H);
      double peak = 0.0;
      for (int i = 0; i < 10; ++i) peak = std::max(peak, q_apply(u, pts[i]).norm());
      g.require(peak > 1e-3, "non-kernel map passed undetected at n = " + std::to_string(n));
    }
  }
}

// --------------------------------------------------------------------------
// 5. unitary moment correction
// --------------------------------------------------------------------------
void criterion_correction(Gate& g) {
  const int n = 2;
  const double eps = 0.01;
  const double kappa = std::pow(4.0 * n * n + 1.0, -0.25);
  const double bound = n * std::pow(kappa, n + 1) * std::pow(2.0, -n) * eps;
  Rng rng(801);

  for (int rep = 0; rep < 50; ++rep) {
    hrigid_test::PerturbedMap pm = hrigid_test::correction_test_map(n, eps, rng);
    UnitaryCorrection cor = lemma_correction(pm.map, pm.eps, 12);
    g.close(cor.deviation_bound, bound, 1e-12 * bound, "deviation bound formula drifted");

    g.require(unitary_defect(cor.V) < 1e-10, "correction V not unitary");
    MomentData md = moments(pm.map, 12, false);
    MatrixXcd va = cor.V * md.A;
    g.require((va - va.adjoint()).norm() < 1e-9, "VA not Hermitian");

    CnMap corrected = pm.map;
    const MatrixXcd V = cor.V;
    const CnMap u = pm.map;
    corrected.eval = [V, u](const HPoint& p) -> VectorXcd { return V * u.eval(p); };
    corrected.jac = [V, u](const HPoint& p) -> MatrixXcd { return V * u.jac(p); };
    KernelElement proj = project_p(corrected, 12);
    g.require(proj.K.norm() < 1e-8, "K(Vu) != 0 after correction");

    g.require(opnorm(MatrixXcd(cor.V - MatrixXcd::Identity(n, n))) < bound,
              "|V - I| exceeds the first-order bound");
  }
}

// --------------------------------------------------------------------------
// 6. deviation scaling exponents
// --------------------------------------------------------------------------
void criterion_exponents(Gate& g) {
  std::string path = std::string(HRIGID_CONFIG_DIR) + "/dilation_n2.json";
  ExperimentConfig cfg = ExperimentConfig::from_file(path);
  g.require(cfg.n == 2 && cfg.family == "dilation" && cfg.epsilons.size() == 8,
            "pinned config drifted from the published schema");

  RigidityReport rep = run_rigidity(cfg);
  g.require(rep.sup_fit.valid && rep.sobolev_fit.valid, "regression did not produce a fit");
  g.require(rep.sup_fit.slope >= 0.45 && rep.sup_fit.slope <= 0.55,
            "sup slope " + std::to_string(rep.sup_fit.slope) + " outside [0.45, 0.55]");
  g.require(rep.sobolev_fit.slope >= 0.95 && rep.sobolev_fit.slope <= 1.05,
            "mean slope " + std::to_string(rep.sobolev_fit.slope) + " outside [0.95, 1.05]");
  g.require(rep.sup_fit.r2 >= 0.99, "sup fit r2 " + std::to_string(rep.sup_fit.r2) + " < 0.99");
  g.require(rep.sobolev_fit.r2 >= 0.99,
            "mean fit r2 " + std::to_string(rep.sobolev_fit.r2) + " < 0.99");
}

// --------------------------------------------------------------------------
// 7. exponential integrability calibration
// --------------------------------------------------------------------------
void criterion_exp_integrability(Gate& g) {
  const int n = 2;
  const double eps = 1e-2;
  HMap f = dilation_map(n, 1.0 + eps);
  double value = exp_integrability(f, Isometry::identity(n), Ball{HPoint::origin(n), 1.0},
                                   std::log(16.0), eps, 20000);
  // constant integrand: the differential gap is exactly eps everywhere
  g.close(value, 16.0, 0.16, "exponential functional at N = log 16");
}

// --------------------------------------------------------------------------
// 8. ball chain certification
// --------------------------------------------------------------------------
void criterion_chains(Gate& g) {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);
  g.require(U.john_params.has_value(), "ball domain calibration missing");
  const double alpha = U.john_params->alpha;
  const double beta = U.john_params->beta;

  Rng rng(907);
  int built = 0;
  for (int rep = 0; rep < 200; ++rep) {
    HPoint x = ball_uniform_point(Ball{HPoint::origin(n), 0.97}, rng);
    BallChain ch = build_chain(U, x);
    ++built;

    g.require(ch.balls.size() == static_cast<std::size_t>(ch.k) + 1 &&
                  ch.connectors.size() + 1 == ch.balls.size(),
              "chain shape mismatch");
    bool ok = true;
    for (std::size_t i = 0; i < ch.balls.size(); ++i) {
      const Ball& b = ch.balls[i];
      ok = ok && std::abs(U.boundary_distance(b.center) - 4.0 * b.radius) < 1e-9;
      if (i + 1 < ch.balls.size()) {
        double ratio = b.radius / ch.balls[i + 1].radius;
        ok = ok && ratio >= 7.0 / 9.0 - 1e-12 && ratio <= 9.0 / 7.0 + 1e-12;
        const Ball& conn = ch.connectors[i];
        ok = ok && kdist(conn.center, b.center) + conn.radius <= b.radius + 1e-9;
        ok = ok && kdist(conn.center, ch.balls[i + 1].center) + conn.radius <=
                       ch.balls[i + 1].radius + 1e-9;
      }
    }
    ok = ok && kdist(ch.balls.front().center, U.base_point) < 1e-9;
    ok = ok && kdist(ch.balls.back().center, x) < 1e-9;
    double rk = ch.balls.back().radius;
    ok = ok && (ch.k == 0 || ch.k < 9.0 * (beta / alpha) * std::log(8.0 * beta / rk));
    g.require(ok, "chain properties violated at rep " + std::to_string(rep));
  }
  g.require(built == 200, "not all chains were constructed");
}

// --------------------------------------------------------------------------
// 9. cover disjointness and boundary integral
// --------------------------------------------------------------------------
void criterion_cover_integral(Gate& g) {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);
  const double res = 0.4;
  WhitneyFamily fam = whitney_cover(U, res);
  g.require(!fam.balls.empty(), "cover is empty");
  g.require(fam.multiplicity_bound >= 1, "multiplicity bound missing");

  // exact 1/5-disjointness, brute force over all pairs
  int disjoint_violations = 0;
  for (std::size_t i = 0; i < fam.balls.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.balls.size(); ++j) {
      if (kdist(fam.balls[i].center, fam.balls[j].center) <
          (fam.balls[i].radius + fam.balls[j].radius) / 5.0) {
        ++disjoint_violations;
      }
    }
  }
  g.require(disjoint_violations == 0,
            std::to_string(disjoint_violations) + " shrunken-ball overlaps");

  // independent grid regeneration: every in-domain lattice point is covered
  const double big = U.enclosure.radius;
  std::vector<int> steps(2 * n + 1);
  for (int i = 0; i < 2 * n; ++i) steps[i] = std::max(1, static_cast<int>(std::ceil(2.0 * big / res)));
  steps[2 * n] = std::max(1, static_cast<int>(std::ceil(2.0 * big * big / (res * res))));
  std::vector<int> idx(2 * n + 1, 0);
  int uncovered = 0;
  for (;;) {
    VectorXd off(2 * n + 1);
    for (int i = 0; i < 2 * n; ++i) off(i) = -big + (idx[i] + 0.5) * (2.0 * big / steps[i]);
    off(2 * n) = -big * big + (idx[2 * n] + 0.5) * (2.0 * big * big / (steps[2 * n]));
    HPoint p = mul(U.enclosure.center, HPoint::from_coords(off));
    if (U.boundary_distance(p) > 0.0) {
      bool covered = false;
      for (const Ball& b : fam.balls) {
        if (kdist(p, b.center) < b.radius) {
          covered = true;
          break;
        }
      }
      if (!covered) ++uncovered;
    }
    int axis = 0;
    while (axis <= 2 * n) {
      if (++idx[axis] < steps[axis]) break;
      idx[axis] = 0;
      ++axis;
    }
    if (axis > 2 * n) break;
  }
  g.require(uncovered == 0, std::to_string(uncovered) + " grid points uncovered");

  // vertical-weight boundary integral against the 1-d Beta oracle
  const double tau = 0.1;
  IntegralEstimate est = boundary_integral(U, tau, 1000000, 2024);
  const double nu = 2.0 * n + 2.0;
  double oracle = U.volume * nu * lgamma_beta(nu, 1.0 - tau);
  g.close(est.value / oracle, 1.0, 0.02, "boundary integral vs Beta oracle");
  double john_bound = 2.0 * U.volume / std::pow(U.john_params->alpha, tau);
  g.require(est.value <= john_bound, "boundary integral exceeds 2|U|/alpha^tau");
}

// --------------------------------------------------------------------------
// 10. isometry growth and embedding bounds
// --------------------------------------------------------------------------
void criterion_growth_embedding(Gate& g) {
  GrowthReport growth = isometry_growth_suite(2024, 100);
  g.require(growth.rows.size() == 100 * 2 * 3, "growth suite row count");
  int growth_failures = 0;
  for (const GrowthRow& row : growth.rows) {
    if (!row.pass) ++growth_failures;
  }
  g.require(growth.all_pass && growth_failures == 0,
            std::to_string(growth_failures) + " growth bound failures");

  EmbeddingReport emb = embedding_suite(2024, 20);
  g.require(emb.rows.size() == 3, "embedding sweep row count");
  g.require(emb.bounded, "embedding ratio not bounded across the sweep");
}

// --------------------------------------------------------------------------
// 11. report determinism
// --------------------------------------------------------------------------
void criterion_determinism(Gate& g) {
  ExperimentConfig cfg;
  cfg.n = 2;
  cfg.family = "conjugated_dilation";
  cfg.epsilons = {1e-2, 3e-3, 1e-3};
  cfg.ball = Ball{HPoint::origin(2), 1.0};
  cfg.samples = 3000;
  cfg.seed = 7;
  cfg.fitter = "coercive";

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "hrigid_acceptance_reports";
  fs::remove_all(dir);
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  RigidityReport r1 = run_rigidity(cfg);
  write_report(r1, (dir / "one").string());
  RigidityReport r2 = run_rigidity(cfg);
  write_report(r2, (dir / "two").string());

  g.require(read(dir / "one.json") == read(dir / "two.json"), "json reports differ");
  g.require(read(dir / "one.csv") == read(dir / "two.csv"), "csv reports differ");
  g.require(!read(dir / "one.json").empty() && !read(dir / "one.csv").empty(),
            "reports were not written");
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = unlimited
  std::function<void(Gate&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "frame bracket table and left invariance", 1.0, criterion_frame},
      {2, "gauge metric axioms", 0.0, criterion_metric},
      {3, "moment normalization and box integrals", 10.0, criterion_moments},
      {4, "kernel annihilation and detection", 0.0, criterion_kernel},
      {5, "unitary moment correction", 30.0, criterion_correction},
      {6, "deviation scaling exponents", 300.0, criterion_exponents},
      {7, "exponential integrability calibration", 0.0, criterion_exp_integrability},
      {8, "ball chain certification", 30.0, criterion_chains},
      {9, "cover disjointness and boundary integral", 0.0, criterion_cover_integral},
      {10, "isometry growth and embedding bounds", 0.0, criterion_growth_embedding},
      {11, "report determinism", 0.0, criterion_determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Gate gate;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(gate);
    } catch (const std::exception& e) {
      gate.failures.push_back(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds > c.time_limit) {
      std::ostringstream msg;
      msg << "runtime " << seconds << " s exceeds the " << c.time_limit << " s limit";
      gate.failures.push_back(msg.str());
    }

    if (gate.failures.empty()) {
      std::printf("PASS criterion %2d: %s (%.2f s)\n", c.id, c.name, seconds);
    } else {
      ++failed;
      std::printf("FAIL criterion %2d: %s (%.2f s): %s", c.id, c.name, seconds,
                  gate.failures.front().c_str());
      if (gate.failures.size() > 1) {
        std::printf(" [+%zu more]", gate.failures.size() - 1);
      }
      std::printf("\n");
    }
    std::fflush(stdout);
  }

  if (failed > 0) {
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
