#include "doctest.h"

#include <cmath>
#include <complex>

#include "hrigid/hcalc.hpp"
#include "hrigid/kernel.hpp"
#include "hrigid/linalg.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/sampling.hpp"

using namespace hrigid;

namespace {

HPoint random_point(int n, Rng& rng, double scale = 1.0) {
  return HPoint(scale * rng.normal_cvector(n), scale * rng.normal());
}

// Cubic test map u_k = z_k + c z_k^3 + b t with hand-written coordinate
// partials; the cubic term gives the flow differences a visible O(h^2) error.
CnMap cubic_map(int n, cd c, cd b) {
  CnMap u;
  u.n = n;
  u.m = n;
  u.label = "cubic";
  u.eval = [n, c, b](const HPoint& p) {
    VectorXcd v(n);
    for (int k = 0; k < n; ++k) v(k) = p.z(k) + c * p.z(k) * p.z(k) * p.z(k) + b * p.t;
    return v;
  };
  u.jac = [n, c, b](const HPoint& p) {
    MatrixXcd j = MatrixXcd::Zero(n, 2 * n + 1);
    for (int k = 0; k < n; ++k) {
      cd dz = 1.0 + 3.0 * c * p.z(k) * p.z(k);  // du_k / dz_k
      j(k, k) = dz;                             // d/dx_k
      j(k, k + n) = cd(0.0, 1.0) * dz;          // d/dx_{k+n}
      j(k, 2 * n) = b;
    }
    return j;
  };
  return u;
}

}  // namespace

TEST_CASE("horizontal differential of the basic contact maps") {
  for (int n : {1, 2, 3}) {
    Rng rng(31 + n);
    for (int rep = 0; rep < 20; ++rep) {
      HPoint x = random_point(n, rng);

      auto did = horiz_diff_auto(identity_map(n), x);
      CHECK((did.M - MatrixXd::Identity(2 * n, 2 * n)).lpNorm<Eigen::Infinity>() < 1e-13);
      CHECK(did.lambda == doctest::Approx(1.0).epsilon(1e-12));

      double s = 1.0 + rng.uniform(0.0, 1.0);
      auto ddil = horiz_diff_auto(dilation_map(n, s), x);
      CHECK((ddil.M - s * MatrixXd::Identity(2 * n, 2 * n)).lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK(ddil.lambda == doctest::Approx(s * s).epsilon(1e-10));

      Isometry t = random_isometry(n, rng);
      auto diso = horiz_diff_auto(isometry_map(t), x);
      CHECK((diso.M - t.dh()).lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK(diso.lambda == doctest::Approx(t.lambda()).epsilon(1e-10));

      // flow-difference route agrees with the analytic one
      auto checked = horiz_diff_checked(isometry_map(t), x);
      REQUIRE(checked.fd_mismatch.has_value());
      CHECK(*checked.fd_mismatch < 1e-8);
    }
  }
}

TEST_CASE("flow differences converge at second order") {
  const int n = 2;
  CnMap u = cubic_map(n, cd(0.3, 0.1), cd(0.05, -0.02));
  Rng rng(77);
  for (int rep = 0; rep < 5; ++rep) {
    HPoint x = random_point(n, rng, 0.8);
    MatrixXcd exact = horiz_diff_cn(u, x);  // analytic partials
    double e1 = opnorm(MatrixXcd(horiz_diff_cn(u, x, DiffScheme::fd(1e-2)) - exact));
    double e2 = opnorm(MatrixXcd(horiz_diff_cn(u, x, DiffScheme::fd(1e-3)) - exact));
    REQUIRE(e1 > 1e-9);  // visible error at the coarse step
    double slope = std::log10(e1 / e2);
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);

    // Richardson combination beats the plain coarse step by orders.
    double er = opnorm(MatrixXcd(horiz_diff_cn(u, x, DiffScheme::fd(1e-2, true)) - exact));
    CHECK(er < 1e-2 * e1);
  }
}

TEST_CASE("contact residual: zero for contact maps, 4|b_z| for right translations") {
  const int n = 2;
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    HPoint x = random_point(n, rng);

    CHECK(contact_residual(identity_map(n), x) < 1e-10);
    CHECK(contact_residual(dilation_map(n, 1.3), x) < 1e-9);
    Isometry t = random_isometry(n, rng);
    CHECK(contact_residual(isometry_map(t), x) < 1e-9);

    // Right translation by b: the defect along the i-th horizontal direction
    // is -4 Im(b_i) (first block) or 4 Re(b_i) (second block), so the max
    // residual equals four times the largest coordinate of b's z-part.
    HPoint b = random_point(n, rng);
    double expected = 0.0;
    for (int j = 0; j < n; ++j) {
      expected = std::max({expected, 4.0 * std::abs(b.z(j).real()), 4.0 * std::abs(b.z(j).imag())});
    }
    CHECK(contact_residual(right_translation_map(b), x) ==
          doctest::Approx(expected).epsilon(1e-6));

    // Vertical right translations are contact maps.
    HPoint vertical(VectorXcd::Zero(n), rng.normal());
    CHECK(contact_residual(right_translation_map(vertical), x) < 1e-9);
  }
}

TEST_CASE("operator packing identities on raw matrices") {
  const int n = 2;
  Rng rng(59);
  MatrixXd J = symplectic_j(n);
  for (int rep = 0; rep < 30; ++rep) {
    MatrixXd M(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) M(i, j) = rng.normal();

    QValue q = q_of_matrix(M);
    CHECK((q.sym_part - 0.5 * (M + M.transpose())).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((q.antisymplectic - 0.5 * (M + J * M * J)).lpNorm<Eigen::Infinity>() < 1e-14);

    // Vanishes exactly on real forms of skew-Hermitian matrices and is
    // bounded away from zero on Hermitian / antilinear perturbations.
    MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = cd(rng.normal(), rng.normal());
    MatrixXcd K = 0.5 * (G - G.adjoint());
    CHECK(q_of_matrix(realify(K)).norm() < 1e-14);

    MatrixXcd H = 0.5 * (G + G.adjoint());
    if (opnorm(H) > 1e-3) CHECK(q_of_matrix(realify(H)).norm() > 1e-4);
    MatrixXcd S = 0.5 * (G + G.transpose());
    if (opnorm(S) > 1e-3) CHECK(q_of_matrix(realify_antilinear(S)).norm() > 1e-4);
  }
}

TEST_CASE("pointwise distortion estimate holds for model maps") {
  const int n = 2;
  Rng rng(67);
  for (int rep = 0; rep < 10; ++rep) {
    HPoint x = random_point(n, rng, 0.5);

    // Rotations realize the estimate with equality, so allow roundoff slack.
    CHECK(main_estimate_residual(identity_map(n), x, 1.0) >= -1e-12);
    CHECK(main_estimate_residual(dilation_map(n, 1.05), x, 1.05) >= -1e-12);
    Isometry rot = random_isometry(n, rng, 1.0, 0.0, false);
    CHECK(main_estimate_residual(isometry_map(rot), x, 1.0) >= -1e-12);

    // The orientation hypothesis rejects reflecting maps.
    Isometry refl(MatrixXcd::Identity(n, n), HPoint::origin(n), true);
    CHECK_THROWS_AS((void)main_estimate_residual(isometry_map(refl), x, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("quasi-isometry probe reads off the dilation constant") {
  const int n = 2;
  Ball region{HPoint::origin(n), 1.0};

  QiProbe p = qi_probe(dilation_map(n, 1.1), region);
  CHECK(p.L_lower == doctest::Approx(1.1).epsilon(1e-10));
  CHECK(p.sign_ok);
  CHECK(p.lambda_sign > 0.0);

  QiProbe q = qi_probe(dilation_map(n, 1.0 / 1.25), region);
  CHECK(q.L_lower == doctest::Approx(1.25).epsilon(1e-10));

  Isometry refl(MatrixXcd::Identity(n, n), HPoint::origin(n), true);
  QiProbe r = qi_probe(isometry_map(refl), region);
  CHECK(r.sign_ok);
  CHECK(r.lambda_sign < 0.0);
  CHECK(r.L_lower == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bilipschitz probe brackets the exact distortion") {
  const int n = 2;
  Ball region{HPoint(VectorXcd::Constant(n, cd(0.1, 0.0)), 0.05), 1.0};
  Rng rng(83);

  Isometry t = random_isometry(n, rng);
  BilipschitzProbe iso = bilipschitz_probe(isometry_map(t), region, 400, 99);
  CHECK(iso.ratio_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(iso.ratio_max == doctest::Approx(1.0).epsilon(1e-10));

  // Dilations scale every gauge distance by exactly s.
  BilipschitzProbe dil = bilipschitz_probe(dilation_map(n, 1.07), region, 400, 99);
  CHECK(dil.ratio_min == doctest::Approx(1.07).epsilon(1e-10));
  CHECK(dil.ratio_max == doctest::Approx(1.07).epsilon(1e-10));

  Isometry t2 = random_isometry(n, rng, 0.5, 0.5, false);
  HMap conj = compose_maps(isometry_map(t), compose_maps(dilation_map(n, 1.07), isometry_map(t2)));
  BilipschitzProbe c = bilipschitz_probe(conj, region, 400, 99);
  CHECK(c.ratio_min == doctest::Approx(1.07).epsilon(1e-9));
  CHECK(c.ratio_max == doctest::Approx(1.07).epsilon(1e-9));
}

TEST_CASE("displacement projections of small perturbations stay small") {
  const int n = 2;
  Rng rng(91);
  double eps = 0.01;
  HMap f = dilation_map(n, 1.0 + eps);
  CnMap disp = displacement_projection(f);
  for (int rep = 0; rep < 50; ++rep) {
    HPoint x = random_point(n, rng, 0.4);
    // z-part of the displacement of a dilation is exactly eps * z
    VectorXcd v = disp.eval(x);
    CHECK((v - eps * x.z).norm() < 1e-13);
    // analytic partials match flow differences
    MatrixXcd a = horiz_diff_cn(disp, x);
    MatrixXcd fd = horiz_diff_cn(disp, x, DiffScheme::fd(1e-4));
    CHECK(opnorm(MatrixXcd(a - fd)) < 1e-8);
  }
}
