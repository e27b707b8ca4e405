// Command-line front end: self tests, deviation experiments, chain/cover
// construction, isometry fitting and growth checks.
//
// Exit codes: 0 = all executed checks passed, 1 = a check failed or a
// construction was rejected, 2 = command line / configuration errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hrigid/domains.hpp"
#include "hrigid/experiment.hpp"
#include "hrigid/fitting.hpp"
#include "hrigid/hcalc.hpp"
#include "hrigid/kernel.hpp"
#include "hrigid/moments.hpp"
#include "hrigid/version.hpp"

namespace {

using namespace hrigid;

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad coordinate '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty coordinate list");
  return out;
}

void emit(const nlohmann::ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << j.dump(2) << "\n";
  }
}

MetricDomain make_domain(const std::string& kind, const HPoint& center, double radius) {
  if (kind == "ball") return make_ball_domain(center, radius);
  if (kind == "box") return make_box_domain(center, radius);
  throw std::invalid_argument("unknown domain '" + kind + "' (expected ball or box)");
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int run_selftest() {
  int failures = 0;
  auto check = [&failures](const std::string& name, bool ok, const std::string& detail = "") {
    if (ok) {
      std::printf("ok   %s\n", name.c_str());
    } else {
      ++failures;
      std::printf("FAIL %s%s%s\n", name.c_str(), detail.empty() ? "" : ": ", detail.c_str());
    }
  };

  // Group law: associativity, inverses, metric axioms.
  {
    bool ok = true;
    for (int n : {1, 2, 3}) {
      Rng rng(11 + n);
      for (int i = 0; i < 200 && ok; ++i) {
        HPoint x(rng.normal_cvector(n), rng.normal());
        HPoint y(rng.normal_cvector(n), rng.normal());
        HPoint w(rng.normal_cvector(n), rng.normal());
        HPoint lhs = mul(mul(x, y), w), rhs = mul(x, mul(y, w));
        // Coordinate comparison: the gauge turns an O(1e-15) vertical rounding
        // difference into O(1e-8), so kdist is the wrong yardstick here.
        ok = ok && (lhs.z - rhs.z).norm() + std::abs(lhs.t - rhs.t) < 1e-12;
        ok = ok && knorm(mul(x, inv(x))) < 1e-12;
        ok = ok && kdist(x, w) <= kdist(x, y) + kdist(y, w) + 1e-12;
      }
    }
    check("group and metric axioms", ok);
  }

  // Homogeneity and isometry invariance of the gauge distance.
  {
    Rng rng(19);
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      HPoint x(rng.normal_cvector(2), rng.normal());
      HPoint y(rng.normal_cvector(2), rng.normal());
      double s = 0.1 + 3.0 * rng.uniform();
      ok = ok && std::abs(kdist(dilate(s, x), dilate(s, y)) - s * kdist(x, y)) < 1e-12;
      Isometry t = random_isometry(2, rng);
      ok = ok && std::abs(kdist(t.apply(x), t.apply(y)) - kdist(x, y)) < 1e-11;
    }
    check("gauge homogeneity and isometry invariance", ok);
  }

  // Moment normalization A(z) = I at a modest quadrature order.
  {
    CnMap zmap;
    zmap.n = 2;
    zmap.m = 2;
    zmap.eval = [](const HPoint& x) { return x.z; };
    zmap.jac = [](const HPoint& x) {
      MatrixXcd J = MatrixXcd::Zero(2, 5);
      J(0, 0) = 1.0;
      J(1, 1) = 1.0;
      J(0, 2) = cd(0.0, 1.0);
      J(1, 3) = cd(0.0, 1.0);
      return J;
    };
    MomentData md = moments(zmap, 8, false);
    bool ok = (md.A - MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9 &&
              md.a.cwiseAbs().maxCoeff() < 1e-12;
    check("moment normalization", ok);
  }

  // Kernel elements annihilated by the operator.
  {
    bool ok = true;
    for (int n : {1, 2}) {
      Rng rng(100 + n);
      for (int trial = 0; trial < 5 && ok; ++trial) {
        KernelElement ker = random_kernel_element(n, rng);
        CnMap u = ker.as_map();
        for (int i = 0; i < 20 && ok; ++i) {
          HPoint x(rng.normal_cvector(n), rng.normal());
          ok = ok && q_apply(u, x).norm() < 1e-8;
        }
      }
    }
    check("kernel annihilation", ok);
  }

  // Coercive fitter is exact on isometries.
  {
    Rng rng(7);
    Isometry target = random_isometry(2, rng, 0.5, 0.5, false);
    FitReport fit = fit_isometry_coercive(isometry_map(target), Ball{HPoint::origin(2), 1.0});
    bool ok = !fit.fallback && fit.measured_eps < 1e-8 &&
              (fit.isometry.A - target.A).cwiseAbs().maxCoeff() < 1e-8 &&
              kdist(fit.isometry.a, target.a) < 1e-8;
    check("isometry recovery (coercive fitter)", ok, "measured_eps too large");
  }

  // Exponential functional of the dilation family with the identity fit.
  {
    double eps = 0.05;
    HMap f = dilation_map(2, 1.0 + eps);
    double value = exp_integrability(f, Isometry::identity(2), Ball{HPoint::origin(2), 1.0},
                                     std::log(16.0), eps, 4000);
    check("exponential functional at ln 16", std::abs(value - 16.0) < 0.16,
          "value " + std::to_string(value));
  }

  // Chain construction and certification in the unit ball.
  {
    bool ok = true;
    std::string detail;
    try {
      MetricDomain ball = make_ball_domain(HPoint::origin(2), 1.0);
      VectorXd c(5);
      c << 0.5, 0.0, 0.0, 0.0, 0.0;
      BallChain chain = build_chain(ball, HPoint::from_coords(c));
      ok = chain.k >= 1 && static_cast<int>(chain.connectors.size()) == chain.k;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    check("chain certification", ok, detail);
  }

  // Whitney cover disjointness/coverage on a coarse grid.
  {
    bool ok = true;
    std::string detail;
    try {
      MetricDomain ball = make_ball_domain(HPoint::origin(2), 1.0);
      WhitneyFamily fam = whitney_cover(ball, 0.35);
      ok = !fam.balls.empty() && fam.multiplicity_bound >= 1;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    check("whitney cover", ok, detail);
  }

  // Growth suite, a few trials.
  {
    GrowthReport rep = isometry_growth_suite(3, 3);
    check("isometry growth bounds", rep.all_pass);
  }

  // Determinism of the deviation pipeline.
  {
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.family = "dilation";
    cfg.epsilons = {1e-2, 1e-3};
    cfg.ball = Ball{HPoint::origin(2), 1.0};
    cfg.samples = 2000;
    cfg.quad_order = 6;
    std::string a = run_rigidity(cfg).to_json().dump();
    std::string b = run_rigidity(cfg).to_json().dump();
    check("deterministic reports", a == b);
  }

  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-group rigidity toolbox"};
  app.set_version_flag("--version", std::string(hrigid::kVersion));
  app.require_subcommand(1);

  auto* sub_selftest = app.add_subcommand("selftest", "run the module invariant suites");

  auto* sub_rigidity = app.add_subcommand("rigidity", "run a deviation experiment from a config");
  std::string config_path;
  sub_rigidity->add_option("--config", config_path, "JSON config file")->required();

  auto* sub_chain = app.add_subcommand("chain", "build a certified chain of balls to a point");
  std::string chain_domain = "ball";
  std::string chain_x;
  std::string chain_center;
  double chain_radius = 1.0;
  std::string chain_out;
  sub_chain->add_option("--domain", chain_domain, "domain kind: ball or box");
  sub_chain->add_option("--x", chain_x, "target point, 2n+1 comma-separated coordinates")
      ->required();
  sub_chain->add_option("--center", chain_center, "domain center (default: origin)");
  sub_chain->add_option("--radius", chain_radius, "domain radius (default 1)");
  sub_chain->add_option("--out", chain_out, "output JSON path (default: stdout)");

  auto* sub_cover = app.add_subcommand("cover", "build a Whitney-type cover of a domain");
  std::string cover_domain = "ball";
  int cover_n = 2;
  double cover_radius = 1.0;
  double cover_resolution = 0.25;
  std::string cover_out;
  sub_cover->add_option("--domain", cover_domain, "domain kind: ball or box");
  sub_cover->add_option("--n", cover_n, "group dimension parameter n");
  sub_cover->add_option("--radius", cover_radius, "domain radius (default 1)");
  sub_cover->add_option("--resolution", cover_resolution, "candidate grid resolution");
  sub_cover->add_option("--out", cover_out, "output JSON path (default: stdout)");

  auto* sub_fit = app.add_subcommand("fit", "fit an isometry to a map with both fitters");
  std::string fit_map = "dilation";
  double fit_eps = 0.05;
  int fit_n = 2;
  double fit_radius = 1.0;
  std::uint64_t fit_seed = 0;
  sub_fit->add_option("--map", fit_map, "map family (dilation, reflected_dilation, ...)");
  sub_fit->add_option("--eps", fit_eps, "family parameter epsilon");
  sub_fit->add_option("--n", fit_n, "group dimension parameter n");
  sub_fit->add_option("--radius", fit_radius, "fit region radius");
  sub_fit->add_option("--seed", fit_seed, "seed for seeded families");

  auto* sub_growth = app.add_subcommand("growth", "isometry displacement growth checks");
  std::uint64_t growth_seed = 2024;
  int growth_trials = 20;
  sub_growth->add_option("--seed", growth_seed, "base seed");
  sub_growth->add_option("--trials", growth_trials, "number of trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, genuine parse errors exit 2
  }

  try {
    if (sub_selftest->parsed()) {
      return run_selftest();
    }

    if (sub_rigidity->parsed()) {
      hrigid::ExperimentConfig cfg;
      try {
        cfg = hrigid::ExperimentConfig::from_file(config_path);
      } catch (const hrigid::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      hrigid::RigidityReport report = hrigid::run_rigidity(cfg);
      if (!cfg.output.empty()) hrigid::write_report(report, cfg.output);
      int flagged = 0;
      for (const auto& rec : report.records) {
        if (!rec.cross_check_pass) ++flagged;
      }
      std::printf("records: %zu\n", report.records.size());
      if (report.sup_fit.valid) {
        std::printf("sup_slope: %.6f (r2 %.6f, %d points)\n", report.sup_fit.slope,
                    report.sup_fit.r2, report.sup_fit.points);
      } else {
        std::printf("sup_slope: undefined\n");
      }
      if (report.sobolev_fit.valid) {
        std::printf("sobolev_slope: %.6f (r2 %.6f, %d points)\n", report.sobolev_fit.slope,
                    report.sobolev_fit.r2, report.sobolev_fit.points);
      } else {
        std::printf("sobolev_slope: undefined\n");
      }
      if (flagged > 0) {
        std::printf("flagged records (fitter cross-check): %d\n", flagged);
        return 1;
      }
      if (!cfg.output.empty()) std::printf("report written to %s.{json,csv}\n", cfg.output.c_str());
      return 0;
    }

    if (sub_chain->parsed()) {
      std::vector<double> coords, center_coords;
      try {
        coords = parse_coords(chain_x);
        if (!chain_center.empty()) center_coords = parse_coords(chain_center);
      } catch (const std::exception& e) {
        std::cerr << "bad coordinate option: " << e.what() << "\n";
        return 2;
      }
      if (coords.size() % 2 == 0 ||
          (!center_coords.empty() && center_coords.size() != coords.size())) {
        std::cerr << "bad coordinates: expected 2n+1 values (--center must match --x)\n";
        return 2;
      }
      int n = (static_cast<int>(coords.size()) - 1) / 2;
      hrigid::VectorXd c = Eigen::Map<const hrigid::VectorXd>(coords.data(),
                                                              static_cast<int>(coords.size()));
      hrigid::HPoint center = hrigid::HPoint::origin(n);
      if (!center_coords.empty()) {
        hrigid::VectorXd cc = Eigen::Map<const hrigid::VectorXd>(
            center_coords.data(), static_cast<int>(center_coords.size()));
        center = hrigid::HPoint::from_coords(cc);
      }
      hrigid::MetricDomain dom = make_domain(chain_domain, center, chain_radius);
      hrigid::BallChain chain = hrigid::build_chain(dom, hrigid::HPoint::from_coords(c));
      emit(hrigid::chain_to_json(chain), chain_out);
      return 0;
    }

    if (sub_cover->parsed()) {
      hrigid::MetricDomain dom =
          make_domain(cover_domain, hrigid::HPoint::origin(cover_n), cover_radius);
      hrigid::WhitneyFamily fam = hrigid::whitney_cover(dom, cover_resolution);
      emit(hrigid::cover_to_json(fam), cover_out);
      return 0;
    }

    if (sub_fit->parsed()) {
      hrigid::MapFamily fam = hrigid::make_family(fit_n, fit_map, fit_seed);
      hrigid::HMap f = fam.at(fit_eps);
      hrigid::Ball region{hrigid::HPoint::origin(fit_n), fit_radius};
      hrigid::CoerciveFitOptions copts;
      hrigid::OracleFitOptions oopts;
      hrigid::FitReport a =
          hrigid::fit_isometry(f, region, hrigid::FitterKind::coercive, copts, oopts);
      hrigid::FitReport b =
          hrigid::fit_isometry(f, region, hrigid::FitterKind::oracle, copts, oopts);
      hrigid::Ball half{region.center, 0.5 * region.radius};
      double sup_a = hrigid::sup_deviation(f, a.isometry, half, 20000);
      double sup_b = hrigid::sup_deviation(f, b.isometry, half, 20000);
      std::printf("fitter      fallback  measured_eps      sup_dev\n");
      std::printf("%-10s  %-8s  %.6e  %.6e\n", a.fitter_used.c_str(), a.fallback ? "yes" : "no",
                  a.measured_eps, sup_a);
      std::printf("%-10s  %-8s  %.6e  %.6e\n", b.fitter_used.c_str(), b.fallback ? "yes" : "no",
                  b.measured_eps, sup_b);
      bool agree = (sup_a < 1e-12 && sup_b < 1e-12) ||
                   (sup_b / std::max(sup_a, 1e-300) >= 0.5 &&
                    sup_b / std::max(sup_a, 1e-300) <= 2.0);
      std::printf("agreement within factor 2: %s\n", agree ? "yes" : "NO");
      return agree ? 0 : 1;
    }

    if (sub_growth->parsed()) {
      hrigid::GrowthReport rep = hrigid::isometry_growth_suite(growth_seed, growth_trials);
      double worst = 0.0;
      for (const auto& row : rep.rows) {
        if (row.bound > 0.0) worst = std::max(worst, row.sup_measured / row.bound);
      }
      std::printf("trials: %d, rows: %zu, worst sup/bound ratio: %.4f\n", growth_trials,
                  rep.rows.size(), worst);
      std::printf("%s\n", rep.all_pass ? "all growth bounds hold" : "growth bound VIOLATED");
      return rep.all_pass ? 0 : 1;
    }
  } catch (const hrigid::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cerr << "no subcommand executed\n";
  return 2;
}
