// Python bindings for the group calculus, fitting, domain, and experiment
// layers. Matrix-valued members are exposed as copies so numpy views never
// dangle; seeded entry points take plain integer seeds.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>
#include <string>

#include "hrigid/domains.hpp"
#include "hrigid/experiment.hpp"
#include "hrigid/fitting.hpp"
#include "hrigid/hcalc.hpp"
#include "hrigid/isometry.hpp"
#include "hrigid/kernel.hpp"
#include "hrigid/linalg.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/moments.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/types.hpp"
#include "hrigid/version.hpp"

namespace py = pybind11;
using namespace hrigid;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (j.type()) {
    case value_t::object: {
      py::dict d;
      for (const auto& el : j.items()) d[py::str(el.key())] = json_to_py(el.value());
      return d;
    }
    case value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(json_to_py(v));
      return l;
    }
    case value_t::string:
      return py::str(j.get<std::string>());
    case value_t::boolean:
      return py::bool_(j.get<bool>());
    case value_t::number_integer:
      return py::int_(j.get<long long>());
    case value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case value_t::number_float: {
      // match the textual serialization, which emits null for non-finite values
      double v = j.get<double>();
      if (!std::isfinite(v)) return py::none();
      return py::float_(v);
    }
    default:
      return py::none();
  }
}

std::string config_to_text(const py::object& config) {
  if (py::isinstance<py::str>(config)) return config.cast<std::string>();
  py::object dumps = py::module_::import("json").attr("dumps");
  return dumps(config).cast<std::string>();
}

std::string repr_point(const HPoint& p) {
  std::ostringstream out;
  out << "HPoint(n=" << p.n() << ", |z|=" << p.z.norm() << ", t=" << p.t << ")";
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_hrigid, m) {
  m.doc() = "Group calculus on H^n: gauge geometry, contact differentials, "
            "moment projections, isometry fitting, domains, and deviation "
            "experiments.";
  m.attr("__version__") = kVersion;

  // ---------------------------------------------------------------- points
  py::class_<HPoint>(m, "HPoint")
      .def(py::init([](const VectorXd& coords) { return HPoint::from_coords(coords); }),
           py::arg("coords"), "Build from the 2n+1 real coordinates (x_1..x_2n, t).")
      .def_static("origin", &HPoint::origin, py::arg("n"))
      .def_property_readonly("n", &HPoint::n)
      .def_property_readonly("t", [](const HPoint& p) { return p.t; })
      .def_property_readonly("z", [](const HPoint& p) { return VectorXcd(p.z); })
      .def("coords", &HPoint::coords)
      .def("__repr__", &repr_point);

  py::class_<Ball>(m, "Ball")
      .def(py::init([](const HPoint& c, double r) { return Ball{c, r}; }), py::arg("center"),
           py::arg("radius"))
      .def_property_readonly("center", [](const Ball& b) { return b.center; })
      .def_property_readonly("radius", [](const Ball& b) { return b.radius; });

  m.def("mul", &mul, py::arg("x"), py::arg("y"), "Group product.");
  m.def("inv", &inv, py::arg("x"), "Group inverse.");
  m.def("dilate", &dilate, py::arg("s"), py::arg("x"), "Anisotropic dilation (s z, s^2 t).");
  m.def("conj_flip", &conj_flip, py::arg("x"), "Orientation-reversing flip (conj z, -t).");
  m.def("knorm", &knorm, py::arg("x"), "Gauge norm (|z|^4 + t^2)^{1/4}.");
  m.def("kdist", &kdist, py::arg("x"), py::arg("y"), "Left-invariant gauge distance.");
  m.def("frame_vectors", &frame_vectors, py::arg("p"),
        "Columns: the left-invariant frame fields at p in coordinates.");
  m.def("ball_volume", &ball_volume, py::arg("n"), py::arg("r"));
  m.def("box_volume", &box_volume, py::arg("n"), py::arg("r"));
  m.def("box_second_moment", &box_second_moment, py::arg("n"), py::arg("r"));
  m.def("box_gauge_ratio", &box_gauge_ratio, py::arg("n"));

  // ------------------------------------------------------------- isometries
  py::class_<Isometry>(m, "Isometry")
      .def(py::init<MatrixXcd, HPoint, bool>(), py::arg("A"), py::arg("a"),
           py::arg("reflect") = false)
      .def_static("identity", &Isometry::identity, py::arg("n"))
      .def_static("translation", &Isometry::translation, py::arg("b"))
      .def_static("rotation", &Isometry::rotation, py::arg("A"))
      .def_property_readonly("A", [](const Isometry& t) { return MatrixXcd(t.A); })
      .def_property_readonly("a", [](const Isometry& t) { return t.a; })
      .def_property_readonly("reflect", [](const Isometry& t) { return t.reflect; })
      .def_property_readonly("n", &Isometry::n)
      .def("apply", &Isometry::apply, py::arg("x"))
      .def("dh", &Isometry::dh, "Constant horizontal differential (real 2n x 2n form).")
      .def("lam", &Isometry::lambda, "Vertical factor: -1 when reflecting, +1 otherwise.");
  m.def("compose", &compose, py::arg("first_applied_last"), py::arg("applied_first"));
  m.def("invert", &invert, py::arg("t"));
  m.def("conjugate_by_dilation", &conjugate_by_dilation, py::arg("t"), py::arg("s"));
  m.def(
      "random_isometry",
      [](int n, std::uint64_t seed, double rot_scale, double trans_scale, bool allow_reflect) {
        Rng rng(seed);
        return random_isometry(n, rng, rot_scale, trans_scale, allow_reflect);
      },
      py::arg("n"), py::arg("seed"), py::arg("rot_scale") = 1.0, py::arg("trans_scale") = 1.0,
      py::arg("allow_reflect") = true);

  // ------------------------------------------------------------------ maps
  py::class_<HMap>(m, "HMap")
      .def_property_readonly("n", [](const HMap& f) { return f.n; })
      .def_property_readonly("label", [](const HMap& f) { return f.label; })
      .def_property_readonly("has_jac", &HMap::has_jac)
      .def("__call__", [](const HMap& f, const HPoint& x) { return f.eval(x); });
  py::class_<CnMap>(m, "CnMap")
      .def_property_readonly("n", [](const CnMap& u) { return u.n; })
      .def_property_readonly("m", [](const CnMap& u) { return u.m; })
      .def_property_readonly("has_jac", &CnMap::has_jac)
      .def("__call__", [](const CnMap& u, const HPoint& x) { return VectorXcd(u.eval(x)); });

  m.def("identity_map", &identity_map, py::arg("n"));
  m.def("dilation_map", &dilation_map, py::arg("n"), py::arg("s"));
  m.def("isometry_map", &isometry_map, py::arg("t"));
  m.def("right_translation_map", &right_translation_map, py::arg("b"));
  m.def("compose_maps", &compose_maps, py::arg("f"), py::arg("g"), "f after g.");
  m.def(
      "make_map",
      [](int n, std::function<HPoint(const HPoint&)> f, const std::string& label) {
        HMap out;
        out.n = n;
        out.eval = std::move(f);
        out.label = label;
        return out;
      },
      py::arg("n"), py::arg("f"), py::arg("label") = "",
      "Wrap a python callable HPoint -> HPoint; differentials fall back to "
      "frame-flow finite differences.");
  m.def(
      "make_cn_map",
      [](int n, int mdim, std::function<VectorXcd(const HPoint&)> f, const std::string& label) {
        CnMap out;
        out.n = n;
        out.m = mdim;
        out.eval = std::move(f);
        out.label = label;
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("f"), py::arg("label") = "");
  m.def("horizontal_projection", &horizontal_projection, py::arg("f"));
  m.def("displacement_projection", &displacement_projection, py::arg("f"));

  // --------------------------------------------------------- differentials
  py::class_<HorizontalDifferential>(m, "HorizontalDifferential")
      .def_property_readonly("M", [](const HorizontalDifferential& d) { return MatrixXd(d.M); })
      .def_property_readonly("lam", [](const HorizontalDifferential& d) { return d.lambda; })
      .def_property_readonly("at", [](const HorizontalDifferential& d) { return d.at; })
      .def_property_readonly("fd_mismatch", [](const HorizontalDifferential& d) -> py::object {
        return d.fd_mismatch ? py::cast(*d.fd_mismatch) : py::none();
      });
  m.def("horiz_diff_auto", &horiz_diff_auto, py::arg("f"), py::arg("x"),
        "Analytic when the map carries a Jacobian, frame-flow FD otherwise.");
  m.def("horiz_diff_checked", &horiz_diff_checked, py::arg("f"), py::arg("x"),
        py::arg("h") = 1e-5);

  py::class_<QValue>(m, "QValue")
      .def_property_readonly("sym_part", [](const QValue& q) { return MatrixXd(q.sym_part); })
      .def_property_readonly("antisymplectic",
                             [](const QValue& q) { return MatrixXd(q.antisymplectic); })
      .def("norm", &QValue::norm);
  m.def(
      "q_apply", [](const CnMap& u, const HPoint& x) { return q_apply(u, x); }, py::arg("u"),
      py::arg("x"), "Overdetermined operator value at x.");
  m.def(
      "contact_residual", [](const HMap& f, const HPoint& x) { return contact_residual(f, x); },
      py::arg("f"), py::arg("x"));
  m.def(
      "main_estimate_residual",
      [](const HMap& f, const HPoint& x, double L) { return main_estimate_residual(f, x, L); },
      py::arg("f"), py::arg("x"), py::arg("L"));

  py::class_<QiProbe>(m, "QiProbe")
      .def_property_readonly("L_lower", [](const QiProbe& p) { return p.L_lower; })
      .def_property_readonly("sign_ok", [](const QiProbe& p) { return p.sign_ok; })
      .def_property_readonly("lambda_sign", [](const QiProbe& p) { return p.lambda_sign; });
  m.def(
      "qi_probe",
      [](const HMap& f, const Ball& region, int samples) { return qi_probe(f, region, samples); },
      py::arg("f"), py::arg("region"), py::arg("samples") = 128);
  py::class_<BilipschitzProbe>(m, "BilipschitzProbe")
      .def_property_readonly("ratio_min", [](const BilipschitzProbe& p) { return p.ratio_min; })
      .def_property_readonly("ratio_max", [](const BilipschitzProbe& p) { return p.ratio_max; });
  m.def("bilipschitz_probe", &bilipschitz_probe, py::arg("f"), py::arg("region"), py::arg("pairs"),
        py::arg("seed"));

  // ------------------------------------------------------ moments / kernel
  py::class_<MomentData>(m, "MomentData")
      .def_property_readonly("A", [](const MomentData& d) { return MatrixXcd(d.A); })
      .def_property_readonly("a", [](const MomentData& d) { return VectorXcd(d.a); })
      .def_property_readonly("quad_order", [](const MomentData& d) { return d.quad_order; })
      .def_property_readonly("quad_error_estimate",
                             [](const MomentData& d) { return d.quad_error_estimate; });
  m.def("moments", &moments, py::arg("u"), py::arg("quad_order") = 12,
        py::arg("with_error_estimate") = true);

  py::class_<KernelElement>(m, "KernelElement")
      .def_static("general", &KernelElement::general, py::arg("K"), py::arg("a"))
      .def_static("dim1", &KernelElement::dim1, py::arg("a"), py::arg("k"), py::arg("b"))
      .def_property_readonly("n", [](const KernelElement& e) { return e.n; })
      .def_property_readonly("K", [](const KernelElement& e) { return MatrixXcd(e.K); })
      .def_property_readonly("a", [](const KernelElement& e) { return VectorXcd(e.a); })
      .def_property_readonly("b", [](const KernelElement& e) { return e.b; })
      .def("as_map", &KernelElement::as_map);
  m.def(
      "random_kernel_element",
      [](int n, std::uint64_t seed, double scale) {
        Rng rng(seed);
        return random_kernel_element(n, rng, scale);
      },
      py::arg("n"), py::arg("seed"), py::arg("scale") = 1.0);
  m.def("project_p", &project_p, py::arg("u"), py::arg("quad_order") = 12);

  py::class_<UnitaryCorrection>(m, "UnitaryCorrection")
      .def_property_readonly("V", [](const UnitaryCorrection& c) { return MatrixXcd(c.V); })
      .def_property_readonly("deviation_bound",
                             [](const UnitaryCorrection& c) { return c.deviation_bound; })
      .def_property_readonly("singular_values",
                             [](const UnitaryCorrection& c) { return VectorXd(c.singular_values); });
  m.def("lemma_correction", &lemma_correction, py::arg("u"), py::arg("eps"),
        py::arg("quad_order") = 12);
  m.def("correction_eps_bound", &correction_eps_bound, py::arg("n"));

  // ---------------------------------------------------------------- fitting
  py::class_<FitReport>(m, "FitReport")
      .def_property_readonly("isometry", [](const FitReport& r) { return r.isometry; })
      .def_property_readonly("fitter_used", [](const FitReport& r) { return r.fitter_used; })
      .def_property_readonly("fallback", [](const FitReport& r) { return r.fallback; })
      .def_property_readonly("measured_eps", [](const FitReport& r) { return r.measured_eps; });
  m.def(
      "fit_isometry",
      [](const HMap& f, const Ball& region, const std::string& kind) {
        if (kind == "coercive") return fit_isometry(f, region, FitterKind::coercive);
        if (kind == "oracle") return fit_isometry(f, region, FitterKind::oracle);
        throw std::invalid_argument("fit_isometry: kind must be 'coercive' or 'oracle'");
      },
      py::arg("f"), py::arg("region"), py::arg("kind") = "coercive");
  m.def("sup_deviation", &sup_deviation, py::arg("f"), py::arg("theta"), py::arg("region"),
        py::arg("proposals") = 100000);
  m.def("sobolev_deviation", &sobolev_deviation, py::arg("f"), py::arg("theta"), py::arg("region"),
        py::arg("p"), py::arg("proposals") = 20000);
  m.def("exp_integrability", &exp_integrability, py::arg("f"), py::arg("theta"), py::arg("region"),
        py::arg("N"), py::arg("eps"), py::arg("proposals") = 20000);

  // ---------------------------------------------------------------- domains
  py::class_<MetricDomain>(m, "MetricDomain")
      .def_property_readonly("n", [](const MetricDomain& d) { return d.n; })
      .def_property_readonly("kind", [](const MetricDomain& d) { return d.kind; })
      .def_property_readonly("volume", [](const MetricDomain& d) { return d.volume; })
      .def_property_readonly("base_point", [](const MetricDomain& d) { return d.base_point; })
      .def_property_readonly("john_params",
                             [](const MetricDomain& d) -> py::object {
                               if (!d.john_params) return py::none();
                               return py::make_tuple(d.john_params->alpha, d.john_params->beta);
                             })
      .def_property_readonly("holder_param",
                             [](const MetricDomain& d) -> py::object {
                               return d.holder_param ? py::cast(*d.holder_param) : py::none();
                             })
      .def("contains", [](const MetricDomain& d, const HPoint& x) { return d.contains(x); })
      .def("boundary_distance",
           [](const MetricDomain& d, const HPoint& x) { return d.boundary_distance(x); });
  m.def("make_ball_domain", &make_ball_domain, py::arg("center"), py::arg("radius"));
  m.def("make_box_domain", &make_box_domain, py::arg("center"), py::arg("radius"));
  m.def("make_dumbbell", &make_dumbbell, py::arg("c1"), py::arg("c2"), py::arg("r1"),
        py::arg("r2"), py::arg("neck"));

  m.def(
      "build_chain",
      [](const MetricDomain& U, const HPoint& x) { return json_to_py(chain_to_json(build_chain(U, x))); },
      py::arg("domain"), py::arg("x"),
      "Certified ball chain from the base point to x, as a plain dict.");
  m.def(
      "whitney_cover",
      [](const MetricDomain& U, double res) { return json_to_py(cover_to_json(whitney_cover(U, res))); },
      py::arg("domain"), py::arg("grid_resolution"),
      "Greedy interior cover with 1/5-disjoint shrunken balls, as a plain dict.");

  py::class_<IntegralEstimate>(m, "IntegralEstimate")
      .def_property_readonly("value", [](const IntegralEstimate& e) { return e.value; })
      .def_property_readonly("std_error", [](const IntegralEstimate& e) { return e.std_error; });
  m.def("boundary_integral", &boundary_integral, py::arg("domain"), py::arg("tau"),
        py::arg("mc_samples"), py::arg("seed"));
  py::class_<HolderCheck>(m, "HolderCheck")
      .def_property_readonly("integral", [](const HolderCheck& h) { return h.integral; })
      .def_property_readonly("bound", [](const HolderCheck& h) { return h.bound; });
  m.def("holder_check", &holder_check, py::arg("domain"), py::arg("x"));
  m.def(
      "quasihyperbolic_length",
      [](const MetricDomain& U, const std::vector<HPoint>& pts) {
        return quasihyperbolic_length(U, Polyline::from_vertices(pts));
      },
      py::arg("domain"), py::arg("path_points"));

  // ------------------------------------------------------------ experiments
  m.def(
      "run_rigidity",
      [](const py::object& config) {
        ExperimentConfig cfg = ExperimentConfig::from_json_text(config_to_text(config));
        RigidityReport rep = run_rigidity(cfg);
        if (!cfg.output.empty()) write_report(rep, cfg.output);
        return json_to_py(rep.to_json());
      },
      py::arg("config"),
      "Full deviation pipeline from a config dict (or JSON string); returns "
      "the report as a dict and honors the config's output stem.");
  m.def(
      "isometry_growth_suite",
      [](std::uint64_t seed, int trials) {
        GrowthReport rep = isometry_growth_suite(seed, trials);
        py::list rows;
        for (const GrowthRow& row : rep.rows) {
          py::dict d;
          d["trial"] = row.trial;
          d["kind"] = row.kind;
          d["eps_measured"] = row.eps_measured;
          d["s"] = row.s;
          d["sup_measured"] = row.sup_measured;
          d["bound"] = row.bound;
          d["pass"] = row.pass;
          rows.append(d);
        }
        py::dict out;
        out["all_pass"] = rep.all_pass;
        out["rows"] = rows;
        return out;
      },
      py::arg("seed"), py::arg("trials"));
  m.def(
      "embedding_suite",
      [](std::uint64_t seed, int trials) {
        EmbeddingReport rep = embedding_suite(seed, trials);
        py::list rows;
        for (const EmbeddingRow& row : rep.rows) {
          py::dict d;
          d["epsilon"] = row.epsilon;
          d["ratio"] = row.ratio;
          rows.append(d);
        }
        py::dict out;
        out["bounded"] = rep.bounded;
        out["rows"] = rows;
        return out;
      },
      py::arg("seed"), py::arg("trials"));
  m.def("embedding_ratio", &embedding_ratio, py::arg("f"), py::arg("a"), py::arg("r"),
        py::arg("eps"), py::arg("samples") = 20000);
}
