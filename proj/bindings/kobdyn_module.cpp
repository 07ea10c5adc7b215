#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "kobdyn/backward.hpp"
#include "kobdyn/dynamics.hpp"
#include "kobdyn/geodesic.hpp"
#include "kobdyn/harness.hpp"
#include "kobdyn/horosphere.hpp"
#include "kobdyn/lempert.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/schema.hpp"

namespace py = pybind11;
using namespace kobdyn;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list l;
      for (const auto& e : j) l.append(json_to_py(e));
      return l;
    }
    case json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it)
        d[py::str(it.key())] = json_to_py(it.value());
      return d;
    }
    default:
      return py::none();
  }
}

Eigen::MatrixXcd orbit_matrix(const OrbitRecord& o) {
  const Eigen::Index n = static_cast<Eigen::Index>(o.points.size());
  const Eigen::Index d = n ? o.points[0].size() : 0;
  Eigen::MatrixXcd M(n, d);
  for (Eigen::Index i = 0; i < n; ++i) M.row(i) = o.points[i];
  return M;
}

BoundaryPoint as_boundary(const Domain& D, const Point& p) { return D.boundary_point(p); }

}  // namespace

PYBIND11_MODULE(_kobdyn, m) {
  m.doc() = "Kobayashi-geometry iteration toolkit (C++ core)";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<Error>(m, "KobdynError");

  py::class_<Domain>(m, "Domain")
      .def_static("disk", &Domain::disk)
      .def_static("ball", &Domain::ball, py::arg("dim"))
      .def_static("linear_image", &Domain::linear_image, py::arg("T"))
      .def("dim", &Domain::dim)
      .def("contains", &Domain::contains, py::arg("z"), py::arg("margin") = 0.0)
      .def("rho", &Domain::rho)
      .def("boundary_dist", &Domain::boundary_dist)
      .def("project_boundary", &Domain::project_boundary)
      .def("center", &Domain::center)
      .def("__repr__", [](const Domain& d) { return domain_to_json(d).dump(); });

  py::class_<BoundaryPoint>(m, "BoundaryPoint")
      .def_property_readonly("coords", [](const BoundaryPoint& b) { return b.coords; });
  m.def("boundary_point", &as_boundary, py::arg("domain"), py::arg("p"));

  py::class_<HolMap>(m, "HolMap")
      .def_static("disk_mobius", &HolMap::disk_mobius, py::arg("a"))
      .def_static("disk_blaschke_quad", &HolMap::disk_blaschke_quad, py::arg("a"))
      .def_static("disk_parabolic", &HolMap::disk_parabolic)
      .def_static("ball_mobius_axis", &HolMap::ball_mobius_axis, py::arg("a"), py::arg("dim"))
      .def_static("unitary", &HolMap::unitary, py::arg("U"))
      .def_static("scale", &HolMap::scale, py::arg("lam"), py::arg("domain"))
      .def_static("compose", &HolMap::compose, py::arg("maps"))
      .def_static("identity", &HolMap::identity, py::arg("domain"))
      .def_static(
          "user_analytic",
          [](std::function<Point(const Point&)> f, const Domain& D, const std::string& label) {
            return HolMap::user_analytic(std::move(f), D, label);
          },
          py::arg("f"), py::arg("domain"), py::arg("label") = "user_analytic")
      .def_static("from_json",
                  [](const std::string& s) { return parse_map(json::parse(s)); })
      .def("domain", &HolMap::domain)
      .def("dim", &HolMap::dim)
      .def("__call__", &HolMap::eval)
      .def("eval", &HolMap::eval)
      .def("jacobian", &HolMap::jacobian)
      .def("preimages",
           [](const HolMap& f, const Point& z) {
             PreimageSet ps = f.preimages(z);
             py::list out;
             for (auto& s : ps.solutions) out.append(py::make_tuple(s.point, s.residual));
             return py::make_tuple(out, ps.method);
           })
      .def("to_json", [](const HolMap& f) { return f.to_json().dump(); });

  m.def("poincare_dist", &poincare_dist);
  m.def("ball_dist", &ball_dist);
  m.def("distance", [](const Domain& D, const Point& z, const Point& w) {
    return distance(D, z, w);
  });
  m.def("boundary_dist", [](const Domain& D, const Point& z) { return D.boundary_dist(z); });

  py::class_<Geodesic>(m, "Geodesic")
      .def_property_readonly("basepoint", [](const Geodesic& g) { return g.basepoint; })
      .def_property_readonly("target_param", [](const Geodesic& g) { return g.target_param; })
      .def("eval", [](const Geodesic& g, Complex zeta) { return g.eval(zeta); })
      .def("left_inverse", [](const Geodesic& g, const Point& z) { return g.left_inverse(z); })
      .def("retraction", &Geodesic::retraction);
  m.def("geodesic_through",
        [](const Domain& D, const Point& z, const Point& w) { return geodesic_through(D, z, w); });
  m.def("geodesic_to_boundary", [](const Domain& D, const Point& z, const Point& tau) {
    return geodesic_through(D, z, D.boundary_point(tau));
  });

  m.def("horofunction", [](const Domain& D, const Point& tau, const Point& pole, const Point& z) {
    return horofunction(D, D.boundary_point(tau), pole, z);
  });
  m.def("kregion_gauge",
        [](const Domain& D, const Point& tau, const Point& pole, const Point& z) {
          return kregion_gauge(D, D.boundary_point(tau), pole, z);
        });

  m.def(
      "lempert_numeric",
      [](const Domain& D, const Point& z, const Point& w, int degree, int max_evals,
         std::uint64_t seed) {
        LempertConfig cfg;
        cfg.degree = degree;
        if (max_evals > 0) cfg.max_evals = max_evals;
        cfg.seed = seed;
        LempertResult r = lempert_numeric(D, z, w, cfg);
        py::dict d;
        d["value"] = r.value;
        d["feasibility_gap"] = r.feasibility_gap;
        d["fallback"] = r.fallback;
        d["eta"] = r.eta;
        d["degree"] = r.degree;
        return d;
      },
      py::arg("domain"), py::arg("z"), py::arg("w"), py::arg("degree") = 6,
      py::arg("max_evals") = 0, py::arg("seed") = 1);

  py::class_<OrbitRecord>(m, "OrbitRecord")
      .def_property_readonly("points", &orbit_matrix)
      .def_property_readonly("steps", [](const OrbitRecord& o) { return o.steps; })
      .def_property_readonly("residuals", [](const OrbitRecord& o) { return o.residuals; })
      .def_property_readonly("t_seq", [](const OrbitRecord& o) { return o.t_seq; })
      .def_property_readonly("s_seq", [](const OrbitRecord& o) { return o.s_seq; })
      .def_property_readonly("gauges", [](const OrbitRecord& o) { return o.gauges; })
      .def_property_readonly("step_sup", [](const OrbitRecord& o) { return o.step_sup; })
      .def_property_readonly("converged_boundary",
                             [](const OrbitRecord& o) { return o.converged_boundary; })
      .def_property_readonly("boundary_limit",
                             [](const OrbitRecord& o) -> py::object {
                               if (!o.boundary_limit) return py::none();
                               return py::cast(*o.boundary_limit);
                             })
      .def_property_readonly("truncated", [](const OrbitRecord& o) { return o.truncated; })
      .def_property_readonly("note", [](const OrbitRecord& o) { return o.note; })
      .def("to_csv", &orbit_to_csv)
      .def("to_json", [](const OrbitRecord& o) { return orbit_to_json(o).dump(); });

  m.def("iterate_forward", &iterate_forward, py::arg("f"), py::arg("z0"), py::arg("n"));

  m.def(
      "classify",
      [](const HolMap& f, std::uint64_t seed) {
        IterateConfig ic;
        ic.seed = seed;
        return json_to_py(classify(f, ic).to_json());
      },
      py::arg("f"), py::arg("seed") = 11);

  m.def(
      "wolff_point",
      [](const HolMap& f) {
        auto w = wolff_point(f);
        if (std::holds_alternative<Point>(w)) return py::cast(std::get<Point>(w));
        return py::cast(std::get<BoundaryPoint>(w).coords);
      },
      py::arg("f"));

  m.def(
      "dilation_coefficient",
      [](const HolMap& f, const Point& sigma, const Point& pole) {
        auto est = dilation_coefficient(f, f.domain().boundary_point(sigma), pole);
        return json_to_py(est.to_json());
      },
      py::arg("f"), py::arg("sigma"), py::arg("pole"));

  m.def(
      "is_boundary_fixed_point",
      [](const HolMap& f, const Point& sigma) {
        auto r = is_boundary_fixed_point(f, f.domain().boundary_point(sigma));
        return py::make_tuple(r.fixed, json_to_py(r.beta.to_json()),
                              json_to_py(r.detail.to_json()));
      },
      py::arg("f"), py::arg("sigma"));

  m.def(
      "julia_check",
      [](const HolMap& f, const Point& sigma, const Point& tau, const Point& pole, int trials,
         std::uint64_t seed) {
        return json_to_py(julia_check(f, f.domain().boundary_point(sigma),
                                      f.domain().boundary_point(tau), pole, trials, seed)
                              .to_json());
      },
      py::arg("f"), py::arg("sigma"), py::arg("tau"), py::arg("pole"), py::arg("trials") = 200,
      py::arg("seed") = 5);

  m.def("wolff_consistency",
        [](const HolMap& f) { return json_to_py(wolff_consistency(f).to_json()); });

  m.def(
      "contraction_constant",
      [](const HolMap& f, const Point& p, double R0, int samples, std::uint64_t seed) {
        return json_to_py(contraction_constant(f, p, R0, samples, seed).to_json());
      },
      py::arg("f"), py::arg("p"), py::arg("R0"), py::arg("samples") = 4096, py::arg("seed") = 3);

  m.def(
      "backward_orbit",
      [](const HolMap& f, const Point& z0, int n, double a_max, const std::string& policy,
         py::object toward, bool use_quad, bool diagnostics) {
        BackwardConfig bc;
        bc.a_max = a_max;
        bc.use_quad = use_quad;
        if (policy == "toward_sigma") {
          bc.policy = BranchPolicy::TowardSigma;
          if (!toward.is_none()) bc.toward = toward.cast<Point>();
        }
        OrbitRecord orb = backward_orbit(f, z0, n, bc);
        if (diagnostics) {
          Classification cls = classify(f);
          attach_diagnostics(orb, f, cls, f.domain().center());
        }
        return orb;
      },
      py::arg("f"), py::arg("z0"), py::arg("n"), py::arg("a_max") = 2.0,
      py::arg("policy") = "min_step", py::arg("toward") = py::none(),
      py::arg("use_quad") = true, py::arg("diagnostics") = false);

  m.def(
      "backward_step",
      [](const HolMap& f, const Point& z, double a_max, const std::string& policy,
         py::object toward) {
        BackwardConfig bc;
        bc.a_max = a_max;
        if (policy == "toward_sigma") {
          bc.policy = BranchPolicy::TowardSigma;
          if (!toward.is_none()) bc.toward = toward.cast<Point>();
        }
        return backward_step(f, z, bc);
      },
      py::arg("f"), py::arg("z"), py::arg("a_max") = 2.0, py::arg("policy") = "min_step",
      py::arg("toward") = py::none());

  m.def(
      "construct_backward_orbit_at",
      [](const HolMap& f, const Point& sigma, double window_radius, double slack) {
        BoundaryPoint s = f.domain().boundary_point(sigma);
        auto beta = dilation_coefficient(f, s, f.domain().center());
        IsolationWindow win;
        if (window_radius > 0) {
          win.center = s;
          win.radius = window_radius;
          win.beta_cap = beta.value;
        } else {
          win = default_window(f, s, beta.value);
        }
        ConstructConfig cc;
        cc.slack = slack;
        return construct_backward_orbit_at(f, s, win, cc);
      },
      py::arg("f"), py::arg("sigma"), py::arg("window_radius") = 0.0, py::arg("slack") = 0.05);

  m.def(
      "step_limit_check",
      [](const HolMap& f, const Point& sigma, const Point& pole) {
        return json_to_py(step_limit_check(f, f.domain().boundary_point(sigma), pole).to_json());
      },
      py::arg("f"), py::arg("sigma"), py::arg("pole"));

  m.def("limsup_step_fixedpoint_check", [](const HolMap& f, const OrbitRecord& orbit) {
    return json_to_py(limsup_step_fixedpoint_check(f, orbit).to_json());
  });

  m.def("theorem01_suite", [](const HolMap& f, const OrbitRecord& orbit, const Point& pole) {
    return json_to_py(theorem01_suite(f, orbit, pole).to_json());
  });

  m.def("inequality_battery", [](const HolMap& f, const OrbitRecord& orbit, const Point& pole) {
    return json_to_py(inequality_battery(f, orbit, pole).to_json());
  });

  m.def(
      "run_config",
      [](const std::string& config_json, const std::string& out_dir) {
        json j = json::parse(config_json);
        ExperimentConfig cfg = parse_config(j);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        RunResult rr = run(cfg);
        py::dict d;
        d["pass"] = rr.report.pass();
        d["exit_code"] = rr.exit_code;
        d["report"] = json_to_py(rr.report.to_json());
        py::list fl;
        for (auto& f : rr.files) fl.append(f.string());
        d["files"] = fl;
        return d;
      },
      py::arg("config_json"), py::arg("out_dir") = "");

  m.def("run_suite", [](const std::string& dir) {
    SuiteResult sr = run_suite(dir);
    return py::make_tuple(sr.exit_code, json_to_py(sr.summary), sr.summary_path.string());
  });

  m.attr("__version__") = "0.1.0";
}
