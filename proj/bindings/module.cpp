#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "randwidth/lawcheck.hpp"
#include "randwidth/orlicz.hpp"
#include "randwidth/polytope.hpp"
#include "randwidth/rng.hpp"
#include "randwidth/samplers.hpp"
#include "randwidth/version.hpp"

namespace py = pybind11;
using namespace randwidth;

namespace {

IsotropicModel make_model(const std::string& family, int n) {
  return {isotropic_family_from_string(family), n};
}

PerturbationLaw make_law(const std::string& kind, double p, std::vector<double> fixed) {
  PerturbationLaw law;
  law.kind = law_kind_from_string(kind);
  law.p = p;
  law.fixed_vector = std::move(fixed);
  law.validate();
  return law;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Randomly perturbed random polytopes: mean width estimation, "
            "Orlicz/Luxemburg norms, scaling and concentration probes";
  m.attr("__version__") = RANDWIDTH_VERSION;

  py::class_<RngState>(m, "RngState")
      .def(py::init([](std::uint64_t seed) { return make_rng(seed); }), py::arg("seed"))
      .def("substream", &RngState::substream, py::arg("k"))
      .def_readonly("seed", &RngState::seed)
      .def_readonly("stream_path", &RngState::stream_path)
      .def("__eq__", [](const RngState& a, const RngState& b) { return a == b; });

  m.def("make_rng", &make_rng, py::arg("seed"));

  py::class_<IsotropicModel>(m, "IsotropicModel")
      .def(py::init(&make_model), py::arg("family"), py::arg("n"))
      .def_property_readonly("family",
                             [](const IsotropicModel& s) { return to_string(s.family); })
      .def_readonly("n", &IsotropicModel::n);

  py::class_<PerturbationLaw>(m, "PerturbationLaw")
      .def(py::init(&make_law), py::arg("kind"), py::arg("p") = 2.0,
           py::arg("fixed_vector") = std::vector<double>{})
      .def_property_readonly("kind", [](const PerturbationLaw& l) { return to_string(l.kind); })
      .def_readonly("p", &PerturbationLaw::p)
      .def_readonly("fixed_vector", &PerturbationLaw::fixed_vector);

  py::class_<PointCloud>(m, "PointCloud")
      .def_readonly("n", &PointCloud::n)
      .def_readonly("N", &PointCloud::N)
      .def_readonly("points", &PointCloud::points);

  py::class_<Perturbation>(m, "Perturbation")
      .def(py::init([](std::vector<double> values) {
             Perturbation y;
             y.law = PerturbationLaw::fixed(values);
             y.values = std::move(values);
             return y;
           }),
           py::arg("values"))
      .def_readonly("values", &Perturbation::values);

  py::class_<DirectionSet>(m, "DirectionSet")
      .def_readonly("n", &DirectionSet::n)
      .def_readonly("M", &DirectionSet::M)
      .def_readonly("directions", &DirectionSet::directions);

  py::class_<WidthEstimate>(m, "WidthEstimate")
      .def_readonly("value", &WidthEstimate::value)
      .def_readonly("std_error", &WidthEstimate::std_error)
      .def_readonly("M", &WidthEstimate::M)
      .def_readonly("R", &WidthEstimate::R);

  m.def("sample_isotropic", &sample_isotropic, py::arg("model"), py::arg("count"),
        py::arg("rng"));
  m.def("sample_perturbation", &sample_perturbation, py::arg("law"), py::arg("N"),
        py::arg("rng"));
  m.def("sample_directions", &sample_directions, py::arg("n"), py::arg("M"), py::arg("rng"));

  m.def(
      "support",
      [](const PointCloud& cloud, const Perturbation& y, const std::vector<double>& theta) {
        return support(cloud, y, theta);
      },
      py::arg("cloud"), py::arg("y"), py::arg("theta"));
  m.def("mean_width_mc", &mean_width_mc, py::arg("cloud"), py::arg("y"), py::arg("M"),
        py::arg("rng"));
  m.def("f_estimate", &f_estimate, py::arg("model"), py::arg("N"), py::arg("y"), py::arg("R"),
        py::arg("M"), py::arg("rng"));
  m.def(
      "centroid_support",
      [](const IsotropicModel& model, double p, const std::vector<double>& theta, int samples,
         const RngState& rng) { return centroid_support(model, p, theta, samples, rng); },
      py::arg("model"), py::arg("p"), py::arg("theta"), py::arg("samples"), py::arg("rng"));
  m.def("centroid_mean_width", &centroid_mean_width, py::arg("model"), py::arg("p"), py::arg("n"),
        py::arg("M"), py::arg("samples"), py::arg("rng"));

  py::class_<OrliczFn>(m, "OrliczFn")
      .def_static("power", &OrliczFn::power, py::arg("p"))
      .def_static("gaussian_marginal", &OrliczFn::gaussian_marginal,
                  py::arg("tolerance") = 1e-9)
      .def_static("empirical", &OrliczFn::empirical, py::arg("samples"))
      .def("__call__", &OrliczFn::operator(), py::arg("s"));

  m.def("orlicz_eval", &orlicz_eval, py::arg("M"), py::arg("s"));
  m.def(
      "luxemburg_norm",
      [](const OrliczFn& M, const std::vector<double>& x) { return luxemburg_norm(M, x); },
      py::arg("M"), py::arg("x"));
  m.def(
      "empirical_orlicz",
      [](const IsotropicModel& model, const std::vector<double>& theta,
         const std::optional<PerturbationLaw>& factor_law, int samples, const RngState& rng) {
        return empirical_orlicz(model, theta, factor_law, samples, rng);
      },
      py::arg("model"), py::arg("theta"), py::arg("factor_law"), py::arg("samples"),
      py::arg("rng"));

  py::class_<EquivalenceRecord>(m, "EquivalenceRecord")
      .def_readonly("lhs", &EquivalenceRecord::lhs)
      .def_readonly("rhs", &EquivalenceRecord::rhs)
      .def_readonly("ratio", &EquivalenceRecord::ratio);
  m.def(
      "equivalence_check",
      [](const IsotropicModel& model, int n, int N, const Perturbation& y,
         const std::vector<double>& theta, int R, int M, int samples, const RngState& rng) {
        return equivalence_check(model, n, N, y, theta, R, M, samples, rng);
      },
      py::arg("model"), py::arg("n"), py::arg("N"), py::arg("y"), py::arg("theta"), py::arg("R"),
      py::arg("M"), py::arg("samples"), py::arg("rng"));

  py::class_<ScalingReport>(m, "ScalingReport")
      .def_readonly("N_grid", &ScalingReport::N_grid)
      .def_readonly("raw", &ScalingReport::raw)
      .def_readonly("mom", &ScalingReport::mom)
      .def_readonly("estimate", &ScalingReport::estimate)
      .def_readonly("std_error", &ScalingReport::std_error)
      .def_readonly("rate", &ScalingReport::rate)
      .def_readonly("normalized", &ScalingReport::normalized)
      .def_readonly("fitted_exponent", &ScalingReport::fitted_exponent)
      .def_readonly("dispersion", &ScalingReport::dispersion);

  py::class_<TailCurve>(m, "TailCurve")
      .def_readonly("t_grid", &TailCurve::t_grid)
      .def_readonly("empirical_tail", &TailCurve::empirical_tail)
      .def_readonly("center", &TailCurve::center)
      .def_readonly("fitted_c", &TailCurve::fitted_c)
      .def_readonly("stable_threshold", &TailCurve::stable_threshold);

  py::class_<LowerBoundReport>(m, "LowerBoundReport")
      .def_readonly("y_sorted", &LowerBoundReport::y_sorted)
      .def_readonly("I_y", &LowerBoundReport::I_y)
      .def_readonly("k_star", &LowerBoundReport::k_star)
      .def_readonly("bound_value", &LowerBoundReport::bound_value)
      .def_readonly("harmonic_term", &LowerBoundReport::harmonic_term);

  m.def("rate_of", &rate_of, py::arg("law"), py::arg("N"));
  m.def("sweep_rate", &sweep_rate, py::arg("law"), py::arg("model"), py::arg("n"),
        py::arg("N_grid"), py::arg("R"), py::arg("M"), py::arg("y_draws"), py::arg("rng"),
        py::arg("workers") = 1);
  m.def("concentration_probe", &concentration_probe, py::arg("law"), py::arg("model"),
        py::arg("n"), py::arg("N"), py::arg("draws"), py::arg("t_grid"), py::arg("R"),
        py::arg("M"), py::arg("rng"), py::arg("workers") = 1);
  m.def("lipschitz_probe", &lipschitz_probe, py::arg("model"), py::arg("n"), py::arg("N"),
        py::arg("pairs"), py::arg("R"), py::arg("M"), py::arg("rng"), py::arg("workers") = 1);
  m.def("tail_probe", &tail_probe, py::arg("model"), py::arg("n"), py::arg("N"),
        py::arg("alpha"), py::arg("samples"), py::arg("rng"));
  m.def("inclusion_probe", &inclusion_probe, py::arg("model"), py::arg("n"), py::arg("N"),
        py::arg("trials"), py::arg("M"), py::arg("samples"), py::arg("rng"),
        py::arg("workers") = 1);
  m.def(
      "arbitrary_lower_bound",
      [](const std::vector<double>& y, int n, double c1, double c2, bool strict) {
        return arbitrary_lower_bound(y, n, c1, c2, strict);
      },
      py::arg("y"), py::arg("n"), py::arg("c1"), py::arg("c2"), py::arg("strict") = false);
  m.def(
      "bound_vs_estimate",
      [](const IsotropicModel& model, const std::vector<double>& y, int n, int N, double c1,
         int R, int M, const RngState& rng) {
        return bound_vs_estimate(model, y, n, N, c1, R, M, rng);
      },
      py::arg("model"), py::arg("y"), py::arg("n"), py::arg("N"), py::arg("c1"), py::arg("R"),
      py::arg("M"), py::arg("rng"));
  m.def(
      "fit_rate",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return fit_rate(xs, ys);
      },
      py::arg("xs"), py::arg("ys"));
}
