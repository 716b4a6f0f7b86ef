// Copyright 2026 The svcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the svcm core.

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <span>
#include <string>

#include "svcm/experiments.hpp"
#include "svcm/model.hpp"
#include "svcm/montecarlo.hpp"
#include "svcm/numerics.hpp"
#include "svcm/rng.hpp"
#include "svcm/statistics.hpp"
#include "svcm/theory.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

Array to_array(std::vector<double> values) {
  Array out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

std::optional<double> p_of(const svcm::TestOutcome& o) {
  if (!o.p_value) return std::nullopt;
  return o.p_value->value();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  using namespace svcm;
  m.doc() = "Sparse variance contamination: sampling, tests, calibration, power.";
  m.attr("generator_id") = std::string(kGeneratorId);

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::enum_<TestId>(m, "TestId")
      .value("LR", TestId::kLR)
      .value("CHI_SQUARED", TestId::kChiSquared)
      .value("EXTREMES", TestId::kExtremes)
      .value("HC", TestId::kHC)
      .def_static("parse", [](const std::string& s) { return parse_test_id(s); })
      .def_property_readonly("label", [](TestId t) { return std::string(to_string(t)); });

  py::enum_<Calibration>(m, "Calibration")
      .value("CLOSED_FORM", Calibration::kClosedForm)
      .value("MONTE_CARLO", Calibration::kMonteCarlo)
      .value("NONE", Calibration::kNone);

  py::enum_<RegimeKind>(m, "RegimeKind")
      .value("NEAR_ZERO", RegimeKind::kNearZero)
      .value("NEAR_ONE", RegimeKind::kNearOne)
      .value("FIXED", RegimeKind::kFixed);

  py::enum_<Side>(m, "Side").value("BELOW", Side::kBelow).value("ABOVE", Side::kAbove);

  py::enum_<Verdict>(m, "Verdict")
      .value("DETECTABLE", Verdict::kDetectable)
      .value("UNDETECTABLE", Verdict::kUndetectable)
      .value("NEAR_BOUNDARY", Verdict::kNearBoundary)
      .value("NOT_COVERED", Verdict::kNotCovered);

  // numerics
  m.def("normal_cdf", &normal_cdf, py::arg("x"));
  m.def("normal_survival", &normal_survival, py::arg("x"));
  m.def("log_normal_survival", &log_normal_survival, py::arg("x"));
  m.def("folded_cdf", &folded_cdf, py::arg("x"));
  m.def("folded_survival", &folded_survival, py::arg("x"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def("chi_squared_cdf", &chi_squared_cdf, py::arg("w"), py::arg("k"));
  m.def("chi_squared_sf", &chi_squared_sf, py::arg("w"), py::arg("k"));

  // model
  py::class_<MixtureParams>(m, "MixtureParams")
      .def(py::init<double, double>(), py::arg("epsilon"), py::arg("sigma"))
      .def_static("null", &MixtureParams::null)
      .def_property_readonly("epsilon", &MixtureParams::epsilon)
      .def_property_readonly("sigma", &MixtureParams::sigma)
      .def("is_null_law", &MixtureParams::is_null_law)
      .def(py::self == py::self)
      .def("__repr__", [](const MixtureParams& p) {
        std::ostringstream s;
        s.precision(17);
        s << "MixtureParams(epsilon=" << p.epsilon() << ", sigma=" << p.sigma() << ")";
        return s.str();
      });

  py::class_<RegimeSpec>(m, "RegimeSpec")
      .def_static("near_zero", &RegimeSpec::near_zero, py::arg("beta"), py::arg("gamma"))
      .def_static("near_one", &RegimeSpec::near_one, py::arg("beta"), py::arg("gamma"),
                  py::arg("side") = Side::kAbove)
      .def_static("fixed", &RegimeSpec::fixed, py::arg("beta"), py::arg("sigma"))
      .def_property_readonly("kind", &RegimeSpec::kind)
      .def_property_readonly("beta", &RegimeSpec::beta)
      .def_property_readonly("coordinate", &RegimeSpec::coordinate)
      .def("with_coordinate", &RegimeSpec::with_coordinate, py::arg("value"));

  m.def("resolve_regime", &resolve_regime, py::arg("spec"), py::arg("n"));
  m.def(
      "sample",
      [](const MixtureParams& p, std::int64_t n, std::uint64_t seed) {
        return to_array(sample(p, n, seed).values);
      },
      py::arg("params"), py::arg("n"), py::arg("seed"));
  m.def("mixture_abs_cdf", &mixture_abs_cdf, py::arg("t"), py::arg("params"));

  // statistics
  py::class_<TestOutcome>(m, "TestOutcome")
      .def_readonly("test", &TestOutcome::test)
      .def_readonly("statistic", &TestOutcome::statistic)
      .def_property_readonly("p_value", &p_of)
      .def_readonly("calibration", &TestOutcome::calibration);

  m.def(
      "log_likelihood_ratio",
      [](const Array& x, const MixtureParams& p) { return log_likelihood_ratio(view(x), p); },
      py::arg("values"), py::arg("params"));
  m.def(
      "chi_squared_test", [](const Array& x) { return chi_squared_test(view(x)).outcome; },
      py::arg("values"));
  m.def(
      "extremes_test",
      [](const Array& x) {
        const auto r = extremes_test(view(x));
        py::dict detail;
        detail["min_abs"] = r.detail.min_abs;
        detail["max_abs"] = r.detail.max_abs;
        detail["p_min"] = r.detail.p_min.value();
        detail["p_max"] = r.detail.p_max.value();
        detail["p_bonferroni"] = r.detail.p_bonferroni.value();
        return py::make_tuple(r.outcome, detail);
      },
      py::arg("values"), "Returns (outcome, detail dict).");
  m.def(
      "higher_criticism", [](const Array& x) { return higher_criticism(view(x)); },
      py::arg("values"));

  // theory
  m.def(
      "detection_boundary",
      [](TestId t, const RegimeSpec& s) { return detection_boundary(t, s); }, py::arg("test"),
      py::arg("spec"));
  m.def(
      "classify",
      [](TestId t, const RegimeSpec& s, double tol) {
        const auto v = classify(t, s, tol);
        return py::make_tuple(v.verdict, v.margin);
      },
      py::arg("test"), py::arg("spec"), py::arg("tolerance") = kNearBoundaryTolerance,
      "Returns (verdict, margin).");
  m.def(
      "second_moment",
      [](const MixtureParams& p, std::int64_t n) {
        const auto s = second_moment_L(p, n);
        return py::make_tuple(s.per_obs, s.bound, s.valid);
      },
      py::arg("params"), py::arg("n"), "Returns (per_obs, bound, valid).");
  m.def(
      "w_moments",
      [](const MixtureParams& p, std::int64_t n) {
        const auto w = w_moments(p, n);
        return py::make_tuple(w.mean, w.variance);
      },
      py::arg("params"), py::arg("n"));

  // montecarlo
  py::class_<NullCalibration>(m, "NullCalibration")
      .def_readonly("test", &NullCalibration::test)
      .def_readonly("n", &NullCalibration::n)
      .def_readonly("base_seed", &NullCalibration::base_seed)
      .def_readonly("lr_params", &NullCalibration::lr_params)
      .def_property_readonly("sorted_stats",
                             [](const NullCalibration& c) { return to_array(c.sorted_stats); })
      .def("__len__", &NullCalibration::replicates);

  m.def("calibrate_null", &calibrate_null, py::arg("test"), py::arg("n"), py::arg("replicates"),
        py::arg("seed"), py::arg("lr_params") = std::nullopt, py::arg("threads") = 0u,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "mc_p_value",
      [](const NullCalibration& c, double s) { return mc_p_value(c, s).value(); },
      py::arg("calibration"), py::arg("statistic"));
  m.def(
      "evaluate_test",
      [](TestId t, const Array& x, const NullCalibration* cal,
         const std::optional<MixtureParams>& lr) { return evaluate_test(t, view(x), cal, lr); },
      py::arg("test"), py::arg("values"), py::arg("calibration") = nullptr,
      py::arg("lr_params") = std::nullopt);

  py::class_<PowerEstimate>(m, "PowerEstimate")
      .def_readonly("rejections", &PowerEstimate::rejections)
      .def_readonly("reps", &PowerEstimate::reps)
      .def_readonly("alpha", &PowerEstimate::alpha)
      .def_readonly("power", &PowerEstimate::power)
      .def_readonly("ci_low", &PowerEstimate::ci_low)
      .def_readonly("ci_high", &PowerEstimate::ci_high);

  m.def("wilson_estimate", &wilson_estimate, py::arg("rejections"), py::arg("reps"),
        py::arg("alpha") = 0.05);
  m.def(
      "empirical_power",
      [](TestId t, const MixtureParams& alt, std::int64_t n, std::size_t reps, double alpha,
         std::uint64_t seed, const NullCalibration* cal, unsigned threads) {
        py::gil_scoped_release release;
        return empirical_power(t, alt, n, reps, alpha, seed, cal, threads);
      },
      py::arg("test"), py::arg("alternative"), py::arg("n"), py::arg("reps"),
      py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("calibration") = nullptr,
      py::arg("threads") = 0u);
  m.def(
      "estimate_risk",
      [](TestId t, const MixtureParams& alt, std::int64_t n, std::size_t reps, double alpha,
         std::uint64_t seed, const NullCalibration* cal, unsigned threads) {
        py::gil_scoped_release release;
        return estimate_risk(t, alt, n, reps, alpha, seed, cal, threads);
      },
      py::arg("test"), py::arg("alternative"), py::arg("n"), py::arg("reps"),
      py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("calibration") = nullptr,
      py::arg("threads") = 0u);
  m.def("save_calibration", &save_calibration, py::arg("calibration"), py::arg("path"));
  m.def("load_calibration", &load_calibration, py::arg("path"));

  // experiments
  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("kind", &ScenarioConfig::kind)
      .def_readwrite("beta", &ScenarioConfig::beta)
      .def_readwrite("side", &ScenarioConfig::side)
      .def_readwrite("grid", &ScenarioConfig::grid)
      .def_readwrite("n", &ScenarioConfig::n)
      .def_readwrite("reps", &ScenarioConfig::reps)
      .def_readwrite("alpha", &ScenarioConfig::alpha)
      .def_readwrite("calibration_replicates", &ScenarioConfig::calibration_replicates)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("tests", &ScenarioConfig::tests)
      .def_readwrite("threads", &ScenarioConfig::threads)
      .def("validate", &ScenarioConfig::validate);

  m.def("preset", &preset, py::arg("name"));
  m.def(
      "run_scenario_csv",
      [](const ScenarioConfig& c) {
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_scenario(c);
        }
        std::ostringstream out;
        emit_csv(rows, out);
        return out.str();
      },
      py::arg("config"), "Runs the scenario and returns its CSV text.");
}
