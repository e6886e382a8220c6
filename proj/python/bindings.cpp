#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gedsense/detector.hpp"
#include "gedsense/errors.hpp"
#include "gedsense/numerics.hpp"
#include "gedsense/optimizer.hpp"
#include "gedsense/presets.hpp"
#include "gedsense/report_io.hpp"
#include "gedsense/simulator.hpp"
#include "gedsense/spectral.hpp"

namespace py = pybind11;
using namespace gedsense;

namespace {

std::vector<Complex> to_vector(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<Complex> to_array(const std::vector<Complex>& v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_gedsense, m) {
  m.doc() = "Generalized energy detection, sensing-time optimization and Monte Carlo validation";

  auto base = py::register_exception<Error>(m, "GedsenseError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DegeneratePlanError>(m, "DegeneratePlanError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<InsufficientSamplesError>(m, "InsufficientSamplesError", base.ptr());
  py::register_exception<NonUnimodalError>(m, "NonUnimodalError", base.ptr());

  // numerics
  m.def("erf", &gedsense::erf, py::arg("x"));
  m.def("erfc", &gedsense::erfc, py::arg("x"));
  m.def("erfc_inv", &erfc_inv, py::arg("y"));
  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init([](double abs_tol, int max_iter) { return Tolerance{abs_tol, max_iter}; }),
           py::arg("abs_tol") = 1e-6, py::arg("max_iter") = 200)
      .def_readwrite("abs_tol", &Tolerance::abs_tol)
      .def_readwrite("max_iter", &Tolerance::max_iter);
  m.def(
      "maximize_unimodal",
      [](const std::function<double(double)>& f, double lo, double hi, const Tolerance& tol) {
        const auto r = maximize_unimodal(f, lo, hi, tol);
        return py::make_tuple(r.argmax, r.max);
      },
      py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("tol") = Tolerance{});

  // spectral
  py::enum_<BandLayout>(m, "BandLayout")
      .value("lower_edge", BandLayout::lower_edge)
      .value("centered", BandLayout::centered);
  py::class_<BandConfig>(m, "BandConfig")
      .def(py::init([](double total, double target, double white) { return BandConfig{total, target, white}; }),
           py::arg("total_hz"), py::arg("target_hz"), py::arg("white_hz"))
      .def_readwrite("total_hz", &BandConfig::total_hz)
      .def_readwrite("target_hz", &BandConfig::target_hz)
      .def_readwrite("white_hz", &BandConfig::white_hz);
  py::class_<SubbandPlan>(m, "SubbandPlan")
      .def_readonly("n_samples", &SubbandPlan::n_samples)
      .def_readonly("n_target", &SubbandPlan::n_target)
      .def_readonly("n_white", &SubbandPlan::n_white)
      .def_readonly("beta", &SubbandPlan::beta);
  py::class_<SubbandEnergies>(m, "SubbandEnergies")
      .def(py::init([](double target, double white) { return SubbandEnergies{target, white}; }),
           py::arg("target_avg"), py::arg("white_avg"))
      .def_readonly("target_avg", &SubbandEnergies::target_avg)
      .def_readonly("white_avg", &SubbandEnergies::white_avg);
  m.def("plan_subbands", &plan_subbands, py::arg("band"), py::arg("sensing_time"),
        py::arg("layout") = BandLayout::lower_edge);
  m.def("plan_from_counts", &plan_from_counts, py::arg("n_samples"), py::arg("n_target"),
        py::arg("layout") = BandLayout::lower_edge);
  m.def(
      "unitary_dft", [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& x) {
        return to_array(unitary_dft(std::span<const Complex>(to_vector(x))));
      },
      py::arg("samples"));
  m.def(
      "subband_energies",
      [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& bins, const SubbandPlan& plan) {
        return subband_energies(to_vector(bins), plan);
      },
      py::arg("bins"), py::arg("plan"));

  // detector
  py::enum_<Label>(m, "Label").value("white", Label::white).value("non_white", Label::non_white);
  py::class_<H1Theory>(m, "H1Theory")
      .def_static("ged", &H1Theory::ged, py::arg("snr"), py::arg("n_target"), py::arg("beta"))
      .def_static("ced_limit", &H1Theory::ced_limit, py::arg("snr"), py::arg("n_target"))
      .def_readonly("snr", &H1Theory::snr)
      .def_readonly("mean", &H1Theory::mean)
      .def_readonly("std", &H1Theory::std);
  m.def("ged_statistic", [](const SubbandEnergies& e, const SubbandPlan& p) { return ged_statistic(e, p).value; },
        py::arg("energies"), py::arg("plan"));
  m.def("ced_statistic", &ced_statistic, py::arg("energies"), py::arg("noise_variance"), py::arg("plan"));
  m.def("pf_theory", &pf_theory, py::arg("threshold"));
  m.def("pd_theory", &pd_theory, py::arg("threshold"), py::arg("h1"));
  m.def("threshold_for_pf", &threshold_for_pf, py::arg("target_pf"));
  m.def("detection_loss_eta", &detection_loss_eta, py::arg("target_pf"), py::arg("snr"), py::arg("n_target"),
        py::arg("beta"));
  m.def(
      "decide", [](double statistic, double threshold) { return statistic < threshold ? Label::white : Label::non_white; },
      py::arg("statistic"), py::arg("threshold"));

  // optimizer
  py::enum_<DetectorMode>(m, "DetectorMode").value("ged", DetectorMode::ged).value("ced", DetectorMode::ced);
  py::class_<ThroughputConfig>(m, "ThroughputConfig")
      .def(py::init<>())
      .def_readwrite("frame_duration", &ThroughputConfig::frame_duration)
      .def_readwrite("prior_h0", &ThroughputConfig::prior_h0)
      .def_readwrite("prior_h1", &ThroughputConfig::prior_h1)
      .def_readwrite("snr_secondary", &ThroughputConfig::snr_secondary)
      .def_readwrite("snr_primary_at_cr", &ThroughputConfig::snr_primary_at_cr)
      .def_readwrite("target_pd", &ThroughputConfig::target_pd)
      .def_readwrite("band", &ThroughputConfig::band)
      .def_readwrite("snr_target", &ThroughputConfig::snr_target);
  py::class_<ObjectiveCoefficients>(m, "ObjectiveCoefficients")
      .def_readonly("a", &ObjectiveCoefficients::a)
      .def_readonly("b", &ObjectiveCoefficients::b)
      .def_readonly("psi", &ObjectiveCoefficients::psi)
      .def_readonly("psi_tilde", &ObjectiveCoefficients::psi_tilde)
      .def_readonly("rate_h0", &ObjectiveCoefficients::rate_h0)
      .def_readonly("rate_h1", &ObjectiveCoefficients::rate_h1);
  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("optimal_sensing_time", &OptimizationResult::optimal_sensing_time)
      .def_readonly("optimal_threshold", &OptimizationResult::optimal_threshold)
      .def_readonly("max_throughput", &OptimizationResult::max_throughput)
      .def_readonly("iterations", &OptimizationResult::iterations);
  m.def("coefficients", &coefficients, py::arg("config"), py::arg("mode") = DetectorMode::ged);
  m.def("threshold_schedule", &threshold_schedule, py::arg("coefficients"), py::arg("sensing_time"));
  m.def("objective", &objective, py::arg("coefficients"), py::arg("sensing_time"), py::arg("frame_duration"));
  m.def("optimize_sensing_time", &optimize_sensing_time, py::arg("config"), py::arg("tol") = Tolerance{},
        py::arg("mode") = DetectorMode::ged);
  m.def("tv_band_throughput", &presets::tv_band_throughput);

  // simulator
  py::enum_<ChannelKind>(m, "ChannelKind")
      .value("awgn", ChannelKind::awgn)
      .value("rayleigh_block", ChannelKind::rayleigh_block);
  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("sensing_time", &Scenario::sensing_time)
      .def_readwrite("band", &Scenario::band)
      .def("plan", &Scenario::plan)
      .def("snr", &Scenario::snr);
  m.def("qpsk_sensing", &presets::qpsk_sensing, py::arg("white_hz") = 4.28e6,
        py::arg("channel") = ChannelKind::awgn, py::arg("uncertainty_db") = 0.0);
  m.def("rolloff_sensing", &presets::rolloff_sensing, py::arg("channel") = ChannelKind::awgn);
  py::class_<MonteCarloReport>(m, "MonteCarloReport")
      .def_readonly("trials", &MonteCarloReport::trials)
      .def_readonly("seed", &MonteCarloReport::seed)
      .def_readonly("threshold", &MonteCarloReport::threshold)
      .def_readonly("empirical_pf", &MonteCarloReport::empirical_pf)
      .def_readonly("pf_stderr", &MonteCarloReport::pf_stderr)
      .def_readonly("empirical_pd", &MonteCarloReport::empirical_pd)
      .def_readonly("pd_stderr", &MonteCarloReport::pd_stderr)
      .def_readonly("theory_pf", &MonteCarloReport::theory_pf)
      .def_readonly("theory_pd", &MonteCarloReport::theory_pd)
      .def_readonly("ced_empirical_pf", &MonteCarloReport::ced_empirical_pf)
      .def("to_json", [](const MonteCarloReport& r) { return to_json(r); });
  m.def(
      "monte_carlo",
      [](const Scenario& sc, double threshold, std::size_t trials, std::uint64_t seed, unsigned jobs) {
        py::gil_scoped_release release;
        return monte_carlo(sc, threshold, {trials, seed, jobs});
      },
      py::arg("scenario"), py::arg("threshold"), py::arg("trials") = 2000, py::arg("seed") = 1,
      py::arg("jobs") = 1);
}
