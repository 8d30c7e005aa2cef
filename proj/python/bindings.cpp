#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ilcsos/benchmark_plant.hpp"
#include "ilcsos/cli.hpp"
#include "ilcsos/errors.hpp"
#include "ilcsos/freqdomain.hpp"
#include "ilcsos/simulate.hpp"
#include "ilcsos/timedomain.hpp"
#include "ilcsos/verify.hpp"

namespace py = pybind11;
using namespace ilcsos;

namespace {

py::dict result_dict(const SynthesisResult& r) {
  py::dict d;
  d["gamma"] = r.gamma;
  d["eta"] = r.eta;
  d["gains"] = r.gains;
  d["gain_names"] = r.gain_names;
  d["k"] = r.k_used;
  d["certificate_pass"] = r.certificate_pass;
  d["certificate_residual"] = r.certificate_residual;
  d["not_monotone"] = r.not_monotone;
  return d;
}

UncertainTransferFunction fixed_plant(const std::vector<double>& num, const std::vector<double>& den) {
  UncertainTransferFunction p;
  for (double c : num) p.num.push_back(AffinePoly::constant({}, c));
  for (double c : den) p.den.push_back(AffinePoly::constant({}, c));
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust monotonic-convergence ILC synthesis by SOS programming";

  static py::exception<Error> base(m, "IlcSosError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("jury_margin", &jury_margin, py::arg("coeffs"),
        "Positive iff every root of the polynomial (ascending coefficients) is inside the unit circle.");

  m.def("markov_parameters", &markov_from_transfer_function, py::arg("num"), py::arg("den"), py::arg("n"),
        "Impulse response h_1..h_n of num/den (ascending coefficients in z).");

  m.def(
      "synth_nominal",
      [](const std::vector<double>& num, const std::vector<double>& den, int lead, int lag, double epsilon) {
        FreqSynthesisProblem pb;
        pb.plant = fixed_plant(num, den);
        pb.lfilter = NoncausalFir::decision(lead, lag);
        pb.options.epsilon = epsilon;
        SynthesisResult r;
        {
          py::gil_scoped_release release;
          r = synth_freq_nominal(pb);
        }
        return result_dict(r);
      },
      py::arg("num"), py::arg("den"), py::arg("lead") = 0, py::arg("lag") = 0, py::arg("epsilon") = 1e-3,
      "Frequency-domain synthesis of an FIR learning filter for a fixed plant (Q = 1).");

  m.def(
      "synth_example",
      [](int order, int k, double epsilon) {
        FreqSynthesisProblem pb;
        pb.plant = benchmark_lambda_plant();
        pb.lfilter = NoncausalFir::decision(0, order);
        pb.options.epsilon = epsilon;
        pb.options.k_min = k;
        pb.options.fixed_k = true;
        SynthesisResult r;
        {
          py::gil_scoped_release release;
          r = synth_freq_robust(pb);
        }
        return result_dict(r);
      },
      py::arg("order"), py::arg("k") = 0, py::arg("epsilon") = 1e-3,
      "Robust synthesis on the built-in uncertain second-order example plant.");

  m.def(
      "sampled_gamma_example",
      [](const std::vector<double>& gains, int random_points, int n_omega, std::uint64_t seed) {
        const SampleGrid g = SampleGrid::vertices_and_random(2, random_points, n_omega, seed);
        return sampled_gamma_freq(benchmark_lambda_plant(), NoncausalFir::unit(), NoncausalFir::fixed(gains), g).gamma;
      },
      py::arg("gains"), py::arg("random_points") = 1000, py::arg("n_omega") = 720, py::arg("seed") = 1,
      "Grid maximum of |1 - z L(z) P(z)| over the example plant's uncertainty set.");

  m.def("example_markov", [](double theta, int n) { return markov_from_state_space(benchmark_state_space(theta), n); },
        py::arg("theta"), py::arg("n"));

  m.def("lifted_toeplitz", &lifted_toeplitz, py::arg("markov"));

  m.def(
      "run_ilc",
      [](const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L, const Eigen::VectorXd& y_d,
         const Eigen::VectorXd& d, int trials) {
        TrialConfig c;
        c.y_d = y_d;
        c.d = d;
        c.trials = trials;
        const TrialTrace t = run_ilc(P, Q, L, c);
        py::dict out;
        out["error_norms"] = t.error_norms;
        out["contraction_ratios"] = t.contraction_ratios;
        out["e_infinity"] = t.e_infinity;
        return out;
      },
      py::arg("P"), py::arg("Q"), py::arg("L"), py::arg("y_d"), py::arg("d"), py::arg("trials") = 30);

  m.def(
      "run_mode",
      [](const std::string& mode, const std::string& config, const std::string& out_dir) {
        CliOverrides o;
        if (!out_dir.empty()) o.out_dir = out_dir;
        std::ostringstream log;
        const int status = run_mode(mode, config, o, log);
        return py::make_tuple(status, log.str());
      },
      py::arg("mode"), py::arg("config"), py::arg("out_dir") = "",
      "Run a command-line mode; returns (exit status, log text).");
}
