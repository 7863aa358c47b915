// Thin Python bindings over the core operations: the closed-form scaling
// law, the variance flow, subordinator quantities, the simulation pipeline,
// the estimators, and the quick self-check suite. Structured results come
// back as plain dicts so downstream code needs nothing beyond the module.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <span>
#include <sstream>

#include "levysv/config.hpp"
#include "levysv/errors.hpp"
#include "levysv/estimators.hpp"
#include "levysv/experiment.hpp"
#include "levysv/increments.hpp"
#include "levysv/subordinator.hpp"
#include "levysv/theory.hpp"
#include "levysv/validation.hpp"
#include "levysv/volatility.hpp"

namespace py = pybind11;
using namespace levysv;

namespace {

DriftSpec make_drift(double coefficient, double gamma) {
  return gamma == 1.0 ? DriftSpec::linear(coefficient)
                      : DriftSpec::power_law(coefficient, gamma);
}

SubordinatorSpec make_subordinator(double drift, double jump_rate,
                                   double x_min, double alpha) {
  return SubordinatorSpec(drift, jump_rate, ParetoJumps{x_min, alpha});
}

py::dict theory_dict(const TheoryValue& value) {
  py::dict d;
  d["branch"] = to_string(value.branch);
  d["value"] = value.finite() ? value.value
                              : -std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace

PYBIND11_MODULE(_levysv, m) {
  m.doc() =
      "Heavy-tailed mean-reverting stochastic volatility: simulation, "
      "moment-scaling estimation, and the closed-form scaling law";

  // Bad config text is invalid input, same as a bad scalar argument.
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // --- closed-form law ---------------------------------------------------
  m.def(
      "theoretical_exponent",
      [](double alpha, double gamma, double q) {
        return theory_dict(
            theory_for_drift(make_drift(1.0, gamma), alpha, q));
      },
      py::arg("alpha"), py::arg("gamma"), py::arg("q"),
      "Scaling exponent A(q) of order-q increment moments; gamma = 1 is the "
      "linear control. Returns {'value', 'branch'}; divergent orders carry "
      "value -inf.");
  m.def(
      "q_star",
      [](double alpha, double gamma) {
        return q_star(ModelParams(alpha, gamma));
      },
      py::arg("alpha"), py::arg("gamma"),
      "Moment order where A(q) leaves the diffusive q/2 line.");
  m.def(
      "blowup_q",
      [](double alpha, double gamma) {
        return blowup_q(ModelParams(alpha, gamma));
      },
      py::arg("alpha"), py::arg("gamma"),
      "Moment order beyond which increment moments are infinite.");
  m.def(
      "stationary_tail_exponent",
      [](double alpha, double gamma) {
        return stationary_tail_exponent(ModelParams(alpha, gamma));
      },
      py::arg("alpha"), py::arg("gamma"),
      "Tail index of the stationary variance law.");

  // --- variance flow and subordinator ------------------------------------
  m.def(
      "flow",
      [](double v0, double dt, double coefficient, double gamma) {
        return flow(v0, dt, make_drift(coefficient, gamma));
      },
      py::arg("v0"), py::arg("dt"), py::arg("coefficient") = 1.0,
      py::arg("gamma") = 3.0,
      "Deterministic variance decay between jumps.");
  m.def(
      "integrated_flow",
      [](double v0, double dt, double coefficient, double gamma) {
        return integrated_flow(v0, dt, make_drift(coefficient, gamma));
      },
      py::arg("v0"), py::arg("dt"), py::arg("coefficient") = 1.0,
      py::arg("gamma") = 3.0,
      "Time integral of the variance decay; the increment variance "
      "contributed by one inter-jump segment.");
  m.def(
      "laplace_exponent",
      [](double s, double drift, double jump_rate, double x_min,
         double alpha) {
        return laplace_exponent(
            make_subordinator(drift, jump_rate, x_min, alpha), s);
      },
      py::arg("s"), py::arg("drift") = 0.0, py::arg("jump_rate") = 1.0,
      py::arg("x_min") = 1.0, py::arg("alpha") = 1.0,
      "Laplace exponent of the driving subordinator.");

  // --- simulation ---------------------------------------------------------
  m.def(
      "simulate_increments",
      [](double alpha, double gamma, std::vector<double> lags,
         std::size_t n_paths, double burn_in, std::uint64_t seed,
         unsigned workers, double coefficient, double jump_rate,
         double x_min) {
        if (lags.empty())
          for (int e = -12; e <= -3; ++e) lags.push_back(std::ldexp(1.0, e));
        const auto table = simulate_increments(
            make_subordinator(0.0, jump_rate, x_min, alpha),
            make_drift(coefficient, gamma), lags, n_paths, burn_in, seed,
            workers);
        py::dict d;
        d["lags"] = table.lags;
        d["dx"] = table.dx;
        d["integrated_variance"] = table.ivar;
        return d;
      },
      py::arg("alpha") = 1.0, py::arg("gamma") = 3.0,
      py::arg("lags") = std::vector<double>{},
      py::arg("n_paths") = std::size_t{1000}, py::arg("burn_in") = 200.0,
      py::arg("seed") = std::uint64_t{20260818}, py::arg("workers") = 1u,
      py::arg("coefficient") = 1.0, py::arg("jump_rate") = 1.0,
      py::arg("x_min") = 1.0,
      "Nested log-price increments over the given lags (default: dyadic "
      "2^-12 .. 2^-3), one stationary start per replica. Returns lists "
      "indexed [lag][replica].");
  m.def(
      "stationary_samples",
      [](double alpha, double gamma, std::size_t n, double burn_in,
         std::uint64_t seed, double coefficient, double jump_rate,
         double x_min) {
        const auto sub = make_subordinator(0.0, jump_rate, x_min, alpha);
        const auto drift = make_drift(coefficient, gamma);
        std::vector<double> out(n);
        for (std::size_t r = 0; r < n; ++r) {
          Rng rng = Rng::for_replica(seed, r);
          out[r] = stationary_sample(sub, drift, burn_in, rng);
        }
        return out;
      },
      py::arg("alpha") = 1.0, py::arg("gamma") = 3.0,
      py::arg("n") = std::size_t{1000}, py::arg("burn_in") = 200.0,
      py::arg("seed") = std::uint64_t{20260818}, py::arg("coefficient") = 1.0,
      py::arg("jump_rate") = 1.0, py::arg("x_min") = 1.0,
      "Draws from the stationary variance law (burned-in paths from 0).");

  // --- estimators ----------------------------------------------------------
  m.def(
      "empirical_moment",
      [](const std::vector<double>& samples, double q) {
        const auto est = empirical_moment(samples, q);
        py::dict d;
        d["value"] = est.value;
        d["stderr"] = est.stderr_;
        d["single_batch"] = est.single_batch;
        return d;
      },
      py::arg("samples"), py::arg("q"),
      "Order-q absolute moment with a batch-mean standard error.");
  m.def(
      "hill_estimator",
      [](std::vector<double> samples, std::size_t k) {
        if (k == 0) k = default_hill_k(samples.size());
        const auto est = hill_estimator(samples, k);
        py::dict d;
        d["tail_index"] = est.tail_index;
        d["stderr"] = est.stderr_;
        d["k"] = k;
        d["degenerate"] = est.degenerate;
        return d;
      },
      py::arg("samples"), py::arg("k") = std::size_t{0},
      "Hill tail-index estimate from the top k+1 order statistics "
      "(k = 0 picks floor(n^(2/3))).");
  m.def(
      "divergence_diagnostic",
      [](const std::vector<double>& samples, double q) {
        return to_string(divergence_diagnostic(samples, q));
      },
      py::arg("samples"), py::arg("q"),
      "'stable', 'heavy', or 'divergent': whether the order-q moment of the "
      "sampled law looks finite.");

  // --- pipeline ------------------------------------------------------------
  m.def(
      "default_config",
      []() { return canonical_config(ExperimentConfig{}); },
      "Canonical text of the default experiment configuration.");
  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const ExperimentConfig cfg = parse_config(config_text);
        const ExperimentReport report = run_experiment_in_memory(cfg, nullptr);
        return report_json(cfg, report);
      },
      py::arg("config_text"),
      "Full in-memory pipeline (simulate, estimate, compare to theory); "
      "returns the report as a JSON string, writes no files.");
  m.def(
      "validate_quick",
      [](unsigned workers) {
        py::list out;
        for (const auto& r : validate_quick(workers)) {
          py::dict d;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("workers") = 0u,
      "Fast self-check suite; every entry should carry pass=True.");
}
