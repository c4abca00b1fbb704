#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "diffunet/checks.hpp"
#include "diffunet/error.hpp"
#include "diffunet/harness.hpp"
#include "diffunet/metrics.hpp"
#include "diffunet/network.hpp"
#include "diffunet/regularizers.hpp"
#include "diffunet/signal_model.hpp"
#include "diffunet/solvers.hpp"
#include "diffunet/surrogate.hpp"

namespace py = pybind11;
using namespace diffunet;

namespace {

void bind_model(py::module_& m) {
  m.def("binary_sign", &binary_sign, py::arg("x"), "Sign with sign(0) = +1.");
  m.def("s", &s, py::arg("x"), "Logistic surrogate (1 - e^-x) / (1 + e^-x).");
  m.def("s_prime", &s_prime, py::arg("x"));
  m.def("s_double_prime", &s_double_prime, py::arg("x"));
  m.def("convexity_bracket", &convexity_bracket, py::arg("d"), py::arg("x"));

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("w", &GroundTruth::w)
      .def_readonly("p", &GroundTruth::p)
      .def_readonly("sigma_w", &GroundTruth::sigma_w);

  py::class_<SensorStream>(m, "SensorStream")
      .def_readonly("node", &SensorStream::node)
      .def_readonly("U", &SensorStream::U)
      .def_readonly("noise", &SensorStream::noise)
      .def_readonly("y", &SensorStream::y)
      .def_readonly("d", &SensorStream::d);

  m.def(
      "gen_sparse_vector",
      [](Eigen::Index dim, double p, double sigma_w, std::uint64_t seed) {
        Rng rng(seed);
        return gen_sparse_vector(dim, p, sigma_w, rng);
      },
      py::arg("dim"), py::arg("p") = 0.2, py::arg("sigma_w") = 1.0, py::arg("seed") = 1);
  m.def(
      "gen_sensor_stream",
      [](const GroundTruth& truth, int node, Eigen::Index samples, double sigma_u, double sigma_v,
         std::uint64_t seed) {
        Rng rng(seed);
        return gen_sensor_stream(truth, node, samples, sigma_u, sigma_v, rng);
      },
      py::arg("truth"), py::arg("node"), py::arg("samples"), py::arg("sigma_u") = 1.0,
      py::arg("sigma_v") = 0.01, py::arg("seed") = 1);
  m.def("make_sensor_stream", &make_sensor_stream, py::arg("node"), py::arg("U"), py::arg("noise"),
        py::arg("w_o"), py::arg("sigma_u") = 1.0, py::arg("sigma_v") = 0.0);
}

void bind_regularizers(py::module_& m) {
  py::enum_<RegularizerKind>(m, "RegularizerKind")
      .value("L1", RegularizerKind::L1)
      .value("WeightedL1", RegularizerKind::WeightedL1)
      .value("SmoothedL0", RegularizerKind::SmoothedL0);

  py::class_<RegularizerSpec>(m, "RegularizerSpec")
      .def_static("l1", &RegularizerSpec::l1)
      .def_static("weighted_l1", &RegularizerSpec::weighted_l1, py::arg("eps") = kDefaultWeightedL1Eps)
      .def_static("smoothed_l0", &RegularizerSpec::smoothed_l0, py::arg("sigma") = kDefaultSmoothedL0Sigma)
      .def_readonly("kind", &RegularizerSpec::kind)
      .def_readonly("eps", &RegularizerSpec::eps)
      .def_readonly("sigma", &RegularizerSpec::sigma)
      .def_property_readonly("name", &RegularizerSpec::name)
      .def("__repr__", [](const RegularizerSpec& r) { return "RegularizerSpec(" + r.name() + ")"; });

  m.def("parse_regularizer", &parse_regularizer, py::arg("name"), py::arg("eps") = py::none(),
        py::arg("sigma") = py::none());
  m.def(
      "reg_value", [](const RegularizerSpec& spec, const Eigen::VectorXd& w) { return reg_value(spec, w); },
      py::arg("spec"), py::arg("w"));
  m.def(
      "reg_gradient",
      [](const RegularizerSpec& spec, const Eigen::VectorXd& w) { return reg_gradient(spec, w); },
      py::arg("spec"), py::arg("w"));
}

void bind_network(py::module_& m) {
  py::class_<Topology>(m, "Topology")
      .def(py::init<int, const std::vector<Topology::Edge>&>(), py::arg("nodes"), py::arg("edges"))
      .def_property_readonly("size", &Topology::size)
      .def("neighborhood", &Topology::neighborhood, py::arg("k"))
      .def("degree", &Topology::degree, py::arg("k"))
      .def("adjacent", &Topology::adjacent, py::arg("l"), py::arg("k"))
      .def("edges", &Topology::edges)
      .def("__eq__", [](const Topology& a, const Topology& b) { return a == b; })
      .def("__str__", [](const Topology& t) {
        std::ostringstream os;
        write_topology(os, t);
        return os.str();
      });

  m.def("load_topology", &load_topology, py::arg("path"));
  m.def(
      "parse_topology",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_topology(in, "<string>");
      },
      py::arg("text"));
  m.def("gen_random_topology", &gen_random_topology, py::arg("nodes"), py::arg("radius"),
        py::arg("seed"));

  py::enum_<CombinationRole>(m, "CombinationRole")
      .value("A", CombinationRole::A)
      .value("C", CombinationRole::C);

  py::class_<CombinationMatrix>(m, "CombinationMatrix")
      .def(py::init([](Eigen::MatrixXd W, CombinationRole role) { return CombinationMatrix{std::move(W), role}; }),
           py::arg("W"), py::arg("role") = CombinationRole::A)
      .def_readwrite("W", &CombinationMatrix::W)
      .def_readwrite("role", &CombinationMatrix::role);

  m.def("uniform_policy", &uniform_policy, py::arg("topology"), py::arg("role") = CombinationRole::A);
  m.def("metropolis_policy", &metropolis_policy, py::arg("topology"),
        py::arg("role") = CombinationRole::A);
  m.def("identity_policy", &identity_policy, py::arg("nodes"), py::arg("role") = CombinationRole::C);
  m.def(
      "validate_combination",
      [](const CombinationMatrix& W, const Topology& t) {
        std::vector<py::tuple> out;
        for (const auto& v : validate_combination(W, t).violations) {
          const char* kind = v.kind == Violation::Kind::Negative  ? "negative"
                             : v.kind == Violation::Kind::Support ? "support"
                                                                  : "column-sum";
          out.push_back(py::make_tuple(kind, v.l, v.k, v.value));
        }
        return out;
      },
      py::arg("W"), py::arg("topology"),
      "List of (kind, l, k, value) violations with 0-based ids; empty when valid.");
}

void bind_solvers(py::module_& m) {
  py::enum_<GammaMode>(m, "GammaMode").value("Full", GammaMode::Full).value("OverN", GammaMode::OverN);
  py::enum_<DiffusionVariant>(m, "DiffusionVariant")
      .value("ATC", DiffusionVariant::ATC)
      .value("CTA", DiffusionVariant::CTA);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("mu", &SolverConfig::mu)
      .def_readwrite("node_mu", &SolverConfig::node_mu)
      .def_readwrite("mu_global", &SolverConfig::mu_global)
      .def_readwrite("gamma", &SolverConfig::gamma)
      .def_readwrite("reg", &SolverConfig::reg)
      .def_readwrite("A", &SolverConfig::A)
      .def_readwrite("C", &SolverConfig::C)
      .def_readwrite("iterations", &SolverConfig::iterations)
      .def_readwrite("gamma_mode", &SolverConfig::gamma_mode);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("iteration", &TraceRow::iteration)
      .def_readonly("sq_dev", &TraceRow::sq_dev)
      .def_readonly("msd_db", &TraceRow::msd_db)
      .def_readonly("global_cost", &TraceRow::global_cost);

  py::class_<SolverState>(m, "SolverState")
      .def_readonly("estimates", &SolverState::estimates)
      .def_readonly("iteration", &SolverState::iteration)
      .def_readonly("trace", &SolverState::trace)
      .def_property_readonly("diverged", &SolverState::diverged)
      .def_property_readonly("divergence", [](const SolverState& s) -> py::object {
        if (!s.divergence) return py::none();
        return py::make_tuple(s.divergence->iteration, s.divergence->node);
      });

  m.def(
      "global_cost",
      [](const Eigen::VectorXd& w, const NetworkData& data, double gamma, const RegularizerSpec& reg) {
        return global_cost(w, data, gamma, reg);
      },
      py::arg("w"), py::arg("data"), py::arg("gamma"), py::arg("reg"));
  m.def(
      "global_gradient",
      [](const Eigen::VectorXd& w, const NetworkData& data, double gamma, const RegularizerSpec& reg,
         GammaMode mode) { return global_gradient(w, data, gamma, reg, mode); },
      py::arg("w"), py::arg("data"), py::arg("gamma"), py::arg("reg"), py::arg("mode") = GammaMode::Full);
  m.def(
      "local_cost",
      [](int k, const Eigen::VectorXd& w, const NetworkData& data, const CombinationMatrix& C,
         double gamma, const RegularizerSpec& reg) { return local_cost(k, w, data, C, gamma, reg); },
      py::arg("k"), py::arg("w"), py::arg("data"), py::arg("C"), py::arg("gamma"), py::arg("reg"));
  m.def(
      "local_gradient",
      [](int k, const Eigen::VectorXd& w, const NetworkData& data, const CombinationMatrix& C,
         double gamma, const RegularizerSpec& reg) { return local_gradient(k, w, data, C, gamma, reg); },
      py::arg("k"), py::arg("w"), py::arg("data"), py::arg("C"), py::arg("gamma"), py::arg("reg"));

  auto options = [](const std::optional<Eigen::VectorXd>& truth) {
    TraceOptions opts;
    opts.truth = truth ? &*truth : nullptr;
    return opts;
  };
  m.def(
      "run_centralized_sd",
      [options](const NetworkData& data, const SolverConfig& cfg, const Eigen::VectorXd& w_init,
                std::optional<Eigen::VectorXd> truth) {
        return run_centralized_sd(data, cfg, w_init, options(truth));
      },
      py::arg("data"), py::arg("config"), py::arg("w_init"), py::arg("truth") = py::none());
  m.def(
      "run_single_sensor_sd",
      [options](const NetworkData& data, const SolverConfig& cfg, int sensor,
                const Eigen::VectorXd& w_init, std::optional<Eigen::VectorXd> truth) {
        return run_single_sensor_sd(data, cfg, sensor, w_init, options(truth));
      },
      py::arg("data"), py::arg("config"), py::arg("sensor"), py::arg("w_init"),
      py::arg("truth") = py::none());
  m.def(
      "run_diffusion_sd",
      [options](const NetworkData& data, const Topology& t, const SolverConfig& cfg,
                DiffusionVariant variant, const Eigen::VectorXd& w_init,
                std::optional<Eigen::VectorXd> truth) {
        return run_diffusion_sd(data, t, cfg, variant, w_init, options(truth));
      },
      py::arg("data"), py::arg("topology"), py::arg("config"), py::arg("variant"), py::arg("w_init"),
      py::arg("truth") = py::none());
  m.def(
      "run_diffusion_lms",
      [options](const NetworkData& data, const Topology& t, const SolverConfig& cfg,
                const Eigen::VectorXd& w_init, std::optional<Eigen::VectorXd> truth) {
        return run_diffusion_lms(data, t, cfg, w_init, options(truth));
      },
      py::arg("data"), py::arg("topology"), py::arg("config"), py::arg("w_init"),
      py::arg("truth") = py::none());
}

void bind_harness(py::module_& m) {
  m.def(
      "msd_db", [](const Eigen::VectorXd& w, const Eigen::VectorXd& w_o) { return msd_db(w, w_o); },
      py::arg("w"), py::arg("w_o"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("nodes", &ExperimentConfig::nodes)
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("samples", &ExperimentConfig::samples)
      .def_readwrite("p", &ExperimentConfig::p)
      .def_readwrite("sigma_w", &ExperimentConfig::sigma_w)
      .def_readwrite("sigma_u", &ExperimentConfig::sigma_u)
      .def_readwrite("sigma_v", &ExperimentConfig::sigma_v)
      .def_readwrite("gamma", &ExperimentConfig::gamma)
      .def_readwrite("mu", &ExperimentConfig::mu)
      .def_readwrite("mu_global", &ExperimentConfig::mu_global)
      .def_readwrite("regularizer", &ExperimentConfig::regularizer)
      .def_readwrite("algorithms", &ExperimentConfig::algorithms)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def("set", &apply_setting, py::arg("key"), py::arg("value"),
           "Apply one `key = value` config setting.")
      .def("validate", &ExperimentConfig::validate);

  py::class_<MsdTrace>(m, "MsdTrace")
      .def_readonly("label", &MsdTrace::label)
      .def_readonly("msd_db", &MsdTrace::msd_db)
      .def_readonly("mean_sq_dev", &MsdTrace::mean_sq_dev)
      .def_readonly("per_trial_final", &MsdTrace::per_trial_final)
      .def_readonly("trials_used", &MsdTrace::trials_used);

  py::class_<RunFailure>(m, "RunFailure")
      .def_readonly("trial", &RunFailure::trial)
      .def_readonly("algorithm", &RunFailure::algorithm)
      .def_readonly("iteration", &RunFailure::iteration)
      .def_readonly("node", &RunFailure::node);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("traces", &ExperimentResult::traces)
      .def_readonly("failures", &ExperimentResult::failures)
      .def("trace", &ExperimentResult::trace, py::arg("label"), py::return_value_policy::reference_internal);

  m.def("load_config", &load_config, py::arg("path"), py::arg("base") = ExperimentConfig{});
  m.def("run_experiment", &run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("average_trials", &average_trials, py::arg("label"), py::arg("sq_dev"));
  m.def(
      "to_csv",
      [](const std::vector<MsdTrace>& traces) {
        std::ostringstream os;
        write_csv(os, traces);
        return os.str();
      },
      py::arg("traces"));
  m.def(
      "from_csv",
      [](const std::string& text) {
        std::istringstream in(text);
        return read_csv(in);
      },
      py::arg("text"));
  m.def(
      "to_svg",
      [](const std::vector<MsdTrace>& traces) {
        std::ostringstream os;
        write_svg(os, traces);
        return os.str();
      },
      py::arg("traces"));
  m.def("emit_csv", &emit_csv, py::arg("traces"), py::arg("path"));
  m.def("emit_plot", &emit_plot, py::arg("traces"), py::arg("path"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("detail", &CheckResult::detail);
  m.def("run_property_suite", &run_property_suite, py::arg("seed") = 7);
}

}  // namespace

PYBIND11_MODULE(_diffunet, m) {
  m.doc() = "Diffusion steepest descent for one-bit compressed sensing over sensor networks";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<DisconnectedGraph>(m, "DisconnectedGraph", base.ptr());
  py::register_exception<GenerationFailure>(m, "GenerationFailure", base.ptr());

  bind_model(m);
  bind_regularizers(m);
  bind_network(m);
  bind_solvers(m);
  bind_harness(m);
}
