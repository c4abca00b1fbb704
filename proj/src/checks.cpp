#include "diffunet/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "diffunet/harness.hpp"
#include "diffunet/network.hpp"
#include "diffunet/regularizers.hpp"
#include "diffunet/rng.hpp"
#include "diffunet/signal_model.hpp"
#include "diffunet/solvers.hpp"
#include "diffunet/surrogate.hpp"

namespace diffunet {
namespace {

constexpr int kGradientInstances = 200;
constexpr double kGradientTolerance = 1e-5;
constexpr double kDecompositionTolerance = 1e-10;

std::string format(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& w, double h) {
  Eigen::VectorXd g(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    Eigen::VectorXd plus = w, minus = w;
    plus[j] += h;
    minus[j] -= h;
    g[j] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

double relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
  const double scale = std::max(analytic.lpNorm<Eigen::Infinity>(), 1e-300);
  return (analytic - numeric).lpNorm<Eigen::Infinity>() / scale;
}

// Coordinates drawn as scale * N(0,1), redrawn until |w_m| > 10 h.
Eigen::VectorXd smooth_point(Rng& rng, Eigen::Index dim, double scale, double h) {
  Eigen::VectorXd w(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    do {
      w[m] = scale * rng.gaussian();
    } while (std::abs(w[m]) <= 10.0 * h);
  }
  return w;
}

NetworkData random_data(Rng& rng, int nodes, Eigen::Index samples, Eigen::Index dim) {
  GroundTruth truth = gen_sparse_vector(dim, 0.5, 1.0, rng);
  NetworkData data;
  for (int k = 0; k < nodes; ++k) data.push_back(gen_sensor_stream(truth, k, samples, 1.0, 0.1, rng));
  return data;
}

// Convex combination of random permutation matrices.
CombinationMatrix random_doubly_stochastic(Rng& rng, int n) {
  CombinationMatrix c{Eigen::MatrixXd::Zero(n, n), CombinationRole::C};
  std::vector<int> perm(n);
  const int terms = 4;
  std::vector<double> weights(terms);
  double total = 0.0;
  for (auto& w : weights) total += (w = 0.1 + rng.uniform());
  for (int t = 0; t < terms; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[static_cast<int>(rng.uniform() * (i + 1))]);
    for (int i = 0; i < n; ++i) c.W(i, perm[i]) += weights[t] / total;
  }
  return c;
}

RegularizerSpec regularizer_for(int instance) {
  switch (instance % 3) {
    case 0:
      return RegularizerSpec::l1();
    case 1:
      return RegularizerSpec::weighted_l1(0.5);
    default:
      return RegularizerSpec::smoothed_l0(1.0);
  }
}

CheckResult check_regularizer_gradients(Rng& rng) {
  double worst = 0.0;
  const std::vector<RegularizerSpec> specs{RegularizerSpec::l1(),
                                           RegularizerSpec::weighted_l1(0.5),
                                           RegularizerSpec::weighted_l1(),
                                           RegularizerSpec::smoothed_l0(1.0),
                                           RegularizerSpec::smoothed_l0()};
  for (const auto& spec : specs) {
    // Points and step follow the penalty's own length scale.
    const double scale = spec.kind == RegularizerKind::WeightedL1   ? std::max(*spec.eps, 1e-10)
                         : spec.kind == RegularizerKind::SmoothedL0 ? *spec.sigma
                                                                     : 1.0;
    const double h = 1e-6 * scale;
    for (int i = 0; i < kGradientInstances; ++i) {
      const Eigen::VectorXd w = smooth_point(rng, 5, 2.0 * scale, h);
      const Eigen::VectorXd numeric =
          central_difference([&](const Eigen::VectorXd& v) { return reg_value(spec, v); }, w, h);
      worst = std::max(worst, relative_error(reg_gradient(spec, w), numeric));
    }
  }
  return {"regularizer gradients vs central differences", worst <= kGradientTolerance,
          "worst relative error " + format(worst)};
}

CheckResult check_cost_gradients(Rng& rng) {
  double worst_global = 0.0, worst_local = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < kGradientInstances; ++i) {
    const NetworkData data = random_data(rng, 3, 5, 4);
    const RegularizerSpec reg = regularizer_for(i);
    const double gamma = 1.0;
    const Eigen::VectorXd w = smooth_point(rng, 4, 1.0, h);

    const Eigen::VectorXd numeric_global = central_difference(
        [&](const Eigen::VectorXd& v) { return global_cost(v, data, gamma, reg); }, w, h);
    worst_global = std::max(worst_global,
                            relative_error(global_gradient(w, data, gamma, reg, GammaMode::Full),
                                           numeric_global));

    const CombinationMatrix C = random_doubly_stochastic(rng, 3);
    const int k = i % 3;
    const Eigen::VectorXd numeric_local = central_difference(
        [&](const Eigen::VectorXd& v) { return local_cost(k, v, data, C, gamma, reg); }, w, h);
    worst_local = std::max(worst_local,
                           relative_error(local_gradient(k, w, data, C, gamma, reg), numeric_local));
  }
  const double worst = std::max(worst_global, worst_local);
  return {"global/local cost gradients vs central differences", worst <= kGradientTolerance,
          "worst relative error global " + format(worst_global) + ", local " + format(worst_local)};
}

CheckResult check_convexity_grid() {
  int failures = 0;
  double smallest = INFINITY;
  for (int i = -1000; i <= 1000; ++i) {
    if (i == 0) continue;
    const double x = i * 0.01;
    const double v = convexity_bracket(binary_sign(x), x);
    smallest = std::min(smallest, v);
    if (!(v > 0.0)) ++failures;
  }
  return {"convexity bracket positive on |x| <= 10, step 0.01", failures == 0,
          std::to_string(failures) + " nonpositive points, minimum " + format(smallest)};
}

CheckResult check_decomposition(Rng& rng) {
  double worst = 0.0;
  const int n = 5;
  for (int trial = 0; trial < 21; ++trial) {
    const NetworkData data = random_data(rng, n, 6, 4);
    const CombinationMatrix C = trial == 0 ? identity_policy(n) : random_doubly_stochastic(rng, n);
    const Eigen::VectorXd w = smooth_point(rng, 4, 1.0, 0.0);
    for (int r = 0; r < 3; ++r) {
      const RegularizerSpec reg = regularizer_for(r);
      const double gamma = 2.5;
      const double global = global_cost(w, data, gamma, reg);
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += local_cost(k, w, data, C, gamma, reg);
      worst = std::max(worst, std::abs(sum - global) / std::abs(global));

      const Eigen::VectorXd g = global_gradient(w, data, gamma, reg, GammaMode::Full);
      Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(w.size());
      for (int k = 0; k < n; ++k) g_sum += local_gradient(k, w, data, C, gamma, reg);
      worst = std::max(worst, relative_error(g, g_sum));
    }
  }
  return {"sum of local costs equals global cost (C = I and 20 doubly stochastic C)",
          worst <= kDecompositionTolerance, "worst relative error " + format(worst)};
}

bool same_histories(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b,
                    int row_a, int row_b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r)
    if (a[r].row(row_a) != b[r].row(row_b)) return false;
  return true;
}

CheckResult check_reduction_laws(Rng& rng) {
  std::vector<std::string> broken;
  TraceOptions opts;
  opts.keep_history = true;
  opts.record_cost = false;

  {
    const int n = 4;
    const NetworkData data = random_data(rng, n, 8, 5);
    const Topology topo(n, {{0, 1}, {1, 2}, {2, 3}});
    SolverConfig cfg;
    cfg.iterations = 60;
    cfg.A = identity_policy(n, CombinationRole::A);
    cfg.C = identity_policy(n, CombinationRole::C);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(5);
    for (auto variant : {DiffusionVariant::ATC, DiffusionVariant::CTA}) {
      const SolverState diff = run_diffusion_sd(data, topo, cfg, variant, w0, opts);
      for (int k = 0; k < n; ++k) {
        const SolverState single = run_single_sensor_sd(data, cfg, k, w0, opts);
        if (!same_histories(diff.history, single.history, k, 0))
          broken.push_back(std::string(variant == DiffusionVariant::ATC ? "ATC" : "CTA") +
                           " with A=C=I differs from single-sensor SD at node " +
                           std::to_string(k + 1));
      }
    }
  }
  {
    const NetworkData data = random_data(rng, 1, 10, 5);
    const Topology topo(1, {});
    SolverConfig cfg;
    cfg.iterations = 60;
    cfg.A = identity_policy(1, CombinationRole::A);
    cfg.C = identity_policy(1, CombinationRole::C);
    cfg.gamma_mode = GammaMode::OverN;
    const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(5);
    const SolverState atc = run_diffusion_sd(data, topo, cfg, DiffusionVariant::ATC, w0, opts);
    const SolverState cta = run_diffusion_sd(data, topo, cfg, DiffusionVariant::CTA, w0, opts);
    const SolverState central = run_centralized_sd(data, cfg, w0, opts);
    if (!same_histories(atc.history, cta.history, 0, 0)) broken.push_back("N=1: ATC differs from CTA");
    if (!same_histories(atc.history, central.history, 0, 0))
      broken.push_back("N=1: ATC differs from centralized SD");
  }
  std::string detail = broken.empty() ? "bitwise-equal iterates" : broken.front();
  return {"diffusion reduction laws", broken.empty(), detail};
}

CheckResult check_policies() {
  std::vector<Topology> topologies;
  topologies.push_back(Topology(2, {{0, 1}}));
  topologies.push_back(Topology(3, {{0, 1}, {1, 2}}));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) topologies.push_back(gen_random_topology(10, 0.5, seed));
  topologies.push_back(gen_random_topology(10, 0.5, kFixtureTopologySeed));

  int violations = 0;
  for (const auto& t : topologies) {
    for (const auto& m : {uniform_policy(t), metropolis_policy(t), identity_policy(t.size())})
      violations += static_cast<int>(validate_combination(m, t).violations.size());
  }
  return {"every combination policy passes validation", violations == 0,
          std::to_string(topologies.size()) + " topologies, " + std::to_string(violations) +
              " violations"};
}

CheckResult check_determinism(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.trials = 4;
  cfg.iterations = 40;
  cfg.master_seed = seed;
  auto render = [&](int threads) {
    cfg.threads = threads;
    std::ostringstream os;
    write_csv(os, run_experiment(cfg).traces);
    return os.str();
  };
  const std::string first = render(1);
  const std::string second = render(1);
  const std::string parallel = render(2);
  const bool ok = first == second && first == parallel;
  return {"same master seed gives byte-identical CSV", ok,
          ok ? std::to_string(first.size()) + " bytes, serial and parallel identical"
             : "CSV output differs between runs"};
}

}  // namespace

std::vector<CheckResult> run_property_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> results;
  results.push_back(check_regularizer_gradients(rng));
  results.push_back(check_cost_gradients(rng));
  results.push_back(check_convexity_grid());
  results.push_back(check_decomposition(rng));
  results.push_back(check_reduction_laws(rng));
  results.push_back(check_policies());
  results.push_back(check_determinism(seed));
  return results;
}

bool print_check_results(std::ostream& out, const std::vector<CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace diffunet
