#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "diffunet/error.hpp"
#include "diffunet/harness.hpp"
#include "diffunet/metrics.hpp"
#include "diffunet/solvers.hpp"
#include "diffunet/surrogate.hpp"
#include "test_support.hpp"

using namespace diffunet;
using namespace diffunet::testing;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

SolverConfig identity_config(int nodes, int iterations) {
  SolverConfig cfg;
  cfg.iterations = iterations;
  cfg.A = identity_policy(nodes, CombinationRole::A);
  cfg.C = identity_policy(nodes, CombinationRole::C);
  return cfg;
}

// Reference-sized trial (10 nodes, M = 20, I = 40) on the fixture-seed topology.
struct ReferenceTrial {
  ExperimentConfig cfg;
  Topology topology;
  TrialData trial;
};

ReferenceTrial reference_trial(int index) {
  ExperimentConfig cfg;
  return {cfg, resolve_topology(cfg, 0), generate_trial(cfg, index)};
}

}  // namespace

TEST_CASE("global_cost examples") {
  const NetworkData one{scalar_stream(1.0, 1.0)};
  REQUIRE(one[0].d[0] == 1.0);
  CHECK(global_cost(scalar(0.0), one, 0.0, RegularizerSpec::l1()) == 1.0);
  const double expected = 0.25 + 2.0 * std::log(3.0);
  CHECK(global_cost(scalar(std::log(3.0)), one, 2.0, RegularizerSpec::l1()) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(2.4472).epsilon(1e-4));
  CHECK_THROWS_AS(global_cost(Eigen::VectorXd::Zero(2), one, 0.0, RegularizerSpec::l1()),
                  DimensionMismatch);
  CHECK_THROWS_AS(global_cost(scalar(0.0), NetworkData{}, 0.0, RegularizerSpec::l1()), InvalidParameter);
}

TEST_CASE("global_gradient examples") {
  const NetworkData one{scalar_stream(1.0, 1.0)};
  CHECK(global_gradient(scalar(0.0), one, 0.0, RegularizerSpec::l1())[0] == -1.0);

  Rng rng(6);
  NetworkData data = random_network_data(rng, 3, 6, 4);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd g = global_gradient(zero, data, 0.0, RegularizerSpec::l1());
  for (auto& s : data) s.d = -s.d;
  CHECK(global_gradient(zero, data, 0.0, RegularizerSpec::l1()) == -g);
}

TEST_CASE("cost gradients match central differences on random instances") {
  Rng rng(15);
  const double h = 1e-6;
  const std::vector<RegularizerSpec> regs{RegularizerSpec::smoothed_l0(), RegularizerSpec::smoothed_l0(1.0),
                                          RegularizerSpec::weighted_l1(0.5), RegularizerSpec::l1()};
  for (int i = 0; i < 200; ++i) {
    const NetworkData data = random_network_data(rng, 3, 5, 4);
    const RegularizerSpec& reg = regs[static_cast<std::size_t>(i) % regs.size()];
    Eigen::VectorXd w(4);
    for (auto& v : w) {
      do {
        v = rng.gaussian();
      } while (std::abs(v) < 1e-4);
    }
    const Eigen::VectorXd fd_global =
        finite_difference([&](const Eigen::VectorXd& x) { return global_cost(x, data, 1.0, reg); }, w, h);
    REQUIRE(max_relative_error(global_gradient(w, data, 1.0, reg), fd_global) <= 1e-5);

    const CombinationMatrix C = random_doubly_stochastic(rng, 3);
    const int k = i % 3;
    const Eigen::VectorXd fd_local = finite_difference(
        [&](const Eigen::VectorXd& x) { return local_cost(k, x, data, C, 1.0, reg); }, w, h);
    REQUIRE(max_relative_error(local_gradient(k, w, data, C, 1.0, reg), fd_local) <= 1e-5);
  }
}

TEST_CASE("gamma modes weight the regularizer by gamma or gamma / N") {
  Rng rng(3);
  const NetworkData data = random_network_data(rng, 4, 5, 3);
  Eigen::VectorXd w(3);
  w << 0.5, -1.0, 2.0;
  const auto reg = RegularizerSpec::l1();
  const Eigen::VectorXd base = global_gradient(w, data, 0.0, reg);
  const Eigen::VectorXd sign = reg_gradient(reg, w);
  CHECK((global_gradient(w, data, 8.0, reg, GammaMode::Full) - (base + 8.0 * sign)).norm() < 1e-12);
  CHECK((global_gradient(w, data, 8.0, reg, GammaMode::OverN) - (base + 2.0 * sign)).norm() < 1e-12);
}

TEST_CASE("local_cost examples") {
  Rng rng(8);
  const NetworkData data = random_network_data(rng, 4, 7, 3);
  const auto reg = RegularizerSpec::l1();
  Eigen::VectorXd w(3);
  w << 0.3, -0.2, 1.1;

  SUBCASE("identity weights use only the node's own data") {
    const auto C = identity_policy(4);
    for (int k = 0; k < 4; ++k)
      CHECK(local_cost(k, w, data, C, 2.0, reg) ==
            doctest::Approx(data_cost(data[k], w) + 0.5 * reg_value(reg, w)).epsilon(1e-14));
  }
  SUBCASE("all-positive observations at w = 0") {
    NetworkData pos = data;
    for (auto& s : pos) s.d.setOnes();
    const auto C = random_doubly_stochastic(rng, 4);
    for (int k = 0; k < 4; ++k)
      CHECK(local_cost(k, Eigen::VectorXd::Zero(3), pos, C, 0.0, reg) == doctest::Approx(7.0).epsilon(1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(local_cost(4, w, data, identity_policy(4), 1.0, reg), InvalidParameter);
    CHECK_THROWS_AS(local_cost(0, w, data, identity_policy(3), 1.0, reg), DimensionMismatch);
    CHECK_THROWS_AS(local_gradient(-1, w, data, identity_policy(4), 1.0, reg), InvalidParameter);
  }
}

TEST_CASE("sum of local costs and gradients equals the global ones") {
  Rng rng(44);
  for (int trial = 0; trial < 21; ++trial) {
    const int n = 5;
    const NetworkData data = random_network_data(rng, n, 6, 4);
    const auto C = trial == 0 ? identity_policy(n) : random_doubly_stochastic(rng, n);
    Eigen::VectorXd w(4);
    for (auto& v : w) v = rng.gaussian();
    for (const auto& reg : {RegularizerSpec::l1(), RegularizerSpec::weighted_l1(0.2),
                            RegularizerSpec::smoothed_l0(0.5)}) {
      double cost_sum = 0.0;
      Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(4);
      for (int k = 0; k < n; ++k) {
        cost_sum += local_cost(k, w, data, C, 3.0, reg);
        grad_sum += local_gradient(k, w, data, C, 3.0, reg);
      }
      REQUIRE(relative_error(cost_sum, global_cost(w, data, 3.0, reg)) <= 1e-10);
      REQUIRE(max_relative_error(global_gradient(w, data, 3.0, reg, GammaMode::Full), grad_sum) <= 1e-10);
    }
  }
}

TEST_CASE("local gradient of a one-node network equals the global gradient") {
  Rng rng(2);
  const NetworkData data = random_network_data(rng, 1, 9, 3);
  Eigen::VectorXd w(3);
  w << 0.1, 0.4, -0.7;
  const auto reg = RegularizerSpec::l1();
  const Eigen::VectorXd local = local_gradient(0, w, data, identity_policy(1), 4.0, reg);
  CHECK(local == global_gradient(w, data, 4.0, reg, GammaMode::OverN));
  CHECK(local == global_gradient(w, data, 4.0, reg, GammaMode::Full));
}

TEST_CASE("data term is convex along segments where every observation is consistent") {
  // Within the cone {w : d_i u_i w > 0} each sample's bracket is positive,
  // so the data term is convex along any segment inside it.
  Rng rng(90);
  int checked = 0;
  while (checked < 200) {
    const GroundTruth truth = gen_sparse_vector(6, 0.5, 1.0, rng);
    if (truth.w.isZero(0.0)) continue;
    const SensorStream stream = gen_sensor_stream(truth, 0, 30, 1.0, 0.0, rng);
    auto consistent = [&](const Eigen::VectorXd& w) {
      const Eigen::VectorXd x = stream.U * w;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (stream.d[i] * x[i] <= 0.0) return false;
      return true;
    };
    auto perturbed = [&] {
      Eigen::VectorXd w = (0.5 + 3.0 * rng.uniform()) * truth.w;
      for (auto& v : w) v += 0.05 * rng.gaussian();
      return w;
    };
    const Eigen::VectorXd a = perturbed(), b = perturbed();
    if (!consistent(a) || !consistent(b)) continue;
    const double fa = data_cost(stream, a), fb = data_cost(stream, b);
    for (int i = 0; i <= 10; ++i) {
      const double lambda = i / 10.0;
      const double mid = data_cost(stream, lambda * a + (1.0 - lambda) * b);
      REQUIRE(mid <= lambda * fa + (1.0 - lambda) * fb + 1e-9);
    }
    ++checked;
  }
}

TEST_CASE("centralized SD one-step oracle") {
  const NetworkData one{scalar_stream(1.0, 1.0)};
  SolverConfig cfg;
  cfg.gamma = 0.0;
  cfg.mu_global = 0.01;
  cfg.iterations = 1;
  const SolverState state = run_centralized_sd(one, cfg, scalar(0.0));
  REQUIRE_FALSE(state.diverged());
  CHECK(std::abs(state.estimate()[0] - 0.01) <= 1e-15);
  CHECK(state.iteration == 1);
  CHECK(state.trace.size() == 1);
}

TEST_CASE("centralized SD stays at a stationary point") {
  // Zero regressors give a zero data gradient; the l1 subgradient at 0 is 0.
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(5, 3);
  const NetworkData data{make_sensor_stream(0, U, Eigen::VectorXd::Zero(5), Eigen::VectorXd::Ones(3))};
  SolverConfig cfg;
  cfg.iterations = 25;
  const SolverState state = run_centralized_sd(data, cfg, Eigen::VectorXd::Zero(3));
  CHECK(state.estimate() == Eigen::VectorXd::Zero(3));
}

TEST_CASE("huge step sizes are reported as divergence") {
  Rng rng(10);
  const NetworkData data = random_network_data(rng, 3, 10, 5);
  SolverConfig cfg = identity_config(3, 50);
  cfg.mu = cfg.mu_global = 1e12;
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(5);

  const SolverState central = run_centralized_sd(data, cfg, w0);
  REQUIRE(central.diverged());
  CHECK(central.divergence->iteration == 1);
  CHECK(central.trace.empty());

  const Topology topo(3, {{0, 1}, {1, 2}});
  const SolverState atc = run_diffusion_sd(data, topo, cfg, DiffusionVariant::ATC, w0);
  REQUIRE(atc.diverged());
  CHECK(atc.divergence->node >= 0);
  CHECK(run_diffusion_lms(data, topo, cfg, w0).diverged());
}

TEST_CASE("divergence keeps the partial trace") {
  // The LMS recursion is unstable once mu exceeds 2 / lambda_max(sum u u^T).
  Rng rng(12);
  const NetworkData data = random_network_data(rng, 2, 20, 4);
  const Topology topo(2, {{0, 1}});
  SolverConfig cfg = identity_config(2, 2000);
  cfg.gamma = 0.0;
  cfg.mu = 0.5;
  const SolverState state = run_diffusion_lms(data, topo, cfg, Eigen::VectorXd::Zero(4));
  REQUIRE(state.diverged());
  CHECK(state.divergence->iteration > 1);
  CHECK(static_cast<int>(state.trace.size()) == state.divergence->iteration - 1);
}

TEST_CASE("single-sensor SD on a one-node network equals centralized SD with gamma / N") {
  Rng rng(7);
  const NetworkData data = random_network_data(rng, 1, 12, 5);
  SolverConfig cfg;
  cfg.iterations = 80;
  cfg.gamma_mode = GammaMode::OverN;
  TraceOptions opts;
  opts.keep_history = true;
  const SolverState a = run_single_sensor_sd(data, cfg, 0, Eigen::VectorXd::Zero(5), opts);
  const SolverState b = run_centralized_sd(data, cfg, Eigen::VectorXd::Zero(5), opts);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t r = 0; r < a.history.size(); ++r) REQUIRE(a.history[r] == b.history[r]);
  CHECK_THROWS_AS(run_single_sensor_sd(data, cfg, 1, Eigen::VectorXd::Zero(5)), InvalidParameter);
}

TEST_CASE("diffusion with A = C = I reduces to independent single-sensor SD") {
  Rng rng(19);
  const int n = 5;
  const NetworkData data = random_network_data(rng, n, 10, 6);
  const Topology topo(n, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  const SolverConfig cfg = identity_config(n, 100);
  TraceOptions opts;
  opts.keep_history = true;
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(6);
  for (auto variant : {DiffusionVariant::ATC, DiffusionVariant::CTA}) {
    const SolverState diff = run_diffusion_sd(data, topo, cfg, variant, w0, opts);
    for (int k = 0; k < n; ++k) {
      const SolverState single = run_single_sensor_sd(data, cfg, k, w0, opts);
      REQUIRE(single.history.size() == diff.history.size());
      for (std::size_t r = 0; r < diff.history.size(); ++r)
        REQUIRE(diff.history[r].row(k) == single.history[r].row(0));
    }
  }
}

TEST_CASE("one-node diffusion: ATC, CTA and centralized SD agree bitwise") {
  Rng rng(23);
  const NetworkData data = random_network_data(rng, 1, 15, 4);
  const Topology topo(1, {});
  SolverConfig cfg = identity_config(1, 120);
  cfg.gamma_mode = GammaMode::OverN;
  Rng truth_rng(1);
  const Eigen::VectorXd truth = gen_sparse_vector(4, 0.5, 1.0, truth_rng).w;
  TraceOptions opts;
  opts.truth = &truth;
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(4);
  const SolverState atc = run_diffusion_sd(data, topo, cfg, DiffusionVariant::ATC, w0, opts);
  const SolverState cta = run_diffusion_sd(data, topo, cfg, DiffusionVariant::CTA, w0, opts);
  const SolverState central = run_centralized_sd(data, cfg, w0, opts);
  REQUIRE(atc.trace.size() == 120);
  for (std::size_t r = 0; r < atc.trace.size(); ++r) {
    REQUIRE(atc.trace[r].sq_dev == cta.trace[r].sq_dev);
    REQUIRE(atc.trace[r].sq_dev == central.trace[r].sq_dev);
    REQUIRE(atc.trace[r].global_cost == central.trace[r].global_cost);
  }
  CHECK(atc.estimates == central.estimates);
}

TEST_CASE("diffusion is independent of node labeling") {
  Rng rng(5);
  const int n = 6;
  const NetworkData data = random_network_data(rng, n, 8, 4);
  const Topology topo = gen_random_topology(n, 0.7, 4);
  const std::vector<int> perm{3, 5, 0, 2, 1, 4};  // new id of old node i

  NetworkData permuted(n);
  for (int i = 0; i < n; ++i) {
    permuted[perm[i]] = data[i];
    permuted[perm[i]].node = perm[i];
  }
  std::vector<Topology::Edge> edges;
  for (auto [a, b] : topo.edges()) edges.emplace_back(perm[a], perm[b]);
  const Topology ptopo(n, edges);

  for (auto variant : {DiffusionVariant::ATC, DiffusionVariant::CTA}) {
    SolverConfig cfg;
    cfg.iterations = 60;
    cfg.A = metropolis_policy(topo);
    cfg.C = uniform_policy(topo, CombinationRole::C);
    SolverConfig pcfg = cfg;
    pcfg.A = metropolis_policy(ptopo);
    pcfg.C = uniform_policy(ptopo, CombinationRole::C);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(4);
    const SolverState a = run_diffusion_sd(data, topo, cfg, variant, w0);
    const SolverState b = run_diffusion_sd(permuted, ptopo, pcfg, variant, w0);
    for (int i = 0; i < n; ++i)
      REQUIRE((a.estimates.row(i) - b.estimates.row(perm[i])).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("diffusion rejects inconsistent inputs") {
  Rng rng(1);
  const NetworkData data = random_network_data(rng, 3, 4, 2);
  const Topology path(3, {{0, 1}, {1, 2}});
  SolverConfig cfg = identity_config(3, 5);
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(2);

  SolverConfig off_support = cfg;
  off_support.A.W.setConstant(1.0 / 3.0);  // node 1 and 3 are not neighbors
  CHECK_THROWS_AS(run_diffusion_sd(data, path, off_support, DiffusionVariant::ATC, w0), InvalidParameter);

  SolverConfig small = cfg;
  small.C = identity_policy(2);
  CHECK_THROWS_AS(run_diffusion_sd(data, path, small, DiffusionVariant::ATC, w0), DimensionMismatch);
  CHECK_THROWS_AS(run_diffusion_sd(data, Topology(2, {{0, 1}}), cfg, DiffusionVariant::CTA, w0),
                  DimensionMismatch);
  CHECK_THROWS_AS(run_diffusion_sd(data, path, cfg, DiffusionVariant::ATC, Eigen::VectorXd::Zero(3)),
                  DimensionMismatch);

  SolverConfig bad_mu = cfg;
  bad_mu.mu = 0.0;
  CHECK_THROWS_AS(run_diffusion_sd(data, path, bad_mu, DiffusionVariant::ATC, w0), InvalidParameter);
  SolverConfig no_iters = cfg;
  no_iters.iterations = 0;
  CHECK_THROWS_AS(run_centralized_sd(data, no_iters, w0), InvalidParameter);
}

TEST_CASE("per-node step sizes") {
  Rng rng(3);
  const NetworkData data = random_network_data(rng, 2, 6, 3);
  const Topology topo(2, {{0, 1}});
  SolverConfig cfg = identity_config(2, 10);
  cfg.node_mu = {0.01, 0.02};
  const SolverState diff = run_diffusion_sd(data, topo, cfg, DiffusionVariant::ATC, Eigen::VectorXd::Zero(3));
  SolverConfig second = cfg;
  second.node_mu.clear();
  second.mu = 0.02;
  const SolverState single = run_single_sensor_sd(data, second, 1, Eigen::VectorXd::Zero(3));
  CHECK(diff.estimates.row(1) == single.estimates.row(0));
  cfg.node_mu = {0.01};
  CHECK_THROWS_AS(run_diffusion_sd(data, topo, cfg, DiffusionVariant::ATC, Eigen::VectorXd::Zero(3)),
                  DimensionMismatch);
}

TEST_CASE("diffusion LMS") {
  SUBCASE("one-step oracle") {
    Eigen::MatrixXd U(1, 1);
    U(0, 0) = 1.0;
    const NetworkData one{make_sensor_stream(0, U, Eigen::VectorXd::Zero(1), scalar(1.0))};
    REQUIRE(one[0].y[0] == 1.0);
    SolverConfig cfg = identity_config(1, 1);
    cfg.gamma = 0.0;
    const SolverState state = run_diffusion_lms(one, Topology(1, {}), cfg, scalar(0.0));
    CHECK(std::abs(state.estimate()[0] - 0.01) <= 1e-15);
  }
  SUBCASE("noiseless well-posed data converges to the truth") {
    Rng rng(27);
    const GroundTruth truth = gen_sparse_vector(20, 0.2, 1.0, rng);
    NetworkData data;
    for (int k = 0; k < 10; ++k) data.push_back(gen_sensor_stream(truth, k, 200, 1.0, 0.0, rng));
    const Topology topo = gen_random_topology(10, 0.5, kFixtureTopologySeed);
    SolverConfig cfg;
    cfg.gamma = 0.0;
    cfg.mu = 0.002;
    cfg.iterations = 500;
    cfg.A = uniform_policy(topo);
    cfg.C = identity_policy(10);
    TraceOptions opts;
    opts.truth = &truth.w;
    const SolverState state = run_diffusion_lms(data, topo, cfg, Eigen::VectorXd::Zero(20), opts);
    REQUIRE_FALSE(state.diverged());
    CHECK(state.trace.back().msd_db < -40.0);
  }
}

TEST_CASE("trace rows record MSD and cost per iteration") {
  const ReferenceTrial ref = reference_trial(0);
  SolverConfig cfg;
  cfg.iterations = 30;
  cfg.A = uniform_policy(ref.topology);
  cfg.C = identity_policy(10);
  TraceOptions opts;
  opts.truth = &ref.trial.truth.w;
  const SolverState state =
      run_diffusion_sd(ref.trial.data, ref.topology, cfg, DiffusionVariant::ATC, Eigen::VectorXd::Zero(20), opts);
  REQUIRE(state.trace.size() == 30);
  for (int r = 0; r < 30; ++r) CHECK(state.trace[r].iteration == r + 1);

  double mean_sq = 0.0;
  for (int k = 0; k < 10; ++k) mean_sq += squared_deviation(state.estimate(k), ref.trial.truth.w);
  mean_sq /= 10.0;
  CHECK(state.trace.back().sq_dev == doctest::Approx(mean_sq).epsilon(1e-14));
  CHECK(state.trace.back().msd_db == doctest::Approx(10.0 * std::log10(mean_sq)).epsilon(1e-14));
  const Eigen::VectorXd mean_est = state.estimates.colwise().mean().transpose();
  CHECK(state.trace.back().global_cost ==
        doctest::Approx(global_cost(mean_est, ref.trial.data, cfg.gamma, cfg.reg)).epsilon(1e-14));

  opts.msd_node = 3;
  const SolverState node =
      run_diffusion_sd(ref.trial.data, ref.topology, cfg, DiffusionVariant::ATC, Eigen::VectorXd::Zero(20), opts);
  CHECK(node.trace.back().sq_dev == squared_deviation(node.estimate(3), ref.trial.truth.w));
}

TEST_CASE("solver runs are deterministic") {
  const ReferenceTrial ref = reference_trial(2);
  SolverConfig cfg;
  cfg.iterations = 50;
  cfg.A = uniform_policy(ref.topology);
  cfg.C = identity_policy(10);
  TraceOptions opts;
  opts.truth = &ref.trial.truth.w;
  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(20);
  const SolverState a = run_diffusion_sd(ref.trial.data, ref.topology, cfg, DiffusionVariant::CTA, w0, opts);
  const SolverState b = run_diffusion_sd(ref.trial.data, ref.topology, cfg, DiffusionVariant::CTA, w0, opts);
  CHECK(a.estimates == b.estimates);
  for (std::size_t r = 0; r < a.trace.size(); ++r) REQUIRE(a.trace[r].sq_dev == b.trace[r].sq_dev);
}

// Stated property on the reference configuration. It does not hold: with
// gamma = 10 the l1 subgradient moves every near-zero coordinate by
// mu * gamma = 0.01 per step, and the resulting chatter raises the cost by
// up to ~0.4 on some iterations. Kept as an expected failure.
TEST_CASE("centralized SD with mu = 0.001 never increases the global cost" * doctest::should_fail()) {
  for (int t = 0; t < 5; ++t) {
    const ReferenceTrial ref = reference_trial(t);
    SolverConfig cfg;
    cfg.mu_global = 0.001;
    cfg.iterations = 100;
    const SolverState state = run_centralized_sd(ref.trial.data, cfg, Eigen::VectorXd::Zero(20));
    REQUIRE_FALSE(state.diverged());
    double previous = global_cost(Eigen::VectorXd::Zero(20), ref.trial.data, cfg.gamma, cfg.reg);
    for (const auto& row : state.trace) {
      CHECK(row.global_cost <= previous);
      previous = row.global_cost;
    }
  }
}

TEST_CASE("centralized SD with mu = 0.001 descends on the data term") {
  for (int t = 0; t < 5; ++t) {
    const ReferenceTrial ref = reference_trial(t);
    SolverConfig cfg;
    cfg.mu_global = 0.001;
    cfg.gamma = 0.0;
    cfg.iterations = 100;
    const SolverState state = run_centralized_sd(ref.trial.data, cfg, Eigen::VectorXd::Zero(20));
    double previous = global_cost(Eigen::VectorXd::Zero(20), ref.trial.data, 0.0, cfg.reg);
    for (const auto& row : state.trace) {
      REQUIRE(row.global_cost <= previous);
      previous = row.global_cost;
    }
  }
}
