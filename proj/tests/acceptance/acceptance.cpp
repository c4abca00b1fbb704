// Acceptance run on the reference configuration: prints one [PASS]/[FAIL]
// line per criterion and exits non-zero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "diffunet/checks.hpp"
#include "diffunet/harness.hpp"
#include "diffunet/solvers.hpp"

using namespace diffunet;

namespace {

int failures = 0;

void report(const std::string& id, const std::string& name, bool passed, const std::string& detail) {
  std::cout << (passed ? "[PASS] " : "[FAIL] ") << id << ' ' << name << ": " << detail << std::endl;
  if (!passed) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

ExperimentConfig reference(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.topology.file = DIFFUNET_FIXTURE_TOPOLOGY;
  cfg.master_seed = seed;
  return cfg;
}

using Finals = std::map<std::string, double>;

Finals final_msd(const ExperimentConfig& cfg) {
  const ExperimentResult result = run_experiment(cfg);
  for (const auto& f : result.failures)
    std::cout << "  divergence: trial " << f.trial + 1 << ' ' << f.algorithm << " at iteration " << f.iteration
              << std::endl;
  Finals out;
  for (const auto& t : result.traces) out[t.label] = t.msd_db.back();
  return out;
}

}  // namespace

int main() {
  const std::vector<std::uint64_t> seeds{1, 2, 3};

  std::vector<Finals> fig2;
  for (auto seed : seeds) {
    fig2.push_back(final_msd(reference(seed)));
    const Finals& f = fig2.back();
    std::cout << "  seed " << seed << ": centralized " << f.at("centralized") << ", single " << f.at("single")
              << ", atc " << f.at("atc") << ", cta " << f.at("cta") << ", lms " << f.at("lms") << " dB"
              << std::endl;
  }
  const Finals& s1 = fig2.front();

  {
    const double single = s1.at("single"), atc = s1.at("atc");
    const double gain = single - atc;
    const bool ok = gain >= 8.0 && single >= -12.0 && single <= 0.0 && atc <= -14.0;
    report("1", "cooperation gain", ok,
           fmt("single %.2f dB (need [-12, 0]), atc %.2f dB (need <= -14), gain %.2f dB (need >= 8)", single,
               atc, gain));
  }

  {
    const std::vector<std::string> order{"centralized", "atc", "cta", "single"};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::string& lo = order[i];
      const std::string& hi = order[i + 1];
      const bool slack = s1.at(hi) - s1.at(lo) >= 1.0;
      bool every_seed = true;
      for (const auto& f : fig2) every_seed = every_seed && f.at(lo) <= f.at(hi);
      const bool holds = slack || every_seed;
      ok = ok && holds;
      if (!detail.empty()) detail += "; ";
      detail += lo + " <= " + hi + (holds ? " holds" : " fails") +
                fmt(" (seed-1 margin %.2f dB)", s1.at(hi) - s1.at(lo));
    }
    report("2", "final MSD ordering", ok, detail);
  }

  {
    const double gap = s1.at("atc") - s1.at("lms");
    report("3", "LMS below ATC by 0-6 dB", gap >= 0.0 && gap <= 6.0,
           fmt("atc %.2f dB, lms %.2f dB, gap %.2f dB", s1.at("atc"), s1.at("lms"), gap));
  }

  {
    bool ok = true;
    std::string detail;
    for (auto seed : seeds) {
      ExperimentConfig cfg = reference(seed);
      cfg.algorithms = {"atc:l1", "atc:wl1", "atc:sl0"};
      const Finals f = final_msd(cfg);
      const double l1 = f.at("atc:l1"), wl1 = f.at("atc:wl1"), sl0 = f.at("atc:sl0");
      ok = ok && l1 <= wl1 && l1 <= sl0;
      if (!detail.empty()) detail += "; ";
      detail += "seed " + std::to_string(seed) + fmt(": l1 %.2f, wl1 %.2f, sl0 %.2f dB", l1, wl1, sl0);
    }
    report("4", "l1 is the best regularizer", ok, detail);
  }

  {
    const auto checks = run_property_suite();
    auto line = [&](const std::string& id, std::initializer_list<std::size_t> which) {
      bool ok = true;
      std::string name, detail;
      for (auto i : which) {
        ok = ok && checks.at(i).passed;
        name += (name.empty() ? "" : " + ") + checks.at(i).name;
        detail += (detail.empty() ? "" : "; ") + checks.at(i).detail;
      }
      report(id, name, ok, detail);
    };
    line("5a", {0, 1});
    line("5b", {2});
    line("5c", {3});
    line("5d", {4});
    line("5e", {5});
    line("5f", {6});
  }

  {
    Eigen::MatrixXd U(1, 1);
    U(0, 0) = 1.0;
    const NetworkData data{make_sensor_stream(0, U, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1))};
    SolverConfig cfg;
    cfg.gamma = 0.0;
    cfg.iterations = 1;
    const SolverState state = run_centralized_sd(data, cfg, Eigen::VectorXd::Zero(1));
    const double w1 = state.estimate()[0];
    report("6", "one-step centralized oracle", std::abs(w1 - 0.01) <= 1e-15,
           fmt("w1 = %.17g, |w1 - 0.01| = %.3g", w1, std::abs(w1 - 0.01)));
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
