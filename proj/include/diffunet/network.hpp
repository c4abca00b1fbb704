#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "diffunet/error.hpp"

namespace diffunet {

/// Raised when a topology has more than one connected component.
/// `components()` holds 0-based node ids, each component sorted.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph(std::vector<std::vector<int>> components);
  const std::vector<std::vector<int>>& components() const { return components_; }

 private:
  std::vector<std::vector<int>> components_;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// Undirected connected graph over nodes 0..N-1. The neighborhood of k
/// contains k itself plus every adjacent node, sorted ascending.
class Topology {
 public:
  using Edge = std::pair<int, int>;

  /// Validates ids, rejects self-loops, and checks connectivity.
  /// Duplicate edges collapse.
  Topology(int nodes, const std::vector<Edge>& edges);

  int size() const { return nodes_; }
  bool adjacent(int l, int k) const { return adjacency_[index(l, k)] != 0; }
  bool in_neighborhood(int l, int k) const { return l == k || adjacent(l, k); }
  const std::vector<int>& neighborhood(int k) const { return neighborhoods_[k]; }
  /// |N_k|, counting k itself.
  int degree(int k) const { return static_cast<int>(neighborhoods_[k].size()); }
  /// Edges with first < second, sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.nodes_ == b.nodes_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::size_t index(int l, int k) const { return static_cast<std::size_t>(l) * nodes_ + k; }

  int nodes_;
  std::vector<char> adjacency_;
  std::vector<std::vector<int>> neighborhoods_;
};

/// Parses the edge-list format: one edge per line as two 1-based ids,
/// `#` starts a comment, node count is the largest id seen.
Topology parse_topology(std::istream& in, const std::string& source = "<stream>");
Topology load_topology(const std::filesystem::path& path);

/// Writes the edge-list format, optionally preceded by `#` comment lines.
void write_topology(std::ostream& out, const Topology& topology,
                    const std::vector<std::string>& comments = {});
void save_topology(const std::filesystem::path& path, const Topology& topology,
                   const std::vector<std::string>& comments = {});

inline constexpr int kMaxTopologyAttempts = 1000;

/// Random geometric graph: nodes uniform in the unit square, an edge when the
/// distance is at most `radius`. Attempt a uses Rng::substream(seed, a,
/// kTopologyStream); the first connected draw is returned.
Topology gen_random_topology(int nodes, double radius, std::uint64_t seed);

enum class CombinationRole { A, C };

/// N x N weights; column k holds the weights node k gives to its neighbors.
struct CombinationMatrix {
  Eigen::MatrixXd W;
  CombinationRole role = CombinationRole::A;

  Eigen::Index size() const { return W.rows(); }
  double operator()(int l, int k) const { return W(l, k); }
};

/// W[l][k] = 1 / |N_k| for l in N_k.
CombinationMatrix uniform_policy(const Topology& t, CombinationRole role = CombinationRole::A);

/// Max-degree Metropolis rule: W[l][k] = 1 / max(|N_k|, |N_l|) for neighbors
/// l != k, the diagonal completes each column to one.
CombinationMatrix metropolis_policy(const Topology& t, CombinationRole role = CombinationRole::A);

CombinationMatrix identity_policy(int nodes, CombinationRole role = CombinationRole::C);

/// Builds a policy by name: uniform, metropolis, identity.
CombinationMatrix make_policy(const std::string& name, const Topology& t, CombinationRole role);

inline constexpr double kColumnSumTolerance = 1e-12;

struct Violation {
  enum class Kind { Negative, Support, ColumnSum };
  Kind kind;
  int l;  // -1 for column-sum violations
  int k;
  double value;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks nonnegativity, support within neighborhoods, and unit column sums.
/// Throws DimensionMismatch when W is not N x N.
ValidationReport validate_combination(const CombinationMatrix& m, const Topology& t);

/// One line per violation: `kind l k value`, ids 1-based, `-` for no l.
void print_violations(std::ostream& out, const ValidationReport& report);

}  // namespace diffunet
