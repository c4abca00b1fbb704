#include "diffunet/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "diffunet/rng.hpp"

namespace diffunet {
namespace {

std::string describe_components(const std::vector<std::vector<int>>& components) {
  std::ostringstream os;
  os << "graph is disconnected (" << components.size() << " components:";
  for (const auto& c : components) {
    os << " {";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i] + 1;
    os << "}";
  }
  os << ")";
  return os.str();
}

std::vector<std::vector<int>> connected_components(const std::vector<std::vector<int>>& hoods) {
  const int n = static_cast<int>(hoods.size());
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<int> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      components[id].push_back(a);
      for (int b : hoods[a]) {
        if (label[b] < 0) {
          label[b] = id;
          stack.push_back(b);
        }
      }
    }
    std::sort(components[id].begin(), components[id].end());
  }
  return components;
}

const char* kind_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Negative:
      return "negative";
    case Violation::Kind::Support:
      return "support";
    case Violation::Kind::ColumnSum:
      return "column-sum";
  }
  return "?";
}

}  // namespace

DisconnectedGraph::DisconnectedGraph(std::vector<std::vector<int>> components)
    : Error(describe_components(components)), components_(std::move(components)) {}

Topology::Topology(int nodes, const std::vector<Edge>& edges)
    : nodes_(nodes), adjacency_(static_cast<std::size_t>(std::max(nodes, 0)) * std::max(nodes, 0), 0) {
  if (nodes < 1) throw InvalidParameter("topology needs at least one node");
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= nodes || b >= nodes)
      throw InvalidParameter("edge references a node outside 1.." + std::to_string(nodes));
    if (a == b) throw InvalidParameter("self-loop on node " + std::to_string(a + 1));
    adjacency_[index(a, b)] = 1;
    adjacency_[index(b, a)] = 1;
  }
  neighborhoods_.resize(nodes);
  for (int k = 0; k < nodes; ++k)
    for (int l = 0; l < nodes; ++l)
      if (l == k || adjacent(l, k)) neighborhoods_[k].push_back(l);

  auto components = connected_components(neighborhoods_);
  if (components.size() > 1) throw DisconnectedGraph(std::move(components));
}

std::vector<Topology::Edge> Topology::edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < nodes_; ++a)
    for (int b = a + 1; b < nodes_; ++b)
      if (adjacent(a, b)) out.emplace_back(a, b);
  return out;
}

Topology parse_topology(std::istream& in, const std::string& source) {
  std::vector<Topology::Edge> edges;
  int max_id = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;

    std::string second, extra;
    if (!(fields >> second) || (fields >> extra))
      throw ParseError(source, line_no, "expected exactly two node ids");
    long a = 0, b = 0;
    try {
      std::size_t pa = 0, pb = 0;
      a = std::stol(first, &pa);
      b = std::stol(second, &pb);
      if (pa != first.size() || pb != second.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "node ids must be integers");
    }
    if (a < 1 || b < 1) throw ParseError(source, line_no, "node ids are 1-based");
    if (a > 1'000'000 || b > 1'000'000) throw ParseError(source, line_no, "node id too large");
    if (a == b) throw ParseError(source, line_no, "self-loop " + first + " " + second);
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
    max_id = std::max<int>(max_id, static_cast<int>(std::max(a, b)));
  }
  if (edges.empty()) throw ParseError(source, 0, "no edges");
  return Topology(max_id, edges);
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file " + path.string());
  return parse_topology(in, path.string());
}

void write_topology(std::ostream& out, const Topology& topology,
                    const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& [a, b] : topology.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

void save_topology(const std::filesystem::path& path, const Topology& topology,
                   const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write topology file " + path.string());
  write_topology(out, topology, comments);
  if (!out) throw IoError("write failed: " + path.string());
}

Topology gen_random_topology(int nodes, double radius, std::uint64_t seed) {
  if (nodes < 2) throw InvalidParameter("random topology needs at least two nodes");
  if (!(radius > 0.0 && radius <= std::sqrt(2.0)))
    throw InvalidParameter("radius must lie in (0, sqrt(2)]");

  const double r2 = radius * radius;
  for (int attempt = 0; attempt < kMaxTopologyAttempts; ++attempt) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(attempt), kTopologyStream);
    std::vector<std::pair<double, double>> pos(nodes);
    for (auto& [x, y] : pos) {
      x = rng.uniform();
      y = rng.uniform();
    }
    std::vector<Topology::Edge> edges;
    for (int a = 0; a < nodes; ++a)
      for (int b = a + 1; b < nodes; ++b) {
        const double dx = pos[a].first - pos[b].first;
        const double dy = pos[a].second - pos[b].second;
        if (dx * dx + dy * dy <= r2) edges.emplace_back(a, b);
      }
    try {
      return Topology(nodes, edges);
    } catch (const DisconnectedGraph&) {
    }
  }
  throw GenerationFailure("no connected topology after " + std::to_string(kMaxTopologyAttempts) +
                          " attempts (radius " + std::to_string(radius) + " too small?)");
}

CombinationMatrix uniform_policy(const Topology& t, CombinationRole role) {
  const int n = t.size();
  CombinationMatrix m{Eigen::MatrixXd::Zero(n, n), role};
  for (int k = 0; k < n; ++k) {
    const double w = 1.0 / t.degree(k);
    for (int l : t.neighborhood(k)) m.W(l, k) = w;
  }
  return m;
}

CombinationMatrix metropolis_policy(const Topology& t, CombinationRole role) {
  const int n = t.size();
  CombinationMatrix m{Eigen::MatrixXd::Zero(n, n), role};
  for (int k = 0; k < n; ++k) {
    double off = 0.0;
    for (int l : t.neighborhood(k)) {
      if (l == k) continue;
      m.W(l, k) = 1.0 / std::max(t.degree(k), t.degree(l));
      off += m.W(l, k);
    }
    m.W(k, k) = 1.0 - off;
  }
  return m;
}

CombinationMatrix identity_policy(int nodes, CombinationRole role) {
  if (nodes < 1) throw InvalidParameter("identity policy needs at least one node");
  return {Eigen::MatrixXd::Identity(nodes, nodes), role};
}

CombinationMatrix make_policy(const std::string& name, const Topology& t, CombinationRole role) {
  if (name == "uniform") return uniform_policy(t, role);
  if (name == "metropolis") return metropolis_policy(t, role);
  if (name == "identity") return identity_policy(t.size(), role);
  throw InvalidParameter("unknown combination policy '" + name +
                         "' (expected uniform, metropolis or identity)");
}

ValidationReport validate_combination(const CombinationMatrix& m, const Topology& t) {
  const int n = t.size();
  if (m.W.rows() != n || m.W.cols() != n)
    throw DimensionMismatch("combination matrix is " + std::to_string(m.W.rows()) + "x" +
                            std::to_string(m.W.cols()) + ", topology has " + std::to_string(n) +
                            " nodes");
  ValidationReport report;
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      const double v = m.W(l, k);
      sum += v;
      if (!(v >= 0.0)) report.violations.push_back({Violation::Kind::Negative, l, k, v});
      if (v != 0.0 && !t.in_neighborhood(l, k))
        report.violations.push_back({Violation::Kind::Support, l, k, v});
    }
    if (!(std::abs(sum - 1.0) <= kColumnSumTolerance))
      report.violations.push_back({Violation::Kind::ColumnSum, -1, k, sum});
  }
  return report;
}

void print_violations(std::ostream& out, const ValidationReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : report.violations) {
    out << kind_name(v.kind) << ' ';
    if (v.l < 0)
      out << '-';
    else
      out << v.l + 1;
    out << ' ' << v.k + 1 << ' ' << v.value << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace diffunet
