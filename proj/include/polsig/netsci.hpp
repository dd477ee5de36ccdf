#pragma once

// Correlation networks over interaction profiles and modularity-based
// polarization: community detection by Louvain and by Girvan-Newman edge
// betweenness, scored with Newman's modularity on the unweighted adjacency.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace polsig::netsci {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

// Undirected, no self-loops, at most one edge per unordered pair.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::vector<std::string> nodes);
  static WeightedGraph with_nodes(std::size_t n);  // labels "0", "1", ...

  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);
  bool has_edge(std::size_t u, std::size_t v) const;

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Sorted neighbour lists.
  std::vector<std::vector<std::size_t>> adjacency() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

// Community label per node index.
using Partition = std::vector<int>;

Partition singleton_partition(std::size_t n);
// Labels renumbered 0,1,2,... in order of first appearance.
Partition canonical(const Partition& p);
std::size_t community_count(const Partition& p);

// Pearson correlation; nullopt when either vector has zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

struct CorrelationNetwork {
  WeightedGraph graph;
  std::vector<std::size_t> constant_profiles;  // nodes whose off-diagonal row has no variance
};

inline constexpr double kDefaultTheta = 0.1;

// Edge (i,j) with weight r when the Pearson correlation of rows i and j, with
// columns i and j removed from both, is at least theta.
CorrelationNetwork correlation_network(const Eigen::MatrixXd& matrix, double theta = kDefaultTheta,
                                       std::vector<std::string> labels = {});

// Newman modularity of the binarised adjacency. Throws EmptyGraph when m = 0.
double modularity(const WeightedGraph& graph, const Partition& partition);

// Greedy modularity optimisation with node sweeps and aggregation. Node visit
// order is shuffled from `seed`; a move must raise Q by more than 1e-12.
Partition louvain(const WeightedGraph& graph, std::uint64_t seed = 0);

// Shortest-path edge betweenness counted over unordered node pairs, aligned
// with graph.edges().
std::vector<double> edge_betweenness(const WeightedGraph& graph);

// Girvan-Newman: remove the highest-betweenness edge until none remain and
// return the component partition of maximal Q along the way.
Partition edge_betweenness_communities(const WeightedGraph& graph);

enum class CommunityMethod { louvain, edge_betweenness };

std::string_view to_string(CommunityMethod method);
CommunityMethod parse_community_method(std::string_view name);

Partition detect_communities(const WeightedGraph& graph, CommunityMethod method,
                             std::uint64_t seed = 0);

struct LabeledMatrix {
  std::string label;
  Eigen::MatrixXd matrix;
};

struct SeriesPoint {
  std::string label;
  CommunityMethod method = CommunityMethod::louvain;
  double q = 0.0;
  CorrelationNetwork network;
  Partition partition;
};

std::vector<SeriesPoint> modularity_series(std::span<const LabeledMatrix> matrices, double theta,
                                           CommunityMethod method, std::uint64_t seed = 0,
                                           const std::vector<std::string>& node_labels = {});

// `label,method,Q`
std::string modularity_csv(std::span<const SeriesPoint> series);

std::string to_graphml(const WeightedGraph& graph, const Partition& partition);
std::string to_dot(const WeightedGraph& graph, const Partition& partition);

}  // namespace polsig::netsci
