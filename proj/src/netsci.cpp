#include "polsig/netsci.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"
#include "polsig/rng.hpp"

namespace polsig::netsci {

WeightedGraph::WeightedGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {}

WeightedGraph WeightedGraph::with_nodes(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return WeightedGraph(std::move(labels));
}

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= nodes_.size() || v >= nodes_.size())
    throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
  if (u == v) throw Error(ErrorKind::InvalidArgument, "self-loop on node " + nodes_[u]);
  if (!std::isfinite(weight)) throw Error(ErrorKind::InvalidArgument, "edge weight not finite");
  if (u > v) std::swap(u, v);
  if (!pairs_.emplace(u, v).second)
    throw Error(ErrorKind::InvalidArgument, "duplicate edge " + nodes_[u] + "--" + nodes_[v]);
  edges_.push_back({u, v, weight});
}

bool WeightedGraph::has_edge(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  return pairs_.count({u, v}) > 0;
}

std::vector<std::vector<std::size_t>> WeightedGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes_.size());
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

Partition singleton_partition(std::size_t n) {
  Partition p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Partition canonical(const Partition& p) {
  std::unordered_map<int, int> map;
  Partition out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [it, _] = map.try_emplace(p[i], static_cast<int>(map.size()));
    out[i] = it->second;
  }
  return out;
}

std::size_t community_count(const Partition& p) {
  return std::set<int>(p.begin(), p.end()).size();
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "pearson: length mismatch");
  if (a.empty()) return std::nullopt;
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - ma, db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationNetwork correlation_network(const Eigen::MatrixXd& matrix, double theta,
                                       std::vector<std::string> labels) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (matrix.rows() != matrix.cols())
    throw Error(ErrorKind::InvalidArgument, "interaction matrix must be square");
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "interaction matrix needs at least 3 nodes");
  if (!(theta >= -1.0 && theta <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "theta must lie in [-1, 1]");
  if (!matrix.allFinite() || (matrix.array() < 0.0).any())
    throw Error(ErrorKind::InvalidArgument, "interaction matrix must be finite and non-negative");
  if (labels.empty()) {
    labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  }
  if (labels.size() != n) throw Error(ErrorKind::InvalidArgument, "label count != matrix size");

  CorrelationNetwork out{WeightedGraph(std::move(labels)), {}};
  for (std::size_t i = 0; i < n; ++i) {
    bool constant = true;
    double first = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n && constant; ++k) {
      if (k == i) continue;
      if (std::isnan(first))
        first = matrix(i, k);
      else if (matrix(i, k) != first)
        constant = false;
    }
    if (constant) out.constant_profiles.push_back(i);
  }

  std::vector<double> a(n - 2), b(n - 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t pos = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        a[pos] = matrix(i, k);
        b[pos] = matrix(j, k);
        ++pos;
      }
      const auto r = pearson(a, b);
      if (r && *r >= theta) out.graph.add_edge(i, j, *r);
    }
  }
  return out;
}

double modularity(const WeightedGraph& graph, const Partition& partition) {
  if (partition.size() != graph.node_count())
    throw Error(ErrorKind::InvalidArgument, "partition does not cover every node");
  const double m = static_cast<double>(graph.edge_count());
  if (m == 0.0) throw Error(ErrorKind::EmptyGraph, "modularity of a graph without edges");

  std::map<int, double> internal, degree;
  for (const auto& e : graph.edges()) {
    const int cu = partition[e.u], cv = partition[e.v];
    degree[cu] += 1.0;
    degree[cv] += 1.0;
    if (cu == cv) internal[cu] += 1.0;
  }
  double q = 0;
  for (const auto& [c, d] : degree) {
    const double frac = d / (2.0 * m);
    q += internal[c] / m - frac * frac;
  }
  return q;
}

namespace {

// Louvain working graph; level 0 has unit weights, aggregated levels carry
// community-to-community weights and internal edge weight as a self-loop.
struct Level {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;  // includes twice the self-loop

  std::size_t size() const { return adj.size(); }
};

Level base_level(const WeightedGraph& g) {
  Level lv;
  const std::size_t n = g.node_count();
  lv.adj.resize(n);
  lv.self_loop.assign(n, 0.0);
  lv.degree.assign(n, 0.0);
  for (const auto& e : g.edges()) {
    lv.adj[e.u].push_back({e.v, 1.0});
    lv.adj[e.v].push_back({e.u, 1.0});
    lv.degree[e.u] += 1.0;
    lv.degree[e.v] += 1.0;
  }
  return lv;
}

// Local moves from the starting assignment `comm`; returns whether any node moved.
bool local_moves(const Level& lv, double m2, Engine& rng, std::vector<int>& comm) {
  const std::size_t n = lv.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[static_cast<std::size_t>(comm[i])] += lv.degree[i];
  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  bool any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i : order) {
      const int own = comm[i];
      const double k = lv.degree[i];
      touched.clear();
      for (const auto& [j, w] : lv.adj[i]) {
        const int c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= k;
      const double own_gain = link[own] - tot[own] * k / m2;
      int best = own;
      double best_gain = own_gain;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == own) continue;
        const double gain = link[c] - tot[c] * k / m2;
        if (2.0 * (gain - own_gain) / m2 > 1e-12 && (best == own || gain > best_gain)) {
          best = c;
          best_gain = gain;
        }
      }
      // leaving for an empty community of its own
      if (best == own && tot[own] > 0.0 && -own_gain * 2.0 / m2 > 1e-12) {
        for (std::size_t c = 0; c < n; ++c)
          if (tot[c] == 0.0 && std::find(comm.begin(), comm.end(), int(c)) == comm.end()) {
            best = int(c);
            break;
          }
      }
      tot[best] += k;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any = true;
      }
      for (int c : touched) link[c] = 0.0;
    }
  }
  return any;
}

// Labels renumbered 0.. in order of first appearance; returns the count.
int compact(std::vector<int>& comm) {
  std::vector<int> relabel(comm.size(), -1);
  int next = 0;
  for (auto& c : comm) {
    if (relabel[static_cast<std::size_t>(c)] < 0) relabel[static_cast<std::size_t>(c)] = next++;
    c = relabel[static_cast<std::size_t>(c)];
  }
  return next;
}

Level aggregate(const Level& lv, const std::vector<int>& comm, std::size_t n_comm) {
  Level next;
  next.adj.resize(n_comm);
  next.self_loop.assign(n_comm, 0.0);
  next.degree.assign(n_comm, 0.0);
  std::vector<std::map<std::size_t, double>> weights(n_comm);
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const auto ci = static_cast<std::size_t>(comm[i]);
    next.self_loop[ci] += lv.self_loop[i];
    next.degree[ci] += lv.degree[i];
    for (const auto& [j, w] : lv.adj[i]) {
      const auto cj = static_cast<std::size_t>(comm[j]);
      if (ci == cj) {
        if (i < j) next.self_loop[ci] += w;
      } else {
        weights[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < n_comm; ++c)
    for (const auto& [d, w] : weights[c]) next.adj[c].push_back({d, w});
  return next;
}

}  // namespace

namespace {

// Sweeps and aggregation from `start` (a partition of the original nodes) until a
// level neither moves a node nor merges communities.
Partition louvain_hierarchy(const WeightedGraph& graph, double m2, Engine& rng, Partition start) {
  Level lv = base_level(graph);
  Partition membership(graph.node_count());
  std::iota(membership.begin(), membership.end(), 0);
  std::vector<int> comm = std::move(start);
  compact(comm);
  for (;;) {
    const bool moved = local_moves(lv, m2, rng, comm);
    const int k = compact(comm);
    for (auto& m : membership) m = comm[static_cast<std::size_t>(m)];
    if (!moved && static_cast<std::size_t>(k) == lv.size()) break;
    lv = aggregate(lv, comm, static_cast<std::size_t>(k));
    comm.resize(lv.size());
    std::iota(comm.begin(), comm.end(), 0);
  }
  return canonical(membership);
}

constexpr int kRestarts = 8;
constexpr int kKicks = 64;

// Louvain from `start`, re-run from its own result until Q stops rising.
Partition iterated(const WeightedGraph& graph, double m2, Engine& rng, Partition start, double& q) {
  Partition p = louvain_hierarchy(graph, m2, rng, std::move(start));
  q = modularity(graph, p);
  for (;;) {
    Partition again = louvain_hierarchy(graph, m2, rng, p);
    const double q2 = modularity(graph, again);
    if (!(q2 > q + 1e-12)) return p;
    p = std::move(again);
    q = q2;
  }
}

// Random split of one community, or a few nodes sent to a neighbour's community.
// Node sweeps can merge but never split communities, so this lets the search
// leave local optima where the better partition cuts an existing community.
Partition kick(const WeightedGraph& graph, const Partition& p, Engine& rng) {
  Partition out = p;
  const int k = static_cast<int>(community_count(p));
  std::uniform_int_distribution<std::size_t> node(0, p.size() - 1);
  if (std::bernoulli_distribution(0.5)(rng)) {
    const int target = p[node(rng)];
    std::bernoulli_distribution coin(0.5);
    for (auto& c : out)
      if (c == target && coin(rng)) c = k;
  } else {
    const auto adj = graph.adjacency();
    const int moves = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int m = 0; m < moves; ++m) {
      const std::size_t v = node(rng);
      if (adj[v].empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, adj[v].size() - 1);
      out[v] = p[adj[v][pick(rng)]];
    }
  }
  return canonical(out);
}

}  // namespace

Partition louvain(const WeightedGraph& graph, std::uint64_t seed) {
  if (graph.edge_count() == 0) throw Error(ErrorKind::EmptyGraph, "louvain on a graph without edges");
  auto rng = make_stream(seed, "netsci.louvain");
  const double m2 = 2.0 * static_cast<double>(graph.edge_count());

  // Several shuffled runs, best Q wins (earlier runs on ties); then perturbations
  // of the best partition, each followed by Louvain again, kept when Q rises.
  Partition best;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRestarts; ++r) {
    double q = 0;
    Partition p = iterated(graph, m2, rng, singleton_partition(graph.node_count()), q);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = std::move(p);
    }
  }
  for (int k = 0; k < kKicks; ++k) {
    double q = 0;
    Partition p = iterated(graph, m2, rng, kick(graph, best, rng), q);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = std::move(p);
    }
  }
  return best;
}

std::vector<double> edge_betweenness(const WeightedGraph& graph) {
  const std::size_t n = graph.node_count();
  // neighbour lists carrying edge indices
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto& ed = graph.edges()[e];
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  std::vector<double> score(graph.edge_count(), 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1L);
    stack.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      stack.push_back(v);
      for (const auto& [w, _] : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const auto w = *it;
      for (const auto& [v, e] : adj[w]) {
        if (dist[v] == dist[w] - 1) {
          const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
          score[e] += c;
          delta[v] += c;
        }
      }
    }
  }
  for (auto& x : score) x /= 2.0;  // each unordered pair was seen from both ends
  return score;
}

namespace {

Partition components(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.u)] = find(e.v);
  Partition p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(find(i));
  return canonical(p);
}

}  // namespace

Partition edge_betweenness_communities(const WeightedGraph& graph) {
  if (graph.edge_count() == 0)
    throw Error(ErrorKind::EmptyGraph, "edge betweenness on a graph without edges");
  const std::size_t n = graph.node_count();
  WeightedGraph work(graph.nodes());
  for (const auto& e : graph.edges()) work.add_edge(e.u, e.v, e.weight);

  Partition best = components(n, work.edges());
  double best_q = modularity(graph, best);
  std::size_t last_count = community_count(best);

  while (work.edge_count() > 0) {
    const auto bc = edge_betweenness(work);
    const double top = *std::max_element(bc.begin(), bc.end());
    std::size_t victim = 0;
    while (bc[victim] < top - 1e-9 * std::max(1.0, top)) ++victim;

    std::vector<Edge> rest;
    rest.reserve(work.edge_count() - 1);
    for (std::size_t e = 0; e < work.edge_count(); ++e)
      if (e != victim) rest.push_back(work.edges()[e]);
    work = WeightedGraph(graph.nodes());
    for (const auto& e : rest) work.add_edge(e.u, e.v, e.weight);

    auto parts = components(n, work.edges());
    const std::size_t count = community_count(parts);
    if (count == last_count) continue;
    last_count = count;
    const double q = modularity(graph, parts);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = std::move(parts);
    }
  }
  return best;
}

std::string_view to_string(CommunityMethod method) {
  return method == CommunityMethod::louvain ? "louvain" : "edge_betweenness";
}

CommunityMethod parse_community_method(std::string_view name) {
  if (name == "louvain") return CommunityMethod::louvain;
  if (name == "edge_betweenness") return CommunityMethod::edge_betweenness;
  throw Error(ErrorKind::ConfigError, "unknown community method '" + std::string(name) + "'");
}

Partition detect_communities(const WeightedGraph& graph, CommunityMethod method,
                             std::uint64_t seed) {
  return method == CommunityMethod::louvain ? louvain(graph, seed)
                                            : edge_betweenness_communities(graph);
}

std::vector<SeriesPoint> modularity_series(std::span<const LabeledMatrix> matrices, double theta,
                                           CommunityMethod method, std::uint64_t seed,
                                           const std::vector<std::string>& node_labels) {
  std::vector<SeriesPoint> out;
  for (const auto& lm : matrices) {
    SeriesPoint pt;
    pt.label = lm.label;
    pt.method = method;
    pt.network = correlation_network(lm.matrix, theta, node_labels);
    pt.partition = detect_communities(pt.network.graph, method, seed);
    pt.q = modularity(pt.network.graph, pt.partition);
    out.push_back(std::move(pt));
  }
  return out;
}

std::string modularity_csv(std::span<const SeriesPoint> series) {
  std::string out = "label,method,Q\n";
  for (const auto& pt : series)
    out += csv::join_row({pt.label, to_string(pt.method), csv::format(pt.q)});
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

void check_cover(const WeightedGraph& g, const Partition& p) {
  if (p.size() != g.node_count())
    throw Error(ErrorKind::InvalidArgument, "partition does not cover every node");
}

}  // namespace

std::string to_graphml(const WeightedGraph& graph, const Partition& partition) {
  check_cover(graph, partition);
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out += "    <node id=\"n" + std::to_string(i) + "\"><data key=\"label\">" +
           xml_escape(graph.nodes()[i]) + "</data><data key=\"community\">" +
           std::to_string(partition[i]) + "</data></node>\n";
  }
  for (const auto& e : graph.edges()) {
    out += "    <edge source=\"n" + std::to_string(e.u) + "\" target=\"n" + std::to_string(e.v) +
           "\"><data key=\"weight\">" + csv::format(e.weight) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string to_dot(const WeightedGraph& graph, const Partition& partition) {
  check_cover(graph, partition);
  std::string out = "graph G {\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    out += "  " + dot_quote(graph.nodes()[i]) + " [community=" + std::to_string(partition[i]) + "];\n";
  for (const auto& e : graph.edges())
    out += "  " + dot_quote(graph.nodes()[e.u]) + " -- " + dot_quote(graph.nodes()[e.v]) +
           " [weight=" + csv::format(e.weight) + "];\n";
  out += "}\n";
  return out;
}

}  // namespace polsig::netsci
