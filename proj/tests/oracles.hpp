#pragma once
// Slow, obviously-correct reference computations the library is checked against.
// Nothing here calls into polsig except for plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polsig/spatial.hpp"

namespace oracle {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// Solve (X'X) b = X'y by Gaussian elimination with partial pivoting.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& y) {
  const std::size_t n = x.size(), p = x.front().size();
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c)
      for (std::size_t k = 0; k < n; ++k) a[r][c] += x[k][r] * x[k][c];
    for (std::size_t k = 0; k < n; ++k) a[r][p] += x[k][r] * y[k];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> b(p);
  for (std::size_t r = 0; r < p; ++r) b[r] = a[r][p] / a[r][r];
  return b;
}

// Q = 1/(2m) sum_ij (a_ij - k_i k_j / 2m) delta(c_i, c_j), straight from the definition.
inline double modularity(std::size_t n, const EdgeList& edges, const std::vector<int>& part) {
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1;
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
  const double two_m = 2.0 * static_cast<double>(edges.size());
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (part[i] == part[j]) q += a[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

// Every set partition of n nodes with at most max_blocks blocks (restricted growth strings).
inline void for_each_partition(std::size_t n, int max_blocks,
                               const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> p(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      visit(p);
      return;
    }
    for (int c = 0; c <= used && c < max_blocks; ++c) {
      p[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
}

struct BestPartition {
  double q = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> argmax;  // all partitions within 1e-12 of the best
};

inline BestPartition best_partition(std::size_t n, const EdgeList& edges,
                                    int max_blocks = std::numeric_limits<int>::max()) {
  BestPartition best;
  for_each_partition(n, max_blocks, [&](const std::vector<int>& p) {
    const double q = modularity(n, edges, p);
    if (q > best.q + 1e-12) {
      best.q = q;
      best.argmax = {p};
    } else if (std::abs(q - best.q) <= 1e-12) {
      best.argmax.push_back(p);
    }
  });
  return best;
}

inline std::vector<std::vector<int>> bfs_distances(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<std::size_t> q;
    q.push(s);
    d[s][s] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u])
        if (d[s][v] < 0) {
          d[s][v] = d[s][u] + 1;
          q.push(v);
        }
    }
  }
  return d;
}

// Edge betweenness over unordered pairs {s,t}: the share of shortest s-t paths using
// edge (u,v) is sigma_su * sigma_vt / sigma_st when d(s,u) + 1 + d(v,t) = d(s,t),
// either orientation. Path counts come from all-pairs BFS distances.
inline std::vector<double> edge_betweenness(std::size_t n, const EdgeList& edges) {
  const auto d = bfs_distances(n, edges);
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v)
      if (d[s][v] >= 0) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d[s][a] < d[s][b]; });
    sigma[s][s] = 1.0;
    for (auto v : order)
      for (auto [a, b] : edges) {
        if (b == v && d[s][a] == d[s][v] - 1) sigma[s][v] += sigma[s][a];
        if (a == v && d[s][b] == d[s][v] - 1) sigma[s][v] += sigma[s][b];
      }
  }
  std::vector<double> out(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = s + 1; t < n; ++t) {
        if (d[s][t] < 0) continue;
        if (d[s][u] >= 0 && d[v][t] >= 0 && d[s][u] + 1 + d[v][t] == d[s][t])
          out[e] += sigma[s][u] * sigma[v][t] / sigma[s][t];
        if (d[s][v] >= 0 && d[u][t] >= 0 && d[s][v] + 1 + d[u][t] == d[s][t])
          out[e] += sigma[s][v] * sigma[u][t] / sigma[s][t];
      }
  }
  return out;
}

// Pearson r via raw sums.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    syy += y[k] * y[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// The full (i,k) distance matrix scanned exhaustively.
struct CompeteOracle {
  std::vector<double> votes;
  std::map<int, std::size_t> front_runner;
};

inline CompeteOracle compete(const std::vector<polsig::spatial::Politician>& ps,
                             const std::vector<polsig::spatial::VoterGroup>& groups, bool targeting) {
  const std::size_t n = ps.size(), K = groups.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(K));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < K; ++k) dist[i][k] = std::abs((ps[i].mu - groups[k].ideology) / groups[k].weight);

  CompeteOracle out;
  out.votes.assign(n, 0.0);
  std::vector<double> closeness(n, 0.0);
  int max_c = 0;
  for (const auto& p : ps) max_c = std::max(max_c, p.coalition);
  if (targeting) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto it = std::min_element(dist[i].begin(), dist[i].end());
      out.votes[i] = groups[static_cast<std::size_t>(it - dist[i].begin())].weight;
      closeness[i] = *it;
    }
  } else {
    for (int c = 0; c <= max_c; ++c)
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
          if (ps[i].coalition == c) members.push_back(i);
        std::sort(members.begin(), members.end(), [&](auto a, auto b) {
          return dist[a][k] != dist[b][k] ? dist[a][k] < dist[b][k] : ps[a].id < ps[b].id;
        });
        out.votes[members.front()] += groups[k].weight;
      }
  }
  for (int c = 0; c <= max_c; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (ps[i].coalition == c) members.push_back(i);
    std::sort(members.begin(), members.end(), [&](auto a, auto b) {
      if (out.votes[a] != out.votes[b]) return out.votes[a] > out.votes[b];
      if (closeness[a] != closeness[b]) return closeness[a] < closeness[b];
      return ps[a].id < ps[b].id;
    });
    out.front_runner[c] = members.front();
  }
  return out;
}

// Partitions equal up to relabelling.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto [i1, n1] = ab.emplace(a[k], b[k]);
    auto [i2, n2] = ba.emplace(b[k], a[k]);
    if (i1->second != b[k] || i2->second != a[k]) return false;
  }
  return true;
}

}  // namespace oracle
