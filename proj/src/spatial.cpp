#include "polsig/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "polsig/error.hpp"

namespace polsig::spatial {

std::string_view to_string(ElectorateKind kind) {
  switch (kind) {
    case ElectorateKind::empirical_discrete: return "empirical_discrete";
    case ElectorateKind::normal_discrete: return "normal_discrete";
    case ElectorateKind::normal_continuous: return "normal_continuous";
  }
  return "?";
}

ElectorateKind parse_electorate_kind(std::string_view name) {
  for (auto k : {ElectorateKind::empirical_discrete, ElectorateKind::normal_discrete,
                 ElectorateKind::normal_continuous})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::ConfigError, "unknown electorate kind '" + std::string(name) + "'");
}

std::string_view to_string(VotingRule rule) {
  return rule == VotingRule::group_targeting ? "group_targeting" : "proximity";
}

VotingRule parse_voting_rule(std::string_view name) {
  if (name == "group_targeting") return VotingRule::group_targeting;
  if (name == "proximity") return VotingRule::proximity;
  throw Error(ErrorKind::ConfigError, "unknown voting rule '" + std::string(name) + "'");
}

Electorate::Electorate(std::vector<VoterGroup> groups, ElectorateKind kind)
    : groups_(std::move(groups)), kind_(kind) {
  if (groups_.empty()) throw Error(ErrorKind::InvalidArgument, "electorate has no groups");
  double total = 0;
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    const auto& g = groups_[k];
    if (!(g.weight > 0.0 && g.weight <= 1.0))
      throw Error(ErrorKind::InvalidArgument, "group weight outside (0,1]");
    if (k > 0 && !(g.ideology > groups_[k - 1].ideology))
      throw Error(ErrorKind::InvalidArgument, "group ideologies must be strictly increasing");
    total += g.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "group weights sum to " + std::to_string(total));
}

double Electorate::mean() const {
  double m = 0;
  for (const auto& g : groups_) m += g.weight * g.ideology;
  return m;
}

double Electorate::stddev() const {
  const double m = mean();
  double v = 0;
  for (const auto& g : groups_) v += g.weight * (g.ideology - m) * (g.ideology - m);
  return std::sqrt(v);
}

namespace {

std::vector<VoterGroup> normalised(std::vector<VoterGroup> groups) {
  std::erase_if(groups, [](const VoterGroup& g) { return !(g.weight > 0.0); });
  double total = 0;
  for (const auto& g : groups) total += g.weight;
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidShare, "electorate carries no mass");
  for (auto& g : groups) g.weight /= total;
  return groups;
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

}  // namespace

Electorate make_empirical_electorate(const std::array<double, 5>& shares, double null_share) {
  auto check = [](double s) {
    if (!(s >= 0.0 && s <= 1.0))
      throw Error(ErrorKind::InvalidShare, "share " + std::to_string(s) + " outside [0,1]");
  };
  check(null_share);
  std::vector<VoterGroup> groups;
  for (std::size_t b = 0; b < shares.size(); ++b) {
    check(shares[b]);
    groups.push_back({static_cast<double>(b + 1), shares[b] + null_share / 5.0});
  }
  return Electorate(normalised(std::move(groups)), ElectorateKind::empirical_discrete);
}

Electorate make_normal_electorate(ElectorateKind kind, double mean, double stddev) {
  if (!std::isfinite(mean) || !(stddev >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "normal electorate needs finite mean and stddev >= 0");
  std::vector<VoterGroup> groups;

  if (kind == ElectorateKind::normal_discrete) {
    for (int b = 1; b <= 5; ++b) {
      double w;
      if (stddev == 0.0) {
        // degenerate normal: everything lands on the bin containing the mean
        const double lo = b == 1 ? -INFINITY : b - 0.5;
        const double hi = b == 5 ? INFINITY : b + 0.5;
        w = (mean >= lo && mean < hi) ? 1.0 : 0.0;
      } else {
        const double lo = b == 1 ? 0.0 : normal_cdf(b - 0.5, mean, stddev);
        const double hi = b == 5 ? 1.0 : normal_cdf(b + 0.5, mean, stddev);
        w = hi - lo;
      }
      groups.push_back({static_cast<double>(b), w});
    }
  } else if (kind == ElectorateKind::normal_continuous) {
    const std::size_t n = kContinuousGridPoints;
    const double step = (kAxisMax - kAxisMin) / static_cast<double>(n - 1);
    std::size_t nearest = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = kAxisMin + step * static_cast<double>(k);
      if (std::abs(x - mean) < std::abs(kAxisMin + step * nearest - mean)) nearest = k;
      double w = 0.0;
      if (stddev > 0.0) {
        const double z = (x - mean) / stddev;
        w = std::exp(-0.5 * z * z);
      }
      groups.push_back({x, w});
    }
    if (stddev == 0.0) groups[nearest].weight = 1.0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "make_normal_electorate needs a normal kind");
  }
  return Electorate(normalised(std::move(groups)), kind);
}

void validate(const Politician& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw Error(ErrorKind::InvalidArgument, "politician '" + p.id + "': sigma must be > 0");
  if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma))
    throw Error(ErrorKind::InvalidArgument, "politician '" + p.id + "': gamma must be >= 0");
  if (p.coalition < 0)
    throw Error(ErrorKind::InvalidArgument, "politician '" + p.id + "': negative coalition");
  if (!std::isfinite(p.mu))
    throw Error(ErrorKind::InvalidArgument, "politician '" + p.id + "': mu not finite");
}

double distance(const Politician& p, const VoterGroup& g) {
  if (g.weight == 0.0)
    throw Error(ErrorKind::ZeroWeight, "voter group at " + std::to_string(g.ideology));
  return (p.mu - g.ideology) / g.weight;
}

namespace {

int coalition_count(std::span<const Politician> politicians) {
  int n = 0;
  for (const auto& p : politicians) {
    validate(p);
    n = std::max(n, p.coalition + 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& p : politicians) seen[static_cast<std::size_t>(p.coalition)] = true;
  for (int c = 0; c < n; ++c)
    if (!seen[static_cast<std::size_t>(c)])
      throw Error(ErrorKind::EmptyCoalition, "coalition " + std::to_string(c) + " has no members");
  if (n == 0) throw Error(ErrorKind::EmptyCoalition, "no politicians");
  return n;
}

}  // namespace

CompetitionOutcome compete(std::span<const Politician> politicians, const Electorate& electorate,
                           VotingRule rule) {
  const int n_coalitions = coalition_count(politicians);
  const auto& groups = electorate.groups();
  const std::size_t n = politicians.size();

  CompetitionOutcome out;
  out.votes.assign(n, 0.0);
  // Closeness of each politician to the group backing her; only group targeting uses it to
  // separate politicians who court equally heavy groups.
  std::vector<double> closeness(n, 0.0);

  if (rule == VotingRule::group_targeting) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::abs(distance(politicians[i], groups[0]));
      for (std::size_t k = 1; k < groups.size(); ++k) {
        const double d = std::abs(distance(politicians[i], groups[k]));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      out.votes[i] = groups[best].weight;
      closeness[i] = best_d;
    }
  } else {
    for (int c = 0; c < n_coalitions; ++c) {
      for (const auto& g : groups) {
        std::size_t winner = n;
        double best_d = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (politicians[i].coalition != c) continue;
          const double d = std::abs(distance(politicians[i], g));
          if (winner == n || d < best_d || (d == best_d && politicians[i].id < politicians[winner].id)) {
            winner = i;
            best_d = d;
          }
        }
        out.votes[winner] += g.weight;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int c = politicians[i].coalition;
    auto it = out.front_runner.find(c);
    if (it == out.front_runner.end()) {
      out.front_runner.emplace(c, FrontRunner{i, politicians[i].id, politicians[i].mu});
      continue;
    }
    const std::size_t cur = it->second.index;
    bool better = out.votes[i] > out.votes[cur];
    if (out.votes[i] == out.votes[cur]) {
      if (closeness[i] != closeness[cur])
        better = closeness[i] < closeness[cur];
      else
        better = politicians[i].id < politicians[cur].id;
    }
    if (better) it->second = FrontRunner{i, politicians[i].id, politicians[i].mu};
  }
  return out;
}

std::vector<double> target_ideology(std::span<const Politician> politicians,
                                    const Electorate& electorate, VotingRule rule) {
  const auto outcome = compete(politicians, electorate, rule);
  std::vector<double> out;
  out.reserve(politicians.size());
  for (const auto& p : politicians) out.push_back(outcome.front_runner_mu(p.coalition));
  return out;
}

void assign_coalitions_by_rank(std::span<Politician> politicians, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > politicians.size())
    throw Error(ErrorKind::InvalidArgument, "coalition count must be in 1..#politicians");
  std::vector<std::size_t> order(politicians.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (politicians[a].mu != politicians[b].mu) return politicians[a].mu < politicians[b].mu;
    return politicians[a].id < politicians[b].id;
  });
  const std::size_t total = politicians.size();
  for (std::size_t r = 0; r < total; ++r)
    politicians[order[r]].coalition = static_cast<int>(r * static_cast<std::size_t>(n) / total);
}

MedianVoterReport median_voter_experiment(std::span<const Politician> politicians,
                                          const Electorate& empirical, VotingRule rule) {
  const double m = empirical.mean();
  const double s = empirical.stddev();
  return {
      target_ideology(politicians, empirical, rule),
      target_ideology(politicians, make_normal_electorate(ElectorateKind::normal_discrete, m, s), rule),
      target_ideology(politicians, make_normal_electorate(ElectorateKind::normal_continuous, m, s),
                      rule),
  };
}

double mean_extremity(std::span<const double> targets) {
  if (targets.empty()) return 0.0;
  double total = 0;
  for (double t : targets) total += std::abs(t - 3.0);
  return total / static_cast<double>(targets.size());
}

}  // namespace polsig::spatial
