#pragma once

// One-dimensional spatial competition: voter groups on a 1..5 ideology axis,
// politicians sorted into coalitions, and the within-coalition contest that
// picks each coalition's front-runner.

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polsig::spatial {

inline constexpr double kAxisMin = 1.0;
inline constexpr double kAxisMax = 5.0;
inline constexpr std::size_t kContinuousGridPoints = 1001;

enum class ElectorateKind { empirical_discrete, normal_discrete, normal_continuous };

std::string_view to_string(ElectorateKind kind);
ElectorateKind parse_electorate_kind(std::string_view name);

struct VoterGroup {
  double ideology = 0.0;
  double weight = 0.0;
};

class Electorate {
 public:
  // Validates: weights in (0,1] summing to 1 within 1e-9; ideology strictly increasing.
  Electorate(std::vector<VoterGroup> groups, ElectorateKind kind);

  const std::vector<VoterGroup>& groups() const noexcept { return groups_; }
  ElectorateKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return groups_.size(); }

  double mean() const;
  double stddev() const;  // population moments of the weighted distribution

 private:
  std::vector<VoterGroup> groups_;
  ElectorateKind kind_;
};

// Bin shares for ideology 1..5 and the share of respondents who declined to
// answer; the null share is spread uniformly across the five bins.
Electorate make_empirical_electorate(const std::array<double, 5>& shares, double null_share);

// Normal mass with the given moments. normal_discrete integrates the density
// over unit bins centred on 1..5 (tails folded into the end bins);
// normal_continuous weights a 1001-point grid over [1,5] by the density.
// Groups that receive no mass are dropped.
Electorate make_normal_electorate(ElectorateKind kind, double mean, double stddev);

struct Politician {
  std::string id;
  double mu = 3.0;
  double sigma = 1.0;
  int coalition = 0;
  double gamma = 0.0;
};

// Throws InvalidArgument for sigma <= 0, gamma < 0 or a negative coalition.
void validate(const Politician& p);

// Signed (mu - group ideology) / group weight; positive when the politician
// sits to the left (higher values) of the group. Throws ZeroWeight.
double distance(const Politician& p, const VoterGroup& g);

enum class VotingRule {
  // Each politician courts the group with the smallest |d| and receives its weight.
  group_targeting,
  // Within each coalition every group backs the member with the smallest |d|.
  proximity,
};

std::string_view to_string(VotingRule rule);
VotingRule parse_voting_rule(std::string_view name);

struct FrontRunner {
  std::size_t index = 0;  // into the politician list
  std::string id;
  double mu = 0.0;
};

struct CompetitionOutcome {
  std::vector<double> votes;               // aligned with the politician list
  std::map<int, FrontRunner> front_runner;  // coalition -> winner

  double front_runner_mu(int coalition) const { return front_runner.at(coalition).mu; }
};

// Number of coalitions = 1 + max coalition label. Throws EmptyCoalition when a
// label in 0..n-1 has no member. Ties resolve toward the smaller |d| (group
// targeting only) and then the smallest id.
CompetitionOutcome compete(std::span<const Politician> politicians, const Electorate& electorate,
                           VotingRule rule = VotingRule::group_targeting);

// Front-runner ideology of each politician's coalition.
std::vector<double> target_ideology(std::span<const Politician> politicians,
                                    const Electorate& electorate,
                                    VotingRule rule = VotingRule::group_targeting);

// Assigns coalitions by sorting on mu (ties by id) and cutting into n
// contiguous blocks of near-equal size; block 0 holds the lowest mu.
void assign_coalitions_by_rank(std::span<Politician> politicians, int n);

// Targets under the three electorate shapes built from the same survey shares;
// the normal variants reuse the empirical mean and standard deviation.
struct MedianVoterReport {
  std::vector<double> empirical_discrete;
  std::vector<double> normal_discrete;
  std::vector<double> normal_continuous;
};

MedianVoterReport median_voter_experiment(std::span<const Politician> politicians,
                                          const Electorate& empirical,
                                          VotingRule rule = VotingRule::group_targeting);

// Mean |target - centre| with centre = 3 on the 1..5 axis.
double mean_extremity(std::span<const double> targets);

}  // namespace polsig::spatial
