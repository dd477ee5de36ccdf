#pragma once

// Politicians endorse ("like") each other's messages. Voters read a like as a
// signal and shift their belief about the liker toward the message; the liker
// weighs that popularity shift against the authenticity cost of endorsing a
// message far from her own position.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "polsig/spatial.hpp"

namespace polsig::signaling {

using spatial::Politician;

// Belief after observing a like of a message at `delta`: weighted average with
// weight omega on the signal.
double posterior(double mu, double delta, double omega);

struct LikeTerms {
  double popularity = 0.0;    // |mu - f| - |mu* - f|, positive = moves toward the front-runner
  double authenticity = 0.0;  // |delta - mu| / sigma

  double margin(double gamma) const { return popularity - gamma * authenticity; }
};

LikeTerms like_terms(const Politician& liker, double delta, double front_runner_mu, double omega);

// True iff popularity - gamma * authenticity > 0, with gamma = liker.gamma.
bool like_decision(const Politician& liker, double delta, double front_runner_mu, double omega);

struct Message {
  std::size_t sender = 0;
  double delta = 0.0;
};

struct Homogeneous {
  double gamma = 0.0;
};
// Truncated at zero by rejection; drawn once per politician per run.
struct Heterogeneous {
  double mean = 0.1;
  double sd = 0.1;
};
// Use each politician's own gamma field.
struct FromPoliticians {};

using GammaMode = std::variant<Homogeneous, Heterogeneous, FromPoliticians>;

struct SimulationConfig {
  double omega = 1.0;
  int messages_per_politician = 500;
  std::uint64_t seed = 1;
  GammaMode gamma = Heterogeneous{};
  spatial::VotingRule rule = spatial::VotingRule::group_targeting;

  void validate() const;  // throws ConfigError
};

class LikeMatrix {
 public:
  explicit LikeMatrix(std::size_t n = 0) : n_(n), counts_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::int64_t at(std::size_t liker, std::size_t sender) const { return counts_[liker * n_ + sender]; }
  std::int64_t& at(std::size_t liker, std::size_t sender) { return counts_[liker * n_ + sender]; }
  std::int64_t total() const;

  Eigen::MatrixXd to_matrix() const;

  bool operator==(const LikeMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::int64_t> counts_;
};

// Sender-major, message-minor draws delta ~ Normal(mu_j, sigma_j). Depends only
// on (politicians, m, seed), so runs that differ in gamma share their draws.
std::vector<Message> draw_messages(std::span<const Politician> politicians, int m,
                                   std::uint64_t seed);

std::vector<double> draw_gammas(std::size_t n, const Heterogeneous& spec, std::uint64_t seed);

// Applies like_decision for every message and every politician other than the sender.
LikeMatrix count_likes(std::span<const Politician> politicians, std::span<const Message> messages,
                       const spatial::CompetitionOutcome& competition, double omega);

struct SimulationResult {
  std::vector<Politician> politicians;  // input with the gammas actually used
  spatial::CompetitionOutcome competition;
  LikeMatrix likes;
};

SimulationResult simulate(std::span<const Politician> politicians,
                          const spatial::Electorate& electorate, const SimulationConfig& config);

// All ordered pairs, self-pairs included (they carry zero likes and opponents = 0).
struct Dyad {
  std::size_t liker = 0;
  std::size_t sender = 0;
  std::int64_t likes = 0;
  int opponents = 0;
};

std::vector<Dyad> dyad_table(const SimulationResult& result);

// Fraction of all likes that cross coalition lines; 0 when there are no likes.
double cross_coalition_share(const LikeMatrix& likes, std::span<const Politician> politicians);

std::string like_matrix_csv(const LikeMatrix& likes, std::span<const Politician> politicians);
std::string dyads_csv(const SimulationResult& result);

}  // namespace polsig::signaling
