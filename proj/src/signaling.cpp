#include "polsig/signaling.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"
#include "polsig/rng.hpp"

namespace polsig::signaling {

double posterior(double mu, double delta, double omega) {
  return mu / (1.0 + omega) + (omega / (1.0 + omega)) * delta;
}

LikeTerms like_terms(const Politician& liker, double delta, double front_runner_mu, double omega) {
  const double updated = posterior(liker.mu, delta, omega);
  return {std::abs(liker.mu - front_runner_mu) - std::abs(updated - front_runner_mu),
          std::abs(delta - liker.mu) / liker.sigma};
}

bool like_decision(const Politician& liker, double delta, double front_runner_mu, double omega) {
  return like_terms(liker, delta, front_runner_mu, omega).margin(liker.gamma) > 0.0;
}

void SimulationConfig::validate() const {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw Error(ErrorKind::ConfigError, "omega must be a finite value >= 0");
  if (messages_per_politician < 1)
    throw Error(ErrorKind::ConfigError, "messages per politician must be >= 1");
  if (const auto* h = std::get_if<Homogeneous>(&gamma); h && !(h->gamma >= 0.0))
    throw Error(ErrorKind::ConfigError, "homogeneous gamma must be >= 0");
  if (const auto* h = std::get_if<Heterogeneous>(&gamma)) {
    if (!(h->sd >= 0.0)) throw Error(ErrorKind::ConfigError, "gamma sd must be >= 0");
    // rejection sampling needs a non-negligible share of draws at or above zero
    if (h->mean < -6.0 * h->sd || (h->sd == 0.0 && h->mean < 0.0))
      throw Error(ErrorKind::ConfigError, "gamma distribution has (almost) no mass at or above zero");
  }
}

std::int64_t LikeMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

Eigen::MatrixXd LikeMatrix::to_matrix() const {
  Eigen::MatrixXd m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = static_cast<double>(at(i, j));
  return m;
}

std::vector<Message> draw_messages(std::span<const Politician> politicians, int m,
                                   std::uint64_t seed) {
  auto rng = make_stream(seed, "signaling.messages");
  std::vector<Message> out;
  out.reserve(politicians.size() * static_cast<std::size_t>(m));
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t j = 0; j < politicians.size(); ++j)
    for (int k = 0; k < m; ++k)
      out.push_back({j, politicians[j].mu + politicians[j].sigma * unit(rng)});
  return out;
}

std::vector<double> draw_gammas(std::size_t n, const Heterogeneous& spec, std::uint64_t seed) {
  auto rng = make_stream(seed, "signaling.gamma");
  std::normal_distribution<double> dist(spec.mean, spec.sd);
  std::vector<double> out(n);
  for (auto& g : out) {
    do {
      g = dist(rng);
    } while (g < 0.0);
  }
  return out;
}

LikeMatrix count_likes(std::span<const Politician> politicians, std::span<const Message> messages,
                       const spatial::CompetitionOutcome& competition, double omega) {
  const std::size_t n = politicians.size();
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i)
    target[i] = competition.front_runner_mu(politicians[i].coalition);

  LikeMatrix likes(n);
  for (const auto& msg : messages)
    for (std::size_t i = 0; i < n; ++i)
      if (i != msg.sender && like_decision(politicians[i], msg.delta, target[i], omega))
        ++likes.at(i, msg.sender);
  return likes;
}

SimulationResult simulate(std::span<const Politician> politicians,
                          const spatial::Electorate& electorate, const SimulationConfig& config) {
  config.validate();
  std::vector<Politician> agents(politicians.begin(), politicians.end());
  if (const auto* h = std::get_if<Homogeneous>(&config.gamma)) {
    for (auto& p : agents) p.gamma = h->gamma;
  } else if (const auto* h = std::get_if<Heterogeneous>(&config.gamma)) {
    const auto gammas = draw_gammas(agents.size(), *h, config.seed);
    for (std::size_t i = 0; i < agents.size(); ++i) agents[i].gamma = gammas[i];
  }

  auto competition = spatial::compete(agents, electorate, config.rule);
  const auto messages = draw_messages(agents, config.messages_per_politician, config.seed);
  auto likes = count_likes(agents, messages, competition, config.omega);
  return {std::move(agents), std::move(competition), std::move(likes)};
}

std::vector<Dyad> dyad_table(const SimulationResult& result) {
  const auto& ps = result.politicians;
  std::vector<Dyad> out;
  out.reserve(ps.size() * ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j)
      out.push_back({i, j, result.likes.at(i, j), ps[i].coalition != ps[j].coalition ? 1 : 0});
  return out;
}

double cross_coalition_share(const LikeMatrix& likes, std::span<const Politician> politicians) {
  std::int64_t total = 0, cross = 0;
  for (std::size_t i = 0; i < likes.size(); ++i)
    for (std::size_t j = 0; j < likes.size(); ++j) {
      total += likes.at(i, j);
      if (politicians[i].coalition != politicians[j].coalition) cross += likes.at(i, j);
    }
  return total == 0 ? 0.0 : static_cast<double>(cross) / static_cast<double>(total);
}

std::string like_matrix_csv(const LikeMatrix& likes, std::span<const Politician> politicians) {
  std::string out = "liker_id,sender_id,likes\n";
  for (std::size_t i = 0; i < likes.size(); ++i)
    for (std::size_t j = 0; j < likes.size(); ++j)
      if (i != j)
        out += csv::join_row({politicians[i].id, politicians[j].id, std::to_string(likes.at(i, j))});
  return out;
}

std::string dyads_csv(const SimulationResult& result) {
  std::string out = "liker_id,sender_id,likes,opponents\n";
  for (const auto& d : dyad_table(result))
    out += csv::join_row({result.politicians[d.liker].id, result.politicians[d.sender].id,
                          std::to_string(d.likes), std::to_string(d.opponents)});
  return out;
}

}  // namespace polsig::signaling
