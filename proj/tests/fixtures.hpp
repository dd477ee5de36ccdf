#pragma once
// Synthetic panels generated straight from the fixed-effects model equation.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "polsig/econometrics.hpp"

namespace fixtures {

struct Planted {
  double beta = -0.3;       // Likes
  double beta_opp = 1.5;    // Likes x Opponent
  double lambda = 0.002;    // Likes^2
  double lambda_opp = -0.001;
  double opp = -2.0;
  double following = 0.7;
};

struct PlantedPanel {
  std::vector<polsig::econometrics::PanelRow> rows;
  Eigen::VectorXd y;  // noise-free votes, real-valued
  std::map<std::string, double> entity_effect, period_effect;
};

// n politicians in two coalitions, all ordered pairs i != j, `periods` periods.
// Votes follow the model exactly; the integer `votes` field is left at 0 and the
// response is returned separately so the fit can be checked to machine precision.
inline PlantedPanel planted_panel(unsigned seed, const Planted& b = {}, int n = 8, int periods = 3) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> likes(0, 40);
  std::bernoulli_distribution follow(0.5);
  std::normal_distribution<double> fe(0.0, 3.0);
  PlantedPanel out;
  std::vector<std::string> ids, labels;
  for (int k = 0; k < n; ++k) {
    ids.push_back("p" + std::to_string(10 + k));
    out.entity_effect[ids.back()] = fe(gen);
  }
  for (int t = 0; t < periods; ++t) {
    labels.push_back("t" + std::to_string(t));
    out.period_effect[labels.back()] = fe(gen);
  }
  std::map<std::pair<int, int>, int> follows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) follows[{i, j}] = follow(gen);
  std::vector<double> y;
  for (int t = 0; t < periods; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        polsig::econometrics::PanelRow r;
        r.i = ids[std::size_t(i)];
        r.j = ids[std::size_t(j)];
        r.t = labels[std::size_t(t)];
        r.likes = likes(gen);
        r.opponents = (i < n / 2) != (j < n / 2);
        r.following = follows[{i, j}];
        const double l = double(r.likes);
        y.push_back(out.entity_effect[r.i] + out.period_effect[r.t] + b.beta * l +
                    b.beta_opp * l * r.opponents + b.lambda * l * l + b.lambda_opp * l * l * r.opponents +
                    b.opp * r.opponents + b.following * r.following);
        out.rows.push_back(r);
      }
  out.y = Eigen::Map<Eigen::VectorXd>(y.data(), Eigen::Index(y.size()));
  return out;
}

// Integer-valued variant: entity/period effects and coefficients chosen so votes are integers.
inline std::vector<polsig::econometrics::PanelRow> integer_panel(unsigned seed, int n = 8, int periods = 3) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> likes(0, 20), fe(0, 10);
  std::bernoulli_distribution follow(0.5);
  std::vector<polsig::econometrics::PanelRow> rows;
  std::vector<int> ei(static_cast<std::size_t>(n)), et(static_cast<std::size_t>(periods));
  for (auto& v : ei) v = fe(gen);
  for (auto& v : et) v = fe(gen);
  std::map<std::pair<int, int>, int> follows;  // one following flag per ordered pair
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) follows[{i, j}] = follow(gen);
  for (int t = 0; t < periods; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        polsig::econometrics::PanelRow r{"p" + std::to_string(10 + i), "p" + std::to_string(10 + j),
                                         "t" + std::to_string(t)};
        r.likes = likes(gen);
        r.opponents = (i < n / 2) != (j < n / 2);
        r.following = follows[{i, j}];
        // votes = 50 + ei + et - 1*likes + 2*likes*opp + 3*following
        r.votes = 50 + ei[std::size_t(i)] + et[std::size_t(t)] - r.likes + 2 * r.likes * r.opponents + 3 * r.following;
        rows.push_back(r);
      }
  return rows;
}

}  // namespace fixtures
