#pragma once

// Least squares with fixed effects for dyad-period panels, the single-dummy
// regression over simulated dyads, and a two-variable principal component.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "polsig/signaling.hpp"

namespace polsig::econometrics {

// One dyad-period record: i's likes to j and the bills i and j voted in favour together in t.
struct PanelRow {
  std::string i;
  std::string j;
  std::string t;
  std::int64_t likes = 0;
  std::int64_t votes = 0;
  int opponents = 0;
  int following = 0;

  bool operator==(const PanelRow&) const = default;
};

enum class SeType { classical, hc1 };

struct Design {
  Eigen::MatrixXd x;
  std::vector<std::string> terms;
};

struct RegressionResult {
  std::vector<std::string> terms;
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  std::size_t n_obs = 0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  Eigen::VectorXd residuals;

  std::optional<std::size_t> index(std::string_view term) const;
  bool has(std::string_view term) const { return index(term).has_value(); }
  double coefficient(std::string_view term) const;
  double std_error(std::string_view term) const;
  double tstat(std::string_view term) const;
};

// QR least squares; R-squared is centred, so the design should span a constant.
// Throws RankDeficientError naming the first collinear column.
RegressionResult ols(const Design& design, const Eigen::VectorXd& y, SeType se = SeType::classical);

inline constexpr std::string_view kConstant = "Constant";
inline constexpr std::string_view kOpponents = "Opponents";

// Likes = Constant + beta * Opponents over simulated dyads. Throws NoVariation.
RegressionResult simulated_regression(std::span<const signaling::Dyad> dyads,
                                      SeType se = SeType::classical);

enum class Dependent { likes, votes };

enum class Term { opponents, following, likes, likes_sq, likes_x_opp, likes_sq_x_opp };

std::string_view term_name(Term term);
std::string_view to_string(Dependent dep);

struct PanelSpec {
  std::string name;
  Dependent dependent = Dependent::votes;
  std::vector<Term> terms;

  // Likes^2 needs Likes, interactions need their base term, and a likes
  // dependent cannot use likes regressors. Throws ConfigError.
  void validate() const;
};

// Columns (1)-(9) of the interactions table: likes on affiliation/following,
// votes on the same, then votes on likes with opponent interactions.
std::vector<PanelSpec> table_specifications();

// Entity (politician i) and period fixed effects as dummies, first level of
// each dropped. Fixed-effect terms are named "FE:i=<id>" and "FE:t=<label>".
RegressionResult panel_fe_regression(std::span<const PanelRow> panel, const PanelSpec& spec,
                                     SeType se = SeType::classical);
// Same, with the response supplied instead of read from spec.dependent.
RegressionResult panel_fe_regression(std::span<const PanelRow> panel, const PanelSpec& spec,
                                     const Eigen::VectorXd& y, SeType se = SeType::classical);

// Same model with entity effects swept out by demeaning within politician i;
// period dummies stay explicit. Matches panel_fe_regression on every retained
// term, with standard errors on the same degrees of freedom.
RegressionResult panel_fe_within(std::span<const PanelRow> panel, const PanelSpec& spec,
                                 SeType se = SeType::classical);
RegressionResult panel_fe_within(std::span<const PanelRow> panel, const PanelSpec& spec,
                                 const Eigen::VectorXd& y, SeType se = SeType::classical);

// `term,coef,se,tstat` for non-fixed-effect terms, then `n_obs,adj_r2` and its row.
std::string regression_csv(const RegressionResult& result);

struct PrincipalComponent {
  Eigen::VectorXd scores;
  double loading_x = 0.0;  // >= 0
  double loading_y = 0.0;
  double explained = 0.0;  // share of standardised variance
};

// First component of the standardised pair (xs, ys). Throws ZeroVariance.
PrincipalComponent pc1(std::span<const double> xs, std::span<const double> ys);

}  // namespace polsig::econometrics
