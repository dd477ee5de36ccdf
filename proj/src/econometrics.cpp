#include "polsig/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"

namespace polsig::econometrics {

std::optional<std::size_t> RegressionResult::index(std::string_view term) const {
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (terms[k] == term) return k;
  return std::nullopt;
}

double RegressionResult::coefficient(std::string_view term) const {
  if (auto k = index(term)) return coef[static_cast<Eigen::Index>(*k)];
  throw Error(ErrorKind::InvalidArgument, "no term '" + std::string(term) + "'");
}

double RegressionResult::std_error(std::string_view term) const {
  if (auto k = index(term)) return se[static_cast<Eigen::Index>(*k)];
  throw Error(ErrorKind::InvalidArgument, "no term '" + std::string(term) + "'");
}

double RegressionResult::tstat(std::string_view term) const {
  return coefficient(term) / std_error(term);
}

namespace {

// `absorbed` counts parameters swept out before the fit (within transform), so the
// residual degrees of freedom match the equivalent dummy-variable regression.
RegressionResult fit(const Design& d, const Eigen::VectorXd& y, SeType se_type,
                     std::size_t absorbed, double tss) {
  const auto n = d.x.rows();
  const auto p = d.x.cols();
  if (y.size() != n) throw Error(ErrorKind::InvalidArgument, "design and response length differ");
  if (static_cast<std::size_t>(p) != d.terms.size())
    throw Error(ErrorKind::InvalidArgument, "design column names do not match columns");
  if (n < p + static_cast<Eigen::Index>(absorbed))
    throw Error(ErrorKind::InsufficientData, "fewer observations than parameters");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(d.x);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scale = std::max(d.x.col(j).norm(), 1.0);
    if (!(std::abs(r(j, j)) > 1e-9 * scale))
      throw RankDeficientError(static_cast<std::size_t>(j), d.terms[static_cast<std::size_t>(j)]);
  }

  RegressionResult out;
  out.terms = d.terms;
  out.coef = qr.solve(y);
  out.residuals = y - d.x * out.coef;
  out.n_obs = static_cast<std::size_t>(n);

  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();
  const double rss = out.residuals.squaredNorm();
  const double df = static_cast<double>(n - p) - static_cast<double>(absorbed);
  if (se_type == SeType::classical) {
    const double s2 = df > 0 ? rss / df : std::numeric_limits<double>::quiet_NaN();
    out.se = (s2 * xtx_inv.diagonal().array()).sqrt();
  } else {
    const Eigen::MatrixXd meat =
        d.x.transpose() * out.residuals.array().square().matrix().asDiagonal() * d.x;
    const double corr = df > 0 ? static_cast<double>(n) / df : std::numeric_limits<double>::quiet_NaN();
    out.se = (corr * (xtx_inv * meat * xtx_inv).diagonal().array()).sqrt();
  }

  out.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
  const double k_total = static_cast<double>(p) + static_cast<double>(absorbed);
  out.adj_r2 = static_cast<double>(n) > k_total
                   ? 1.0 - (1.0 - out.r2) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - k_total)
                   : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double centred_ss(const Eigen::VectorXd& y) {
  return (y.array() - y.mean()).square().sum();
}

}  // namespace

RegressionResult ols(const Design& design, const Eigen::VectorXd& y, SeType se) {
  return fit(design, y, se, 0, centred_ss(y));
}

RegressionResult simulated_regression(std::span<const signaling::Dyad> dyads, SeType se) {
  if (dyads.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least 3 dyads");
  const auto n = static_cast<Eigen::Index>(dyads.size());
  Design d{Eigen::MatrixXd(n, 2), {std::string(kConstant), std::string(kOpponents)}};
  Eigen::VectorXd y(n);
  bool varies = false;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& dy = dyads[static_cast<std::size_t>(r)];
    d.x(r, 0) = 1.0;
    d.x(r, 1) = dy.opponents;
    y(r) = static_cast<double>(dy.likes);
    varies |= dy.opponents != dyads.front().opponents;
  }
  if (!varies) throw Error(ErrorKind::NoVariation, "opponents indicator is constant");
  return ols(d, y, se);
}

std::string_view term_name(Term term) {
  switch (term) {
    case Term::opponents: return "Opponents";
    case Term::following: return "Following";
    case Term::likes: return "Likes";
    case Term::likes_sq: return "Likes^2";
    case Term::likes_x_opp: return "Likes x Opponent";
    case Term::likes_sq_x_opp: return "Likes^2 x Opponent";
  }
  return "?";
}

std::string_view to_string(Dependent dep) { return dep == Dependent::likes ? "likes" : "votes"; }

void PanelSpec::validate() const {
  auto has = [&](Term t) { return std::find(terms.begin(), terms.end(), t) != terms.end(); };
  if (terms.empty()) throw Error(ErrorKind::ConfigError, name + ": no regressors");
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = a + 1; b < terms.size(); ++b)
      if (terms[a] == terms[b])
        throw Error(ErrorKind::ConfigError, name + ": repeated term " + std::string(term_name(terms[a])));
  if (has(Term::likes_sq) && !has(Term::likes))
    throw Error(ErrorKind::ConfigError, name + ": Likes^2 requires Likes");
  if (has(Term::likes_x_opp) && !has(Term::likes))
    throw Error(ErrorKind::ConfigError, name + ": Likes x Opponent requires Likes");
  if (has(Term::likes_sq_x_opp) && !has(Term::likes_sq))
    throw Error(ErrorKind::ConfigError, name + ": Likes^2 x Opponent requires Likes^2");
  if (dependent == Dependent::likes &&
      (has(Term::likes) || has(Term::likes_sq) || has(Term::likes_x_opp) || has(Term::likes_sq_x_opp)))
    throw Error(ErrorKind::ConfigError, name + ": likes cannot explain itself");
}

std::vector<PanelSpec> table_specifications() {
  using enum Term;
  return {
      {"col1", Dependent::likes, {opponents}},
      {"col2", Dependent::likes, {following}},
      {"col3", Dependent::likes, {opponents, following}},
      {"col4", Dependent::votes, {opponents}},
      {"col5", Dependent::votes, {following}},
      {"col6", Dependent::votes, {opponents, following}},
      {"col7", Dependent::votes, {following, likes}},
      {"col8", Dependent::votes, {opponents, following, likes, likes_x_opp}},
      {"col9", Dependent::votes, {opponents, following, likes, likes_x_opp, likes_sq, likes_sq_x_opp}},
  };
}

namespace {

double term_value(Term t, const PanelRow& r) {
  const double l = static_cast<double>(r.likes);
  switch (t) {
    case Term::opponents: return r.opponents;
    case Term::following: return r.following;
    case Term::likes: return l;
    case Term::likes_sq: return l * l;
    case Term::likes_x_opp: return l * r.opponents;
    case Term::likes_sq_x_opp: return l * l * r.opponents;
  }
  return 0.0;
}

struct PanelLayout {
  std::map<std::string, std::size_t> entities;  // sorted id -> level
  std::map<std::string, std::size_t> periods;
};

PanelLayout layout(std::span<const PanelRow> panel) {
  PanelLayout lay;
  for (const auto& r : panel) {
    lay.entities.emplace(r.i, 0);
    lay.periods.emplace(r.t, 0);
  }
  std::size_t k = 0;
  for (auto& [_, v] : lay.entities) v = k++;
  k = 0;
  for (auto& [_, v] : lay.periods) v = k++;
  if (lay.periods.size() < 2) throw Error(ErrorKind::InsufficientData, "panel needs at least 2 periods");
  if (lay.entities.size() < 2) throw Error(ErrorKind::InsufficientData, "panel needs at least 2 entities");
  return lay;
}

Eigen::VectorXd response(std::span<const PanelRow> panel, Dependent dep) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(panel.size()));
  for (std::size_t r = 0; r < panel.size(); ++r)
    y(static_cast<Eigen::Index>(r)) =
        static_cast<double>(dep == Dependent::likes ? panel[r].likes : panel[r].votes);
  return y;
}

// Regressors followed by period dummies (first level dropped); no constant.
Design slope_and_period_columns(std::span<const PanelRow> panel, const PanelSpec& spec,
                                const PanelLayout& lay) {
  const auto n = static_cast<Eigen::Index>(panel.size());
  const auto k = static_cast<Eigen::Index>(spec.terms.size());
  const auto tcols = static_cast<Eigen::Index>(lay.periods.size() - 1);
  Design d{Eigen::MatrixXd::Zero(n, k + tcols), {}};
  for (auto t : spec.terms) d.terms.emplace_back(term_name(t));
  for (auto it = std::next(lay.periods.begin()); it != lay.periods.end(); ++it)
    d.terms.push_back("FE:t=" + it->first);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = panel[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < k; ++c) d.x(r, c) = term_value(spec.terms[static_cast<std::size_t>(c)], row);
    const auto lvl = static_cast<Eigen::Index>(lay.periods.at(row.t));
    if (lvl > 0) d.x(r, k + lvl - 1) = 1.0;
  }
  return d;
}

}  // namespace

RegressionResult panel_fe_regression(std::span<const PanelRow> panel, const PanelSpec& spec,
                                     SeType se) {
  return panel_fe_regression(panel, spec, response(panel, spec.dependent), se);
}

RegressionResult panel_fe_regression(std::span<const PanelRow> panel, const PanelSpec& spec,
                                     const Eigen::VectorXd& y, SeType se) {
  spec.validate();
  if (y.size() != static_cast<Eigen::Index>(panel.size()))
    throw Error(ErrorKind::InvalidArgument, "response length differs from panel");
  const auto lay = layout(panel);
  const auto base = slope_and_period_columns(panel, spec, lay);
  const auto n = base.x.rows();
  const auto ecols = static_cast<Eigen::Index>(lay.entities.size() - 1);

  Design d{Eigen::MatrixXd::Zero(n, 1 + base.x.cols() + ecols), {std::string(kConstant)}};
  d.x.col(0).setOnes();
  d.x.middleCols(1, base.x.cols()) = base.x;
  d.terms.insert(d.terms.end(), base.terms.begin(), base.terms.end());
  for (auto it = std::next(lay.entities.begin()); it != lay.entities.end(); ++it)
    d.terms.push_back("FE:i=" + it->first);
  const auto e0 = 1 + base.x.cols();
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto lvl = static_cast<Eigen::Index>(lay.entities.at(panel[static_cast<std::size_t>(r)].i));
    if (lvl > 0) d.x(r, e0 + lvl - 1) = 1.0;
  }
  return ols(d, y, se);
}

RegressionResult panel_fe_within(std::span<const PanelRow> panel, const PanelSpec& spec,
                                 SeType se) {
  return panel_fe_within(panel, spec, response(panel, spec.dependent), se);
}

RegressionResult panel_fe_within(std::span<const PanelRow> panel, const PanelSpec& spec,
                                 const Eigen::VectorXd& y, SeType se) {
  spec.validate();
  if (y.size() != static_cast<Eigen::Index>(panel.size()))
    throw Error(ErrorKind::InvalidArgument, "response length differs from panel");
  const auto lay = layout(panel);
  auto d = slope_and_period_columns(panel, spec, lay);
  Eigen::VectorXd yw = y;

  const auto g = lay.entities.size();
  std::vector<std::vector<Eigen::Index>> rows(g);
  for (std::size_t r = 0; r < panel.size(); ++r)
    rows[lay.entities.at(panel[r].i)].push_back(static_cast<Eigen::Index>(r));
  for (const auto& members : rows) {
    if (members.empty()) continue;
    const double inv = 1.0 / static_cast<double>(members.size());
    Eigen::RowVectorXd xm = Eigen::RowVectorXd::Zero(d.x.cols());
    double ym = 0;
    for (auto r : members) {
      xm += d.x.row(r);
      ym += y(r);
    }
    xm *= inv;
    ym *= inv;
    for (auto r : members) {
      d.x.row(r) -= xm;
      yw(r) -= ym;
    }
  }
  // g entity means absorbed: equivalent to a constant plus g-1 dummies.
  return fit(d, yw, se, g, centred_ss(y));
}

std::string regression_csv(const RegressionResult& res) {
  std::string out = "term,coef,se,tstat\n";
  for (std::size_t k = 0; k < res.terms.size(); ++k) {
    if (res.terms[k].rfind("FE:", 0) == 0) continue;
    const auto i = static_cast<Eigen::Index>(k);
    out += csv::join_row({res.terms[k], csv::format(res.coef(i)), csv::format(res.se(i)),
                          csv::format(res.coef(i) / res.se(i))});
  }
  out += "n_obs,adj_r2\n";
  out += csv::join_row({std::to_string(res.n_obs), csv::format(res.adj_r2)});
  return out;
}

PrincipalComponent pc1(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "pc1 needs two vectors of equal length >= 2");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::Map<const Eigen::VectorXd> x(xs.data(), n), y(ys.data(), n);
  auto standardise = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd c = v.array() - v.mean();
    const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "pc1 input has zero variance");
    return c / sd;
  };
  const Eigen::VectorXd zx = standardise(x), zy = standardise(y);
  const double r = std::clamp(zx.dot(zy) / static_cast<double>(n - 1), -1.0, 1.0);

  // Correlation matrix [[1, r], [r, 1]]: eigenvectors (1, +-1)/sqrt2 with eigenvalues 1 +- r.
  PrincipalComponent pc;
  pc.loading_x = 1.0 / std::sqrt(2.0);
  pc.loading_y = (r < 0 ? -1.0 : 1.0) / std::sqrt(2.0);
  pc.explained = (1.0 + std::abs(r)) / 2.0;
  pc.scores = pc.loading_x * zx + pc.loading_y * zy;
  return pc;
}

}  // namespace polsig::econometrics
