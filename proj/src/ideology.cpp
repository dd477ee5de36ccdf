#include "polsig/ideology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"

namespace polsig::ideology {

RawEstimate estimate_raw(std::span<const SurveyResponse> survey, const std::string& politician_id) {
  std::vector<double> xs, ys;
  for (const auto& r : survey) {
    if (!r.self_ideology) continue;
    auto it = r.opinions.find(politician_id);
    if (it == r.opinions.end() || !it->second) continue;
    xs.push_back(*r.self_ideology);
    ys.push_back(*it->second);
  }
  const std::size_t n = xs.size();
  if (n < 3)
    throw Error(ErrorKind::InsufficientData, "politician '" + politician_id + "' has " +
                                                 std::to_string(n) + " usable responses, need 3");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0)
    throw Error(ErrorKind::DegenerateRegressor,
                "politician '" + politician_id + "': self-ideology has zero variance");

  const double beta = sxy / sxx;
  const double alpha = my - beta * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - alpha - beta * xs[i];
    rss += e * e;
  }
  const double s2 = rss / static_cast<double>(n - 2);
  return {politician_id, beta, std::sqrt(s2 / sxx), n};
}

std::vector<IdeologyEstimate> rescale(std::span<const RawEstimate> estimates) {
  if (estimates.empty()) throw Error(ErrorKind::DegenerateRange, "no estimates to rescale");
  auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end(),
                                      [](const auto& a, const auto& b) { return a.beta < b.beta; });
  const double range = hi->beta - lo->beta;
  if (!(range > 0.0)) throw Error(ErrorKind::DegenerateRange, "all slopes are equal");
  const double factor = 4.0 / range;

  std::vector<IdeologyEstimate> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) {
    double mu = 1.0 + factor * (e.beta - lo->beta);
    if (&e == &*hi) mu = 5.0;  // exact endpoint despite rounding
    out.push_back({e.politician_id, e.beta, e.beta_se, mu, e.beta_se * factor});
  }
  return out;
}

std::vector<std::string> politicians(std::span<const SurveyResponse> survey) {
  std::set<std::string> ids;
  for (const auto& r : survey)
    for (const auto& [id, _] : r.opinions) ids.insert(id);
  return {ids.begin(), ids.end()};
}

std::vector<IdeologyEstimate> estimate_all(std::span<const SurveyResponse> survey) {
  std::vector<RawEstimate> raw;
  for (const auto& id : politicians(survey)) raw.push_back(estimate_raw(survey, id));
  return rescale(raw);
}

namespace {

std::optional<int> scale_value(const csv::Table& t, std::size_t row, std::size_t col) {
  const auto& f = t.rows[row][col];
  if (f.empty()) return std::nullopt;
  const auto ctx = t.where(row) + " column '" + t.header[col] + "'";
  const auto v = csv::parse_int(f, ctx);
  if (v < 1 || v > 5)
    throw Error(ErrorKind::SchemaError, ctx + ": value " + f + " outside the 1..5 scale");
  return static_cast<int>(v);
}

}  // namespace

std::vector<SurveyResponse> read_survey_csv(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto c_resp = t.column("respondent_id");
  const auto c_self = t.column("self_ideology");
  const auto c_pol = t.column("politician_id");
  const auto c_op = t.column("opinion");

  std::vector<SurveyResponse> out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[c_resp].empty())
      throw Error(ErrorKind::SchemaError, t.where(r) + ": empty respondent_id");
    const auto self = scale_value(t, r, c_self);
    auto [it, fresh] = index.try_emplace(row[c_resp], out.size());
    if (fresh) {
      out.push_back({row[c_resp], self, {}});
    } else if (out[it->second].self_ideology != self) {
      throw Error(ErrorKind::SchemaError,
                  t.where(r) + ": respondent '" + row[c_resp] + "' has conflicting self_ideology");
    }
    if (row[c_pol].empty()) continue;  // respondent with no opinions recorded
    auto& ops = out[it->second].opinions;
    if (!ops.emplace(row[c_pol], scale_value(t, r, c_op)).second)
      throw Error(ErrorKind::SchemaError, t.where(r) + ": duplicate opinion of respondent '" +
                                              row[c_resp] + "' on '" + row[c_pol] + "'");
  }
  return out;
}

std::string estimates_csv(std::span<const IdeologyEstimate> estimates) {
  std::string out = "politician_id,beta,beta_se,mu,sigma\n";
  for (const auto& e : estimates)
    out += csv::join_row({e.politician_id, csv::format(e.beta), csv::format(e.beta_se),
                          csv::format(e.mu), csv::format(e.sigma)});
  return out;
}

}  // namespace polsig::ideology
