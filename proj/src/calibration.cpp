#include "polsig/calibration.hpp"

#include <cstdio>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"

namespace polsig::calibration {

namespace {

struct Row {
  double mu;
  double sigma;
};

constexpr std::array<Row, 28> kPoliticians{{
    {1.00, 0.60}, {1.18, 0.45}, {1.35, 0.75}, {1.52, 0.55}, {1.60, 0.90}, {1.77, 0.50},
    {1.90, 0.70}, {2.05, 1.05}, {2.21, 0.65}, {2.34, 0.80}, {2.48, 0.95}, {2.60, 0.60},
    {2.73, 1.10}, {2.85, 0.85}, {2.96, 1.25}, {3.08, 0.70}, {3.19, 1.00}, {3.33, 1.15},
    {3.47, 0.65}, {3.58, 0.90}, {3.72, 0.55}, {3.90, 0.80}, {4.05, 1.00}, {4.22, 0.60},
    {4.41, 0.75}, {4.60, 0.50}, {4.82, 0.65}, {5.00, 0.45},
}};

}  // namespace

std::vector<spatial::Politician> default_politicians() {
  std::vector<spatial::Politician> out;
  for (std::size_t i = 0; i < kPoliticians.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "P%02zu", i + 1);
    out.push_back({id, kPoliticians[i].mu, kPoliticians[i].sigma, 0, 0.0});
  }
  spatial::assign_coalitions_by_rank(out, kCoalitions);
  return out;
}

spatial::Electorate default_electorate() {
  return spatial::make_empirical_electorate(kSurveyShares, kNullShare);
}

std::vector<spatial::Politician> read_politicians_csv(const std::filesystem::path& path,
                                                      int coalitions) {
  const auto t = csv::read(path);
  const auto c_id = t.column("politician_id");
  const auto c_mu = t.column("mu");
  const auto c_sigma = t.column("sigma");
  const auto c_coal = t.find_column("coalition");
  const auto c_gamma = t.find_column("gamma");

  std::vector<spatial::Politician> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto at = t.where(r);
    spatial::Politician p;
    p.id = row[c_id];
    p.mu = csv::parse_double(row[c_mu], at);
    p.sigma = csv::parse_double(row[c_sigma], at);
    if (c_coal) p.coalition = static_cast<int>(csv::parse_int(row[*c_coal], at));
    if (c_gamma) p.gamma = csv::parse_double(row[*c_gamma], at);
    for (const auto& q : out)
      if (q.id == p.id) throw Error(ErrorKind::SchemaError, at + ": duplicate politician " + p.id);
    try {
      spatial::validate(p);
    } catch (const Error& e) {
      throw Error(ErrorKind::SchemaError, at + ": " + e.what());
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw Error(ErrorKind::SchemaError, path.string() + ": no politicians");
  if (!c_coal) spatial::assign_coalitions_by_rank(out, coalitions);
  return out;
}

}  // namespace polsig::calibration
