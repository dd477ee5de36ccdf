#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "polsig/ideology.hpp"

using namespace polsig;
using ideology::SurveyResponse;

namespace {

std::vector<SurveyResponse> survey_from(const std::vector<std::optional<int>>& self,
                                        const std::vector<std::optional<int>>& opinion,
                                        const std::string& pid = "A") {
  std::vector<SurveyResponse> out;
  for (std::size_t k = 0; k < self.size(); ++k)
    out.push_back({"r" + std::to_string(k), self[k], {{pid, opinion[k]}}});
  return out;
}

}  // namespace

TEST_CASE("identity opinions give slope one with zero error") {
  const auto s = survey_from({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5});
  const auto r = ideology::estimate_raw(s, "A");
  CHECK(r.beta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.beta_se == doctest::Approx(0.0));
  CHECK(r.n == 5);
}

TEST_CASE("constant opinions give slope zero") {
  const auto r = ideology::estimate_raw(survey_from({1, 2, 3, 5}, {4, 4, 4, 4}), "A");
  CHECK(r.beta == 0.0);
}

TEST_CASE("four-row slope matches normal equations") {
  // opinions (3,4,5) on ideology (1,2,3) plus the row (2,3)
  const auto r = ideology::estimate_raw(survey_from({1, 2, 3, 2}, {3, 4, 5, 3}), "A");
  const auto b = oracle::normal_equations({{1, 1}, {1, 2}, {1, 3}, {1, 2}}, {3, 4, 5, 3});
  CHECK(r.beta == doctest::Approx(b[1]).epsilon(1e-12));
  // s^2 = RSS/(n-2), se = sqrt(s^2 / Sxx)
  const double a = b[0], beta = b[1];
  double rss = 0;
  const double xs[] = {1, 2, 3, 2}, ys[] = {3, 4, 5, 3};
  for (int k = 0; k < 4; ++k) rss += std::pow(ys[k] - a - beta * xs[k], 2);
  CHECK(r.beta_se == doctest::Approx(std::sqrt(rss / 2.0 / 2.0)).epsilon(1e-12));  // Sxx = 2
}

TEST_CASE("nulls are dropped pairwise") {
  const auto s = survey_from({1, std::nullopt, 2, 3, 4}, {2, 5, std::nullopt, 4, 5});
  const auto r = ideology::estimate_raw(s, "A");
  CHECK(r.n == 3);
}

TEST_CASE("estimate_raw error paths") {
  CHECK(testing::kind_of([] { ideology::estimate_raw(survey_from({1, 2}, {1, 2}), "A"); }) ==
        ErrorKind::InsufficientData);
  CHECK(testing::kind_of([] { ideology::estimate_raw(survey_from({3, 3, 3}, {1, 2, 5}), "A"); }) ==
        ErrorKind::DegenerateRegressor);
  CHECK(testing::kind_of([] { ideology::estimate_raw(survey_from({1, 2, 3}, {1, 2, 3}), "Z"); }) ==
        ErrorKind::InsufficientData);
}

TEST_CASE("rescale maps extremes to 1 and 5") {
  std::vector<ideology::RawEstimate> raw{{"a", -1, 0.1, 5}, {"b", 0, 0.1, 5}, {"c", 1, 0.1, 5}};
  const auto e = ideology::rescale(raw);
  CHECK(e[0].mu == 1.0);
  CHECK(e[1].mu == 3.0);
  CHECK(e[2].mu == 5.0);
  for (const auto& x : e) CHECK(x.sigma == doctest::Approx(0.2).epsilon(1e-14));
  std::vector<ideology::RawEstimate> two{{"a", -0.5, 0, 3}, {"b", 0.5, 0, 3}};
  const auto t = ideology::rescale(two);
  CHECK(t[0].mu == 1.0);
  CHECK(t[1].mu == 5.0);
  std::vector<ideology::RawEstimate> flat{{"a", 0.2, 0, 3}, {"b", 0.2, 0, 3}};
  CHECK(testing::kind_of([&] { ideology::rescale(flat); }) == ErrorKind::DegenerateRange);
}

TEST_CASE("property: rescale is monotone and hits both ends exactly") {
  std::mt19937 gen(11);
  std::normal_distribution<double> nd(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ideology::RawEstimate> raw;
    for (int k = 0; k < 2 + trial % 10; ++k) raw.push_back({"p" + std::to_string(k), nd(gen), 0.3, 5});
    const auto e = ideology::rescale(raw);
    double lo = 10, hi = -10;
    for (std::size_t a = 0; a < e.size(); ++a) {
      lo = std::min(lo, e[a].mu);
      hi = std::max(hi, e[a].mu);
      for (std::size_t b = 0; b < e.size(); ++b)
        if (raw[a].beta < raw[b].beta) CHECK(e[a].mu < e[b].mu);
    }
    CHECK(lo == 1.0);
    CHECK(hi == 5.0);
  }
}

TEST_CASE("property: shifting opinions leaves the slope unchanged; exact lines recovered") {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> u(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<int>> self, op, shifted;
    for (int k = 0; k < 12; ++k) {
      self.push_back(u(gen));
      const int o = std::min(4, u(gen));
      op.push_back(o);
      shifted.push_back(o + 1);
    }
    self[0] = 1;
    self[1] = 5;
    const auto a = ideology::estimate_raw(survey_from(self, op), "A");
    const auto b = ideology::estimate_raw(survey_from(self, shifted), "A");
    CHECK(a.beta == doctest::Approx(b.beta).epsilon(1e-12));
  }
  // opinion = 6 - ideology exactly
  const auto r = ideology::estimate_raw(survey_from({1, 2, 3, 4, 5, 2}, {5, 4, 3, 2, 1, 4}), "A");
  CHECK(std::abs(r.beta + 1.0) < 1e-10);
}

TEST_CASE("survey csv reading and validation") {
  testing::TempDir dir("ideo");
  const auto ok = dir.write("s.csv",
                            "respondent_id,self_ideology,politician_id,opinion\n"
                            "r1,1,A,1\nr1,1,B,5\nr2,3,A,3\nr2,3,B,3\nr3,5,A,5\nr3,5,B,1\nr4,,A,2\n");
  const auto s = ideology::read_survey_csv(ok);
  CHECK(s.size() == 4);
  const auto est = ideology::estimate_all(s);
  REQUIRE(est.size() == 2);
  CHECK(est[0].politician_id == "A");
  CHECK(est[0].mu == 5.0);
  CHECK(est[1].mu == 1.0);
  CHECK(ideology::estimates_csv(est).rfind("politician_id,beta,beta_se,mu,sigma\n", 0) == 0);

  const auto missing = dir.write("m.csv", "respondent_id,politician_id,opinion\nr1,A,1\n");
  CHECK(testing::kind_of([&] { ideology::read_survey_csv(missing); }) == ErrorKind::SchemaError);
  const auto range = dir.write("r.csv", "respondent_id,self_ideology,politician_id,opinion\nr1,7,A,1\n");
  CHECK(testing::kind_of([&] { ideology::read_survey_csv(range); }) == ErrorKind::SchemaError);
  const auto conflict = dir.write(
      "c.csv", "respondent_id,self_ideology,politician_id,opinion\nr1,1,A,1\nr1,2,B,1\n");
  CHECK(testing::kind_of([&] { ideology::read_survey_csv(conflict); }) == ErrorKind::SchemaError);
  const auto dup = dir.write("d.csv", "respondent_id,self_ideology,politician_id,opinion\nr1,1,A,1\nr1,1,A,2\n");
  CHECK(testing::kind_of([&] { ideology::read_survey_csv(dup); }) == ErrorKind::SchemaError);
}
