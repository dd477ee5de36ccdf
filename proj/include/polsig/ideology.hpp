#pragma once

// Perceived ideology of politicians from opinion-survey microdata. Each
// politician's favourability rating is regressed on respondents' self-reported
// ideology; the slopes are then mapped affinely onto the 1..5 axis.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polsig::ideology {

struct SurveyResponse {
  std::string respondent_id;
  std::optional<int> self_ideology;  // 1..5
  std::map<std::string, std::optional<int>> opinions;  // politician id -> 1..5
};

struct RawEstimate {
  std::string politician_id;
  double beta = 0.0;
  double beta_se = 0.0;
  std::size_t n = 0;  // usable rows
};

struct IdeologyEstimate {
  std::string politician_id;
  double beta = 0.0;
  double beta_se = 0.0;
  double mu = 0.0;     // 1 = highest-beta end mapped to 5, see rescale()
  double sigma = 0.0;
};

// OLS of opinion on self-ideology with intercept, rows with a null in either
// variable dropped. Throws InsufficientData (< 3 rows) or DegenerateRegressor.
RawEstimate estimate_raw(std::span<const SurveyResponse> survey, const std::string& politician_id);

// mu = 1 + 4 (beta - beta_min) / (beta_max - beta_min); sigma scales by the same factor.
// Throws DegenerateRange when all betas coincide.
std::vector<IdeologyEstimate> rescale(std::span<const RawEstimate> estimates);

// Every politician mentioned in the survey, in id order.
std::vector<std::string> politicians(std::span<const SurveyResponse> survey);

std::vector<IdeologyEstimate> estimate_all(std::span<const SurveyResponse> survey);

// Long format `respondent_id,self_ideology,politician_id,opinion`, empty field = null.
std::vector<SurveyResponse> read_survey_csv(const std::filesystem::path& path);
std::string estimates_csv(std::span<const IdeologyEstimate> estimates);

}  // namespace polsig::ideology
