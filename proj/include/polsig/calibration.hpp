#pragma once

// Built-in parameter set for the 28-politician model: ideology and spread on
// the 1..5 axis (1 = right, 5 = left) and a CEP-style self-placement
// distribution in which a majority of respondents give no answer.

#include <array>
#include <filesystem>
#include <vector>

#include "polsig/spatial.hpp"

namespace polsig::calibration {

inline constexpr std::array<double, 5> kSurveyShares{0.12, 0.06, 0.08, 0.07, 0.12};
inline constexpr double kNullShare = 0.55;
inline constexpr int kCoalitions = 3;

// Ids P01..P28 sorted from right to left; coalitions assigned by terciles of mu.
std::vector<spatial::Politician> default_politicians();

spatial::Electorate default_electorate();

// CSV `politician_id,mu,sigma[,coalition][,gamma]`. Without a coalition column
// coalitions are assigned by rank into `coalitions` blocks.
std::vector<spatial::Politician> read_politicians_csv(const std::filesystem::path& path,
                                                      int coalitions = kCoalitions);

}  // namespace polsig::calibration
