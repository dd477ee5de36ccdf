#pragma once

// File-based ingestion of the likes / votes / following / coalition panel and
// the per-period summary statistics.

#include <chrono>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "polsig/econometrics.hpp"

namespace polsig::ingest {

using econometrics::PanelRow;

struct PeriodSpec {
  std::string label;
  std::chrono::year_month_day votes_start;
  std::chrono::year_month_day votes_end;
  std::chrono::year_month_day likes_date;
};

// ISO-8601 calendar date, YYYY-MM-DD.
std::chrono::year_month_day parse_date(std::string_view text, std::string_view context);

struct PeriodTable {
  std::vector<PeriodSpec> periods;
  std::vector<std::string> warnings;  // likes collected before the voting window closed
};

// `label,votes_start,votes_end,likes_date`. Throws SchemaError unless votes_start < votes_end.
PeriodTable read_periods_csv(const std::filesystem::path& path);

struct PanelFiles {
  std::filesystem::path likes;       // period,liker_id,target_id,likes
  std::filesystem::path votes;       // period,i,j,votes_in_favor
  std::filesystem::path following;   // i,j,follows
  std::filesystem::path coalitions;  // politician_id,coalition
};

struct Panel {
  std::vector<PanelRow> rows;  // sorted by (period order, i, j)
  std::vector<std::string> periods;
  std::map<std::string, std::string> coalitions;
  std::vector<std::string> join_report;  // "MISSING <likes|votes> <i> <j> <t>"
};

// Outer join of likes and votes on (period, i, j). A dyad absent from one side
// gets 0 for that metric and a join-report line. Period order follows
// `period_order` when given, else first appearance (likes file, then votes).
// Throws SchemaError, UnknownPolitician or DuplicateDyad with file:line context.
Panel load_panel(const PanelFiles& files, const std::vector<std::string>& period_order = {});

std::map<std::string, std::string> read_coalitions(const std::filesystem::path& path);

// Writes the four input files for `panel` into `dir`; loading them back yields the same panel.
PanelFiles write_panel_files(const Panel& panel, const std::filesystem::path& dir);

std::string join_report_text(const Panel& panel);

enum class Metric { likes, votes };
enum class GroupFilter { all, opponents, both };

std::string_view to_string(Metric m);

struct SummaryBlock {
  std::string period;
  std::string group;  // "all" or "opponents"
  Metric metric = Metric::likes;
  double mean = 0.0;
  double median = 0.0;
  double std_dev = 0.0;  // sample (n - 1)
  std::size_t n = 0;
};

// One block per period, metric and group. Throws EmptyGroup when a requested
// group has no rows in some period.
std::vector<SummaryBlock> summarize(const Panel& panel, GroupFilter filter = GroupFilter::both);

// `period,group,metric,mean,median,std_dev,n`
std::string summary_csv(std::span<const SummaryBlock> blocks);

struct WideMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;  // (i, j) entry of the metric, 0 where no row exists
};

// Politicians appearing in the period (as i or j), in id order.
WideMatrix period_matrix(const Panel& panel, std::string_view period, Metric metric);

}  // namespace polsig::ingest
