#include "polsig/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "polsig/csv.hpp"
#include "polsig/error.hpp"

namespace polsig::ingest {

namespace {

std::string iso(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

using Key = std::tuple<std::string, std::string, std::string>;  // period, i, j

const std::string& known(const std::map<std::string, std::string>& coalitions,
                         const std::string& id, const std::string& where) {
  auto it = coalitions.find(id);
  if (it == coalitions.end())
    throw Error(ErrorKind::UnknownPolitician, where + ": '" + id + "' not in coalition file");
  return it->second;
}

std::int64_t count_field(const csv::Table& t, std::size_t r, std::size_t c) {
  const auto ctx = t.where(r) + " column '" + t.header[c] + "'";
  const auto v = csv::parse_int(t.rows[r][c], ctx);
  if (v < 0) throw Error(ErrorKind::SchemaError, ctx + ": negative count");
  return v;
}

}  // namespace

std::chrono::year_month_day parse_date(std::string_view text, std::string_view context) {
  auto bad = [&] {
    return Error(ErrorKind::SchemaError,
                 std::string(context) + ": expected YYYY-MM-DD, got '" + std::string(text) + "'");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  try {
    const auto y = csv::parse_int(text.substr(0, 4), context);
    const auto m = csv::parse_int(text.substr(5, 2), context);
    const auto d = csv::parse_int(text.substr(8, 2), context);
    std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(y)),
                                    std::chrono::month(static_cast<unsigned>(m)),
                                    std::chrono::day(static_cast<unsigned>(d))};
    if (!ymd.ok()) throw bad();
    return ymd;
  } catch (const Error&) {
    throw bad();
  }
}

PeriodTable read_periods_csv(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto c_label = t.column("label");
  const auto c_start = t.column("votes_start");
  const auto c_end = t.column("votes_end");
  const auto c_likes = t.column("likes_date");
  PeriodTable out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto at = t.where(r);
    PeriodSpec p{row[c_label], parse_date(row[c_start], at), parse_date(row[c_end], at),
                 parse_date(row[c_likes], at)};
    if (!seen.insert(p.label).second)
      throw Error(ErrorKind::SchemaError, at + ": duplicate period '" + p.label + "'");
    if (!(p.votes_start < p.votes_end))
      throw Error(ErrorKind::SchemaError, at + ": votes_start must precede votes_end");
    if (p.likes_date < p.votes_end)
      out.warnings.push_back(at + ": likes for '" + p.label + "' collected " + iso(p.likes_date) +
                             ", before the voting window closed " + iso(p.votes_end));
    out.periods.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, std::string> read_coalitions(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto c_id = t.column("politician_id");
  const auto c_coal = t.column("coalition");
  std::map<std::string, std::string> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[c_id].empty() || row[c_coal].empty())
      throw Error(ErrorKind::SchemaError, t.where(r) + ": empty politician_id or coalition");
    if (!out.emplace(row[c_id], row[c_coal]).second)
      throw Error(ErrorKind::SchemaError, t.where(r) + ": duplicate politician '" + row[c_id] + "'");
  }
  return out;
}

Panel load_panel(const PanelFiles& files, const std::vector<std::string>& period_order) {
  Panel panel;
  panel.coalitions = read_coalitions(files.coalitions);
  const auto& coal = panel.coalitions;

  const auto likes_t = csv::read(files.likes);
  const auto votes_t = csv::read(files.votes);
  const auto follow_t = csv::read(files.following);

  std::vector<std::string> periods = period_order;
  auto note_period = [&](const std::string& p, const std::string& where) {
    if (std::find(periods.begin(), periods.end(), p) != periods.end()) return;
    if (!period_order.empty())
      throw Error(ErrorKind::SchemaError, where + ": period '" + p + "' not in the period table");
    periods.push_back(p);
  };

  struct Cell {
    std::int64_t likes = 0, votes = 0;
    bool has_likes = false, has_votes = false;
  };
  std::map<Key, Cell> cells;

  {
    const auto cp = likes_t.column("period"), ci = likes_t.column("liker_id"),
               cj = likes_t.column("target_id"), cv = likes_t.column("likes");
    for (std::size_t r = 0; r < likes_t.rows.size(); ++r) {
      const auto& row = likes_t.rows[r];
      const auto at = likes_t.where(r);
      known(coal, row[ci], at);
      known(coal, row[cj], at);
      note_period(row[cp], at);
      auto& cell = cells[{row[cp], row[ci], row[cj]}];
      if (cell.has_likes)
        throw Error(ErrorKind::DuplicateDyad, at + ": " + row[ci] + " " + row[cj] + " " + row[cp]);
      cell.has_likes = true;
      cell.likes = count_field(likes_t, r, cv);
    }
  }
  {
    const auto cp = votes_t.column("period"), ci = votes_t.column("i"), cj = votes_t.column("j"),
               cv = votes_t.column("votes_in_favor");
    for (std::size_t r = 0; r < votes_t.rows.size(); ++r) {
      const auto& row = votes_t.rows[r];
      const auto at = votes_t.where(r);
      known(coal, row[ci], at);
      known(coal, row[cj], at);
      note_period(row[cp], at);
      auto& cell = cells[{row[cp], row[ci], row[cj]}];
      if (cell.has_votes)
        throw Error(ErrorKind::DuplicateDyad, at + ": " + row[ci] + " " + row[cj] + " " + row[cp]);
      cell.has_votes = true;
      cell.votes = count_field(votes_t, r, cv);
    }
  }
  std::map<std::pair<std::string, std::string>, int> follows;
  {
    const auto ci = follow_t.column("i"), cj = follow_t.column("j"), cf = follow_t.column("follows");
    for (std::size_t r = 0; r < follow_t.rows.size(); ++r) {
      const auto& row = follow_t.rows[r];
      const auto at = follow_t.where(r);
      known(coal, row[ci], at);
      known(coal, row[cj], at);
      const auto f = csv::parse_int(row[cf], at);
      if (f != 0 && f != 1) throw Error(ErrorKind::SchemaError, at + ": follows must be 0 or 1");
      if (!follows.emplace(std::pair{row[ci], row[cj]}, static_cast<int>(f)).second)
        throw Error(ErrorKind::DuplicateDyad, at + ": following " + row[ci] + " " + row[cj]);
    }
  }

  std::map<std::string, std::size_t> rank;
  for (std::size_t k = 0; k < periods.size(); ++k) rank[periods[k]] = k;
  std::vector<std::pair<Key, Cell>> ordered(cells.begin(), cells.end());
  std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
    return rank.at(std::get<0>(a.first)) < rank.at(std::get<0>(b.first));
  });

  for (const auto& [key, cell] : ordered) {
    const auto& [t, i, j] = key;
    if (!cell.has_likes) panel.join_report.push_back("MISSING likes " + i + " " + j + " " + t);
    if (!cell.has_votes) panel.join_report.push_back("MISSING votes " + i + " " + j + " " + t);
    auto f = follows.find({i, j});
    panel.rows.push_back({i, j, t, cell.likes, cell.votes, coal.at(i) != coal.at(j) ? 1 : 0,
                          f == follows.end() ? 0 : f->second});
  }
  panel.periods = std::move(periods);
  return panel;
}

PanelFiles write_panel_files(const Panel& panel, const std::filesystem::path& dir) {
  PanelFiles files{dir / "likes.csv", dir / "votes.csv", dir / "following.csv", dir / "coalitions.csv"};
  std::string likes = "period,liker_id,target_id,likes\n";
  std::string votes = "period,i,j,votes_in_favor\n";
  for (const auto& r : panel.rows) {
    likes += csv::join_row({r.t, r.i, r.j, std::to_string(r.likes)});
    votes += csv::join_row({r.t, r.i, r.j, std::to_string(r.votes)});
  }
  std::map<std::pair<std::string, std::string>, int> follows;
  for (const auto& r : panel.rows) follows.emplace(std::pair{r.i, r.j}, r.following);
  std::string following = "i,j,follows\n";
  for (const auto& [k, f] : follows) following += csv::join_row({k.first, k.second, std::to_string(f)});
  std::string coalitions = "politician_id,coalition\n";
  for (const auto& [id, c] : panel.coalitions) coalitions += csv::join_row({id, c});

  csv::write_atomic(files.likes, likes);
  csv::write_atomic(files.votes, votes);
  csv::write_atomic(files.following, following);
  csv::write_atomic(files.coalitions, coalitions);
  return files;
}

std::string join_report_text(const Panel& panel) {
  std::string out;
  for (const auto& line : panel.join_report) out += line + "\n";
  return out;
}

std::string_view to_string(Metric m) { return m == Metric::likes ? "likes" : "votes"; }

namespace {

SummaryBlock describe(std::string period, std::string group, Metric metric, std::vector<double> xs) {
  SummaryBlock b{std::move(period), std::move(group), metric, 0, 0, 0, xs.size()};
  const double n = static_cast<double>(xs.size());
  double sum = 0;
  for (double x : xs) sum += x;
  b.mean = sum / n;
  double ss = 0;
  for (double x : xs) ss += (x - b.mean) * (x - b.mean);
  b.std_dev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  b.median = xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
  return b;
}

}  // namespace

std::vector<SummaryBlock> summarize(const Panel& panel, GroupFilter filter) {
  if (panel.rows.empty()) throw Error(ErrorKind::EmptyGroup, "panel has no rows");
  std::vector<SummaryBlock> out;
  std::vector<std::string> groups;
  if (filter != GroupFilter::opponents) groups.push_back("all");
  if (filter != GroupFilter::all) groups.push_back("opponents");

  for (const auto& period : panel.periods) {
    for (auto metric : {Metric::likes, Metric::votes}) {
      for (const auto& group : groups) {
        std::vector<double> xs;
        for (const auto& r : panel.rows) {
          if (r.t != period || (group == "opponents" && !r.opponents)) continue;
          xs.push_back(static_cast<double>(metric == Metric::likes ? r.likes : r.votes));
        }
        if (xs.empty())
          throw Error(ErrorKind::EmptyGroup, "no " + group + " dyads in period '" + period + "'");
        out.push_back(describe(period, group, metric, std::move(xs)));
      }
    }
  }
  return out;
}

std::string summary_csv(std::span<const SummaryBlock> blocks) {
  std::string out = "period,group,metric,mean,median,std_dev,n\n";
  for (const auto& b : blocks)
    out += csv::join_row({b.period, b.group, to_string(b.metric), csv::format(b.mean),
                          csv::format(b.median), csv::format(b.std_dev), std::to_string(b.n)});
  return out;
}

WideMatrix period_matrix(const Panel& panel, std::string_view period, Metric metric) {
  std::set<std::string> ids;
  for (const auto& r : panel.rows)
    if (r.t == period) {
      ids.insert(r.i);
      ids.insert(r.j);
    }
  WideMatrix w{{ids.begin(), ids.end()}, {}};
  std::map<std::string, Eigen::Index> index;
  for (std::size_t k = 0; k < w.ids.size(); ++k) index[w.ids[k]] = static_cast<Eigen::Index>(k);
  const auto n = static_cast<Eigen::Index>(w.ids.size());
  w.values = Eigen::MatrixXd::Zero(n, n);
  for (const auto& r : panel.rows)
    if (r.t == period)
      w.values(index[r.i], index[r.j]) = static_cast<double>(metric == Metric::likes ? r.likes : r.votes);
  return w;
}

}  // namespace polsig::ingest
