#include "polsig/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "polsig/calibration.hpp"
#include "polsig/csv.hpp"
#include "polsig/econometrics.hpp"
#include "polsig/error.hpp"
#include "polsig/ideology.hpp"
#include "polsig/ingest.hpp"
#include "polsig/netsci.hpp"
#include "polsig/signaling.hpp"
#include "polsig/spatial.hpp"

namespace polsig::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.toml";

struct NetworkOptions {
  double theta = netsci::kDefaultTheta;
  std::string method = "louvain";
  std::uint64_t seed = 1;
};

struct SimulateOptions {
  NetworkOptions net;
  std::string out_dir = "polsig-out";
  std::string politicians;  // empty: built-in calibration
  int coalitions = calibration::kCoalitions;
  std::string electorate = "empirical_discrete";
  std::vector<double> shares{calibration::kSurveyShares.begin(), calibration::kSurveyShares.end()};
  double null_share = calibration::kNullShare;
  std::optional<double> normal_mean;
  std::optional<double> normal_std;
  std::string voting_rule = "group_targeting";
  double omega = 1.0;
  int messages = 500;
  std::string gamma_mode = "heterogeneous";
  double gamma = 0.0;
  double gamma_mean = 0.1;
  double gamma_sd = 0.1;
  std::vector<double> gamma_sweep;
  bool robust = false;
};

struct PanelOptions {
  NetworkOptions net;
  std::string out_dir = "polsig-out";
  std::string likes, votes, following, coalitions, periods;
  bool robust = false;
};

struct IdeologyOptions {
  std::string survey;
  std::string out = "ideology.csv";
};

struct MatrixOptions {
  NetworkOptions net;
  std::string matrix;
  std::string out_dir = "polsig-out";
};

void add_network_flags(CLI::App* sub, NetworkOptions& o) {
  sub->add_option("--theta", o.theta, "Correlation threshold for network edges")
      ->check(CLI::Range(-1.0, 1.0))
      ->capture_default_str();
  sub->add_option("--method", o.method, "Community detection: louvain | edge_betweenness")
      ->check(CLI::IsMember({"louvain", "edge_betweenness"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "Root seed for every random stream")->capture_default_str();
}

void add_panel_flags(CLI::App* sub, PanelOptions& o) {
  sub->add_option("--likes", o.likes, "likes.csv: period,liker_id,target_id,likes")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--votes", o.votes, "votes.csv: period,i,j,votes_in_favor")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--following", o.following, "following.csv: i,j,follows")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--coalitions", o.coalitions, "coalitions.csv: politician_id,coalition")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--periods", o.periods, "periods.csv: label,votes_start,votes_end,likes_date")
      ->check(CLI::ExistingFile);
  sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
}

std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_');
  return out;
}

void write(const fs::path& p, std::string_view content) { csv::write_atomic(p, content); }

// The active subcommand's resolved options as a TOML section; feeding the file
// back through --config reproduces the run. Unset optional values are omitted.
void write_manifest(const CLI::App* sub, const fs::path& path) {
  std::istringstream in(sub->config_to_str(true, false));
  std::string out = "[" + sub->get_name() + "]\n", line;
  while (std::getline(in, line)) {
    if (line.empty() || line.ends_with("=\"\"")) continue;
    // defaulted lists come out as a quoted "[a,b]"; write them as the array form
    // that explicitly given lists use, so reruns echo the same text
    if (const auto eq = line.find("=\"["); eq != std::string::npos && line.ends_with("]\"")) {
      std::string items = line.substr(eq + 3, line.size() - eq - 5), spaced;
      for (char c : items) spaced += c == ',' ? std::string(", ") : std::string(1, c);
      line = line.substr(0, eq) + "=[" + spaced + "]";
    }
    out += line + "\n";
  }
  write(path, out);
}

std::string gamma_tag(double g) { return "gamma_" + csv::format(g); }

// Graph files and Q for one interaction matrix. An edgeless network has no
// defined modularity: its nodes are written as singletons and Q as nan.
struct NetworkOutcome {
  netsci::SeriesPoint point;
  bool defined = true;
};

NetworkOutcome analyse_network(const std::string& label, const Eigen::MatrixXd& m,
                               const std::vector<std::string>& ids, const NetworkOptions& net) {
  NetworkOutcome out;
  auto& pt = out.point;
  pt.label = label;
  pt.method = netsci::parse_community_method(net.method);
  pt.network = netsci::correlation_network(m, net.theta, ids);
  if (!pt.network.constant_profiles.empty()) {
    std::cerr << "warning: " << label << ": constant profile, left without edges:";
    for (auto i : pt.network.constant_profiles) std::cerr << ' ' << pt.network.graph.nodes()[i];
    std::cerr << "\n";
  }
  if (pt.network.graph.edge_count() == 0) {
    out.defined = false;
    pt.partition = netsci::singleton_partition(ids.size());
    pt.q = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  pt.partition = netsci::detect_communities(pt.network.graph, pt.method, net.seed);
  pt.q = netsci::modularity(pt.network.graph, pt.partition);
  return out;
}

void write_graph(const fs::path& dir, const std::string& stem, const netsci::SeriesPoint& pt) {
  write(dir / (stem + ".graphml"), netsci::to_graphml(pt.network.graph, pt.partition));
  write(dir / (stem + ".dot"), netsci::to_dot(pt.network.graph, pt.partition));
}

std::string modularity_rows(const std::vector<NetworkOutcome>& outcomes) {
  std::string out = "label,method,Q\n";
  for (const auto& o : outcomes)
    out += csv::join_row({o.point.label, netsci::to_string(o.point.method),
                          o.defined ? csv::format(o.point.q) : "nan"});
  return out;
}

// ---------------------------------------------------------------- estimate-ideology

int cmd_estimate_ideology(const IdeologyOptions& o, const CLI::App* sub) {
  const auto survey = ideology::read_survey_csv(o.survey);
  const auto estimates = ideology::estimate_all(survey);
  write(o.out, ideology::estimates_csv(estimates));
  write_manifest(sub, fs::path(o.out).string() + ".manifest.toml");
  std::cerr << "wrote " << estimates.size() << " estimates to " << o.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- simulate

spatial::Electorate build_electorate(const SimulateOptions& o) {
  if (o.shares.size() != 5) throw Error(ErrorKind::ConfigError, "--shares needs 5 values");
  std::array<double, 5> shares{};
  std::copy(o.shares.begin(), o.shares.end(), shares.begin());
  auto empirical = spatial::make_empirical_electorate(shares, o.null_share);
  const auto kind = spatial::parse_electorate_kind(o.electorate);
  if (kind == spatial::ElectorateKind::empirical_discrete) return empirical;
  return spatial::make_normal_electorate(kind, o.normal_mean.value_or(empirical.mean()),
                                         o.normal_std.value_or(empirical.stddev()));
}

std::string competition_csv(const std::vector<spatial::Politician>& ps,
                            const spatial::CompetitionOutcome& c) {
  std::string out = "politician_id,mu,sigma,coalition,votes,front_runner_id,front_runner_mu\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& fr = c.front_runner.at(ps[i].coalition);
    out += csv::join_row({ps[i].id, csv::format(ps[i].mu), csv::format(ps[i].sigma),
                          std::to_string(ps[i].coalition), csv::format(c.votes[i]), fr.id,
                          csv::format(fr.mu)});
  }
  return out;
}

std::string median_voter_csv(const std::vector<spatial::Politician>& ps,
                             const spatial::MedianVoterReport& r) {
  std::string out =
      "politician_id,mu,coalition,target_empirical_discrete,target_normal_discrete,"
      "target_normal_continuous\n";
  for (std::size_t i = 0; i < ps.size(); ++i)
    out += csv::join_row({ps[i].id, csv::format(ps[i].mu), std::to_string(ps[i].coalition),
                          csv::format(r.empirical_discrete[i]), csv::format(r.normal_discrete[i]),
                          csv::format(r.normal_continuous[i])});
  out += "\nelectorate,mean_abs_target_minus_3\n";
  out += csv::join_row({"empirical_discrete", csv::format(spatial::mean_extremity(r.empirical_discrete))});
  out += csv::join_row({"normal_discrete", csv::format(spatial::mean_extremity(r.normal_discrete))});
  out += csv::join_row({"normal_continuous", csv::format(spatial::mean_extremity(r.normal_continuous))});
  return out;
}

// Residuals of the simulated regression next to the first principal component of
// the liker's (ideology, authenticity); the component is left empty when gamma is constant.
std::string residuals_csv(const signaling::SimulationResult& sim,
                          const std::vector<signaling::Dyad>& dyads,
                          const econometrics::RegressionResult& reg) {
  std::vector<double> mus, gammas;
  for (const auto& p : sim.politicians) {
    mus.push_back(p.mu);
    gammas.push_back(p.gamma);
  }
  std::optional<econometrics::PrincipalComponent> pc;
  try {
    pc = econometrics::pc1(mus, gammas);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroVariance) throw;
  }
  std::string out = "liker_id,sender_id,opponents,likes,residual,liker_mu,liker_gamma,liker_pc1\n";
  for (std::size_t r = 0; r < dyads.size(); ++r) {
    const auto& d = dyads[r];
    const auto& p = sim.politicians[d.liker];
    out += csv::join_row({p.id, sim.politicians[d.sender].id, std::to_string(d.opponents),
                          std::to_string(d.likes), csv::format(reg.residuals(static_cast<Eigen::Index>(r))),
                          csv::format(p.mu), csv::format(p.gamma),
                          pc ? csv::format(pc->scores(static_cast<Eigen::Index>(d.liker))) : ""});
  }
  return out;
}

int cmd_simulate(const SimulateOptions& o, const CLI::App* sub) {
  const fs::path dir = o.out_dir;
  auto politicians = o.politicians.empty() ? calibration::default_politicians()
                                           : calibration::read_politicians_csv(o.politicians, o.coalitions);
  if (o.politicians.empty() && o.coalitions != calibration::kCoalitions)
    spatial::assign_coalitions_by_rank(politicians, o.coalitions);
  const auto electorate = build_electorate(o);
  const auto rule = spatial::parse_voting_rule(o.voting_rule);
  const auto se = o.robust ? econometrics::SeType::hc1 : econometrics::SeType::classical;

  signaling::SimulationConfig base;
  base.omega = o.omega;
  base.messages_per_politician = o.messages;
  base.seed = o.net.seed;
  base.rule = rule;

  std::vector<std::pair<std::string, signaling::SimulationConfig>> runs;
  if (!o.gamma_sweep.empty()) {
    for (double g : o.gamma_sweep) {
      auto c = base;
      c.gamma = signaling::Homogeneous{g};
      runs.emplace_back(gamma_tag(g), c);
    }
  } else {
    auto c = base;
    if (o.gamma_mode == "homogeneous")
      c.gamma = signaling::Homogeneous{o.gamma};
    else if (o.gamma_mode == "heterogeneous")
      c.gamma = signaling::Heterogeneous{o.gamma_mean, o.gamma_sd};
    else
      c.gamma = signaling::FromPoliticians{};
    runs.emplace_back("run", c);
  }
  for (const auto& [_, c] : runs) c.validate();

  const auto competition = spatial::compete(politicians, electorate, rule);
  write(dir / "competition.csv", competition_csv(politicians, competition));
  const auto empirical = build_electorate([&] {
    auto e = o;
    e.electorate = "empirical_discrete";
    return e;
  }());
  write(dir / "median_voter.csv",
        median_voter_csv(politicians, spatial::median_voter_experiment(politicians, empirical, rule)));

  std::vector<NetworkOutcome> networks;
  std::string sweep = "label,total_likes,cross_coalition_share,Q\n";
  std::vector<std::string> ids;
  for (const auto& p : politicians) ids.push_back(p.id);

  for (const auto& [tag, config] : runs) {
    const auto sim = signaling::simulate(politicians, electorate, config);
    const auto dyads = signaling::dyad_table(sim);
    write(dir / ("likes_" + tag + ".csv"), signaling::like_matrix_csv(sim.likes, sim.politicians));
    write(dir / ("dyads_" + tag + ".csv"), signaling::dyads_csv(sim));
    const auto reg = econometrics::simulated_regression(dyads, se);
    write(dir / ("regression_" + tag + ".csv"), econometrics::regression_csv(reg));
    write(dir / ("residuals_" + tag + ".csv"), residuals_csv(sim, dyads, reg));

    auto net = analyse_network(tag, sim.likes.to_matrix(), ids, o.net);
    write_graph(dir, "graph_" + tag, net.point);
    sweep += csv::join_row({tag, std::to_string(sim.likes.total()),
                            csv::format(signaling::cross_coalition_share(sim.likes, sim.politicians)),
                            net.defined ? csv::format(net.point.q) : "nan"});
    networks.push_back(std::move(net));
  }
  write(dir / "modularity.csv", modularity_rows(networks));
  write(dir / "sweep_summary.csv", sweep);
  write_manifest(sub, dir / kManifest);
  std::cerr << "simulate: " << runs.size() << " run(s) written to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- analyze / summarize

ingest::Panel load(const PanelOptions& o) {
  std::vector<std::string> order;
  if (!o.periods.empty()) {
    const auto table = ingest::read_periods_csv(o.periods);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& p : table.periods) order.push_back(p.label);
  }
  return ingest::load_panel({o.likes, o.votes, o.following, o.coalitions}, order);
}

int cmd_summarize(const PanelOptions& o, const CLI::App* sub) {
  const fs::path dir = o.out_dir;
  const auto panel = load(o);
  write(dir / "join_report.txt", ingest::join_report_text(panel));
  write(dir / "summary.csv", ingest::summary_csv(ingest::summarize(panel)));
  write_manifest(sub, dir / kManifest);
  return 0;
}

int cmd_analyze(const PanelOptions& o, const CLI::App* sub) {
  const fs::path dir = o.out_dir;
  const auto panel = load(o);
  write(dir / "join_report.txt", ingest::join_report_text(panel));
  write(dir / "summary.csv", ingest::summary_csv(ingest::summarize(panel)));

  std::vector<NetworkOutcome> networks;
  for (auto metric : {ingest::Metric::likes, ingest::Metric::votes}) {
    for (const auto& period : panel.periods) {
      const auto wide = ingest::period_matrix(panel, period, metric);
      const std::string label = std::string(ingest::to_string(metric)) + ":" + period;
      auto net = analyse_network(label, wide.values, wide.ids, o.net);
      write_graph(dir, "network_" + std::string(ingest::to_string(metric)) + "_" + safe_name(period),
                  net.point);
      networks.push_back(std::move(net));
    }
  }
  write(dir / "modularity.csv", modularity_rows(networks));

  const auto se = o.robust ? econometrics::SeType::hc1 : econometrics::SeType::classical;
  for (const auto& spec : econometrics::table_specifications()) {
    const auto res = econometrics::panel_fe_regression(panel.rows, spec, se);
    write(dir / ("regression_" + spec.name + ".csv"), econometrics::regression_csv(res));
  }
  write_manifest(sub, dir / kManifest);
  return 0;
}

// ---------------------------------------------------------------- network

int cmd_network(const MatrixOptions& o, const CLI::App* sub) {
  const fs::path dir = o.out_dir;
  const auto t = csv::read(o.matrix);
  const auto cr = t.column("row_id"), cc = t.column("col_id"), cv = t.column("value");
  std::set<std::string> idset;
  for (const auto& row : t.rows) {
    idset.insert(row[cr]);
    idset.insert(row[cc]);
  }
  std::vector<std::string> ids(idset.begin(), idset.end());
  std::map<std::string, Eigen::Index> index;
  for (std::size_t k = 0; k < ids.size(); ++k) index[ids[k]] = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ids.size()),
                                            static_cast<Eigen::Index>(ids.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    m(index[t.rows[r][cr]], index[t.rows[r][cc]]) = csv::parse_double(t.rows[r][cv], t.where(r));

  const auto net = analyse_network(fs::path(o.matrix).stem().string(), m, ids, o.net);
  write_graph(dir, "graph", net.point);
  write(dir / "modularity.csv", modularity_rows({net}));
  write_manifest(sub, dir / kManifest);
  return 0;
}

}  // namespace

namespace {

int run_parsed(int argc, const char* const* argv) {
  CLI::App app{"polsig: spatial signalling model of politicians' likes, polarization networks "
               "and panel regressions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file of options, e.g. a manifest from an earlier run");

  IdeologyOptions ideo;
  auto* s_ideo = app.add_subcommand("estimate-ideology", "Estimate politicians' ideology from a survey");
  s_ideo->add_option("--survey", ideo.survey, "respondent_id,self_ideology,politician_id,opinion")
      ->required()->check(CLI::ExistingFile);
  s_ideo->add_option("--out", ideo.out, "Output CSV")->capture_default_str();

  SimulateOptions sim;
  auto* s_sim = app.add_subcommand("simulate", "Run the calibrated signalling model");
  add_network_flags(s_sim, sim.net);
  s_sim->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();
  s_sim->add_option("--politicians", sim.politicians, "politician_id,mu,sigma[,coalition][,gamma]")
      ->check(CLI::ExistingFile);
  s_sim->add_option("--coalitions", sim.coalitions, "Coalitions formed by rank of mu")
      ->check(CLI::PositiveNumber)->capture_default_str();
  s_sim->add_option("--electorate", sim.electorate,
                    "empirical_discrete | normal_discrete | normal_continuous")
      ->check(CLI::IsMember({"empirical_discrete", "normal_discrete", "normal_continuous"}))
      ->capture_default_str();
  s_sim->add_option("--shares", sim.shares, "Survey shares of ideology 1..5")
      ->delimiter(',')->expected(5)->capture_default_str();
  s_sim->add_option("--null-share", sim.null_share, "Share of respondents without ideology")
      ->capture_default_str();
  s_sim->add_option("--normal-mean", sim.normal_mean, "Mean for normal electorates (default: empirical)");
  s_sim->add_option("--normal-std", sim.normal_std, "Std for normal electorates (default: empirical)");
  s_sim->add_option("--voting-rule", sim.voting_rule, "group_targeting | proximity")
      ->check(CLI::IsMember({"group_targeting", "proximity"}))->capture_default_str();
  s_sim->add_option("--omega", sim.omega, "Weight voters put on a like's signal")->capture_default_str();
  s_sim->add_option("--messages", sim.messages, "Messages emitted per politician")->capture_default_str();
  s_sim->add_option("--gamma-mode", sim.gamma_mode, "heterogeneous | homogeneous | politicians")
      ->check(CLI::IsMember({"heterogeneous", "homogeneous", "politicians"}))->capture_default_str();
  s_sim->add_option("--gamma", sim.gamma, "Authenticity for homogeneous mode")->capture_default_str();
  s_sim->add_option("--gamma-mean", sim.gamma_mean, "Heterogeneous authenticity mean")->capture_default_str();
  s_sim->add_option("--gamma-sd", sim.gamma_sd, "Heterogeneous authenticity sd")->capture_default_str();
  s_sim->add_option("--gamma-sweep", sim.gamma_sweep, "Homogeneous authenticity levels, one run each")
      ->delimiter(',');
  s_sim->add_flag("--robust", sim.robust, "HC1 standard errors");

  PanelOptions ana;
  auto* s_ana = app.add_subcommand("analyze", "Summaries, networks and fixed-effects regressions of a panel");
  add_network_flags(s_ana, ana.net);
  add_panel_flags(s_ana, ana);
  s_ana->add_flag("--robust", ana.robust, "HC1 standard errors");

  PanelOptions summ;
  auto* s_sum = app.add_subcommand("summarize", "Per-period summary statistics of a panel");
  add_panel_flags(s_sum, summ);

  MatrixOptions mat;
  auto* s_net = app.add_subcommand("network", "Correlation network and modularity of one matrix");
  add_network_flags(s_net, mat.net);
  s_net->add_option("--matrix", mat.matrix, "Long-format matrix: row_id,col_id,value")
      ->required()->check(CLI::ExistingFile);
  s_net->add_option("--out-dir", mat.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::ConfigError);
  }

  try {
    if (s_ideo->parsed()) return cmd_estimate_ideology(ideo, s_ideo);
    if (s_sim->parsed()) return cmd_simulate(sim, s_sim);
    if (s_ana->parsed()) return cmd_analyze(ana, s_ana);
    if (s_sum->parsed()) return cmd_summarize(summ, s_sum);
    if (s_net->parsed()) return cmd_network(mat, s_net);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  // `polsig simulate --config f` is accepted as well as `polsig --config f simulate`:
  // the config option lives on the root app, so hoist it in front of the subcommand.
  std::vector<std::string> hoisted, rest;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      hoisted.push_back(args[k]);
      hoisted.push_back(args[++k]);
    } else if (args[k].rfind("--config=", 0) == 0) {
      hoisted.push_back(args[k]);
    } else {
      rest.push_back(args[k]);
    }
  }
  std::vector<const char*> argv;
  if (!args.empty()) argv.push_back(args[0].c_str());
  for (const auto& a : hoisted) argv.push_back(a.c_str());
  for (const auto& a : rest) argv.push_back(a.c_str());
  return run_parsed(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace polsig::cli
