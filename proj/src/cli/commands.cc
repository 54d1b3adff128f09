// Copyright 2026 The Mirrorplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mirrorplay/cli/commands.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "mirrorplay/analysis.h"
#include "mirrorplay/cli/checks.h"

namespace mirrorplay::cli {
namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (fs::path(cfg.output.dir) / file).string();
}

void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output.dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + cfg.output.dir +
                      "': " + ec.message());
  }
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(number_json(v[k]));
  return out;
}

// Column labels x_<player>_<coordinate>, 1-based.
std::vector<std::string> block_labels(const Game& game, const char* prefix) {
  std::vector<std::string> labels;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int j = 0; j < game.dim(i); ++j) {
      labels.push_back(std::string(prefix) + "_" + std::to_string(i + 1) + "_" +
                       std::to_string(j + 1));
    }
  }
  return labels;
}

void append_row(std::ostringstream& os, const std::vector<double>& row) {
  for (size_t k = 0; k < row.size(); ++k) {
    os << (k ? "," : "") << csv_number(row[k]);
  }
  os << "\n";
}

void append_header(std::ostringstream& os,
                   const std::vector<std::string>& columns) {
  for (size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
  os << "\n";
}

std::string trajectory_csv(const MdgContext& ctx, const DualTrajectory& traj,
                           int stride) {
  const Game& game = ctx.game;
  const int players = game.num_players();
  std::vector<std::string> columns{"t"};
  for (const char* prefix : {"x", "y", "u"}) {
    const std::vector<std::string> labels = block_labels(game, prefix);
    columns.insert(columns.end(), labels.begin(), labels.end());
  }
  columns.push_back("V_total");
  for (int i = 0; i < players; ++i) columns.push_back("V_" + std::to_string(i + 1));
  for (int i = 0; i < players; ++i) columns.push_back("c_" + std::to_string(i + 1));

  std::vector<ValueFn> values;
  for (int i = 0; i < players; ++i) values.push_back(make_value_fn(ctx, i));

  std::ostringstream os;
  append_header(os, columns);
  for (int k = 0; k < traj.num_nodes(); k += stride) {
    std::vector<double> row{traj.times[k]};
    const Vector x = traj.state(k), y = traj.y(k), u = traj.u(k);
    for (const Vector* v : {&x, &y, &u}) {
      row.insert(row.end(), v->data(), v->data() + v->size());
    }
    std::vector<double> v(players), c(players);
    double total = 0.0;
    for (int i = 0; i < players; ++i) {
      v[i] = value(values[i], x);
      total += v[i];
      c[i] = stage_cost(ctx, i, x, u.segment(game.offset(i), game.dim(i)));
    }
    row.push_back(total);
    row.insert(row.end(), v.begin(), v.end());
    row.insert(row.end(), c.begin(), c.end());
    append_row(os, row);
  }
  return os.str();
}

void report_error(const std::exception& e) {
  std::cerr << "mirrorplay: error: " << e.what() << "\n";
}

Json metadata(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["artifact_version"] = kArtifactVersion;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  return j;
}

void run_checks(CheckSession& session, const std::vector<std::string>& names,
                VerificationReport& report) {
  for (const std::string& name : names) {
    report.checks.push_back(session.run(name));
  }
}

VerificationReport empty_report(const RunConfig& cfg,
                                const std::string& command) {
  VerificationReport report;
  report.config_hash = config_hash(cfg);
  report.seed = cfg.seed;
  report.command = command;
  return report;
}

void write_report(const RunConfig& cfg, const VerificationReport& report) {
  if (cfg.output.wants("json")) {
    write_text_file(out_path(cfg, "report.json"),
                    to_json(report).dump(2) + "\n");
  }
}

void print_summary(const VerificationReport& report) {
  for (const CheckRecord& r : report.checks) {
    std::cout << to_string(r.status) << "  " << r.name;
    if (!r.message.empty()) std::cout << "  (" << r.message << ")";
    std::cout << "\n";
  }
}

bool is_stochastic_check(const std::string& name) {
  return name == "mc_time_average" || name == "mc_exp_bound";
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& overrides) {
  if (overrides.out_dir) cfg.output.dir = *overrides.out_dir;
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
    if (cfg.stochastic) cfg.stochastic->seed = *overrides.seed;
  }
  if (overrides.checks) {
    const std::vector<std::string>& valid = registered_checks();
    cfg.checks.clear();
    for (const std::string& name : *overrides.checks) {
      if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
        std::string list;
        for (const std::string& v : valid) list += (list.empty() ? "" : ", ") + v;
        throw ConfigError("--checks: unknown check '" + name +
                          "' (valid: " + list + ")");
      }
      if (std::find(cfg.checks.begin(), cfg.checks.end(), name) ==
          cfg.checks.end()) {
        cfg.checks.push_back(name);
      }
    }
  }
}

int run_simulate(const RunConfig& cfg) {
  prepare_output(cfg);
  Json summary = metadata(cfg, "simulate");
  try {
    const std::unique_ptr<Game> game = build_game(cfg);
    const AggregatedMirror mirror = build_mirror(cfg);
    const DualTrajectory traj = integrate_mp(*game, mirror, cfg.sim);
    const MdgContext ctx(*game, mirror,
                         resolve_equilibrium(*game, mirror, cfg.sim.x0));
    if (cfg.output.wants("csv")) {
      write_text_file(out_path(cfg, "trajectory.csv"),
                      trajectory_csv(ctx, traj, cfg.output.stride));
    }
    const int last = traj.num_nodes() - 1;
    summary["failed"] = false;
    summary["horizon"] = cfg.sim.horizon;
    summary["dt"] = cfg.sim.dt;
    summary["nodes"] = traj.num_nodes();
    summary["stride"] = cfg.output.stride;
    summary["equilibrium"] = vector_json(ctx.y_bar);
    summary["terminal_state"] = vector_json(traj.state(last));
    summary["terminal_strategy"] = vector_json(traj.y(last));
    summary["V_initial"] = number_json(total_value(ctx, traj.state(0)));
    summary["V_terminal"] = number_json(total_value(ctx, traj.state(last)));
    summary["vi_residual_terminal"] = number_json(vi_residual(*game, traj.y(last)));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report_error(e);
    summary["failed"] = true;
    summary["failure"] = e.what();
    write_text_file(out_path(cfg, "summary.json"), summary.dump(2) + "\n");
    return kExitNumericError;
  }
  if (cfg.output.wants("json")) {
    write_text_file(out_path(cfg, "summary.json"), summary.dump(2) + "\n");
  }
  return kExitOk;
}

VerificationReport verify_report(const RunConfig& cfg,
                                 const std::string& command) {
  VerificationReport report = empty_report(cfg, command);
  CheckSession session(cfg);
  run_checks(session, requested_checks(cfg), report);
  return report;
}

int run_verify(const RunConfig& cfg) {
  prepare_output(cfg);
  VerificationReport report = empty_report(cfg, "verify");
  try {
    CheckSession session(cfg);
    run_checks(session, requested_checks(cfg), report);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report_error(e);
    report.failed = true;
    report.failure = e.what();
    print_summary(report);
    write_text_file(out_path(cfg, "report.json"),
                    to_json(report).dump(2) + "\n");
    return kExitNumericError;
  }
  print_summary(report);
  write_report(cfg, report);
  return report.any_check_failed() ? kExitCheckFailed : kExitOk;
}

int run_mc(const RunConfig& cfg) {
  if (!cfg.stochastic) {
    throw ConfigError("config field 'stochastic': required by 'mc'");
  }
  prepare_output(cfg);
  VerificationReport report = empty_report(cfg, "mc");
  Json summary = metadata(cfg, "mc");
  try {
    CheckSession session(cfg);
    const Ensemble& ensemble = session.ensemble();
    const EnsembleStats& stats = session.ensemble_stats();

    if (cfg.output.wants("csv")) {
      std::ostringstream os;
      append_header(os, {"t", "mean_divergence", "standard_error"});
      for (size_t k = 0; k < stats.times.size(); ++k) {
        append_row(os, {stats.times[k], stats.mean[k], stats.standard_error[k]});
      }
      write_text_file(out_path(cfg, "ensemble.csv"), os.str());

      const std::vector<std::string> labels = block_labels(session.game(), "x");
      std::vector<std::string> columns{"t"};
      columns.insert(columns.end(), labels.begin(), labels.end());
      int written = 0;
      for (size_t p = 0; p < ensemble.paths.size() &&
                         written < cfg.output.raw_paths;
           ++p) {
        const PathResult& path = ensemble.paths[p];
        if (path.aborted) continue;
        std::ostringstream raw;
        append_header(raw, columns);
        for (Eigen::Index k = 0; k < path.recorded.cols();
             k += cfg.output.stride) {
          std::vector<double> row{ensemble.record_times[k]};
          row.insert(row.end(), path.recorded.col(k).data(),
                     path.recorded.col(k).data() + path.recorded.rows());
          append_row(raw, row);
        }
        write_text_file(out_path(cfg, "path_" + std::to_string(p) + ".csv"),
                        raw.str());
        ++written;
      }
    }

    Vector avg = Vector::Zero(session.game().total_dim());
    for (const Vector& v : stats.time_averages) avg += v;
    if (!stats.time_averages.empty()) avg /= stats.time_averages.size();
    summary["failed"] = false;
    summary["epsilon"] = cfg.stochastic->epsilon;
    summary["paths"] = cfg.stochastic->paths;
    summary["paths_used"] = stats.paths_used;
    summary["aborted"] = stats.aborted;
    summary["equilibrium"] = vector_json(session.context().y_bar);
    summary["mean_time_average"] = vector_json(avg);
    Json times = Json::array(), mean = Json::array(), se = Json::array();
    for (size_t k = 0; k < stats.times.size(); ++k) {
      times.push_back(stats.times[k]);
      mean.push_back(number_json(stats.mean[k]));
      se.push_back(number_json(stats.standard_error[k]));
    }
    summary["times"] = times;
    summary["mean_divergence"] = mean;
    summary["standard_error"] = se;

    std::vector<std::string> names;
    for (const std::string& name : requested_checks(cfg)) {
      if (is_stochastic_check(name)) names.push_back(name);
    }
    if (cfg.checks.empty() && names.empty()) {
      names = {"mc_time_average", "mc_exp_bound"};
    }
    run_checks(session, names, report);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report_error(e);
    summary["failed"] = true;
    summary["failure"] = e.what();
    report.failed = true;
    report.failure = e.what();
    write_text_file(out_path(cfg, "ensemble.json"), summary.dump(2) + "\n");
    write_text_file(out_path(cfg, "report.json"),
                    to_json(report).dump(2) + "\n");
    return kExitNumericError;
  }
  if (cfg.output.wants("json")) {
    write_text_file(out_path(cfg, "ensemble.json"), summary.dump(2) + "\n");
  }
  print_summary(report);
  write_report(cfg, report);
  return report.any_check_failed() ? kExitCheckFailed : kExitOk;
}

int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides) {
  try {
    RunConfig cfg = parse_config(config_path);
    apply_overrides(cfg, overrides);
    if (command == "simulate") return run_simulate(cfg);
    if (command == "verify") return run_verify(cfg);
    if (command == "mc") return run_mc(cfg);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    report_error(e);
    return kExitConfigError;
  } catch (const Error& e) {
    report_error(e);
    return kExitNumericError;
  }
}

}  // namespace mirrorplay::cli
