#include "racer/evaluate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>

#include "racer/checkpoint.hpp"
#include "racer/errors.hpp"
#include "racer/td3.hpp"
#include "racer/track_library.hpp"
#include "racer/version.hpp"

namespace racer {

namespace {

using nlohmann::json;

/// Greedy policy wrapper shared by the ego and competitor sides. Separate
/// instances never share an agent, so a mirror match stays isolated.
struct PolicyDriver {
  LoadedPolicy policy;
  ObservationScale scale;
  double max_speed;
  double max_steer;
  Rng scratch{0};  // exploit mode draws nothing from it

  Action act(const Observation& obs) {
    const Eigen::Vector2d a = policy.agent.select_action(
        scale(obs), Td3Agent::Mode::Exploit,
        policy.agent.config().exploration_steps, scratch);
    return denormalize_action(a, max_speed, max_steer);
  }
};

std::unique_ptr<PolicyDriver> make_driver(const std::string& checkpoint_path,
                                          const FullConfig& config) {
  if (checkpoint_path.empty()) return nullptr;
  auto driver = std::make_unique<PolicyDriver>(PolicyDriver{
      load_policy_checkpoint(checkpoint_path), observation_scale(config),
      config.training.ego_max_speed, config.vehicle.max_steer});
  const int want = 2 + config.lidar.sector_count;
  if (driver->policy.meta.obs_dim != want) {
    throw IncompatibleCheckpoint(
        "policy expects " + std::to_string(driver->policy.meta.obs_dim) +
        "-dim observations, this config produces " + std::to_string(want));
  }
  return driver;
}

std::string side_label(const std::string& override_label,
                       const PolicyDriver* driver) {
  if (!override_label.empty()) return override_label;
  return driver ? "policy" : "ftg";
}

double protocol_speed(const OvertakeEvalOptions& options) {
  if (options.competitor_speed > 0.0) return options.competitor_speed;
  return options.protocol == OvertakeProtocol::SlowedLap
             ? options.config.eval.slowed_competitor_speed
             : options.config.eval.competitor_speed;
}

/// Base episode for the protocol; the slowed-lap spawn offset is drawn per
/// episode on top of this.
EpisodeConfig protocol_episode(const OvertakeEvalOptions& options,
                               double competitor_speed) {
  EpisodeConfig epi =
      overtake_eval_episode(options.config, competitor_speed);
  if (options.protocol == OvertakeProtocol::SlowedLap) {
    epi.max_steps = options.config.eval.slowed_max_steps;
    epi.target_laps = 1;  // finishing the lap without passing ends the try
  }
  return epi;
}

int draw_offset(const OvertakeEvalOptions& options, Rng& rng) {
  if (options.protocol != OvertakeProtocol::SlowedLap) {
    return options.config.eval.offset;
  }
  const EvalConfig& e = options.config.eval;
  const std::uint64_t span =
      static_cast<std::uint64_t>(e.slowed_offset_max - e.slowed_offset_min) +
      1;
  return e.slowed_offset_min + static_cast<int>(rng.uniform_int(span));
}

}  // namespace

const char* attempt_outcome_name(AttemptOutcome outcome) {
  switch (outcome) {
    case AttemptOutcome::Overtake: return "overtake";
    case AttemptOutcome::Collision: return "collision";
    case AttemptOutcome::NoOvertake: return "no_overtake";
  }
  return "unknown";
}

const char* overtake_protocol_name(OvertakeProtocol protocol) {
  switch (protocol) {
    case OvertakeProtocol::Sprint: return "sprint";
    case OvertakeProtocol::SlowedLap: return "slowed_lap";
  }
  return "unknown";
}

OvertakeReport run_overtake_eval(const OvertakeEvalOptions& options) {
  options.config.validate();
  const FullConfig& config = options.config;
  const int episodes =
      options.episodes > 0 ? options.episodes : config.eval.episodes;
  const double competitor_speed = protocol_speed(options);

  std::unique_ptr<PolicyDriver> ego =
      make_driver(options.ego_checkpoint, config);
  std::unique_ptr<PolicyDriver> competitor =
      make_driver(options.competitor_checkpoint, config);

  const EpisodeConfig base = protocol_episode(options, competitor_speed);
  const Track track = build_eval_track();

  OvertakeReport report;
  report.ego = side_label(options.ego_label, ego.get());
  report.competitor = side_label(options.competitor_label, competitor.get());
  report.matchup = report.ego + "_vs_" + report.competitor;
  report.protocol = options.protocol;
  report.competitor_speed = competitor_speed;
  report.episodes = episodes;
  report.seed = options.seed;
  report.config_hash = config_hash(config);
  report.ego_hash = ego ? ego->policy.agent.actor().param_hash() : 0;

  Rng rng(options.seed);
  double overtake_seconds = 0.0;
  std::int64_t total_steps = 0;
  for (int ep = 1; ep <= episodes; ++ep) {
    EpisodeConfig epi = base;
    epi.ego_ftg = ego == nullptr;
    const std::uint64_t env_seed = rng.next_u64();
    const int offset = draw_offset(options, rng);
    epi.offset_min = offset;
    epi.offset_max = offset;

    RaceEnv env(track, epi);
    if (competitor) {
      env.set_competitor_controller(
          [&](int, const Observation& obs) { return competitor->act(obs); });
    }
    Observation obs = env.reset(env_seed);
    while (!env.done()) {
      const Action act = ego ? ego->act(obs) : Action{};
      obs = env.step(act).observation;
    }

    const EpisodeOutcome& outcome = env.outcome();
    AttemptRecord rec;
    rec.episode = ep;
    rec.env_seed = env_seed;
    rec.offset = offset;
    rec.termination = outcome.termination;
    rec.steps = outcome.steps;
    rec.ego_progress = outcome.ego_progress;
    total_steps += outcome.steps;
    if (outcome.termination == Termination::OvertakeSuccess) {
      rec.outcome = AttemptOutcome::Overtake;
      rec.time_to_overtake = outcome.steps * config.vehicle.control_period;
      overtake_seconds += rec.time_to_overtake;
      ++report.successes;
    } else if (outcome.termination == Termination::Collision) {
      rec.outcome = AttemptOutcome::Collision;
      ++report.collisions;
    } else {
      rec.outcome = AttemptOutcome::NoOvertake;
      ++report.timeouts;
    }
    report.attempts.push_back(rec);
    if (!options.quiet) {
      std::cout << "[eval] " << report.matchup << " ep " << ep << '/'
                << episodes << ' ' << attempt_outcome_name(rec.outcome)
                << " in " << rec.steps << " steps\n";
    }
  }

  report.success_rate =
      static_cast<double>(report.successes) / report.episodes;
  report.collision_rate =
      static_cast<double>(report.collisions) / report.episodes;
  report.mean_steps =
      static_cast<double>(total_steps) / report.episodes;
  report.mean_time_to_overtake =
      report.successes > 0 ? overtake_seconds / report.successes : 0.0;
  return report;
}

TracedEpisode run_traced_overtake(const OvertakeEvalOptions& options) {
  options.config.validate();
  const double competitor_speed = protocol_speed(options);
  std::unique_ptr<PolicyDriver> ego =
      make_driver(options.ego_checkpoint, options.config);
  std::unique_ptr<PolicyDriver> competitor =
      make_driver(options.competitor_checkpoint, options.config);

  EpisodeConfig epi = protocol_episode(options, competitor_speed);
  epi.ego_ftg = ego == nullptr;
  Rng rng(options.seed);
  const std::uint64_t env_seed = rng.next_u64();
  const int offset = draw_offset(options, rng);
  epi.offset_min = offset;
  epi.offset_max = offset;

  const Track track = build_eval_track();
  RaceEnv env(track, epi);
  env.set_trace_enabled(true);
  if (competitor) {
    env.set_competitor_controller(
        [&](int, const Observation& obs) { return competitor->act(obs); });
  }
  Observation obs = env.reset(env_seed);
  while (!env.done()) {
    const Action act = ego ? ego->act(obs) : Action{};
    obs = env.step(act).observation;
  }
  return TracedEpisode{env.outcome(), env.trace(), track.id()};
}

TimetrialReport run_timetrial(const TimetrialOptions& options) {
  options.config.validate();
  const FullConfig& config = options.config;
  const int attempts = options.attempts > 0
                           ? options.attempts
                           : config.eval.timetrial_attempts;
  std::unique_ptr<PolicyDriver> ego =
      make_driver(options.ego_checkpoint, config);

  const EpisodeConfig epi = timetrial_episode(config, ego == nullptr);
  const Track track = build_eval_track();

  TimetrialReport report;
  report.driver = ego ? "policy" : "ftg";
  report.seed = options.seed;
  report.config_hash = config_hash(config);
  report.ego_hash = ego ? ego->policy.agent.actor().param_hash() : 0;

  Rng rng(options.seed);
  double total_sum = 0.0, total_sq_sum = 0.0;
  for (int i = 1; i <= attempts; ++i) {
    RaceEnv env(track, epi);
    TimetrialAttempt attempt;
    attempt.attempt = i;
    attempt.env_seed = rng.next_u64();

    Observation obs = env.reset(attempt.env_seed);
    while (!env.done()) {
      const Action act = ego ? ego->act(obs) : Action{};
      obs = env.step(act).observation;
    }

    const EpisodeOutcome& outcome = env.outcome();
    attempt.termination = outcome.termination;
    attempt.steps = outcome.steps;
    attempt.laps_completed = static_cast<int>(outcome.lap_times.size());
    attempt.completed = outcome.termination == Termination::LapComplete;
    attempt.lap_times = outcome.lap_times;
    if (attempt.completed) {
      for (double t : attempt.lap_times) attempt.total_time += t;
      total_sum += attempt.total_time;
      total_sq_sum += attempt.total_time * attempt.total_time;
      if (report.completed == 0 || attempt.total_time < report.best_total) {
        report.best_total = attempt.total_time;
      }
      ++report.completed;
    }
    report.attempts.push_back(attempt);
  }
  report.attempts_run = attempts;
  if (report.completed > 0) {
    const double n = report.completed;
    report.mean_total = total_sum / n;
    const double var =
        total_sq_sum / n - report.mean_total * report.mean_total;
    report.stddev_total = std::sqrt(std::max(0.0, var));
  }
  return report;
}

void write_overtake_reports(const std::string& out_dir,
                            const std::vector<OvertakeReport>& reports) {
  if (reports.empty()) throw ConfigError("no matchup results to report");
  for (const OvertakeReport& r : reports) {
    if (r.attempts.empty()) {
      throw ConfigError("matchup " + r.matchup + " has no attempts");
    }
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/summary.csv", std::ios::trunc);
    if (!csv) throw IoError("cannot open " + out_dir + "/summary.csv");
    csv << std::setprecision(12)
        << "matchup,ego,competitor,protocol,competitor_speed,episodes,"
           "successes,collisions,timeouts,success_rate,collision_rate,"
           "mean_steps,mean_time_to_overtake,seed,config_hash,code_version\n";
    for (const OvertakeReport& r : reports) {
      csv << r.matchup << ',' << r.ego << ',' << r.competitor << ','
          << overtake_protocol_name(r.protocol) << ',' << r.competitor_speed
          << ',' << r.episodes << ',' << r.successes << ',' << r.collisions
          << ',' << r.timeouts << ',' << r.success_rate << ','
          << r.collision_rate << ',' << r.mean_steps << ','
          << r.mean_time_to_overtake << ',' << r.seed << ',' << r.config_hash
          << ',' << kCodeVersion << '\n';
    }
  }
  std::ofstream out(out_dir + "/attempts.jsonl", std::ios::trunc);
  if (!out) throw IoError("cannot open " + out_dir + "/attempts.jsonl");
  for (const OvertakeReport& r : reports) {
    json meta;
    meta["kind"] = "meta";
    meta["matchup"] = r.matchup;
    meta["protocol"] = overtake_protocol_name(r.protocol);
    meta["competitor_speed"] = r.competitor_speed;
    meta["seed"] = r.seed;
    meta["config_hash"] = r.config_hash;
    meta["code_version"] = kCodeVersion;
    out << meta.dump() << '\n';
    for (const AttemptRecord& rec : r.attempts) {
      json j;
      j["kind"] = "attempt";
      j["matchup"] = r.matchup;
      j["episode"] = rec.episode;
      j["env_seed"] = rec.env_seed;
      j["offset"] = rec.offset;
      j["outcome"] = attempt_outcome_name(rec.outcome);
      j["termination"] = termination_name(rec.termination);
      j["steps"] = rec.steps;
      j["time_to_overtake"] = rec.time_to_overtake;
      j["ego_progress"] = rec.ego_progress;
      out << j.dump() << '\n';
    }
  }
}

void write_overtake_report(const std::string& out_dir,
                           const OvertakeReport& report) {
  write_overtake_reports(out_dir, {report});
}

void write_timetrial_report(const std::string& out_dir,
                            const TimetrialReport& report) {
  if (report.attempts.empty()) {
    throw ConfigError("no timetrial attempts to report");
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream out(out_dir + "/timetrial.json", std::ios::trunc);
  if (!out) throw IoError("cannot open " + out_dir + "/timetrial.json");
  json j;
  j["driver"] = report.driver;
  j["attempts_run"] = report.attempts_run;
  j["completed"] = report.completed;
  j["mean_total"] = report.mean_total;
  j["stddev_total"] = report.stddev_total;
  j["best_total"] = report.best_total;
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  j["code_version"] = kCodeVersion;
  json arr = json::array();
  for (const TimetrialAttempt& a : report.attempts) {
    json row;
    row["attempt"] = a.attempt;
    row["env_seed"] = a.env_seed;
    row["completed"] = a.completed;
    row["termination"] = termination_name(a.termination);
    row["laps_completed"] = a.laps_completed;
    row["lap_times"] = a.lap_times;
    row["total_time"] = a.total_time;
    row["steps"] = a.steps;
    arr.push_back(row);
  }
  j["attempts"] = arr;
  out << j.dump(2) << '\n';
}

}  // namespace racer
