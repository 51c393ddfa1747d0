#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "CLI11.hpp"
#include "racer/errors.hpp"
#include "racer/evaluate.hpp"
#include "racer/track_library.hpp"
#include "racer/trainer.hpp"
#include "racer/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

racer::FullConfig config_from(const std::string& path) {
  return path.empty() ? racer::FullConfig{} : racer::load_config(path);
}

int run_gen_tracks(const std::string& out_dir) {
  fs::create_directories(out_dir);
  int count = 0;
  auto emit = [&](const racer::TrackSpec& spec) {
    racer::save_track_spec(spec, out_dir + "/" + spec.id + ".json");
    for (const racer::Track& t : racer::generate_track_family(spec)) {
      std::printf("%-12s length %7.2f m  waypoints %3d\n", t.id().c_str(),
                  t.total_length(), t.waypoint_count());
      ++count;
    }
  };
  for (const racer::TrackSpec& spec : racer::training_track_specs()) emit(spec);
  emit(racer::eval_track_spec());
  std::printf("generated %d tracks into %s\n", count, out_dir.c_str());
  return 0;
}

int run_train(const std::string& config_path, const std::string& mode,
              std::uint64_t seed, int steps, const std::string& out_dir,
              const std::string& resume, bool quiet) {
  racer::TrainerOptions opts;
  opts.config = config_from(config_path);
  if (mode == "overtake") {
    opts.mode = racer::TrainMode::Overtake;
  } else if (mode == "race") {
    opts.mode = racer::TrainMode::Race;
  } else {
    throw racer::ConfigError("mode must be overtake or race, got " + mode);
  }
  opts.seed = seed;
  opts.stop_after_steps = steps;
  opts.out_dir = out_dir;
  opts.resume_from = resume;
  opts.quiet = quiet;

  const racer::TrainResult result = racer::run_training(opts);
  std::printf("trained to step %lld over %lld episodes\n",
              static_cast<long long>(result.global_step),
              static_cast<long long>(result.episode_count));
  std::printf("policy  %s\nstate   %s\n", result.policy_path.c_str(),
              result.state_path.c_str());
  return 0;
}

racer::OvertakeProtocol protocol_from(const std::string& name) {
  if (name == "sprint") return racer::OvertakeProtocol::Sprint;
  if (name == "slowed-lap") return racer::OvertakeProtocol::SlowedLap;
  throw racer::ConfigError("protocol must be sprint or slowed-lap, got " +
                           name);
}

// --opponent pins the competitor kind; "auto" infers it from --opp-ckpt.
void check_opponent_choice(const std::string& opponent,
                           const std::string& opp_ckpt) {
  if (opponent == "auto") return;
  if (opponent == "ftg") {
    if (!opp_ckpt.empty()) {
      throw racer::ConfigError(
          "--opponent ftg contradicts --opp-ckpt; drop one");
    }
    return;
  }
  if (opponent == "policy") {
    if (opp_ckpt.empty()) {
      throw racer::ConfigError("--opponent policy needs --opp-ckpt");
    }
    return;
  }
  throw racer::ConfigError("opponent must be ftg or policy, got " + opponent);
}

struct EvalOvertakeArgs {
  std::string config, ego, opp, opponent = "auto", protocol = "sprint";
  std::string ego_label, opp_label, out = "runs/eval";
  std::uint64_t seed = 0;
  int episodes = 0;
  double opp_speed = 0.0;
  bool verbose = false;
};

int run_eval_overtake(const EvalOvertakeArgs& args) {
  check_opponent_choice(args.opponent, args.opp);
  racer::OvertakeEvalOptions opts;
  opts.config = config_from(args.config);
  opts.seed = args.seed;
  opts.protocol = protocol_from(args.protocol);
  opts.episodes = args.episodes;
  opts.competitor_speed = args.opp_speed;
  opts.ego_checkpoint = args.ego;
  opts.competitor_checkpoint = args.opp;
  opts.ego_label = args.ego_label;
  opts.competitor_label = args.opp_label;
  opts.quiet = !args.verbose;

  const racer::OvertakeReport report = racer::run_overtake_eval(opts);
  racer::write_overtake_report(args.out, report);
  std::printf(
      "%s [%s, %.2f m/s]: %d/%d overtakes (%.1f%%), %d collisions, "
      "%d timeouts, mean pass %.1fs\n",
      report.matchup.c_str(), racer::overtake_protocol_name(report.protocol),
      report.competitor_speed, report.successes, report.episodes,
      100.0 * report.success_rate, report.collisions, report.timeouts,
      report.mean_time_to_overtake);
  std::printf("report  %s/summary.csv\n", args.out.c_str());
  return 0;
}

int run_eval_timetrial(const std::string& config_path, std::uint64_t seed,
                       int attempts, const std::string& ego,
                       const std::string& out_dir) {
  racer::TimetrialOptions opts;
  opts.config = config_from(config_path);
  opts.seed = seed;
  opts.attempts = attempts;
  opts.ego_checkpoint = ego;

  const racer::TimetrialReport report = racer::run_timetrial(opts);
  racer::write_timetrial_report(out_dir, report);
  std::printf("%s: %d/%d attempts completed", report.driver.c_str(),
              report.completed, report.attempts_run);
  if (report.completed > 0) {
    std::printf(", total %.1fs +/- %.1fs, best %.1fs", report.mean_total,
                report.stddev_total, report.best_total);
  }
  std::printf("\n");
  for (const racer::TimetrialAttempt& a : report.attempts) {
    std::printf("  attempt %d: %s, %d laps", a.attempt,
                racer::termination_name(a.termination), a.laps_completed);
    for (double t : a.lap_times) std::printf("  %.1fs", t);
    std::printf("\n");
  }
  std::printf("report  %s/timetrial.json\n", out_dir.c_str());
  return 0;
}

int run_print_config(const std::string& config_path) {
  const racer::FullConfig config = config_from(config_path);
  json doc;
  doc["code_version"] = racer::kCodeVersion;
  doc["config_hash"] = racer::config_hash(config);
  doc["config"] = json::parse(racer::canonical_json(config));
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int run_replay_trace(const std::string& config_path, std::uint64_t seed,
                     const std::string& ego, const std::string& opp,
                     const std::string& protocol, double opp_speed,
                     const std::string& out_path) {
  racer::OvertakeEvalOptions opts;
  opts.config = config_from(config_path);
  opts.seed = seed;
  opts.protocol = protocol_from(protocol);
  opts.ego_checkpoint = ego;
  opts.competitor_checkpoint = opp;
  opts.competitor_speed = opp_speed;

  const racer::TracedEpisode episode = racer::run_traced_overtake(opts);
  json doc;
  doc["track"] = episode.track_id;
  doc["seed"] = seed;
  doc["termination"] = racer::termination_name(episode.outcome.termination);
  doc["steps"] = episode.outcome.steps;
  doc["progress"] = episode.outcome.ego_progress;
  doc["overtaken"] = episode.outcome.overtaken_count;
  json rows = json::array();
  for (const racer::TraceRow& row : episode.trace) {
    json r;
    r["step"] = row.step;
    r["poses"] = row.poses;
    r["ego_action"] = {row.ego_action.speed, row.ego_action.steer};
    json comp = json::array();
    for (const racer::Action& a : row.competitor_actions) {
      comp.push_back({a.speed, a.steer});
    }
    r["competitor_actions"] = comp;
    r["reward"] = row.reward.total;
    r["termination"] = racer::termination_name(row.termination);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  if (const fs::path parent = fs::path(out_path).parent_path();
      !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw racer::IoError("cannot open " + out_path);
  out << doc.dump() << '\n';
  std::printf("%s in %d steps, trace %s\n",
              racer::termination_name(episode.outcome.termination),
              episode.outcome.steps, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D racing simulator and overtaking trainer"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-tracks", "Write track definition files");
  std::string gen_out = "data/tracks";
  gen->add_option("--out", gen_out, "Output directory");

  auto* train = app.add_subcommand("train", "Train an agent with TD3");
  std::string train_config, train_mode = "overtake", train_out = "runs/train";
  std::string train_resume;
  std::uint64_t train_seed = 0;
  int train_steps = 0;
  bool train_quiet = false;
  train->add_option("--config", train_config, "JSON config overrides");
  train->add_option("--mode", train_mode, "overtake (default) or race");
  train->add_option("--seed", train_seed, "Run seed");
  train->add_option("--steps", train_steps,
                    "Stop at the first episode boundary past this step count");
  train->add_option("--out", train_out, "Output directory");
  train->add_option("--resume", train_resume, "Full checkpoint to resume");
  train->add_flag("--quiet", train_quiet, "No per-episode progress lines");

  auto* evo = app.add_subcommand("eval-overtake",
                                 "Overtake success rate on the held-out track");
  EvalOvertakeArgs evo_args;
  evo->add_option("--config", evo_args.config, "JSON config overrides");
  evo->add_option("--seed", evo_args.seed, "Evaluation seed");
  evo->add_option("--episodes", evo_args.episodes,
                  "Episode count (default config)");
  evo->add_option("--protocol", evo_args.protocol,
                  "sprint (default): fixed gap, fixed step window; "
                  "slowed-lap: short random gap, one lap to pass");
  evo->add_option("--ego-ckpt", evo_args.ego,
                  "Policy checkpoint for the ego; omit for follow-the-gap");
  evo->add_option("--opp-ckpt", evo_args.opp,
                  "Policy checkpoint for the competitor; omit for follow-the-gap");
  evo->add_option("--opponent", evo_args.opponent,
                  "ftg or policy; default inferred from --opp-ckpt");
  evo->add_option("--ego-label", evo_args.ego_label,
                  "Matchup name for the ego (default policy/ftg)");
  evo->add_option("--opp-label", evo_args.opp_label,
                  "Matchup name for the competitor");
  evo->add_option("--opp-speed", evo_args.opp_speed,
                  "Competitor speed in m/s (default: protocol's configured)");
  evo->add_option("--out", evo_args.out, "Report directory");
  evo->add_flag("--verbose", evo_args.verbose, "Per-episode outcome lines");

  auto* evt = app.add_subcommand("eval-timetrial",
                                 "Lap the held-out track without traffic");
  std::string evt_config, evt_ego, evt_out = "runs/timetrial";
  std::uint64_t evt_seed = 0;
  int evt_attempts = 0;
  evt->add_option("--config", evt_config, "JSON config overrides");
  evt->add_option("--seed", evt_seed, "Spawn seed");
  evt->add_option("--attempts", evt_attempts,
                  "Seeded attempts (default config)");
  evt->add_option("--ego-ckpt", evt_ego,
                  "Policy checkpoint; omit for follow-the-gap");
  evt->add_option("--out", evt_out, "Report directory");

  auto* pc = app.add_subcommand("print-config",
                                "Resolved config, canonical form and hash");
  std::string pc_config;
  pc->add_option("--config", pc_config, "JSON config overrides");

  auto* rt = app.add_subcommand("replay-trace",
                                "Record one overtake episode pose by pose");
  std::string rt_config, rt_ego, rt_opp, rt_protocol = "sprint";
  std::string rt_out = "runs/trace.json";
  std::uint64_t rt_seed = 0;
  double rt_speed = 0.0;
  rt->add_option("--config", rt_config, "JSON config overrides");
  rt->add_option("--seed", rt_seed, "Episode seed");
  rt->add_option("--ego-ckpt", rt_ego,
                 "Policy checkpoint; omit for follow-the-gap");
  rt->add_option("--opp-ckpt", rt_opp,
                 "Policy checkpoint for the competitor");
  rt->add_option("--protocol", rt_protocol, "sprint or slowed-lap");
  rt->add_option("--opp-speed", rt_speed, "Competitor speed in m/s");
  rt->add_option("--out", rt_out, "Trace file path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen_tracks(gen_out);
    if (train->parsed()) {
      return run_train(train_config, train_mode, train_seed, train_steps,
                       train_out, train_resume, train_quiet);
    }
    if (evo->parsed()) return run_eval_overtake(evo_args);
    if (evt->parsed()) {
      return run_eval_timetrial(evt_config, evt_seed, evt_attempts, evt_ego,
                                evt_out);
    }
    if (pc->parsed()) return run_print_config(pc_config);
    if (rt->parsed()) {
      return run_replay_trace(rt_config, rt_seed, rt_ego, rt_opp, rt_protocol,
                              rt_speed, rt_out);
    }
  } catch (const racer::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const racer::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const racer::CorruptCheckpoint& e) {
    std::fprintf(stderr, "corrupt checkpoint: %s\n", e.what());
    return 4;
  } catch (const racer::IncompatibleCheckpoint& e) {
    std::fprintf(stderr, "incompatible checkpoint: %s\n", e.what());
    return 4;
  } catch (const racer::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 1;
}
