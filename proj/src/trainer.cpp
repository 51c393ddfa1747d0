#include "racer/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <limits>

#include "racer/checkpoint.hpp"
#include "racer/errors.hpp"
#include "racer/td3.hpp"
#include "racer/track_library.hpp"
#include "racer/version.hpp"

namespace racer {

namespace {

using nlohmann::json;

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

json meta_line(const TrainerOptions& options, std::uint64_t cfg_hash,
               int obs_dim, std::int64_t started_at_step,
               std::int64_t stop_target) {
  json j;
  j["kind"] = "meta";
  j["code_version"] = kCodeVersion;
  j["mode"] = train_mode_name(options.mode);
  j["seed"] = options.seed;
  j["config_hash"] = cfg_hash;
  j["obs_dim"] = obs_dim;
  j["started_at_step"] = started_at_step;
  j["stop_target"] = stop_target;
  j["resumed"] = !options.resume_from.empty();
  return j;
}

json episode_line(const EpisodeStats& s) {
  json j;
  j["kind"] = "episode";
  j["episode"] = s.episode;
  j["global_step"] = s.global_step;
  j["track"] = s.track_index;
  j["env_seed"] = s.env_seed;
  j["termination"] = termination_name(s.termination);
  j["steps"] = s.steps;
  j["reward"] = s.reward;
  j["smoothed_reward"] = s.smoothed_reward;
  j["progress"] = s.progress;
  j["overtaken"] = s.overtaken;
  j["updates"] = s.updates;
  j["critic_loss"] = s.critic_loss;
  j["actor_objective"] = s.actor_objective;
  j["wall_ms"] = s.wall_ms;
  return j;
}

}  // namespace

const char* train_mode_name(TrainMode mode) {
  return mode == TrainMode::Overtake ? "overtake" : "race";
}

TrainResult run_training(const TrainerOptions& options) {
  namespace fs = std::filesystem;
  options.config.validate();
  const FullConfig& config = options.config;
  const Td3Config& td3 = config.td3;
  const int obs_dim = 2 + config.lidar.sector_count;
  const std::uint64_t cfg_hash = config_hash(config);
  const std::int64_t stop_target = options.stop_after_steps > 0
                                       ? options.stop_after_steps
                                       : td3.max_training_steps;

  const std::vector<Track> tracks = build_training_tracks();
  EpisodeConfig epi = training_episode(config);
  if (options.mode == TrainMode::Race) epi.n_competitors = 0;
  const ObservationScale scale = observation_scale(config);

  // Single stream for everything stochastic; resume restores it mid-flight.
  Rng rng(options.seed);
  std::int64_t global_step = 0;
  std::int64_t episode_count = 0;
  std::vector<double> recent_rewards;

  std::unique_ptr<Td3Agent> agent;
  std::unique_ptr<ReplayBuffer> buffer;
  if (options.resume_from.empty()) {
    agent = std::make_unique<Td3Agent>(obs_dim, td3, rng);
    buffer = std::make_unique<ReplayBuffer>(td3.buffer_capacity, obs_dim, 2);
  } else {
    LoadedTrainerState state = load_full_checkpoint(options.resume_from);
    if (state.meta.config_hash != cfg_hash) {
      throw IncompatibleCheckpoint(
          "checkpoint was trained under a different config");
    }
    agent = std::make_unique<Td3Agent>(std::move(state.agent));
    buffer = std::make_unique<ReplayBuffer>(std::move(state.buffer));
    rng = state.rng;
    global_step = state.meta.global_step;
    episode_count = state.meta.episode_count;
    recent_rewards = std::move(state.extra);
  }

  fs::create_directories(options.out_dir);
  const std::string metrics_path = options.out_dir + "/metrics.jsonl";
  const std::string curve_path = options.out_dir + "/reward_curve.csv";
  const bool fresh = options.resume_from.empty();
  std::ofstream metrics(metrics_path,
                        fresh ? std::ios::trunc : std::ios::app);
  if (!metrics) throw IoError("cannot open " + metrics_path);
  std::ofstream curve(curve_path, fresh ? std::ios::trunc : std::ios::app);
  if (!curve) throw IoError("cannot open " + curve_path);
  curve << std::setprecision(12);
  if (fresh) {
    curve << "# seed=" << options.seed << " config_hash=" << cfg_hash
          << " code_version=" << kCodeVersion << '\n'
          << "episode,global_step,reward,smoothed\n";
  }
  metrics << meta_line(options, cfg_hash, obs_dim, global_step, stop_target)
                 .dump()
          << '\n';
  metrics.flush();

  TrainResult result;
  result.policy_path = options.out_dir + "/policy.ckpt";
  result.state_path = options.out_dir + "/train_state.ckpt";

  const auto save_state = [&]() {
    CheckpointMeta meta;
    meta.obs_dim = obs_dim;
    meta.config = td3;
    meta.config_hash = cfg_hash;
    meta.global_step = global_step;
    meta.episode_count = episode_count;
    save_full_checkpoint(result.state_path, *agent, *buffer, rng, meta,
                         recent_rewards);
    save_policy_checkpoint(result.policy_path, *agent, meta);
  };

  std::int64_t last_checkpoint_step = global_step;
  const int smooth_window = config.training.reward_smooth_window;

  while (global_step < stop_target) {
    const int track_index =
        static_cast<int>(rng.uniform_int(tracks.size()));
    const std::uint64_t env_seed = rng.next_u64();
    RaceEnv env(tracks[static_cast<std::size_t>(track_index)], epi);
    Eigen::VectorXd obs = scale(env.reset(env_seed));

    EpisodeStats stats;
    stats.track_index = track_index;
    stats.env_seed = env_seed;
    double critic_sum = 0.0, actor_sum = 0.0;
    int actor_updates = 0;
    const auto t0 = std::chrono::steady_clock::now();

    while (!env.done()) {
      const int phase_step = static_cast<int>(std::min<std::int64_t>(
          global_step, std::numeric_limits<int>::max()));
      const Eigen::Vector2d action = agent->select_action(
          obs, Td3Agent::Mode::Explore, phase_step, rng);
      const StepResult sr = env.step(denormalize_action(
          action, epi.ego_max_speed, config.vehicle.max_steer));
      ++global_step;
      const Eigen::VectorXd next = scale(sr.observation);
      // Timeouts bootstrap; only real failure states are absorbing.
      const bool absorbing =
          sr.outcome.termination == Termination::Collision ||
          sr.outcome.termination == Termination::Stall;
      buffer->add(obs, action, sr.reward.total, next, absorbing);
      if (global_step >= td3.exploration_steps &&
          buffer->size() >= td3.batch_size) {
        const Td3Agent::UpdateReport rep = agent->update(*buffer, rng);
        critic_sum += 0.5 * (rep.critic1_loss + rep.critic2_loss);
        ++stats.updates;
        if (rep.actor_updated) {
          actor_sum += rep.actor_objective;
          ++actor_updates;
        }
      }
      obs = next;
      stats.reward += sr.reward.total;
    }

    ++episode_count;
    const EpisodeOutcome& outcome = env.outcome();
    stats.episode = episode_count;
    stats.global_step = global_step;
    stats.termination = outcome.termination;
    stats.steps = outcome.steps;
    stats.progress = outcome.ego_progress;
    stats.overtaken = outcome.overtaken_count;
    stats.critic_loss = stats.updates > 0
                            ? critic_sum / stats.updates
                            : 0.0;
    stats.actor_objective =
        actor_updates > 0 ? actor_sum / actor_updates : 0.0;
    stats.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

    recent_rewards.push_back(stats.reward);
    if (static_cast<int>(recent_rewards.size()) > smooth_window) {
      recent_rewards.erase(recent_rewards.begin());
    }
    stats.smoothed_reward = mean_of(recent_rewards);

    metrics << episode_line(stats).dump() << '\n';
    metrics.flush();
    curve << stats.episode << ',' << stats.global_step << ',' << stats.reward
          << ',' << stats.smoothed_reward << '\n';
    curve.flush();
    if (!options.quiet) {
      std::cout << "[train] ep " << stats.episode << " step " << global_step
                << '/' << stop_target << " reward " << std::fixed
                << std::setprecision(2) << stats.reward << " smoothed "
                << stats.smoothed_reward << std::defaultfloat << ' '
                << termination_name(stats.termination) << " (track "
                << track_index << ")\n";
    }
    result.episodes.push_back(stats);

    if (global_step - last_checkpoint_step >= config.training.checkpoint_every) {
      save_state();
      last_checkpoint_step = global_step;
    }
  }

  save_state();
  result.global_step = global_step;
  result.episode_count = episode_count;
  result.actor_hash = agent->actor().param_hash();
  return result;
}

}  // namespace racer
