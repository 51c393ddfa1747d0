#ifndef RACER_TRAINER_HPP
#define RACER_TRAINER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "racer/config.hpp"
#include "racer/env.hpp"

namespace racer {

/// Training mode: Overtake races against follow-the-gap traffic, Race
/// learns the same tracks empty.
enum class TrainMode { Overtake, Race };

const char* train_mode_name(TrainMode mode);

struct TrainerOptions {
  FullConfig config;
  std::uint64_t seed = 0;
  std::string out_dir;         // metrics, reward curve, and checkpoints land here
  TrainMode mode = TrainMode::Overtake;
  int stop_after_steps = 0;    // 0 means config.td3.max_training_steps
  std::string resume_from;     // full checkpoint path; empty starts fresh
  bool quiet = false;
};

struct EpisodeStats {
  std::int64_t episode = 0;     // 1-based, continuous across resume
  std::int64_t global_step = 0; // at episode end
  int track_index = -1;
  std::uint64_t env_seed = 0;
  Termination termination = Termination::None;
  int steps = 0;
  double reward = 0.0;
  double smoothed_reward = 0.0;
  double progress = 0.0;
  int overtaken = 0;
  int updates = 0;
  double critic_loss = 0.0;      // mean over this episode's updates
  double actor_objective = 0.0;  // mean over this episode's actor updates
  double wall_ms = 0.0;
};

struct TrainResult {
  std::vector<EpisodeStats> episodes;  // this invocation only
  std::int64_t global_step = 0;
  std::int64_t episode_count = 0;
  std::uint64_t actor_hash = 0;
  std::string policy_path;
  std::string state_path;
};

/// Runs episodes over the training track library until the step target is
/// reached at an episode boundary. One rng stream drives initialization,
/// track choice, episode seeds, action noise, and replay sampling, so equal
/// seeds give equal runs and a resumed run continues its stream exactly.
TrainResult run_training(const TrainerOptions& options);

}  // namespace racer

#endif  // RACER_TRAINER_HPP
