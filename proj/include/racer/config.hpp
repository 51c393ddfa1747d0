#ifndef RACER_CONFIG_HPP
#define RACER_CONFIG_HPP

#include <cstdint>
#include <string>

#include "racer/env.hpp"
#include "racer/td3.hpp"

namespace racer {

/// Knobs of the training run that are not part of the learning algorithm.
struct TrainingConfig {
  int n_competitors = 4;
  int offset_min = 2;           // spawn offsets, waypoints ahead of the ego
  int offset_max = 30;
  int max_steps = 3000;         // per-episode cap
  int stall_steps = 5;
  double stall_epsilon = 0.01;  // meters of progress that still count as stalled
  double ego_max_speed = 2.0;
  double competitor_speed = 1.5;
  double overtake_margin = 0.5;
  int checkpoint_every = 10000;   // environment steps between full checkpoints
  int reward_smooth_window = 20;  // episodes averaged in the reward curve
};

/// Knobs of the two evaluation protocols.
struct EvalConfig {
  int offset = 8;     // single competitor this many waypoints ahead
  int max_steps = 150;
  int episodes = 100;
  double competitor_speed = 1.5;  // sprint-protocol speed cap
  // Slowed-lap protocol: one full lap to pass a slowed competitor that
  // starts a short randomized gap ahead.
  double slowed_competitor_speed = 0.75;
  int slowed_offset_min = 4;  // waypoints, ~0.5 m apart
  int slowed_offset_max = 6;
  int slowed_max_steps = 4000;
  int timetrial_laps = 3;
  int timetrial_attempts = 5;
  int timetrial_max_steps = 20000;
};

/// Everything a run needs, JSON-overridable field by field.
struct FullConfig {
  VehicleParams vehicle;
  LidarConfig lidar;
  FtgConfig ftg;
  RewardConfig reward;
  Td3Config td3;
  TrainingConfig training;
  EvalConfig eval;

  void validate() const;
};

/// Defaults overlaid with the keys present in the JSON text. Unknown keys
/// and type mismatches raise ConfigError so typos cannot silently revert a
/// field to its default.
FullConfig parse_config(const std::string& json_text);

/// parse_config over the file's contents. An unreadable path is an IoError.
FullConfig load_config(const std::string& path);

/// Every field, alphabetical keys, no whitespace. Equal configs produce
/// byte-equal strings, so this is the hashing and logging form.
std::string canonical_json(const FullConfig& config);

std::uint64_t config_hash(const FullConfig& config);

/// Episode setups derived from one config: many-competitor training
/// episodes, the single-competitor overtake evaluation, and the empty-track
/// time trial. Competitor speed feeds both the follow-the-gap cruise and
/// the competitor vehicle ceiling.
EpisodeConfig training_episode(const FullConfig& config);
EpisodeConfig overtake_eval_episode(const FullConfig& config,
                                    double competitor_speed);
EpisodeConfig timetrial_episode(const FullConfig& config, bool ego_ftg);

/// Network input scaling consistent with this config's physical ranges.
ObservationScale observation_scale(const FullConfig& config);

}  // namespace racer

#endif  // RACER_CONFIG_HPP
