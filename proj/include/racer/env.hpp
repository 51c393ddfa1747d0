#ifndef RACER_ENV_HPP
#define RACER_ENV_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "racer/ftg.hpp"
#include "racer/lidar.hpp"
#include "racer/reward.hpp"
#include "racer/rng.hpp"
#include "racer/track.hpp"
#include "racer/vehicle.hpp"

namespace racer {

/// Ego observation: [speed, steering, d_0 .. d_{sectors-1}].
using Observation = std::vector<double>;

enum class Termination {
  None,
  Collision,
  Stall,
  MaxSteps,
  OvertakeSuccess,
  LapComplete,
};

const char* termination_name(Termination t);

struct EpisodeConfig {
  int n_competitors = 4;
  int offset_min = 2;    // competitor spawn, waypoints ahead of the ego
  int offset_max = 30;
  int max_steps = 3000;
  int stall_steps = 5;
  double stall_epsilon = 0.01;     // meters of progress per step
  double ego_max_speed = 2.0;
  double competitor_max_speed = 1.5;
  double overtake_margin = 0.5;    // one car length of clear lead
  bool end_on_overtake = false;    // stop once every competitor is passed
  int target_laps = 0;             // when > 0, stop after this many ego laps
  bool ego_ftg = false;            // ego drives itself by follow-the-gap
  VehicleParams vehicle;
  LidarConfig lidar;
  FtgConfig ftg;  // ego-side; competitors run it capped to competitor_max_speed
  RewardConfig reward;
};

struct EpisodeOutcome {
  Termination termination = Termination::None;
  int steps = 0;
  double ego_progress = 0.0;  // cumulative signed meters along the spline
  int overtaken_count = 0;
  std::vector<double> lap_times;  // seconds per completed ego lap
  std::uint64_t seed = 0;
};

struct StepResult {
  Observation observation;
  RewardBreakdown reward;
  bool done = false;
  EpisodeOutcome outcome;  // snapshot, final when done
};

/// One step of the episode trace, for replay and debugging.
struct TraceRow {
  int step = 0;
  // Per vehicle (ego first): x, y, heading, speed, steering.
  std::vector<std::array<double, 5>> poses;
  Action ego_action;
  std::vector<Action> competitor_actions;
  RewardBreakdown reward;
  Termination termination = Termination::None;
};

/// True when the ego's unwrapped arc leads the competitor's by at least
/// the margin. Both arcs accumulate from spawn, so crossing the start
/// line cannot fake or undo a pass.
bool detect_overtake(double ego_unwrapped_arc, double competitor_unwrapped_arc,
                     double margin);

/// Multi-vehicle episode on one track: the ego is externally controlled,
/// competitors run follow-the-gap. Single stepper per instance; separate
/// instances are independent.
class RaceEnv {
 public:
  RaceEnv(const Track& track, const EpisodeConfig& config);

  /// Spawns all vehicles and returns the first observation. The ego takes
  /// a uniformly random waypoint; competitors take distinct offsets ahead.
  Observation reset(std::uint64_t seed);

  /// Advances one control period. Throws SteppedDoneEpisode once done.
  /// With ego_ftg set the passed action is ignored and the ego follows
  /// the gap controller on its own raw scan.
  StepResult step(const Action& ego_action);

  /// Overrides follow-the-gap for live competitors: called with the
  /// competitor index and its sector observation, returns its command
  /// (still subject to the competitor's vehicle limits).
  using CompetitorController =
      std::function<Action(int index, const Observation&)>;
  void set_competitor_controller(CompetitorController controller) {
    competitor_controller_ = std::move(controller);
  }

  bool done() const { return done_; }
  const EpisodeOutcome& outcome() const { return outcome_; }
  const Track& track() const { return track_; }
  const EpisodeConfig& config() const { return config_; }
  int observation_size() const { return 2 + config_.lidar.sector_count; }

  const VehicleState& ego_state() const;
  const VehicleState& competitor_state(int i) const;
  bool competitor_crashed(int i) const;
  bool competitor_overtaken(int i) const;
  double ego_unwrapped_arc() const;
  double competitor_unwrapped_arc(int i) const;

  void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  struct Car {
    Vehicle vehicle;
    TrackProjection prev_proj;
    double unwrapped_arc = 0.0;
    bool crashed = false;
    bool overtaken = false;
  };

  Observation observe_car(int car_index);
  std::vector<OrientedRect> bodies_except(int car_index) const;
  bool hits_wall(const OrientedRect& body) const;

  const Track& track_;
  EpisodeConfig config_;
  Lidar lidar_;
  VehicleParams ego_params_;
  VehicleParams competitor_params_;
  FtgConfig competitor_ftg_;
  Rng rng_{0};

  std::vector<Car> cars_;  // index 0 is the ego
  double prev_ego_steering_ = 0.0;
  double ego_spawn_unwrapped_ = 0.0;
  double last_lap_time_ = 0.0;
  int stall_count_ = 0;
  int steps_ = 0;
  bool done_ = true;  // reset() arms the episode
  EpisodeOutcome outcome_;

  CompetitorController competitor_controller_;
  bool trace_enabled_ = false;
  std::vector<TraceRow> trace_;
  std::vector<double> scan_buf_;
};

}  // namespace racer

#endif  // RACER_ENV_HPP
