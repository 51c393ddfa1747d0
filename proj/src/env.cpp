#include "racer/env.hpp"

#include <algorithm>
#include <cmath>

#include "racer/errors.hpp"
#include "racer/geometry.hpp"

namespace racer {
namespace {

// Spawn offsets must sit at least this many waypoints apart.
constexpr int kMinOffsetSeparation = 3;
constexpr int kMaxSpawnAttempts = 100000;

bool rect_near_segment(const OrientedRect& rect, double reach,
                       const Segment& seg) {
  const double lo_x = std::min(seg.a.x(), seg.b.x()) - reach;
  const double hi_x = std::max(seg.a.x(), seg.b.x()) + reach;
  const double lo_y = std::min(seg.a.y(), seg.b.y()) - reach;
  const double hi_y = std::max(seg.a.y(), seg.b.y()) + reach;
  return rect.center.x() >= lo_x && rect.center.x() <= hi_x &&
         rect.center.y() >= lo_y && rect.center.y() <= hi_y;
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::None: return "none";
    case Termination::Collision: return "collision";
    case Termination::Stall: return "stall";
    case Termination::MaxSteps: return "max_steps";
    case Termination::OvertakeSuccess: return "overtake_success";
    case Termination::LapComplete: return "lap_complete";
  }
  return "unknown";
}

bool detect_overtake(double ego_unwrapped_arc, double competitor_unwrapped_arc,
                     double margin) {
  return ego_unwrapped_arc - competitor_unwrapped_arc >= margin;
}

RaceEnv::RaceEnv(const Track& track, const EpisodeConfig& config)
    : track_(track), config_(config), lidar_(config.lidar) {
  if (config_.n_competitors < 0) {
    throw ConfigError("n_competitors must be non-negative");
  }
  if (config_.max_steps <= 0 || config_.stall_steps <= 0) {
    throw ConfigError("max_steps and stall_steps must be positive");
  }
  ego_params_ = config_.vehicle;
  ego_params_.max_speed = config_.ego_max_speed;
  competitor_params_ = config_.vehicle;
  competitor_params_.max_speed = config_.competitor_max_speed;
  competitor_ftg_ = config_.ftg;
  competitor_ftg_.max_speed = config_.competitor_max_speed;
  scan_buf_.resize(static_cast<std::size_t>(config_.lidar.ray_count));
}

Observation RaceEnv::reset(std::uint64_t seed) {
  const int n = config_.n_competitors;
  const int wp_count = track_.waypoint_count();
  if (n > 0) {
    if (config_.offset_min < 1 || config_.offset_max < config_.offset_min) {
      throw SpawnConflict("invalid competitor offset range");
    }
    if (config_.offset_max >= wp_count) {
      throw SpawnConflict("offset range wraps past the ego spawn");
    }
    const int span = config_.offset_max - config_.offset_min;
    if (span < kMinOffsetSeparation * (n - 1)) {
      throw SpawnConflict("offset range too small for competitor count");
    }
  }

  rng_ = Rng(seed);
  outcome_ = EpisodeOutcome{};
  outcome_.seed = seed;

  const int ego_wp = static_cast<int>(
      rng_.uniform_int(static_cast<std::uint64_t>(wp_count)));

  std::vector<int> offsets;
  offsets.reserve(static_cast<std::size_t>(n));
  int attempts = 0;
  while (static_cast<int>(offsets.size()) < n) {
    if (++attempts > kMaxSpawnAttempts) {
      throw SpawnConflict("could not place all competitors");
    }
    const int cand =
        config_.offset_min +
        static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(
            config_.offset_max - config_.offset_min + 1)));
    bool ok = true;
    for (int o : offsets) {
      if (std::abs(o - cand) < kMinOffsetSeparation) {
        ok = false;
        break;
      }
    }
    if (ok) offsets.push_back(cand);
  }

  cars_.clear();
  cars_.reserve(static_cast<std::size_t>(n) + 1);
  const double total = track_.total_length();
  auto spawn_car = [&](int wp, const VehicleParams& params) {
    VehicleState s;
    s.position = track_.waypoint_position(wp);
    s.heading = track_.waypoint_heading(wp);
    s.speed = 0.0;
    s.steering = 0.0;
    Car car{Vehicle(params, s), track_.project(s.position), 0.0, false, false};
    car.unwrapped_arc = car.prev_proj.arc_length;
    cars_.push_back(std::move(car));
  };
  spawn_car(ego_wp, ego_params_);
  const double ego_arc = cars_[0].prev_proj.arc_length;
  for (int o : offsets) {
    spawn_car((ego_wp + o) % wp_count, competitor_params_);
    // Unwrap so a competitor just past the start line still leads the ego.
    Car& c = cars_.back();
    double lead = c.prev_proj.arc_length - ego_arc;
    lead -= total * std::floor(lead / total);
    c.unwrapped_arc = ego_arc + lead;
  }

  prev_ego_steering_ = 0.0;
  ego_spawn_unwrapped_ = cars_[0].unwrapped_arc;
  last_lap_time_ = 0.0;
  stall_count_ = 0;
  steps_ = 0;
  done_ = false;
  trace_.clear();
  return observe_car(0);
}

StepResult RaceEnv::step(const Action& ego_action) {
  if (done_) {
    throw SteppedDoneEpisode("step() called on a finished episode");
  }
  const int n = config_.n_competitors;

  // Phase 1: all controls from the pre-step snapshot.
  std::vector<Action> comp_actions(static_cast<std::size_t>(n), Action{});
  for (int i = 1; i <= n; ++i) {
    Car& car = cars_[static_cast<std::size_t>(i)];
    if (car.crashed) continue;
    if (competitor_controller_) {
      comp_actions[static_cast<std::size_t>(i - 1)] =
          competitor_controller_(i - 1, observe_car(i));
      continue;
    }
    const OrientedRect fp = car.vehicle.footprint();
    lidar_.scan_into(fp.center, car.vehicle.state().heading,
                     track_.wall_grid(), bodies_except(i), scan_buf_);
    comp_actions[static_cast<std::size_t>(i - 1)] =
        ftg_control(scan_buf_, lidar_.relative_angles(), competitor_ftg_);
  }
  Action applied_ego = ego_action;
  if (config_.ego_ftg) {
    const OrientedRect fp = cars_[0].vehicle.footprint();
    lidar_.scan_into(fp.center, cars_[0].vehicle.state().heading,
                     track_.wall_grid(), bodies_except(0), scan_buf_);
    applied_ego = ftg_control(scan_buf_, lidar_.relative_angles(), config_.ftg);
  }

  // Phase 2: simultaneous integration.
  cars_[0].vehicle.step(applied_ego);
  for (int i = 1; i <= n; ++i) {
    Car& car = cars_[static_cast<std::size_t>(i)];
    if (!car.crashed) car.vehicle.step(comp_actions[static_cast<std::size_t>(i - 1)]);
  }
  ++steps_;

  // Phase 3: collisions at the post-step poses.
  std::vector<bool> moved(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t i = 1; i < cars_.size(); ++i) moved[i] = !cars_[i].crashed;
  const OrientedRect ego_fp = cars_[0].vehicle.footprint();
  bool ego_collided = hits_wall(ego_fp);
  for (int i = 1; i <= n && !ego_collided; ++i) {
    ego_collided = rects_intersect(
        ego_fp, cars_[static_cast<std::size_t>(i)].vehicle.footprint());
  }
  for (int i = 1; i <= n; ++i) {
    Car& a = cars_[static_cast<std::size_t>(i)];
    if (a.crashed) continue;
    const OrientedRect fp_a = a.vehicle.footprint();
    if (hits_wall(fp_a)) {
      a.crashed = true;
      continue;
    }
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      if (rects_intersect(
              fp_a, cars_[static_cast<std::size_t>(j)].vehicle.footprint())) {
        a.crashed = true;
        break;
      }
    }
  }

  // Phase 4: progress and stall accounting.
  Car& ego = cars_[0];
  const TrackProjection proj = track_.project(ego.vehicle.state().position);
  const double delta = track_.progress_delta(ego.prev_proj, proj);
  ego.prev_proj = proj;
  ego.unwrapped_arc += delta;
  outcome_.ego_progress += delta;
  if (delta < config_.stall_epsilon) {
    ++stall_count_;
  } else {
    stall_count_ = 0;
  }
  for (int i = 1; i <= n; ++i) {
    Car& car = cars_[static_cast<std::size_t>(i)];
    if (!moved[static_cast<std::size_t>(i)]) continue;
    const TrackProjection p = track_.project(car.vehicle.state().position);
    car.unwrapped_arc += track_.progress_delta(car.prev_proj, p);
    car.prev_proj = p;
  }

  // Overtakes latch once per competitor; crashed cars can still be passed.
  for (int i = 1; i <= n; ++i) {
    Car& car = cars_[static_cast<std::size_t>(i)];
    if (!car.overtaken &&
        detect_overtake(ego.unwrapped_arc, car.unwrapped_arc,
                        config_.overtake_margin)) {
      car.overtaken = true;
      ++outcome_.overtaken_count;
    }
  }

  // Lap bookkeeping against cumulative travel from spawn.
  const double t_now = steps_ * config_.vehicle.control_period;
  if (config_.target_laps > 0) {
    const double travel = ego.unwrapped_arc - ego_spawn_unwrapped_;
    while (travel >=
           (static_cast<double>(outcome_.lap_times.size()) + 1.0) *
               track_.total_length()) {
      outcome_.lap_times.push_back(t_now - last_lap_time_);
      last_lap_time_ = t_now;
    }
  }

  // Phases 5-7: termination precedence, then reward on the fresh view.
  Termination term = Termination::None;
  if (ego_collided) {
    term = Termination::Collision;
  } else if (config_.end_on_overtake && n > 0 &&
             outcome_.overtaken_count == n) {
    term = Termination::OvertakeSuccess;
  } else if (config_.target_laps > 0 &&
             static_cast<int>(outcome_.lap_times.size()) >=
                 config_.target_laps) {
    term = Termination::LapComplete;
  } else if (stall_count_ >= config_.stall_steps) {
    term = Termination::Stall;
  } else if (steps_ >= config_.max_steps) {
    term = Termination::MaxSteps;
  }

  StepResult result;
  result.observation = observe_car(0);
  double min_sector = result.observation[2];
  for (int k = 1; k < config_.lidar.sector_count; ++k) {
    min_sector =
        std::min(min_sector, result.observation[static_cast<std::size_t>(2 + k)]);
  }
  const double curr_steering = ego.vehicle.state().steering;
  result.reward = step_reward(delta, curr_steering - prev_ego_steering_,
                              min_sector, ego_collided, config_.reward);
  prev_ego_steering_ = curr_steering;

  outcome_.steps = steps_;
  outcome_.termination = term;
  done_ = term != Termination::None;
  result.done = done_;
  result.outcome = outcome_;

  if (trace_enabled_) {
    TraceRow row;
    row.step = steps_;
    row.poses.reserve(cars_.size());
    for (const Car& car : cars_) {
      const VehicleState& s = car.vehicle.state();
      row.poses.push_back({s.position.x(), s.position.y(), s.heading, s.speed,
                           s.steering});
    }
    row.ego_action = applied_ego;
    row.competitor_actions = comp_actions;
    row.reward = result.reward;
    row.termination = term;
    trace_.push_back(std::move(row));
  }
  return result;
}

Observation RaceEnv::observe_car(int car_index) {
  const Car& car = cars_[static_cast<std::size_t>(car_index)];
  const OrientedRect fp = car.vehicle.footprint();
  lidar_.scan_into(fp.center, car.vehicle.state().heading, track_.wall_grid(),
                   bodies_except(car_index), scan_buf_);
  const std::vector<double> sectors =
      average_filter(scan_buf_, config_.lidar.sector_count);
  Observation obs;
  obs.reserve(2 + sectors.size());
  obs.push_back(car.vehicle.state().speed);
  obs.push_back(car.vehicle.state().steering);
  obs.insert(obs.end(), sectors.begin(), sectors.end());
  return obs;
}

std::vector<OrientedRect> RaceEnv::bodies_except(int car_index) const {
  std::vector<OrientedRect> bodies;
  bodies.reserve(cars_.size() - 1);
  for (std::size_t i = 0; i < cars_.size(); ++i) {
    if (static_cast<int>(i) == car_index) continue;
    bodies.push_back(cars_[i].vehicle.footprint());
  }
  return bodies;
}

bool RaceEnv::hits_wall(const OrientedRect& body) const {
  const double reach = body.half_length + body.half_width;
  for (const Segment& seg : track_.wall_segments()) {
    if (!rect_near_segment(body, reach, seg)) continue;
    if (rect_intersects_segment(body, seg.a, seg.b)) return true;
  }
  return false;
}

const VehicleState& RaceEnv::ego_state() const {
  return cars_[0].vehicle.state();
}

const VehicleState& RaceEnv::competitor_state(int i) const {
  return cars_[static_cast<std::size_t>(i) + 1].vehicle.state();
}

bool RaceEnv::competitor_crashed(int i) const {
  return cars_[static_cast<std::size_t>(i) + 1].crashed;
}

bool RaceEnv::competitor_overtaken(int i) const {
  return cars_[static_cast<std::size_t>(i) + 1].overtaken;
}

double RaceEnv::ego_unwrapped_arc() const { return cars_[0].unwrapped_arc; }

double RaceEnv::competitor_unwrapped_arc(int i) const {
  return cars_[static_cast<std::size_t>(i) + 1].unwrapped_arc;
}

}  // namespace racer
