#include "racer/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "racer/errors.hpp"
#include "racer/mlp.hpp"

namespace racer {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw ConfigError(where + " must be a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw ConfigError(where + " must be an integer");
  }
  return v.get<int>();
}

/// Walks every key in the section object through the setter; the setter
/// returns false for keys it does not know.
template <typename Setter>
void apply_section(const json& obj, const std::string& section,
                   Setter&& set) {
  if (!obj.is_object()) {
    throw ConfigError(section + " must be an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string where = section + "." + it.key();
    if (!set(it.key(), it.value(), where)) {
      throw ConfigError("unknown config key " + where);
    }
  }
}

void apply_vehicle(const json& obj, VehicleParams& v) {
  apply_section(obj, "vehicle",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "wheelbase") v.wheelbase = as_number(val, where);
    else if (k == "body_length") v.body_length = as_number(val, where);
    else if (k == "body_width") v.body_width = as_number(val, where);
    else if (k == "max_speed") v.max_speed = as_number(val, where);
    else if (k == "max_accel") v.max_accel = as_number(val, where);
    else if (k == "max_steer") v.max_steer = as_number(val, where);
    else if (k == "steering_rate") v.steering_rate = as_number(val, where);
    else if (k == "command_delay") v.command_delay = as_int(val, where);
    else if (k == "control_period") v.control_period = as_number(val, where);
    else if (k == "substeps") v.substeps = as_int(val, where);
    else return false;
    return true;
  });
}

void apply_lidar(const json& obj, LidarConfig& l) {
  apply_section(obj, "lidar",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "ray_count") l.ray_count = as_int(val, where);
    else if (k == "fov") l.fov = as_number(val, where);
    else if (k == "max_range") l.max_range = as_number(val, where);
    else if (k == "sector_count") l.sector_count = as_int(val, where);
    else return false;
    return true;
  });
}

void apply_ftg(const json& obj, FtgConfig& f) {
  apply_section(obj, "ftg",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "bubble_radius") f.bubble_radius = as_number(val, where);
    else if (k == "gap_threshold") f.gap_threshold = as_number(val, where);
    else if (k == "max_speed") f.max_speed = as_number(val, where);
    else if (k == "steering_gain") f.steering_gain = as_number(val, where);
    else return false;
    return true;
  });
}

void apply_reward(const json& obj, RewardConfig& r) {
  apply_section(obj, "reward",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "w_obstacle") r.w_obstacle = as_number(val, where);
    else if (k == "w_steer") r.w_steer = as_number(val, where);
    else if (k == "collision_penalty") r.collision_penalty = as_number(val, where);
    else if (k == "steer_k") r.steer_k = as_number(val, where);
    else if (k == "steer_x0") r.steer_x0 = as_number(val, where);
    else if (k == "obstacle_k") r.obstacle_k = as_number(val, where);
    else if (k == "obstacle_x0") r.obstacle_x0 = as_number(val, where);
    else return false;
    return true;
  });
}

void apply_td3(const json& obj, Td3Config& t) {
  apply_section(obj, "td3",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "gamma") t.gamma = as_number(val, where);
    else if (k == "actor_lr") t.actor_lr = as_number(val, where);
    else if (k == "critic_lr") t.critic_lr = as_number(val, where);
    else if (k == "max_training_steps") t.max_training_steps = as_int(val, where);
    else if (k == "exploration_steps") t.exploration_steps = as_int(val, where);
    else if (k == "batch_size") t.batch_size = as_int(val, where);
    else if (k == "tau") t.tau = as_number(val, where);
    else if (k == "policy_delay") t.policy_delay = as_int(val, where);
    else if (k == "target_noise_sigma") t.target_noise_sigma = as_number(val, where);
    else if (k == "target_noise_clip") t.target_noise_clip = as_number(val, where);
    else if (k == "exploration_noise_sigma") t.exploration_noise_sigma = as_number(val, where);
    else if (k == "buffer_capacity") t.buffer_capacity = as_int(val, where);
    else if (k == "hidden_units") t.hidden_units = as_int(val, where);
    else if (k == "hidden_layers") t.hidden_layers = as_int(val, where);
    else return false;
    return true;
  });
}

void apply_training(const json& obj, TrainingConfig& t) {
  apply_section(obj, "training",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "n_competitors") t.n_competitors = as_int(val, where);
    else if (k == "offset_min") t.offset_min = as_int(val, where);
    else if (k == "offset_max") t.offset_max = as_int(val, where);
    else if (k == "max_steps") t.max_steps = as_int(val, where);
    else if (k == "stall_steps") t.stall_steps = as_int(val, where);
    else if (k == "stall_epsilon") t.stall_epsilon = as_number(val, where);
    else if (k == "ego_max_speed") t.ego_max_speed = as_number(val, where);
    else if (k == "competitor_speed") t.competitor_speed = as_number(val, where);
    else if (k == "overtake_margin") t.overtake_margin = as_number(val, where);
    else if (k == "checkpoint_every") t.checkpoint_every = as_int(val, where);
    else if (k == "reward_smooth_window") t.reward_smooth_window = as_int(val, where);
    else return false;
    return true;
  });
}

void apply_eval(const json& obj, EvalConfig& e) {
  apply_section(obj, "eval",
                [&](const std::string& k, const json& val,
                    const std::string& where) {
    if (k == "offset") e.offset = as_int(val, where);
    else if (k == "max_steps") e.max_steps = as_int(val, where);
    else if (k == "episodes") e.episodes = as_int(val, where);
    else if (k == "competitor_speed") e.competitor_speed = as_number(val, where);
    else if (k == "slowed_competitor_speed") e.slowed_competitor_speed = as_number(val, where);
    else if (k == "slowed_offset_min") e.slowed_offset_min = as_int(val, where);
    else if (k == "slowed_offset_max") e.slowed_offset_max = as_int(val, where);
    else if (k == "slowed_max_steps") e.slowed_max_steps = as_int(val, where);
    else if (k == "timetrial_laps") e.timetrial_laps = as_int(val, where);
    else if (k == "timetrial_attempts") e.timetrial_attempts = as_int(val, where);
    else if (k == "timetrial_max_steps") e.timetrial_max_steps = as_int(val, where);
    else return false;
    return true;
  });
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw ConfigError(std::string(name) + " must be positive");
  }
}

json to_json(const FullConfig& c) {
  json j;
  j["vehicle"] = {{"wheelbase", c.vehicle.wheelbase},
                  {"body_length", c.vehicle.body_length},
                  {"body_width", c.vehicle.body_width},
                  {"max_speed", c.vehicle.max_speed},
                  {"max_accel", c.vehicle.max_accel},
                  {"max_steer", c.vehicle.max_steer},
                  {"steering_rate", c.vehicle.steering_rate},
                  {"command_delay", c.vehicle.command_delay},
                  {"control_period", c.vehicle.control_period},
                  {"substeps", c.vehicle.substeps}};
  j["lidar"] = {{"ray_count", c.lidar.ray_count},
                {"fov", c.lidar.fov},
                {"max_range", c.lidar.max_range},
                {"sector_count", c.lidar.sector_count}};
  j["ftg"] = {{"bubble_radius", c.ftg.bubble_radius},
              {"gap_threshold", c.ftg.gap_threshold},
              {"max_speed", c.ftg.max_speed},
              {"steering_gain", c.ftg.steering_gain}};
  j["reward"] = {{"w_obstacle", c.reward.w_obstacle},
                 {"w_steer", c.reward.w_steer},
                 {"collision_penalty", c.reward.collision_penalty},
                 {"steer_k", c.reward.steer_k},
                 {"steer_x0", c.reward.steer_x0},
                 {"obstacle_k", c.reward.obstacle_k},
                 {"obstacle_x0", c.reward.obstacle_x0}};
  j["td3"] = {{"gamma", c.td3.gamma},
              {"actor_lr", c.td3.actor_lr},
              {"critic_lr", c.td3.critic_lr},
              {"max_training_steps", c.td3.max_training_steps},
              {"exploration_steps", c.td3.exploration_steps},
              {"batch_size", c.td3.batch_size},
              {"tau", c.td3.tau},
              {"policy_delay", c.td3.policy_delay},
              {"target_noise_sigma", c.td3.target_noise_sigma},
              {"target_noise_clip", c.td3.target_noise_clip},
              {"exploration_noise_sigma", c.td3.exploration_noise_sigma},
              {"buffer_capacity", c.td3.buffer_capacity},
              {"hidden_units", c.td3.hidden_units},
              {"hidden_layers", c.td3.hidden_layers}};
  j["training"] = {{"n_competitors", c.training.n_competitors},
                   {"offset_min", c.training.offset_min},
                   {"offset_max", c.training.offset_max},
                   {"max_steps", c.training.max_steps},
                   {"stall_steps", c.training.stall_steps},
                   {"stall_epsilon", c.training.stall_epsilon},
                   {"ego_max_speed", c.training.ego_max_speed},
                   {"competitor_speed", c.training.competitor_speed},
                   {"overtake_margin", c.training.overtake_margin},
                   {"checkpoint_every", c.training.checkpoint_every},
                   {"reward_smooth_window", c.training.reward_smooth_window}};
  j["eval"] = {{"offset", c.eval.offset},
               {"max_steps", c.eval.max_steps},
               {"episodes", c.eval.episodes},
               {"competitor_speed", c.eval.competitor_speed},
               {"slowed_competitor_speed", c.eval.slowed_competitor_speed},
               {"slowed_offset_min", c.eval.slowed_offset_min},
               {"slowed_offset_max", c.eval.slowed_offset_max},
               {"slowed_max_steps", c.eval.slowed_max_steps},
               {"timetrial_laps", c.eval.timetrial_laps},
               {"timetrial_attempts", c.eval.timetrial_attempts},
               {"timetrial_max_steps", c.eval.timetrial_max_steps}};
  return j;
}

}  // namespace

void FullConfig::validate() const {
  td3.validate();
  require_positive(vehicle.max_speed, "vehicle.max_speed");
  require_positive(vehicle.control_period, "vehicle.control_period");
  require_positive(lidar.max_range, "lidar.max_range");
  if (lidar.sector_count < 1) throw ConfigError("lidar.sector_count must be at least 1");
  if (lidar.ray_count < lidar.sector_count) {
    throw ConfigError("lidar.ray_count must cover every sector");
  }
  require_positive(training.ego_max_speed, "training.ego_max_speed");
  require_positive(training.competitor_speed, "training.competitor_speed");
  require_positive(training.overtake_margin, "training.overtake_margin");
  if (training.n_competitors < 0) throw ConfigError("training.n_competitors must be nonnegative");
  if (training.offset_min > training.offset_max) {
    throw ConfigError("training.offset_min exceeds training.offset_max");
  }
  if (training.max_steps < 1) throw ConfigError("training.max_steps must be at least 1");
  if (training.stall_steps < 1) throw ConfigError("training.stall_steps must be at least 1");
  if (training.checkpoint_every < 1) throw ConfigError("training.checkpoint_every must be at least 1");
  if (training.reward_smooth_window < 1) {
    throw ConfigError("training.reward_smooth_window must be at least 1");
  }
  if (eval.offset < 1) throw ConfigError("eval.offset must be at least 1");
  if (eval.max_steps < 1) throw ConfigError("eval.max_steps must be at least 1");
  if (eval.episodes < 1) throw ConfigError("eval.episodes must be at least 1");
  require_positive(eval.competitor_speed, "eval.competitor_speed");
  require_positive(eval.slowed_competitor_speed, "eval.slowed_competitor_speed");
  if (eval.slowed_offset_min < 1) {
    throw ConfigError("eval.slowed_offset_min must be at least 1");
  }
  if (eval.slowed_offset_max < eval.slowed_offset_min) {
    throw ConfigError(
        "eval.slowed_offset_max must be at least eval.slowed_offset_min");
  }
  if (eval.slowed_max_steps < 1) {
    throw ConfigError("eval.slowed_max_steps must be at least 1");
  }
  if (eval.timetrial_attempts < 1) {
    throw ConfigError("eval.timetrial_attempts must be at least 1");
  }
  if (eval.timetrial_laps < 1) throw ConfigError("eval.timetrial_laps must be at least 1");
  if (eval.timetrial_max_steps < 1) {
    throw ConfigError("eval.timetrial_max_steps must be at least 1");
  }
}

FullConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config root must be an object");
  }
  FullConfig c;
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& k = it.key();
    if (k == "vehicle") apply_vehicle(it.value(), c.vehicle);
    else if (k == "lidar") apply_lidar(it.value(), c.lidar);
    else if (k == "ftg") apply_ftg(it.value(), c.ftg);
    else if (k == "reward") apply_reward(it.value(), c.reward);
    else if (k == "td3") apply_td3(it.value(), c.td3);
    else if (k == "training") apply_training(it.value(), c.training);
    else if (k == "eval") apply_eval(it.value(), c.eval);
    else throw ConfigError("unknown config section " + k);
  }
  c.validate();
  return c;
}

FullConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_json(const FullConfig& config) {
  return to_json(config).dump();
}

std::uint64_t config_hash(const FullConfig& config) {
  const std::string text = canonical_json(config);
  return fnv1a64(text.data(), text.size());
}

EpisodeConfig training_episode(const FullConfig& config) {
  EpisodeConfig e;
  e.n_competitors = config.training.n_competitors;
  e.offset_min = config.training.offset_min;
  e.offset_max = config.training.offset_max;
  e.max_steps = config.training.max_steps;
  e.stall_steps = config.training.stall_steps;
  e.stall_epsilon = config.training.stall_epsilon;
  e.ego_max_speed = config.training.ego_max_speed;
  e.competitor_max_speed = config.training.competitor_speed;
  e.overtake_margin = config.training.overtake_margin;
  e.end_on_overtake = false;
  e.target_laps = 0;
  e.ego_ftg = false;
  e.vehicle = config.vehicle;
  e.lidar = config.lidar;
  // Ego-side follow-the-gap config; the env caps competitors to
  // competitor_max_speed on its own.
  e.ftg = config.ftg;
  e.reward = config.reward;
  return e;
}

EpisodeConfig overtake_eval_episode(const FullConfig& config,
                                    double competitor_speed) {
  EpisodeConfig e = training_episode(config);
  e.n_competitors = 1;
  e.offset_min = config.eval.offset;
  e.offset_max = config.eval.offset;
  e.max_steps = config.eval.max_steps;
  e.competitor_max_speed = competitor_speed;
  e.end_on_overtake = true;
  return e;
}

ObservationScale observation_scale(const FullConfig& config) {
  return ObservationScale{config.training.ego_max_speed,
                          config.vehicle.max_steer, config.lidar.max_range};
}

EpisodeConfig timetrial_episode(const FullConfig& config, bool ego_ftg) {
  EpisodeConfig e = training_episode(config);
  e.n_competitors = 0;
  e.max_steps = config.eval.timetrial_max_steps;
  e.target_laps = config.eval.timetrial_laps;
  e.ego_ftg = ego_ftg;
  return e;
}

}  // namespace racer
