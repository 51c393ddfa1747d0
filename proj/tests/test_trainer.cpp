#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "racer/checkpoint.hpp"
#include "racer/errors.hpp"
#include "racer/trainer.hpp"

using namespace racer;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("trainer");

namespace {

// Everything shrunk so a few hundred steps run in well under a second.
FullConfig tiny_config() {
  return parse_config(R"({
    "lidar": {"ray_count": 180},
    "td3": {"hidden_units": 32, "batch_size": 32, "exploration_steps": 100,
             "buffer_capacity": 2000, "max_training_steps": 600},
    "training": {"max_steps": 200, "n_competitors": 1,
                  "checkpoint_every": 10000, "reward_smooth_window": 5}
  })");
}

std::string fresh_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p.string();
}

std::string slurp_text(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void check_same_stats(const EpisodeStats& a, const EpisodeStats& b) {
  CHECK(a.episode == b.episode);
  CHECK(a.global_step == b.global_step);
  CHECK(a.track_index == b.track_index);
  CHECK(a.env_seed == b.env_seed);
  CHECK(a.termination == b.termination);
  CHECK(a.steps == b.steps);
  CHECK(a.reward == b.reward);
  CHECK(a.smoothed_reward == b.smoothed_reward);
  CHECK(a.progress == b.progress);
  CHECK(a.updates == b.updates);
  CHECK(a.critic_loss == b.critic_loss);
}

}  // namespace

TEST_CASE("equal seeds give equal runs, different seeds diverge") {
  TrainerOptions opts;
  opts.config = tiny_config();
  opts.seed = 7;
  opts.stop_after_steps = 400;
  opts.quiet = true;

  opts.out_dir = fresh_dir("racer_train_a");
  const TrainResult a = run_training(opts);
  opts.out_dir = fresh_dir("racer_train_b");
  const TrainResult b = run_training(opts);
  opts.out_dir = fresh_dir("racer_train_c");
  opts.seed = 8;
  const TrainResult c = run_training(opts);

  CHECK(a.global_step >= 400);
  CHECK(a.actor_hash == b.actor_hash);
  REQUIRE(a.episodes.size() == b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    check_same_stats(a.episodes[i], b.episodes[i]);
  }
  CHECK(a.actor_hash != c.actor_hash);

  fs::remove_all(fs::temp_directory_path() / "racer_train_a");
  fs::remove_all(fs::temp_directory_path() / "racer_train_b");
  fs::remove_all(fs::temp_directory_path() / "racer_train_c");
}

TEST_CASE("a resumed run continues the stream exactly") {
  TrainerOptions opts;
  opts.config = tiny_config();
  opts.seed = 11;
  opts.quiet = true;

  opts.out_dir = fresh_dir("racer_train_whole");
  opts.stop_after_steps = 600;
  const TrainResult whole = run_training(opts);

  opts.out_dir = fresh_dir("racer_train_split");
  opts.stop_after_steps = 300;
  const TrainResult first = run_training(opts);
  CHECK(first.global_step >= 300);
  CHECK(first.global_step < whole.global_step);

  TrainerOptions resume = opts;
  resume.stop_after_steps = 600;
  resume.resume_from = first.state_path;
  const TrainResult second = run_training(resume);

  CHECK(second.global_step == whole.global_step);
  CHECK(second.episode_count == whole.episode_count);
  CHECK(second.actor_hash == whole.actor_hash);
  REQUIRE(first.episodes.size() + second.episodes.size() ==
          whole.episodes.size());
  for (std::size_t i = 0; i < first.episodes.size(); ++i) {
    check_same_stats(first.episodes[i], whole.episodes[i]);
  }
  for (std::size_t i = 0; i < second.episodes.size(); ++i) {
    check_same_stats(second.episodes[i],
                     whole.episodes[first.episodes.size() + i]);
  }

  // The reward curve of interrupted-plus-resumed equals the one-shot file,
  // including the smoothing column across the boundary.
  CHECK(slurp_text(opts.out_dir + "/reward_curve.csv") ==
        slurp_text((fs::temp_directory_path() / "racer_train_whole" /
                    "reward_curve.csv")
                       .string()));

  fs::remove_all(fs::temp_directory_path() / "racer_train_whole");
  fs::remove_all(fs::temp_directory_path() / "racer_train_split");
}

TEST_CASE("resume rejects a checkpoint from a different config") {
  TrainerOptions opts;
  opts.config = tiny_config();
  opts.seed = 3;
  opts.stop_after_steps = 150;
  opts.quiet = true;
  opts.out_dir = fresh_dir("racer_train_cfg");
  const TrainResult r = run_training(opts);

  TrainerOptions resume = opts;
  resume.resume_from = r.state_path;
  resume.config.td3.tau = 0.01;
  CHECK_THROWS_AS(run_training(resume), IncompatibleCheckpoint);
  fs::remove_all(fs::temp_directory_path() / "racer_train_cfg");
}

TEST_CASE("the run leaves loadable checkpoints and coherent metrics") {
  TrainerOptions opts;
  opts.config = tiny_config();
  opts.seed = 5;
  opts.stop_after_steps = 250;
  opts.quiet = true;
  opts.mode = TrainMode::Race;
  opts.out_dir = fresh_dir("racer_train_files");
  const TrainResult r = run_training(opts);

  const LoadedPolicy policy = load_policy_checkpoint(r.policy_path);
  CHECK(policy.agent.actor().param_hash() == r.actor_hash);
  CHECK(policy.meta.global_step == r.global_step);
  const LoadedTrainerState state = load_full_checkpoint(r.state_path);
  CHECK(state.meta.episode_count == r.episode_count);
  CHECK(state.buffer.size() > 0);

  const std::string metrics = slurp_text(opts.out_dir + "/metrics.jsonl");
  std::istringstream lines(metrics);
  std::string line;
  int episode_lines = 0, meta_lines = 0;
  while (std::getline(lines, line)) {
    if (line.find("\"kind\":\"meta\"") != std::string::npos) ++meta_lines;
    if (line.find("\"kind\":\"episode\"") != std::string::npos) {
      ++episode_lines;
    }
  }
  CHECK(meta_lines == 1);
  CHECK(episode_lines == static_cast<int>(r.episodes.size()));
  fs::remove_all(fs::temp_directory_path() / "racer_train_files");
}

TEST_SUITE_END();
