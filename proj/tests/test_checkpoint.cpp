#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "racer/checkpoint.hpp"
#include "racer/errors.hpp"

using namespace racer;

TEST_SUITE_BEGIN("checkpoint");

namespace {

Td3Config small_config() {
  Td3Config c;
  c.hidden_units = 16;
  c.batch_size = 8;
  c.buffer_capacity = 64;
  return c;
}

// Runs a few updates so optimizer state and update counters are nonzero.
struct TrainingFixture {
  Td3Config config = small_config();
  Rng rng{99};
  Td3Agent agent{5, config, rng};
  ReplayBuffer buffer{64, 5, 2};

  TrainingFixture() {
    for (int i = 0; i < 40; ++i) {
      Eigen::VectorXd obs(5), next(5);
      for (int d = 0; d < 5; ++d) {
        obs[d] = rng.normal();
        next[d] = rng.normal();
      }
      Eigen::Vector2d act(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      buffer.add(obs, act, rng.normal(), next, i % 7 == 0);
    }
    for (int i = 0; i < 6; ++i) agent.update(buffer, rng);
  }
};

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

CheckpointMeta meta_for(const TrainingFixture& f) {
  CheckpointMeta m;
  m.obs_dim = 5;
  m.config = f.config;
  m.config_hash = 0xabcdef12u;
  m.global_step = 1234;
  m.episode_count = 17;
  return m;
}

std::vector<char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("policy checkpoints restore the actor and its metadata") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_policy.bin");
  save_policy_checkpoint(path, f.agent, meta_for(f));

  LoadedPolicy loaded = load_policy_checkpoint(path);
  CHECK(loaded.meta.kind == CheckpointKind::Policy);
  CHECK(loaded.meta.obs_dim == 5);
  CHECK(loaded.meta.config_hash == 0xabcdef12u);
  CHECK(loaded.meta.global_step == 1234);
  CHECK(loaded.meta.episode_count == 17);
  CHECK(loaded.meta.update_count == 6);
  CHECK(loaded.meta.config.hidden_units == 16);
  CHECK(loaded.agent.actor().param_hash() == f.agent.actor().param_hash());

  Eigen::VectorXd obs(5);
  obs << 0.3, -0.2, 0.9, 0.1, -0.5;
  Rng unused(1);
  const Eigen::Vector2d a = f.agent.select_action(obs, Td3Agent::Mode::Exploit,
                                                  100000, unused);
  const Eigen::Vector2d b = loaded.agent.select_action(
      obs, Td3Agent::Mode::Exploit, 100000, unused);
  CHECK(a == b);
  std::remove(path.c_str());
}

TEST_CASE("full checkpoints restore every network, optimizer, and stream") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_full.bin");
  save_full_checkpoint(path, f.agent, f.buffer, f.rng, meta_for(f));

  LoadedTrainerState loaded = load_full_checkpoint(path);
  CHECK(loaded.meta.kind == CheckpointKind::Full);
  CHECK(loaded.agent.actor().param_hash() == f.agent.actor().param_hash());
  CHECK(loaded.agent.critic1().param_hash() == f.agent.critic1().param_hash());
  CHECK(loaded.agent.critic2().param_hash() == f.agent.critic2().param_hash());
  CHECK(loaded.agent.target_actor().param_hash() ==
        f.agent.target_actor().param_hash());
  CHECK(loaded.agent.target_critic1().param_hash() ==
        f.agent.target_critic1().param_hash());
  CHECK(loaded.agent.target_critic2().param_hash() ==
        f.agent.target_critic2().param_hash());
  CHECK(loaded.agent.update_count() == f.agent.update_count());
  CHECK(loaded.buffer.size() == f.buffer.size());
  CHECK(loaded.rng.serialize() == f.rng.serialize());

  // Continuing training from the restored state must match the original
  // stream exactly, including optimizer momentum and rng position.
  for (int i = 0; i < 5; ++i) {
    f.agent.update(f.buffer, f.rng);
    loaded.agent.update(loaded.buffer, loaded.rng);
  }
  CHECK(loaded.agent.actor().param_hash() == f.agent.actor().param_hash());
  CHECK(loaded.agent.critic1().param_hash() == f.agent.critic1().param_hash());
  CHECK(loaded.agent.target_critic2().param_hash() ==
        f.agent.target_critic2().param_hash());
  CHECK(loaded.rng.serialize() == f.rng.serialize());
  std::remove(path.c_str());
}

TEST_CASE("a policy load from a full checkpoint takes just the actor") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_full_as_policy.bin");
  save_full_checkpoint(path, f.agent, f.buffer, f.rng, meta_for(f));
  LoadedPolicy loaded = load_policy_checkpoint(path);
  CHECK(loaded.meta.kind == CheckpointKind::Full);
  CHECK(loaded.agent.actor().param_hash() == f.agent.actor().param_hash());
  std::remove(path.c_str());
}

TEST_CASE("resume refuses a policy-only checkpoint") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_policy_only.bin");
  save_policy_checkpoint(path, f.agent, meta_for(f));
  CHECK_THROWS_AS(load_full_checkpoint(path), IncompatibleCheckpoint);
  std::remove(path.c_str());
}

TEST_CASE("corruption anywhere in the file is detected") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_corrupt.bin");
  save_full_checkpoint(path, f.agent, f.buffer, f.rng, meta_for(f));
  const std::vector<char> original = read_bytes(path);

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_policy_checkpoint(temp_path("ckpt_nope.bin")),
                    IoError);
  }
  SUBCASE("truncated") {
    std::vector<char> cut(original.begin(),
                          original.begin() + static_cast<long>(original.size()) / 2);
    write_bytes(path, cut);
    CHECK_THROWS_AS(load_full_checkpoint(path), CorruptCheckpoint);
  }
  SUBCASE("tiny file") {
    write_bytes(path, {'R', 'C'});
    CHECK_THROWS_AS(load_policy_checkpoint(path), CorruptCheckpoint);
  }
  SUBCASE("flipped payload byte") {
    std::vector<char> bad = original;
    bad[bad.size() / 2] ^= 0x40;
    write_bytes(path, bad);
    CHECK_THROWS_AS(load_full_checkpoint(path), CorruptCheckpoint);
  }
  SUBCASE("flipped checksum byte") {
    std::vector<char> bad = original;
    bad[bad.size() - 3] ^= 0x01;
    write_bytes(path, bad);
    CHECK_THROWS_AS(load_full_checkpoint(path), CorruptCheckpoint);
  }
  SUBCASE("wrong magic") {
    std::vector<char> bad = original;
    bad[0] ^= 0xff;
    write_bytes(path, bad);
    CHECK_THROWS_AS(load_policy_checkpoint(path), CorruptCheckpoint);
  }
  std::remove(path.c_str());
}

TEST_CASE("version bumps are rejected as incompatible") {
  TrainingFixture f;
  const std::string path = temp_path("ckpt_version.bin");
  save_policy_checkpoint(path, f.agent, meta_for(f));
  std::vector<char> bytes = read_bytes(path);
  bytes[8] = 9;  // version lives right after the 8-byte magic
  // Recompute the trailing hash so only the version check can fire.
  const std::uint64_t sum =
      fnv1a64(bytes.data(), bytes.size() - 8);
  std::memcpy(bytes.data() + bytes.size() - 8, &sum, 8);
  write_bytes(path, bytes);
  CHECK_THROWS_AS(load_policy_checkpoint(path), IncompatibleCheckpoint);
  std::remove(path.c_str());
}

TEST_SUITE_END();
