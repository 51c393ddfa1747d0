#ifndef RACER_CHECKPOINT_HPP
#define RACER_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "racer/replay.hpp"
#include "racer/rng.hpp"
#include "racer/td3.hpp"

namespace racer {

enum class CheckpointKind : std::uint8_t { Policy = 1, Full = 2 };

/// Provenance stored with every checkpoint. The agent config is echoed in
/// full so a policy file is self-describing: loading reconstructs the
/// networks without any external config.
struct CheckpointMeta {
  CheckpointKind kind = CheckpointKind::Policy;
  int obs_dim = 0;
  Td3Config config;
  std::uint64_t config_hash = 0;
  std::int64_t global_step = 0;
  std::int64_t episode_count = 0;
  std::int64_t update_count = 0;
};

/// Actor parameters plus metadata; enough to run the policy.
void save_policy_checkpoint(const std::string& path, const Td3Agent& agent,
                            const CheckpointMeta& meta);

/// Complete training state: all six networks, the three optimizers, the
/// replay buffer, and the rng stream, for bit-exact resume. extra is an
/// opaque caller-owned block returned verbatim on load; the trainer keeps
/// its reward-smoothing window there.
void save_full_checkpoint(const std::string& path, const Td3Agent& agent,
                          const ReplayBuffer& buffer, const Rng& rng,
                          const CheckpointMeta& meta,
                          const std::vector<double>& extra = {});

struct LoadedPolicy {
  CheckpointMeta meta;
  Td3Agent agent;  // actor restored; other networks freshly initialized
};

/// Accepts either kind; only the actor is restored.
LoadedPolicy load_policy_checkpoint(const std::string& path);

struct LoadedTrainerState {
  CheckpointMeta meta;
  Td3Agent agent;
  ReplayBuffer buffer;
  Rng rng;
  std::vector<double> extra;
};

/// Requires a Full checkpoint.
LoadedTrainerState load_full_checkpoint(const std::string& path);

}  // namespace racer

#endif  // RACER_CHECKPOINT_HPP
