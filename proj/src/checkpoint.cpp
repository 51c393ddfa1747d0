#include "racer/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "racer/errors.hpp"
#include "racer/mlp.hpp"

namespace racer {

// File layout, all fields fixed-width in host byte order (the build targets
// little-endian hosts only): magic, version, kind, dimensions, config echo,
// counters, then parameter blocks sized by a leading count. Full checkpoints
// append the remaining networks, optimizer states, rng stream, and replay
// ring. The final 8 bytes hash everything before them.
namespace {

constexpr std::uint64_t kMagic = 0x5243525f434b5031ull;  // "RCR_CKP1"
constexpr std::uint32_t kVersion = 1;

struct Writer {
  std::vector<unsigned char> bytes;

  void raw(const void* p, std::size_t n) {
    const unsigned char* c = static_cast<const unsigned char*>(p);
    bytes.insert(bytes.end(), c, c + n);
  }
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void i64(std::int64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void doubles(const std::vector<double>& v) {
    i64(static_cast<std::int64_t>(v.size()));
    raw(v.data(), v.size() * sizeof(double));
  }
  void str(const std::string& s) {
    i64(static_cast<std::int64_t>(s.size()));
    raw(s.data(), s.size());
  }
};

struct Reader {
  const unsigned char* p;
  const unsigned char* end;

  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end - p) < n) {
      throw CorruptCheckpoint("checkpoint truncated");
    }
  }
  void raw(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, p, n);
    p += n;
  }
  std::uint8_t u8() { std::uint8_t v; raw(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, 8); return v; }
  std::int64_t i64() { std::int64_t v; raw(&v, 8); return v; }
  double f64() { double v; raw(&v, 8); return v; }
  std::vector<double> doubles() {
    const std::int64_t n = i64();
    if (n < 0 || static_cast<std::size_t>(n) > static_cast<std::size_t>(end - p) / sizeof(double)) {
      throw CorruptCheckpoint("invalid block length");
    }
    std::vector<double> v(static_cast<std::size_t>(n));
    raw(v.data(), v.size() * sizeof(double));
    return v;
  }
  std::string str() {
    const std::int64_t n = i64();
    if (n < 0 || static_cast<std::size_t>(n) > static_cast<std::size_t>(end - p)) {
      throw CorruptCheckpoint("invalid block length");
    }
    std::string s(static_cast<std::size_t>(n), '\0');
    raw(s.data(), s.size());
    return s;
  }
};

void write_config(Writer& w, const Td3Config& c) {
  w.f64(c.gamma);
  w.f64(c.actor_lr);
  w.f64(c.critic_lr);
  w.i64(c.max_training_steps);
  w.i64(c.exploration_steps);
  w.i64(c.batch_size);
  w.f64(c.tau);
  w.i64(c.policy_delay);
  w.f64(c.target_noise_sigma);
  w.f64(c.target_noise_clip);
  w.f64(c.exploration_noise_sigma);
  w.i64(c.buffer_capacity);
  w.i64(c.hidden_units);
  w.i64(c.hidden_layers);
}

Td3Config read_config(Reader& r) {
  Td3Config c;
  c.gamma = r.f64();
  c.actor_lr = r.f64();
  c.critic_lr = r.f64();
  c.max_training_steps = static_cast<int>(r.i64());
  c.exploration_steps = static_cast<int>(r.i64());
  c.batch_size = static_cast<int>(r.i64());
  c.tau = r.f64();
  c.policy_delay = static_cast<int>(r.i64());
  c.target_noise_sigma = r.f64();
  c.target_noise_clip = r.f64();
  c.exploration_noise_sigma = r.f64();
  c.buffer_capacity = static_cast<int>(r.i64());
  c.hidden_units = static_cast<int>(r.i64());
  c.hidden_layers = static_cast<int>(r.i64());
  return c;
}

void write_net(Writer& w, const Mlp& net) {
  std::vector<double> params;
  net.serialize_params(params);
  w.doubles(params);
}

void read_net(Reader& r, Mlp& net) {
  const std::vector<double> params = r.doubles();
  if (static_cast<std::int64_t>(params.size()) != net.param_count()) {
    throw CorruptCheckpoint("network parameter count mismatch");
  }
  net.deserialize_params(params.data(),
                         static_cast<std::int64_t>(params.size()));
}

void write_opt(Writer& w, const Adam& opt) {
  std::vector<double> state;
  opt.serialize_state(state);
  w.doubles(state);
}

void read_opt(Reader& r, Adam& opt) {
  const std::vector<double> state = r.doubles();
  try {
    opt.deserialize_state(state.data(),
                          static_cast<std::int64_t>(state.size()));
  } catch (const ConfigError& e) {
    throw CorruptCheckpoint(e.what());
  }
}

void write_header(Writer& w, CheckpointKind kind, const CheckpointMeta& meta,
                  const Td3Agent& agent) {
  w.u64(kMagic);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u32(static_cast<std::uint32_t>(agent.obs_dim()));
  w.u32(2);  // action dimension
  write_config(w, agent.config());
  w.u64(meta.config_hash);
  w.i64(meta.global_step);
  w.i64(meta.episode_count);
  w.i64(agent.update_count());
}

void commit(const std::string& path, Writer& w) {
  w.u64(fnv1a64(w.bytes.data(), w.bytes.size()));
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(w.bytes.data()),
              static_cast<std::streamsize>(w.bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw IoError("cannot move " + tmp + " into place");
  }
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path);
  const std::streamsize n = in.tellg();
  in.seekg(0);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!in) throw IoError("read failed for " + path);
  return bytes;
}

/// Validates checksum and magic, then parses through the common header.
/// Leaves the reader positioned at the actor parameter block.
CheckpointMeta open_common(const std::vector<unsigned char>& bytes,
                           Reader& r) {
  if (bytes.size() < 8 + 4 + 1 + 8) {
    throw CorruptCheckpoint("checkpoint truncated");
  }
  std::uint64_t stored_sum;
  std::memcpy(&stored_sum, bytes.data() + bytes.size() - 8, 8);
  r.p = bytes.data();
  r.end = bytes.data() + bytes.size() - 8;
  if (r.u64() != kMagic) throw CorruptCheckpoint("bad magic");
  if (fnv1a64(bytes.data(), bytes.size() - 8) != stored_sum) {
    throw CorruptCheckpoint("checksum mismatch");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw IncompatibleCheckpoint("unsupported checkpoint version " +
                                 std::to_string(version));
  }
  CheckpointMeta meta;
  const std::uint8_t kind = r.u8();
  if (kind != static_cast<std::uint8_t>(CheckpointKind::Policy) &&
      kind != static_cast<std::uint8_t>(CheckpointKind::Full)) {
    throw CorruptCheckpoint("unknown checkpoint kind");
  }
  meta.kind = static_cast<CheckpointKind>(kind);
  meta.obs_dim = static_cast<int>(r.u32());
  if (meta.obs_dim < 1 || meta.obs_dim > 65536) {
    throw CorruptCheckpoint("implausible observation dimension");
  }
  const std::uint32_t act_dim = r.u32();
  if (act_dim != 2) {
    throw IncompatibleCheckpoint("unsupported action dimension " +
                                 std::to_string(act_dim));
  }
  meta.config = read_config(r);
  meta.config_hash = r.u64();
  meta.global_step = r.i64();
  meta.episode_count = r.i64();
  meta.update_count = r.i64();
  return meta;
}

}  // namespace

void save_policy_checkpoint(const std::string& path, const Td3Agent& agent,
                            const CheckpointMeta& meta) {
  Writer w;
  write_header(w, CheckpointKind::Policy, meta, agent);
  write_net(w, agent.actor());
  commit(path, w);
}

void save_full_checkpoint(const std::string& path, const Td3Agent& agent,
                          const ReplayBuffer& buffer, const Rng& rng,
                          const CheckpointMeta& meta,
                          const std::vector<double>& extra) {
  Writer w;
  write_header(w, CheckpointKind::Full, meta, agent);
  write_net(w, agent.actor());
  write_net(w, agent.critic1());
  write_net(w, agent.critic2());
  write_net(w, agent.target_actor());
  write_net(w, agent.target_critic1());
  write_net(w, agent.target_critic2());
  write_opt(w, agent.actor_opt());
  write_opt(w, agent.critic1_opt());
  write_opt(w, agent.critic2_opt());
  w.str(rng.serialize());
  w.i64(buffer.capacity());
  std::vector<double> ring;
  buffer.serialize(ring);
  w.doubles(ring);
  w.doubles(extra);
  commit(path, w);
}

LoadedPolicy load_policy_checkpoint(const std::string& path) {
  const std::vector<unsigned char> bytes = slurp(path);
  Reader r{nullptr, nullptr};
  CheckpointMeta meta = open_common(bytes, r);
  Rng scratch(0);
  Td3Agent agent(meta.obs_dim, meta.config, scratch);
  read_net(r, agent.actor());
  agent.set_update_count(meta.update_count);
  return LoadedPolicy{meta, std::move(agent)};
}

LoadedTrainerState load_full_checkpoint(const std::string& path) {
  const std::vector<unsigned char> bytes = slurp(path);
  Reader r{nullptr, nullptr};
  CheckpointMeta meta = open_common(bytes, r);
  if (meta.kind != CheckpointKind::Full) {
    throw IncompatibleCheckpoint(
        "resume needs a full checkpoint, got a policy-only file");
  }
  Rng scratch(0);
  Td3Agent agent(meta.obs_dim, meta.config, scratch);
  read_net(r, agent.actor());
  read_net(r, agent.critic1());
  read_net(r, agent.critic2());
  read_net(r, agent.target_actor());
  read_net(r, agent.target_critic1());
  read_net(r, agent.target_critic2());
  read_opt(r, agent.actor_opt());
  read_opt(r, agent.critic1_opt());
  read_opt(r, agent.critic2_opt());
  agent.set_update_count(meta.update_count);
  Rng rng(0);
  rng.deserialize(r.str());
  const std::int64_t capacity = r.i64();
  if (capacity < 1 || capacity > (std::int64_t{1} << 32)) {
    throw CorruptCheckpoint("implausible replay capacity");
  }
  ReplayBuffer buffer(static_cast<int>(capacity), meta.obs_dim, 2);
  const std::vector<double> ring = r.doubles();
  try {
    buffer.deserialize(ring.data(), static_cast<std::int64_t>(ring.size()));
  } catch (const ConfigError& e) {
    throw CorruptCheckpoint(e.what());
  }
  std::vector<double> extra = r.doubles();
  if (r.p != r.end) {
    throw CorruptCheckpoint("trailing bytes after the extra block");
  }
  return LoadedTrainerState{meta, std::move(agent), std::move(buffer),
                            std::move(rng), std::move(extra)};
}

}  // namespace racer
