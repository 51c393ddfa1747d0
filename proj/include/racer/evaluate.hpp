#ifndef RACER_EVALUATE_HPP
#define RACER_EVALUATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "racer/config.hpp"
#include "racer/env.hpp"

namespace racer {

enum class AttemptOutcome { Overtake, Collision, NoOvertake };

const char* attempt_outcome_name(AttemptOutcome outcome);

/// Sprint: fixed spawn gap, fixed step window, full-pace competitor.
/// SlowedLap: short randomized gap, slowed competitor, and the ego has one
/// full lap to complete the pass.
enum class OvertakeProtocol { Sprint, SlowedLap };

const char* overtake_protocol_name(OvertakeProtocol protocol);

struct AttemptRecord {
  int episode = 0;  // 1-based
  std::uint64_t env_seed = 0;
  int offset = 0;  // competitor head start, waypoints
  AttemptOutcome outcome = AttemptOutcome::NoOvertake;
  Termination termination = Termination::None;
  int steps = 0;
  double time_to_overtake = 0.0;  // seconds, successes only
  double ego_progress = 0.0;
};

struct OvertakeReport {
  std::string matchup;     // "<ego label>_vs_<competitor label>"
  std::string ego;         // label, "policy" or "ftg" unless overridden
  std::string competitor;  // label
  OvertakeProtocol protocol = OvertakeProtocol::Sprint;
  double competitor_speed = 0.0;
  int episodes = 0;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;  // every attempt that neither passed nor crashed
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double mean_steps = 0.0;             // over all attempts
  double mean_time_to_overtake = 0.0;  // over successes
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t ego_hash = 0;  // actor hash, zero for follow-the-gap
  std::vector<AttemptRecord> attempts;
};

struct OvertakeEvalOptions {
  FullConfig config;
  std::uint64_t seed = 0;
  OvertakeProtocol protocol = OvertakeProtocol::Sprint;
  int episodes = 0;               // 0 means config.eval.episodes
  double competitor_speed = 0.0;  // 0 means the protocol's configured speed
  std::string ego_checkpoint;     // empty drives the ego with follow-the-gap
  std::string competitor_checkpoint;  // empty keeps follow-the-gap traffic
  std::string ego_label;              // empty means "policy" or "ftg"
  std::string competitor_label;
  bool quiet = true;
};

/// Repeated single-competitor episodes on the held-out track: the
/// competitor starts ahead and the episode ends on a pass, a crash, or the
/// protocol's budget. Policies run greedily, so a report is a pure function
/// of checkpoint, config, and seed.
OvertakeReport run_overtake_eval(const OvertakeEvalOptions& options);

struct TimetrialAttempt {
  int attempt = 0;  // 1-based
  std::uint64_t env_seed = 0;
  bool completed = false;
  Termination termination = Termination::None;
  int laps_completed = 0;
  std::vector<double> lap_times;  // seconds per lap
  double total_time = 0.0;        // sum of lap times when completed
  int steps = 0;
};

struct TimetrialReport {
  std::string driver;  // "policy" or "ftg"
  int attempts_run = 0;
  int completed = 0;
  double mean_total = 0.0;    // over completed attempts
  double stddev_total = 0.0;  // population spread over completed attempts
  double best_total = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t ego_hash = 0;
  std::vector<TimetrialAttempt> attempts;
};

struct TimetrialOptions {
  FullConfig config;
  std::uint64_t seed = 0;
  int attempts = 0;            // 0 means config.eval.timetrial_attempts
  std::string ego_checkpoint;  // empty drives with follow-the-gap
};

/// Repeated empty-track attempts, each lapping until the configured lap
/// count, a crash, or the step cap. A crash marks the attempt failed and
/// keeps its partial laps.
TimetrialReport run_timetrial(const TimetrialOptions& options);

struct TracedEpisode {
  EpisodeOutcome outcome;
  std::vector<TraceRow> trace;
  std::string track_id;
};

/// One overtake episode with full pose logging, for visual inspection.
/// Uses the first episode seed the same options would evaluate.
TracedEpisode run_traced_overtake(const OvertakeEvalOptions& options);

/// summary.csv (one row per matchup) plus attempts.jsonl under out_dir.
/// Refuses an empty list and reports with no attempts; existing files are
/// replaced.
void write_overtake_reports(const std::string& out_dir,
                            const std::vector<OvertakeReport>& reports);

void write_overtake_report(const std::string& out_dir,
                           const OvertakeReport& report);

/// timetrial.json under out_dir.
void write_timetrial_report(const std::string& out_dir,
                            const TimetrialReport& report);

}  // namespace racer

#endif  // RACER_EVALUATE_HPP
