#ifndef RACER_TRACK_LIBRARY_HPP
#define RACER_TRACK_LIBRARY_HPP

#include <vector>

#include "racer/track.hpp"

namespace racer {

/// Extrusion widths of the training track families (meters).
inline constexpr double kTrainingWidths[4] = {1.5, 2.17, 2.83, 3.5};

/// Held-out width used only by the evaluation track.
inline constexpr double kEvalWidth = 2.5;

/// The six authored training shapes, each spanning all training widths.
const std::vector<TrackSpec>& training_track_specs();

/// The held-out evaluation shape ("trial") at the evaluation width.
const TrackSpec& eval_track_spec();

/// All 24 training tracks (6 shapes x 4 widths).
std::vector<Track> build_training_tracks();

Track build_eval_track();

}  // namespace racer

#endif  // RACER_TRACK_LIBRARY_HPP
