#include "racer/track_library.hpp"

namespace racer {
namespace {

// Shapes are authored so the tightest centerline curvature radius stays
// above 2.0 m, which keeps wall offsetting cusp-free at the widest
// extrusion (3.5 m, offset 1.75 m per side).

std::vector<double> training_widths() {
  return {kTrainingWidths[0], kTrainingWidths[1], kTrainingWidths[2],
          kTrainingWidths[3]};
}

TrackSpec make_oval() {
  return {"oval",
          {{8.000, 0.000},
           {6.928, 2.500},
           {4.000, 4.330},
           {0.000, 5.000},
           {-4.000, 4.330},
           {-6.928, 2.500},
           {-8.000, 0.000},
           {-6.928, -2.500},
           {-4.000, -4.330},
           {0.000, -5.000},
           {4.000, -4.330},
           {6.928, -2.500}},
          training_widths()};
}

TrackSpec make_rect() {
  return {"rect",
          {{3.400, 0.000},    {4.857, 0.000},   {6.314, 0.000},
           {7.771, 0.000},    {9.229, 0.000},   {10.686, 0.000},
           {12.143, 0.000},   {13.600, 0.000},  {14.651, 0.166},
           {15.598, 0.649},   {16.351, 1.402},  {16.834, 2.349},
           {17.000, 3.400},   {17.000, 5.250},  {17.000, 7.100},
           {16.834, 8.151},   {16.351, 9.098},  {15.598, 9.851},
           {14.651, 10.334},  {13.600, 10.500}, {12.143, 10.500},
           {10.686, 10.500},  {9.229, 10.500},  {7.771, 10.500},
           {6.314, 10.500},   {4.857, 10.500},  {3.400, 10.500},
           {2.349, 10.334},   {1.402, 9.851},   {0.649, 9.098},
           {0.166, 8.151},    {0.000, 7.100},   {0.000, 5.250},
           {0.000, 3.400},    {0.166, 2.349},   {0.649, 1.402},
           {1.402, 0.649},    {2.349, 0.166}},
          training_widths()};
}

TrackSpec make_bean() {
  return {"bean",
          {{8.500, 0.000},
           {7.658, 2.237},
           {5.300, 3.723},
           {1.891, 3.719},
           {-1.891, 3.719},
           {-5.300, 3.723},
           {-7.658, 2.237},
           {-8.500, 0.000},
           {-7.658, -2.256},
           {-5.300, -4.066},
           {-1.891, -5.070},
           {1.891, -5.070},
           {5.300, -4.066},
           {7.658, -2.256}},
          training_widths()};
}

TrackSpec make_dee() {
  return {"dee",
          {{0.000, -4.500},
           {0.000, -1.500},
           {0.000, 1.500},
           {0.000, 4.500},
           {1.200, 6.300},
           {3.500, 7.300},
           {6.300, 6.900},
           {8.600, 5.200},
           {9.900, 2.600},
           {10.300, 0.000},
           {9.900, -2.600},
           {8.600, -5.200},
           {6.300, -6.900},
           {3.500, -7.300},
           {1.200, -6.300}},
          training_widths()};
}

TrackSpec make_esses() {
  return {"esses",
          {{10.000, 0.000},
           {9.200, 2.600},
           {6.500, 4.000},
           {3.000, 3.200},
           {0.000, 2.200},
           {-3.000, 3.200},
           {-6.500, 4.000},
           {-9.200, 2.600},
           {-10.000, 0.000},
           {-9.200, -2.600},
           {-6.500, -4.000},
           {-3.000, -4.600},
           {0.000, -4.800},
           {3.000, -4.600},
           {6.500, -4.000},
           {9.200, -2.600}},
          training_widths()};
}

TrackSpec make_ell() {
  return {"ell",
          {{3.200, 0.000},   {4.817, 0.000},   {6.433, 0.000},
           {8.050, 0.000},   {9.667, 0.000},   {11.283, 0.000},
           {12.900, 0.000},  {14.012, 0.196},  {14.989, 0.760},
           {15.715, 1.625},  {16.101, 2.686},  {16.101, 3.814},
           {15.715, 4.875},  {14.989, 5.740},  {14.012, 6.304},
           {12.900, 6.500},  {12.700, 6.500},  {11.711, 6.657},
           {10.819, 7.111},  {10.111, 7.819},  {9.657, 8.711},
           {9.500, 9.700},   {9.500, 11.250},  {9.500, 12.800},
           {9.343, 13.789},  {8.889, 14.681},  {8.181, 15.389},
           {7.289, 15.843},  {6.300, 16.000},  {4.750, 16.000},
           {3.200, 16.000},  {2.211, 15.843},  {1.319, 15.389},
           {0.611, 14.681},  {0.157, 13.789},  {0.000, 12.800},
           {0.000, 11.200},  {0.000, 9.600},   {0.000, 8.000},
           {0.000, 6.400},   {0.000, 4.800},   {0.000, 3.200},
           {0.157, 2.211},   {0.611, 1.319},   {1.319, 0.611},
           {2.211, 0.157}},
          training_widths()};
}

TrackSpec make_trial() {
  return {"trial",
          {{9.948, 0.000},
           {8.197, 2.856},
           {5.205, 4.524},
           {2.454, 5.912},
           {-0.978, 7.282},
           {-5.148, 6.978},
           {-7.811, 4.441},
           {-8.161, 1.358},
           {-7.840, -1.304},
           {-7.192, -4.089},
           {-4.799, -6.506},
           {-0.960, -7.152},
           {2.601, -6.264},
           {5.741, -4.990},
           {8.744, -3.047}},
          {kEvalWidth}};
}

}  // namespace

const std::vector<TrackSpec>& training_track_specs() {
  static const std::vector<TrackSpec> specs = {make_oval(),  make_rect(),
                                               make_bean(),  make_dee(),
                                               make_esses(), make_ell()};
  return specs;
}

const TrackSpec& eval_track_spec() {
  static const TrackSpec spec = make_trial();
  return spec;
}

std::vector<Track> build_training_tracks() {
  std::vector<Track> tracks;
  for (const TrackSpec& spec : training_track_specs()) {
    for (Track& t : generate_track_family(spec)) {
      tracks.push_back(std::move(t));
    }
  }
  return tracks;
}

Track build_eval_track() {
  std::vector<Track> family = generate_track_family(eval_track_spec());
  return std::move(family.front());
}

}  // namespace racer
