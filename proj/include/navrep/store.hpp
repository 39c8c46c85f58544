#pragma once

#include <string>
#include <vector>

#include "navrep/evaluation.hpp"
#include "navrep/heatmap.hpp"
#include "navrep/policy_net.hpp"
#include "navrep/ppo.hpp"

namespace navrep {

// --- checkpoints ----------------------------------------------------------

struct Checkpoint {
  NetworkWeights weights;
  long cum_raw_steps = 0;
  long post_shift_steps = 0;
  long onset_step = -1;  // raw step count at learning onset, -1 if unknown
};

// Binary, versioned, little-endian float32 arrays in the canonical ordering.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// --- traces ---------------------------------------------------------------

// Two CSV files: <base>.csv with per-step rows and <base>_episodes.csv with
// the per-episode summary. Both start with a "# navrep <kind> v1" line.
void save_trace(const ActivationTrace& trace, const std::string& base_path);
ActivationTrace load_trace(const std::string& base_path);

// --- suites and schedules -------------------------------------------------

void save_suite(const EvalSuite& suite, const std::string& path);
EvalSuite load_suite(const std::string& path);

void save_schedule(const ActionSchedule& schedule, const std::string& path);
ActionSchedule load_schedule(const std::string& path);

// --- learning curves ------------------------------------------------------

void save_curve(const LearningCurve& curve, const std::string& path);
LearningCurve load_curve(const std::string& path);

// --- images ---------------------------------------------------------------

struct Image {
  int width = 0, height = 0;
  std::vector<unsigned char> rgb;  // 3 bytes per pixel, row-major, top row first

  Image() = default;
  Image(int w, int h, unsigned char fill = 255)
      : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, fill) {}
  void set(int x, int y, unsigned char r, unsigned char g, unsigned char b);
};

void save_ppm(const Image& img, const std::string& path);

// Red-blue diverging rendering of a standardized heatmap (red = high,
// blue = low, gray = invalid cells), upscaled by `scale`.
Image heatmap_image(const Heatmap& map, int scale = 8);

// Minimal raster line plot and scatter, enough for the figure-style panels.
Image line_plot(const std::vector<std::vector<std::pair<double, double>>>& series,
                int width = 640, int height = 400);
Image scatter_plot(const std::vector<std::vector<std::pair<double, double>>>& groups,
                   int width = 640, int height = 480);

// --- misc -----------------------------------------------------------------

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace navrep
