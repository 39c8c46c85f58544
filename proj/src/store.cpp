#include "navrep/store.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace navrep {

using nlohmann::json;

namespace {

constexpr char kCheckpointMagic[8] = {'N', 'R', 'C', 'K', 'P', 'T', '0', '1'};
constexpr uint32_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint truncated at " + what);
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  return out;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out = open_out(path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_pod<uint32_t>(out, kCheckpointVersion);
  write_pod<uint32_t>(out, ckpt.weights.config.input_dim);
  write_pod<uint32_t>(out, ckpt.weights.config.layer_width);
  write_pod<uint32_t>(out, ckpt.weights.config.n_shared_ff);
  write_pod<uint32_t>(out, ckpt.weights.config.n_actions);
  write_pod<int64_t>(out, ckpt.cum_raw_steps);
  write_pod<int64_t>(out, ckpt.post_shift_steps);
  write_pod<int64_t>(out, ckpt.onset_step);
  auto params = ckpt.weights.params();
  write_pod<uint32_t>(out, static_cast<uint32_t>(params.size()));
  for (const auto& p : params) {
    write_pod<uint32_t>(out, static_cast<uint32_t>(p.name.size()));
    out.write(p.name.data(), p.name.size());
    write_pod<uint64_t>(out, static_cast<uint64_t>(p.size));
    for (long i = 0; i < p.size; ++i) {
      write_pod<float>(out, static_cast<float>(p.data[i]));
    }
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in = open_in(path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  const auto version = read_pod<uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version in " + path);
  }
  NetworkConfig cfg;
  cfg.input_dim = read_pod<uint32_t>(in, "input_dim");
  cfg.layer_width = read_pod<uint32_t>(in, "layer_width");
  cfg.n_shared_ff = read_pod<uint32_t>(in, "n_shared_ff");
  cfg.n_actions = read_pod<uint32_t>(in, "n_actions");
  Checkpoint ckpt;
  ckpt.cum_raw_steps = read_pod<int64_t>(in, "cum_raw_steps");
  ckpt.post_shift_steps = read_pod<int64_t>(in, "post_shift_steps");
  ckpt.onset_step = read_pod<int64_t>(in, "onset_step");
  ckpt.weights = make_zero_weights(cfg);
  auto params = ckpt.weights.params();
  const auto n_arrays = read_pod<uint32_t>(in, "n_arrays");
  if (n_arrays != params.size()) {
    throw std::runtime_error("checkpoint array count mismatch in " + path);
  }
  for (auto& p : params) {
    const auto name_len = read_pod<uint32_t>(in, "name_len");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in || name != p.name) {
      throw std::runtime_error("checkpoint array '" + name +
                               "' does not match expected '" + p.name + "'");
    }
    const auto size = read_pod<uint64_t>(in, "array size");
    if (size != static_cast<uint64_t>(p.size)) {
      throw std::runtime_error("checkpoint array size mismatch for " + p.name);
    }
    for (long i = 0; i < p.size; ++i) {
      p.data[i] = static_cast<double>(read_pod<float>(in, p.name));
    }
  }
  return ckpt;
}

void save_trace(const ActivationTrace& trace, const std::string& base_path) {
  {
    std::ofstream out = open_out(base_path + ".csv");
    out << "# navrep trace v1\n";
    out << "run_id,episode_id,mode,t,x,y,heading,shortcut_open,action";
    const long width = trace.rows.empty() ? 0 : trace.rows[0].activations.size();
    char buf[16];
    for (long i = 0; i < width; ++i) {
      std::snprintf(buf, sizeof(buf), ",a%02ld", i);
      out << buf;
    }
    out << "\n";
    out.precision(17);
    for (const auto& r : trace.rows) {
      out << trace.run_id << ',' << r.episode_id << ','
          << (r.open_mode ? "open" : "closed") << ',' << r.t << ',' << r.x
          << ',' << r.y << ',' << r.heading << ',' << (r.shortcut_open ? 1 : 0)
          << ',' << r.action;
      for (long i = 0; i < r.activations.size(); ++i) {
        out << ',' << r.activations(i);
      }
      out << "\n";
    }
  }
  {
    std::ofstream out = open_out(base_path + "_episodes.csv");
    out << "# navrep episodes v1\n";
    out << "run_id,episode_id,mode,length,reached_goal,path_label\n";
    for (const auto& e : trace.episodes) {
      const char* label = e.label == PathLabel::Shortcut   ? "shortcut"
                          : e.label == PathLabel::LongPath ? "long_path"
                                                           : "no_entry";
      out << trace.run_id << ',' << e.episode_id << ','
          << (e.open_mode ? "open" : "closed") << ',' << e.length << ','
          << (e.reached_goal ? 1 : 0) << ',' << label << "\n";
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void expect_header(std::istream& in, const std::string& tag,
                   const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# navrep " + tag, 0) != 0) {
    throw std::runtime_error(path + ": missing '" + tag + "' version header");
  }
}

}  // namespace

ActivationTrace load_trace(const std::string& base_path) {
  ActivationTrace trace;
  {
    std::ifstream in = open_in(base_path + ".csv");
    expect_header(in, "trace", base_path + ".csv");
    std::string line;
    std::getline(in, line);  // column header
    const auto header = split_csv(line);
    const long width = static_cast<long>(header.size()) - 9;
    if (width < 0) throw std::runtime_error(base_path + ": bad trace header");
    long lineno = 2;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (static_cast<long>(cells.size()) != width + 9) {
        throw std::runtime_error(base_path + ".csv: malformed row at line " +
                                 std::to_string(lineno));
      }
      TraceRow r;
      trace.run_id = std::stoi(cells[0]);
      r.episode_id = std::stoi(cells[1]);
      r.open_mode = cells[2] == "open";
      r.t = std::stoi(cells[3]);
      r.x = std::stod(cells[4]);
      r.y = std::stod(cells[5]);
      r.heading = std::stod(cells[6]);
      r.shortcut_open = cells[7] == "1";
      r.action = std::stoi(cells[8]);
      r.activations.resize(width);
      for (long i = 0; i < width; ++i) r.activations(i) = std::stod(cells[9 + i]);
      trace.rows.push_back(std::move(r));
    }
  }
  {
    std::ifstream in = open_in(base_path + "_episodes.csv");
    expect_header(in, "episodes", base_path + "_episodes.csv");
    std::string line;
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != 6) {
        throw std::runtime_error(base_path + "_episodes.csv: malformed row");
      }
      EpisodeResult e;
      e.episode_id = std::stoi(cells[1]);
      e.open_mode = cells[2] == "open";
      e.length = std::stoi(cells[3]);
      e.reached_goal = cells[4] == "1";
      e.label = cells[5] == "shortcut"    ? PathLabel::Shortcut
                : cells[5] == "long_path" ? PathLabel::LongPath
                                          : PathLabel::NoEntry;
      trace.episodes.push_back(e);
    }
  }
  return trace;
}

void save_suite(const EvalSuite& suite, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["seed"] = suite.seed;
  j["starts"] = json::array();
  for (const auto& s : suite.starts) {
    j["starts"].push_back({{"x", s.x}, {"y", s.y}, {"heading", s.heading}});
  }
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

EvalSuite load_suite(const std::string& path) {
  std::ifstream in = open_in(path);
  json j = json::parse(in);
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error(path + ": unsupported suite version");
  }
  EvalSuite suite;
  suite.seed = j.at("seed").get<uint64_t>();
  for (const auto& s : j.at("starts")) {
    suite.starts.push_back({s.at("x").get<double>(), s.at("y").get<double>(),
                            s.at("heading").get<double>()});
  }
  return suite;
}

void save_schedule(const ActionSchedule& schedule, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["source_run_id"] = schedule.source_run_id;
  j["source_use_rate"] = schedule.source_use_rate;
  j["episodes"] = json::array();
  for (const auto& e : schedule.episodes) {
    j["episodes"].push_back({{"x", e.start.x},
                             {"y", e.start.y},
                             {"heading", e.start.heading},
                             {"shortcut_open", e.shortcut_open},
                             {"actions", e.actions}});
  }
  std::ofstream out = open_out(path);
  out << j.dump() << "\n";
}

ActionSchedule load_schedule(const std::string& path) {
  std::ifstream in = open_in(path);
  json j = json::parse(in);
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error(path + ": unsupported schedule version");
  }
  ActionSchedule s;
  s.source_run_id = j.at("source_run_id").get<int>();
  s.source_use_rate = j.value("source_use_rate", 0.0);
  for (const auto& e : j.at("episodes")) {
    ScheduleEpisode se;
    se.start = {e.at("x").get<double>(), e.at("y").get<double>(),
                e.at("heading").get<double>()};
    se.shortcut_open = e.at("shortcut_open").get<bool>();
    se.actions = e.at("actions").get<std::vector<int>>();
    s.episodes.push_back(std::move(se));
  }
  return s;
}

void save_curve(const LearningCurve& curve, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# navrep curve v1\n";
  out << "cum_steps,episode_length\n";
  for (size_t i = 0; i < curve.size(); ++i) {
    out << curve.cum_steps[i] << ',' << curve.episode_lengths[i] << "\n";
  }
}

LearningCurve load_curve(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "curve", path);
  std::string line;
  std::getline(in, line);
  LearningCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw std::runtime_error(path + ": malformed row");
    curve.add(std::stol(cells[0]), std::stoi(cells[1]));
  }
  return curve;
}

void Image::set(int x, int y, unsigned char r, unsigned char g,
                unsigned char b) {
  if (x < 0 || x >= width || y < 0 || y >= height) return;
  const size_t i = (static_cast<size_t>(y) * width + x) * 3;
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

void save_ppm(const Image& img, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
}

namespace {

// Diverging blue-white-red, v in [-limit, limit].
void diverging_color(double v, double limit, unsigned char* rgb) {
  const double t = std::clamp(v / limit, -1.0, 1.0);
  double r, g, b;
  if (t >= 0.0) {
    r = 1.0;
    g = 1.0 - t;
    b = 1.0 - t;
  } else {
    r = 1.0 + t;
    g = 1.0 + t;
    b = 1.0;
  }
  rgb[0] = static_cast<unsigned char>(r * 255.0);
  rgb[1] = static_cast<unsigned char>(g * 255.0);
  rgb[2] = static_cast<unsigned char>(b * 255.0);
}

}  // namespace

Image heatmap_image(const Heatmap& map, int scale) {
  const int n = kHeatmapGrid;
  Image img(n * scale, n * scale);
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      unsigned char rgb[3] = {160, 160, 160};  // invalid cells in gray
      if (map.valid(ix, iy)) diverging_color(map.values(ix, iy), 2.5, rgb);
      // Image rows run top-down; world y runs bottom-up.
      for (int dx = 0; dx < scale; ++dx) {
        for (int dy = 0; dy < scale; ++dy) {
          img.set(ix * scale + dx, (n - 1 - iy) * scale + dy, rgb[0], rgb[1],
                  rgb[2]);
        }
      }
    }
  }
  return img;
}

namespace {

const unsigned char kPalette[6][3] = {{31, 119, 180}, {255, 127, 14},
                                      {44, 160, 44},  {214, 39, 40},
                                      {148, 103, 189}, {140, 86, 75}};

struct Bounds {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

Bounds find_bounds(
    const std::vector<std::vector<std::pair<double, double>>>& series) {
  Bounds b{1e300, -1e300, 1e300, -1e300};
  for (const auto& s : series) {
    for (const auto& [x, y] : s) {
      b.x0 = std::min(b.x0, x);
      b.x1 = std::max(b.x1, x);
      b.y0 = std::min(b.y0, y);
      b.y1 = std::max(b.y1, y);
    }
  }
  if (b.x0 > b.x1) b = {0, 1, 0, 1};
  if (b.x1 - b.x0 < 1e-12) b.x1 = b.x0 + 1.0;
  if (b.y1 - b.y0 < 1e-12) b.y1 = b.y0 + 1.0;
  return b;
}

void draw_line(Image& img, int x0, int y0, int x1, int y1,
               const unsigned char* c) {
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, c[0], c[1], c[2]);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

Image line_plot(const std::vector<std::vector<std::pair<double, double>>>& series,
                int width, int height) {
  Image img(width, height);
  const int margin = 24;
  const Bounds b = find_bounds(series);
  auto px = [&](double x) {
    return margin + static_cast<int>((x - b.x0) / (b.x1 - b.x0) *
                                     (width - 2 * margin));
  };
  auto py = [&](double y) {
    return height - margin -
           static_cast<int>((y - b.y0) / (b.y1 - b.y0) * (height - 2 * margin));
  };
  const unsigned char black[3] = {0, 0, 0};
  draw_line(img, margin, margin, margin, height - margin, black);
  draw_line(img, margin, height - margin, width - margin, height - margin,
            black);
  for (size_t s = 0; s < series.size(); ++s) {
    const unsigned char* c = kPalette[s % 6];
    for (size_t i = 1; i < series[s].size(); ++i) {
      draw_line(img, px(series[s][i - 1].first), py(series[s][i - 1].second),
                px(series[s][i].first), py(series[s][i].second), c);
    }
  }
  return img;
}

Image scatter_plot(
    const std::vector<std::vector<std::pair<double, double>>>& groups,
    int width, int height) {
  Image img(width, height);
  const int margin = 24;
  const Bounds b = find_bounds(groups);
  auto px = [&](double x) {
    return margin + static_cast<int>((x - b.x0) / (b.x1 - b.x0) *
                                     (width - 2 * margin));
  };
  auto py = [&](double y) {
    return height - margin -
           static_cast<int>((y - b.y0) / (b.y1 - b.y0) * (height - 2 * margin));
  };
  for (size_t g = 0; g < groups.size(); ++g) {
    const unsigned char* c = kPalette[g % 6];
    for (const auto& [x, y] : groups[g]) {
      const int cx = px(x), cy = py(y);
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          img.set(cx + dx, cy + dy, c[0], c[1], c[2]);
        }
      }
    }
  }
  return img;
}

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

}  // namespace navrep
