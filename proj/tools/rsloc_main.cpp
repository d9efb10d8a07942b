// Copyright 2026 The rsloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library exclusively through rsloc.h.
//
//   rsloc sweep      --config <path> --out <dir>
//   rsloc trajectory --config <path> --out <dir> [--baseline <csv>]
//   rsloc render     --grid <csv> --metric <name> --out <img> [--min v --max v]
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsloc/rsloc.h"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

constexpr const char * kMetrics[] = {"center_error", "bbox_area_error", "yaw_error", "point_count"};

struct ConfigDeleter
{
  void operator()(rsloc_config * p) const {rsloc_config_free(p);}
};
struct GridDeleter
{
  void operator()(rsloc_grid * p) const {rsloc_grid_free(p);}
};
struct TraceDeleter
{
  void operator()(rsloc_trace * p) const {rsloc_trace_free(p);}
};
struct BaselineDeleter
{
  void operator()(rsloc_baseline * p) const {rsloc_baseline_free(p);}
};

using ConfigPtr = std::unique_ptr<rsloc_config, ConfigDeleter>;
using GridPtr = std::unique_ptr<rsloc_grid, GridDeleter>;
using TracePtr = std::unique_ptr<rsloc_trace, TraceDeleter>;
using BaselinePtr = std::unique_ptr<rsloc_baseline, BaselineDeleter>;

class Failure
{
public:
  explicit Failure(rsloc_status status)
  : code_(status == RSLOC_ERR_IO ? kExitIo : kExitValidation), message_(rsloc_last_error()) {}
  Failure(int code, std::string message)
  : code_(code), message_(std::move(message)) {}

  int code() const {return code_;}
  const std::string & message() const {return message_;}

private:
  int code_;
  std::string message_;
};

void check(rsloc_status status)
{
  if (status != RSLOC_OK) {
    throw Failure(status);
  }
}

unsigned worker_limit()
{
  const char * env = std::getenv("RSLOC_THREADS");
  if (env == nullptr || *env == '\0') {
    return 0;
  }
  char * end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0') {
    throw Failure(kExitValidation, "RSLOC_THREADS must be a non-negative integer");
  }
  return static_cast<unsigned>(v);
}

ConfigPtr load_config(const std::string & path)
{
  rsloc_config * raw = nullptr;
  check(rsloc_config_load(path.c_str(), &raw));
  return ConfigPtr(raw);
}

std::filesystem::path output_dir(const rsloc_config * config, const std::string & cli_out)
{
  std::filesystem::path dir = cli_out;
  if (dir.empty()) {
    const char * from_config = rsloc_config_output_dir(config);
    if (from_config == nullptr) {
      throw Failure(kExitValidation, "no output directory: pass --out or set output_dir");
    }
    dir = from_config;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Failure(kExitIo, "cannot create '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

int run_sweep(const std::string & config_path, const std::string & out)
{
  auto config = load_config(config_path);
  if (rsloc_config_mode(config.get()) != RSLOC_MODE_SWEEP) {
    throw Failure(kExitValidation, config_path + ": mode is not 'sweep'");
  }
  const auto dir = output_dir(config.get(), out);

  rsloc_grid * raw = nullptr;
  check(rsloc_run_sweep(config.get(), worker_limit(), &raw));
  GridPtr grid(raw);
  check(rsloc_grid_write_csv(grid.get(), (dir / "grid.csv").c_str()));
  for (const char * metric : kMetrics) {
    double lo = 0.0;
    double hi = 0.0;
    check(rsloc_config_scale(config.get(), metric, &lo, &hi));
    check(rsloc_grid_render(grid.get(), metric, lo, hi,
      (dir / (std::string(metric) + ".ppm")).c_str()));
  }

  std::size_t ok = 0;
  std::size_t off90 = 0;
  double err_sum = 0.0;
  for (std::size_t i = 0; i < rsloc_grid_rows(grid.get()); ++i) {
    for (std::size_t j = 0; j < rsloc_grid_cols(grid.get()); ++j) {
      rsloc_cell cell{};
      check(rsloc_grid_cell(grid.get(), i, j, &cell));
      if (cell.status == RSLOC_CELL_OK) {
        ++ok;
        err_sum += cell.center_error_m;
        off90 += cell.off_by_90 ? 1 : 0;
      }
    }
  }
  const std::size_t total = rsloc_grid_rows(grid.get()) * rsloc_grid_cols(grid.get());
  std::printf("cells: %zu (ok %zu), mean center error %.4f m, off-by-90 cells %zu\n", total, ok,
    ok ? err_sum / static_cast<double>(ok) : 0.0, off90);
  std::printf("wrote %s\n", dir.c_str());
  return kExitOk;
}

int run_trajectory(
  const std::string & config_path, const std::string & out, const std::string & baseline_path)
{
  auto config = load_config(config_path);
  if (rsloc_config_mode(config.get()) != RSLOC_MODE_TRAJECTORY) {
    throw Failure(kExitValidation, config_path + ": mode is not 'trajectory'");
  }
  // Load the baseline first so a bad file fails before the expensive run.
  BaselinePtr baseline;
  if (!baseline_path.empty()) {
    rsloc_baseline * raw = nullptr;
    check(rsloc_baseline_read_csv(baseline_path.c_str(), &raw));
    baseline.reset(raw);
  }
  const auto dir = output_dir(config.get(), out);

  rsloc_trace * raw = nullptr;
  check(rsloc_run_trajectory(config.get(), worker_limit(), &raw));
  TracePtr trace(raw);

  const std::vector<rsloc_range> ranges = {{-36.0, 36.0}, {-50.0, 50.0}};
  check(rsloc_trace_write_csv(trace.get(), (dir / "trajectory.csv").c_str()));
  check(rsloc_trace_write_summary_csv(trace.get(), ranges.data(), ranges.size(),
    (dir / "summary.csv").c_str()));

  std::vector<rsloc_range_summary> rows(ranges.size());
  check(rsloc_trace_summarize(trace.get(), ranges.data(), ranges.size(), rows.data()));
  for (const auto & r : rows) {
    if (r.has_stats) {
      std::printf("[%g, %g] m: MAE %.4f m, p25 %.4f, p50 %.4f, p75 %.4f (ok %zu, failed %zu)\n",
        r.range.min, r.range.max, r.mae, r.p25, r.p50, r.p75, r.ok_count, r.failed_count);
    } else {
      std::printf("[%g, %g] m: no usable samples (failed %zu)\n", r.range.min, r.range.max,
        r.failed_count);
    }
  }
  double reach = 0.0;
  check(rsloc_trace_effective_range(trace.get(), 0.3, 0.75, &reach));
  std::printf("effective range (p75 < 0.3 m): +/-%g m\n", reach);

  if (baseline) {
    check(rsloc_write_comparison_csv(trace.get(), baseline.get(),
      (dir / "comparison.csv").c_str()));
    check(rsloc_baseline_write_summary_csv(baseline.get(), ranges.data(), ranges.size(),
      (dir / "baseline_summary.csv").c_str()));
  }
  std::printf("wrote %s\n", dir.c_str());
  return kExitOk;
}

int run_render(
  const std::string & grid_path, const std::string & metric, const std::string & out,
  std::optional<double> lo, std::optional<double> hi)
{
  rsloc_grid * raw = nullptr;
  check(rsloc_grid_read_csv(grid_path.c_str(), &raw));
  GridPtr grid(raw);

  // Defaults come from an empty sweep config so the CLI and config share one table.
  rsloc_config * defaults_raw = nullptr;
  check(rsloc_config_parse(
      "mode = sweep\n[sweep]\ndistance_min = 0\ndistance_max = 1\ndistance_step = 1\n"
      "yaw_step = 90\n", &defaults_raw));
  ConfigPtr defaults(defaults_raw);
  double def_lo = 0.0;
  double def_hi = 0.0;
  check(rsloc_config_scale(defaults.get(), metric.c_str(), &def_lo, &def_hi));

  check(rsloc_grid_render(grid.get(), metric.c_str(), lo.value_or(def_lo), hi.value_or(def_hi),
    out.c_str()));
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Roadside LiDAR cooperative localization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string baseline;
  std::string grid;
  std::string metric;
  std::optional<double> scale_min;
  std::optional<double> scale_max;

  auto * sweep = app.add_subcommand("sweep", "distance x yaw heat-map sweep");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out, "output directory (overrides output_dir)");

  auto * traj = app.add_subcommand("trajectory", "straight-road trajectory evaluation");
  traj->add_option("--config", config_path, "config file")->required();
  traj->add_option("--out", out, "output directory (overrides output_dir)");
  traj->add_option("--baseline", baseline, "baseline error trace (position_m,error_m)");

  auto * render = app.add_subcommand("render", "render a heat map from a grid CSV");
  render->add_option("--grid", grid, "grid CSV written by 'sweep'")->required();
  render->add_option("--metric", metric,
    "center_error | bbox_area_error | yaw_error | point_count")->required();
  render->add_option("--out", out, "output PPM path")->required();
  render->add_option("--min", scale_min, "color scale lower bound");
  render->add_option("--max", scale_max, "color scale upper bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (sweep->parsed()) {
      return run_sweep(config_path, out);
    }
    if (traj->parsed()) {
      return run_trajectory(config_path, out, baseline);
    }
    return run_render(grid, metric, out, scale_min, scale_max);
  } catch (const Failure & f) {
    std::cerr << "rsloc: " << f.message() << '\n';
    return f.code();
  }
}
