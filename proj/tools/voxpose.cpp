#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <voxpose/errors.hpp>
#include <voxpose/experiment.hpp>
#include <voxpose/json_io.hpp>
#include <voxpose/plot.hpp>
#include <voxpose/png.hpp>

namespace fs = std::filesystem;
using namespace voxpose;

namespace {

constexpr const char* kVersion = "0.1.0";

int env_jobs_override(int jobs) {
  if (const char* env = std::getenv("VOXPOSE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    std::cerr << "warning: ignoring invalid VOXPOSE_THREADS='" << env << "'\n";
  }
  return jobs;
}

void write_manifest(const fs::path& path, const std::string& subcommand,
                    nlohmann::json params) {
  nlohmann::json manifest{{"tool", "voxpose"},
                          {"version", kVersion},
                          {"subcommand", subcommand},
                          {"parameters", std::move(params)}};
  write_text_file(path, manifest.dump(2) + "\n");
}

int cmd_build_scene(const std::string& config, const std::string& out,
                    const std::optional<std::string>& kind, int resolution,
                    std::uint64_t seed) {
  SceneSpec spec;
  if (!config.empty()) spec = scene_from_json(read_text_file(config));
  if (kind) {
    nlohmann::json j{{"kind", *kind}};
    spec.kind = scene_from_json(j.dump()).kind;
  }
  if (resolution > 0) spec.resolution = resolution;
  (void)seed;

  const VoxelGrid grid = build_scene(spec);
  save_grid(grid, out);

  std::size_t occupied = 0;
  for (float d : grid.density()) {
    if (d > 0.0f) ++occupied;
  }
  std::cout << "scene: " << to_json(spec) << "\n";
  std::cout << "grid: resolution " << grid.resolution() << ", extent "
            << grid.extent() << ", occupancy "
            << static_cast<double>(occupied) /
                   static_cast<double>(grid.corner_count())
            << "\n";
  std::cout << "wrote " << out << "\n";

  write_manifest(out + ".manifest.json", "build-scene",
                 {{"scene", nlohmann::json::parse(to_json(spec))},
                  {"out", out}});
  return 0;
}

int cmd_render(const std::string& grid_path, const std::string& pose_path,
               const std::string& out, int width, int height, double focal,
               double step, std::uint64_t seed) {
  const VoxelGrid grid = load_grid(grid_path);
  Pose pose;
  if (!pose_path.empty()) {
    pose = pose_from_json(read_text_file(pose_path));
  } else {
    std::mt19937_64 rng(seed);
    pose = random_view_pose(3.2 * grid.extent(), rng);
  }
  const Intrinsics intr{width, height, focal};
  RenderConfig cfg;
  cfg.step_size = step;
  const Image img = render_image(grid, pose, intr, cfg);
  write_png(out, img);
  std::cout << "wrote " << out << "\n";

  write_manifest(out + ".manifest.json", "render",
                 {{"grid", grid_path},
                  {"pose", nlohmann::json::parse(to_json(pose))},
                  {"width", width},
                  {"height", height},
                  {"focal", focal},
                  {"step_size", step},
                  {"seed", seed}});
  return 0;
}

void write_overlay_frames(const fs::path& dir, const ExperimentReport& report,
                          const VoxelGrid& reference, const ExperimentSpec& spec) {
  fs::create_directories(dir);
  for (const ArmReport& arm : report.arms) {
    for (const PoseRun& run : arm.runs) {
      const Image gt =
          render_image(reference, run.gt, spec.intrinsics, spec.render);
      const int last = static_cast<int>(run.trace.rows.size());
      for (int e = 1; e <= last; e += 25) {
        const TraceRow& row = run.trace.rows[e - 1];
        Image est =
            render_image(reference, row.pose, spec.intrinsics, spec.render);
        for (std::size_t i = 0; i < est.rgb.size(); ++i) {
          est.rgb[i] = 0.5f * est.rgb[i] + 0.5f * gt.rgb[i];
        }
        write_png(dir / (arm.label + "-pose" + std::to_string(run.index) +
                         "-epoch" + std::to_string(row.epoch) + ".png"),
                  est);
      }
    }
  }
}

int cmd_estimate(const std::string& grid_path, const std::string& config,
                 const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<int> jobs, bool frames) {
  ExperimentSpec spec;
  if (!config.empty()) spec = experiment_from_json(read_text_file(config));
  if (seed) spec.master_seed = *seed;
  spec.jobs = env_jobs_override(jobs.value_or(spec.jobs));

  const VoxelGrid grid = load_grid(grid_path);
  fs::create_directories(out_dir);
  write_manifest(fs::path(out_dir) / "manifest.json", "estimate",
                 {{"grid", grid_path},
                  {"config", config},
                  {"out", out_dir},
                  {"master_seed", spec.master_seed},
                  {"frames", frames},
                  {"experiment", nlohmann::json::parse(to_json(spec))}});

  const ExperimentReport report = run_experiment(
      spec, grid, out_dir, [](const std::string& line) { std::cout << line << "\n"; });
  write_png(fs::path(out_dir) / "curves.png", plot_curves(report));
  if (frames) {
    write_overlay_frames(fs::path(out_dir) / "frames", report, grid, spec);
  }

  for (const ArmReport& arm : report.arms) {
    std::cout << arm.label << ": re_ok " << 100.0 * arm.pct_rot_ok << "%, te_ok "
              << 100.0 * arm.pct_trans_ok << "%, avg RE " << arm.avg_re
              << " deg, avg TE " << arm.avg_te << ", avg runtime "
              << arm.avg_runtime_s << " s\n";
  }
  std::cout << "report in " << out_dir << "\n";
  return 0;
}

int cmd_plot(const std::string& run_dir) {
  // Rebuild just enough of the report from curves.csv to redraw the chart.
  const std::string text = read_text_file(fs::path(run_dir) / "curves.csv");
  ExperimentReport report;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string arm_label, field;
    std::getline(row, arm_label, ',');
    CurvePoint pt;
    auto next = [&]() {
      std::getline(row, field, ',');
      return std::stod(field);
    };
    pt.epoch = static_cast<int>(next());
    pt.avg_re = next();
    pt.med_re = next();
    pt.fail_re = next();
    pt.avg_te = next();
    pt.med_te = next();
    pt.fail_te = next();
    if (report.arms.empty() || report.arms.back().label != arm_label) {
      ArmReport arm;
      arm.label = arm_label;
      report.arms.push_back(std::move(arm));
    }
    report.arms.back().curves.push_back(pt);
  }
  if (report.arms.empty()) throw BadSpec("plot: curves.csv has no rows");
  write_png(fs::path(run_dir) / "curves.png", plot_curves(report));
  std::cout << "wrote " << (fs::path(run_dir) / "curves.png").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voxel radiance field renderer and camera pose estimator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-scene", "Write a procedural scene grid");
  std::string build_config, build_out;
  std::optional<std::string> build_kind;
  int build_resolution = 0;
  std::uint64_t build_seed = 0;
  build->add_option("--config", build_config, "Scene spec JSON file");
  build->add_option("--kind", build_kind,
                    "sphere | box | checker_sphere | two_objects | uniform_blob");
  build->add_option("--resolution", build_resolution, "Lattice resolution");
  build->add_option("--seed", build_seed, "Unused; reserved");
  build->add_option("--out", build_out, "Output grid file")->required();

  auto* render = app.add_subcommand("render", "Render a grid to PNG");
  std::string render_grid, render_pose, render_out;
  int render_w = 128, render_h = 128;
  double render_f = 180.0, render_step = 0.0;
  std::uint64_t render_seed = 0;
  render->add_option("--grid", render_grid, "Grid file")->required();
  render->add_option("--pose", render_pose, "Camera pose JSON (default: seeded view)");
  render->add_option("--width", render_w, "Image width");
  render->add_option("--height", render_h, "Image height");
  render->add_option("--focal", render_f, "Focal length in pixels");
  render->add_option("--step", render_step, "Sample step (<=0: half voxel)");
  render->add_option("--seed", render_seed, "Seed for the default view pose");
  render->add_option("--out", render_out, "Output PNG")->required();

  auto* estimate = app.add_subcommand(
      "estimate", "Run the pose estimation protocol and write reports");
  std::string est_grid, est_config, est_out;
  std::optional<std::uint64_t> est_seed;
  std::optional<int> est_jobs;
  bool est_frames = false;
  estimate->add_option("--grid", est_grid, "Grid file")->required();
  estimate->add_option("--config", est_config, "Experiment spec JSON file");
  estimate->add_option("--seed", est_seed, "Master seed override");
  estimate->add_option("--jobs", est_jobs,
                       "Parallel pose runs (VOXPOSE_THREADS overrides)");
  estimate->add_flag("--frames", est_frames, "Emit overlay PNGs per pose");
  estimate->add_option("--out", est_out, "Output directory")->required();

  auto* plot = app.add_subcommand("plot", "Redraw curves.png from a run directory");
  std::string plot_run;
  plot->add_option("--run", plot_run, "Run directory with curves.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      return cmd_build_scene(build_config, build_out, build_kind,
                             build_resolution, build_seed);
    }
    if (render->parsed()) {
      return cmd_render(render_grid, render_pose, render_out, render_w, render_h,
                        render_f, render_step, render_seed);
    }
    if (estimate->parsed()) {
      return cmd_estimate(est_grid, est_config, est_out, est_seed, est_jobs,
                          est_frames);
    }
    if (plot->parsed()) {
      return cmd_plot(plot_run);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
