#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <voxpose/metrics.hpp>
#include <voxpose/optimizer.hpp>
#include <voxpose/scene.hpp>

namespace voxpose {

enum class AblationAxis { none, subsample, resolution };

struct SuccessCutoffs {
  double rotation_deg = 5.0;
  // World units; with the default 1-unit extent this is 10% of grid width.
  double translation = 0.2;
};

struct ExperimentSpec {
  SceneSpec scene;
  Intrinsics intrinsics{128, 128, 180.0};
  RenderConfig render;
  OptimizerConfig optimizer;
  PerturbSpec perturb;
  SuccessCutoffs cutoffs;
  int poses = 20;
  double camera_radius = 3.2;
  std::uint64_t master_seed = 1;
  AblationAxis ablation = AblationAxis::none;
  std::vector<double> subsample_fractions = {0.01, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> resolutions = {64, 128, 256};
  int jobs = 1;
};

struct PoseRun {
  int index = 0;
  std::uint64_t seed = 0;
  Pose gt, init, final;
  double init_re = 0, init_te = 0;
  double final_re = 0, final_te = 0;
  double final_photo_err = 0;
  int epochs = 0;
  StopReason stop = StopReason::epoch_limit;
  double runtime_s = 0;
  bool rot_ok = false, trans_ok = false;
  OptimizerTrace trace;
};

struct CurvePoint {
  int epoch = 0;
  double avg_re = 0, med_re = 0, fail_re = 0;
  double avg_te = 0, med_te = 0, fail_te = 0;
};

// One ablation arm (the whole experiment is a single arm when the axis is
// `none`). Success percentages are fractions in [0, 1]; averages include
// failed runs, matching how the result tables aggregate.
struct ArmReport {
  std::string label;
  double value = 0;  // subsample fraction or grid resolution
  double pct_rot_ok = 0, pct_trans_ok = 0;
  double avg_re = 0, avg_te = 0;
  double avg_runtime_s = 0;
  double avg_epoch_ms = 0;
  std::vector<PoseRun> runs;
  std::vector<CurvePoint> curves;  // per epoch, carry-forward after stop
};

struct ExperimentReport {
  std::vector<ArmReport> arms;
};

using Logger = std::function<void(const std::string&)>;

// Runs the full protocol against `reference`: for each pose index a seeded
// camera on the view sphere is perturbed and re-estimated, per-pose errors
// and runtimes are recorded, and each ablation arm aggregates the Table-style
// columns (%RE<cutoff, %TE<cutoff, avg RE, avg TE, avg runtime). Ground
// truth images always come from the reference grid; resolution arms resample
// the reference content to the arm's lattice before optimizing. Poses,
// perturbations and optimizer seeds derive from master_seed per pose index,
// so every arm sees identical starting conditions.
//
// When out_dir is set, per-pose rows and traces are flushed as they finish
// (runs.csv, traces/<arm>-pose<k>.csv), then summary.csv and curves.csv.
// spec.scene is not consulted here; build the grid first (build_scene or
// load_grid). Throws BadSpec for an invalid protocol.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const VoxelGrid& reference,
                                const std::filesystem::path& out_dir = {},
                                const Logger& log = {});

// Convenience: builds spec.scene and runs against it.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::filesystem::path& out_dir = {},
                                const Logger& log = {});

void write_summary_csv(const std::filesystem::path& path,
                       const ExperimentReport& report);
void write_runs_csv(const std::filesystem::path& path,
                    const ExperimentReport& report);
void write_curves_csv(const std::filesystem::path& path,
                      const ExperimentReport& report);

}  // namespace voxpose
