#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <voxpose/renderer.hpp>

namespace voxpose {

// Per-axis pose noise: each axis draws a magnitude uniformly from
// [0, max] and a random sign. Rotation is composed on the camera side
// (gt.rotation * exp(w)), translation is added in world units.
struct PerturbSpec {
  double max_rotation_deg = 5.0;
  double max_translation = 0.2;
};

Pose perturb_pose(const Pose& gt, const PerturbSpec& spec, std::uint64_t seed);

enum class StepBlock { rotation, translation };

// How many consecutive epochs each block gets before switching. The
// schedule starts with rotation.
struct AlternationPlan {
  int rotation_epochs = 1;
  int translation_epochs = 1;
};

struct OptimizerConfig {
  double lr_rotation = 5.0;
  double lr_translation = 4.0;
  // Every decay_interval epochs the learning rates lose this fraction.
  double lr_decay = 0.25;
  int decay_interval = 100;
  int max_epochs = 1000;
  // Stop when the summed squared error over the epoch's pixel set drops to
  // epsilon_per_pixel * |pixels|. The default corresponds to an error budget
  // of 2000 over a 640k-pixel frame.
  double epsilon_per_pixel = 2000.0 / 640000.0;
  // Fraction of the frame rendered per epoch (1 = every pixel).
  double subsample_fraction = 1.0;
  bool resample_each_epoch = true;
  // Finite-difference probe lengths; translation_step <= 0 selects one voxel
  // edge of the grid being rendered.
  double translation_step = 0.0;
  double rotation_step = 0.001;  // radians
  // When set, probe lengths shrink on the same schedule as the learning
  // rates.
  bool decay_probe_steps = false;
  AlternationPlan alternation;
  std::uint64_t seed = 0;  // drives pixel subsampling only
};

// One row of the steepest-descent block per residual entry (3 per pixel),
// one column per degree of freedom of the active block.
using DescentBlock = Eigen::Matrix<float, Eigen::Dynamic, 3>;

// Central differences of the rendering against one block of pose
// parameters: column i holds (render(pose plus step_i) - render(pose minus
// step_i)) / 2 stacked over the given pixels. Rotation probes compose
// exp(+-h e_i) on the world side, translation probes offset the camera
// center along world axes.
DescentBlock central_diff_block(const VoxelGrid& grid, const Pose& pose,
                                const Intrinsics& intr,
                                const std::vector<Pixel>& pixels,
                                StepBlock block, double probe_step,
                                const RenderConfig& cfg);

// One gradient step on the active block:
//
//   g = J^T delta / n_pixels
//   translation -> t - lr * g
//   rotation    -> exp(-lr * g) * R, re-orthonormalized
//
// Throws ShapeMismatch when J and delta disagree and NonFiniteUpdate when
// the step is not finite.
Pose sgd_step(const Pose& pose, const DescentBlock& j,
              const Eigen::VectorXf& delta, double lr, StepBlock block);

enum class StopReason { converged, epoch_limit, nonfinite };

struct TraceRow {
  int epoch = 0;  // 1-based
  StepBlock block = StepBlock::rotation;
  // Mean squared error per pixel over this epoch's pixel set, measured at
  // the start of the epoch (before its update).
  double photo_err = 0.0;
  // Pose state and its error against the reference pose after this epoch's
  // update. The pose itself stays in memory only; the CSV keeps the errors.
  Pose pose;
  double rotation_err_deg = 0.0;
  double translation_err = 0.0;
  double ms = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceRow> rows;
  StopReason stop = StopReason::epoch_limit;
};

struct EstimateResult {
  Pose pose;
  OptimizerTrace trace;
};

// Recovers the camera pose that produced `reference` by stochastic gradient
// descent on the photometric error, alternating between rotation and
// translation epochs. `reference_pose` feeds the per-epoch error columns of
// the trace and nothing else.
EstimateResult estimate_pose(const VoxelGrid& grid, const Image& reference,
                             const Intrinsics& intr, const Pose& init,
                             const OptimizerConfig& opt, const RenderConfig& render,
                             const Pose& reference_pose);

// Columns: epoch, step_kind, photo_err, re_deg, te_units, ms.
void write_trace_csv(const std::filesystem::path& path, const OptimizerTrace& trace);

}  // namespace voxpose
