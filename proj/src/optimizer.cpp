#include <voxpose/optimizer.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <voxpose/errors.hpp>
#include <voxpose/metrics.hpp>

namespace voxpose {

Pose perturb_pose(const Pose& gt, const PerturbSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  std::bernoulli_distribution flip(0.5);
  auto draw = [&](double scale) {
    const double m = mag(rng) * scale;
    return flip(rng) ? -m : m;
  };
  const double rot_max = spec.max_rotation_deg * M_PI / 180.0;
  const Vec3 w(draw(rot_max), draw(rot_max), draw(rot_max));
  const Vec3 dt(draw(spec.max_translation), draw(spec.max_translation),
                draw(spec.max_translation));
  Pose out;
  out.rotation = gt.rotation * exp_so3(w);
  out.translation = gt.translation + dt;
  return out;
}

DescentBlock central_diff_block(const VoxelGrid& grid, const Pose& pose,
                                const Intrinsics& intr,
                                const std::vector<Pixel>& pixels,
                                StepBlock block, double probe_step,
                                const RenderConfig& cfg) {
  double h = probe_step;
  if (h <= 0.0) {
    h = block == StepBlock::translation ? grid.voxel_edge() : 0.001;
  }
  DescentBlock j(3 * static_cast<Eigen::Index>(pixels.size()), 3);
  for (int axis = 0; axis < 3; ++axis) {
    Pose plus = pose, minus = pose;
    if (block == StepBlock::rotation) {
      Vec3 w = Vec3::Zero();
      w[axis] = h;
      plus.rotation = exp_so3(w) * pose.rotation;
      minus.rotation = exp_so3(-w) * pose.rotation;
    } else {
      plus.translation[axis] += h;
      minus.translation[axis] -= h;
    }
    const RenderedPixels hi = render_pixels(grid, plus, intr, pixels, cfg);
    const RenderedPixels lo = render_pixels(grid, minus, intr, pixels, cfg);
    for (std::size_t p = 0; p < pixels.size(); ++p) {
      for (int c = 0; c < 3; ++c) {
        j(3 * p + c, axis) = 0.5f * (hi[p][c] - lo[p][c]);
      }
    }
  }
  return j;
}

Pose sgd_step(const Pose& pose, const DescentBlock& j,
              const Eigen::VectorXf& delta, double lr, StepBlock block) {
  if (j.rows() != delta.size() || j.rows() % 3 != 0) {
    throw ShapeMismatch("sgd_step: descent block and residual sizes differ");
  }
  const double n_pixels = static_cast<double>(j.rows() / 3);
  const Eigen::Vector3d g =
      (j.transpose() * delta).cast<double>() / n_pixels;
  if (!g.allFinite()) {
    throw NonFiniteUpdate("sgd_step: gradient is not finite");
  }
  Pose out = pose;
  if (block == StepBlock::translation) {
    out.translation -= lr * g;
    if (!out.translation.allFinite()) {
      throw NonFiniteUpdate("sgd_step: translation update is not finite");
    }
  } else {
    out.rotation = project_to_so3(exp_so3(-lr * g) * pose.rotation);
  }
  return out;
}

namespace {

StepBlock block_for_epoch(int epoch, const AlternationPlan& plan) {
  const int kr = std::max(1, plan.rotation_epochs);
  const int kt = std::max(1, plan.translation_epochs);
  return (epoch - 1) % (kr + kt) < kr ? StepBlock::rotation
                                      : StepBlock::translation;
}

std::vector<Pixel> draw_subset(const std::vector<Pixel>& all, double fraction,
                               std::mt19937_64& rng) {
  if (fraction >= 1.0) return all;
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(fraction * static_cast<double>(all.size())));
  std::vector<std::uint32_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<Pixel> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(all[idx[i]]);
  return out;
}

}  // namespace

EstimateResult estimate_pose(const VoxelGrid& grid, const Image& reference,
                             const Intrinsics& intr, const Pose& init,
                             const OptimizerConfig& opt, const RenderConfig& render,
                             const Pose& reference_pose) {
  EstimateResult result;
  result.pose = init;
  result.trace.stop = StopReason::epoch_limit;

  const std::vector<Pixel> all_pixels = pixel_grid(intr);
  std::mt19937_64 rng(opt.seed);
  std::vector<Pixel> subset;
  const double trans_step =
      opt.translation_step > 0.0 ? opt.translation_step : grid.voxel_edge();

  for (int epoch = 1; epoch <= opt.max_epochs; ++epoch) {
    const auto tick = std::chrono::steady_clock::now();
    const StepBlock block = block_for_epoch(epoch, opt.alternation);
    const double decay_pow =
        std::pow(1.0 - opt.lr_decay, (epoch - 1) / std::max(1, opt.decay_interval));
    const double lr = (block == StepBlock::rotation ? opt.lr_rotation
                                                    : opt.lr_translation) *
                      decay_pow;
    const double probe_scale = opt.decay_probe_steps ? decay_pow : 1.0;

    if (epoch == 1 || opt.resample_each_epoch) {
      subset = draw_subset(all_pixels, opt.subsample_fraction, rng);
    }
    const PixelBatch batch = batch_from_image(reference, subset);
    const RenderedPixels rendered =
        render_pixels(grid, result.pose, intr, subset, render);
    const Residual res = photometric_error(rendered, batch);

    TraceRow row;
    row.epoch = epoch;
    row.block = block;
    row.photo_err = res.sum_sq / static_cast<double>(subset.size());

    if (res.sum_sq <= opt.epsilon_per_pixel * static_cast<double>(subset.size())) {
      row.pose = result.pose;
      row.rotation_err_deg =
          rotation_error_deg(result.pose.rotation, reference_pose.rotation);
      row.translation_err =
          translation_error(result.pose.translation, reference_pose.translation);
      row.ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - tick)
                   .count();
      result.trace.rows.push_back(row);
      result.trace.stop = StopReason::converged;
      break;
    }

    const double probe = probe_scale * (block == StepBlock::rotation
                                            ? opt.rotation_step
                                            : trans_step);
    const DescentBlock j =
        central_diff_block(grid, result.pose, intr, subset, block, probe, render);
    try {
      result.pose = sgd_step(result.pose, j, res.delta, lr, block);
    } catch (const NonFiniteUpdate&) {
      row.pose = result.pose;
      result.trace.stop = StopReason::nonfinite;
      result.trace.rows.push_back(row);
      break;
    }

    row.pose = result.pose;
    row.rotation_err_deg =
        rotation_error_deg(result.pose.rotation, reference_pose.rotation);
    row.translation_err =
        translation_error(result.pose.translation, reference_pose.translation);
    row.ms = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - tick)
                 .count();
    result.trace.rows.push_back(row);
  }
  return result;
}

void write_trace_csv(const std::filesystem::path& path,
                     const OptimizerTrace& trace) {
  std::ofstream f(path);
  if (!f) throw IoError("write_trace_csv: cannot open " + path.string());
  f << "epoch,step_kind,photo_err,re_deg,te_units,ms\n";
  for (const TraceRow& r : trace.rows) {
    f << r.epoch << ','
      << (r.block == StepBlock::rotation ? "rotation" : "translation") << ','
      << r.photo_err << ',' << r.rotation_err_deg << ',' << r.translation_err
      << ',' << r.ms << '\n';
  }
  if (!f) throw IoError("write_trace_csv: write failed for " + path.string());
}

}  // namespace voxpose
