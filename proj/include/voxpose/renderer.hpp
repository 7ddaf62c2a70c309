#pragma once

#include <vector>

#include <voxpose/camera.hpp>
#include <voxpose/types.hpp>
#include <voxpose/voxel_grid.hpp>

namespace voxpose {

struct RenderConfig {
  // Nominal spacing between samples along a ray; a value <= 0 selects half a
  // voxel edge. The marcher divides each ray's in-grid segment into equal
  // steps no longer than this, so the actual spacing tiles the segment
  // exactly.
  double step_size = 0.0;
  Color background = Color(1.0f, 1.0f, 1.0f);
  // Samples with density at or below this are skipped.
  double sigma_threshold = 0.0;
};

// Marching stops once transmittance drops below this.
inline constexpr double kMinTransmittance = 1e-4;

struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;  // row-major, 3 floats per pixel

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(3ull * w * h, 0.0f) {}

  Color at(int x, int y) const {
    const std::size_t i = 3ull * (static_cast<std::size_t>(y) * width + x);
    return Color(rgb[i], rgb[i + 1], rgb[i + 2]);
  }
  void set(int x, int y, const Color& c) {
    const std::size_t i = 3ull * (static_cast<std::size_t>(y) * width + x);
    rgb[i] = c[0];
    rgb[i + 1] = c[1];
    rgb[i + 2] = c[2];
  }
};

// Pixel coordinates paired with their reference colors.
struct PixelBatch {
  std::vector<Pixel> pixels;
  std::vector<Color> colors;
};

using RenderedPixels = std::vector<Color>;

// Emission-absorption compositing along one ray. Samples sit at the centers
// of n = ceil(L / step) equal sub-intervals of the ray's in-grid segment of
// length L. At each kept sample, with alpha = 1 - exp(-sigma * delta),
// the color contribution is T * alpha * c(direction) and T is multiplied by
// exp(-sigma * delta). Rays that miss the grid return the background, and
// the remaining transmittance is composited over the background at the end.
// Throws DegenerateRay when the direction is not unit length.
Color render_ray(const VoxelGrid& grid, const Ray& ray, const RenderConfig& cfg);

// render_ray plus the diagnostics needed by conservation checks.
struct RayTrace {
  Color color = Color::Zero();
  double weight_sum = 0.0;          // sum of T * alpha over kept samples
  double final_transmittance = 1.0;
  int samples = 0;                  // density evaluations performed
};
RayTrace render_ray_traced(const VoxelGrid& grid, const Ray& ray,
                           const RenderConfig& cfg);

// One color per input pixel, in order.
RenderedPixels render_pixels(const VoxelGrid& grid, const Pose& pose,
                             const Intrinsics& intr,
                             const std::vector<Pixel>& pixels,
                             const RenderConfig& cfg);

Image render_image(const VoxelGrid& grid, const Pose& pose,
                   const Intrinsics& intr, const RenderConfig& cfg);

// Reference colors for the given pixel centers, read from an image.
PixelBatch batch_from_image(const Image& img, const std::vector<Pixel>& pixels);

// Per-channel residual (rendered - reference) and its squared norm.
// Requires one rendered color per batch entry; throws LengthMismatch.
struct Residual {
  Eigen::VectorXf delta;  // 3 entries per pixel: r, g, b
  double sum_sq = 0.0;
};
Residual photometric_error(const RenderedPixels& rendered, const PixelBatch& batch);

}  // namespace voxpose
