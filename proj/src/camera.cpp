#include <voxpose/camera.hpp>

#include <cmath>

#include <voxpose/errors.hpp>

namespace voxpose {

Ray ray_for_pixel(const Pose& pose, const Intrinsics& intr, double u, double v,
                  double t_near, double t_far) {
  if (intr.width <= 0 || intr.height <= 0 || intr.focal <= 0.0) {
    throw BadIntrinsics("ray_for_pixel: width, height and focal must be positive");
  }
  if (u < 0.0 || u >= intr.width || v < 0.0 || v >= intr.height) {
    throw OutOfBoundsPixel("ray_for_pixel: pixel outside the image");
  }
  const Vec3 cam_dir((u - 0.5 * intr.width) / intr.focal,
                     -(v - 0.5 * intr.height) / intr.focal, -1.0);
  Vec3 world_dir = pose.rotation * cam_dir;
  const double n = world_dir.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateRay("ray_for_pixel: direction does not normalize");
  }
  return Ray{pose.translation, world_dir / n, t_near, t_far};
}

std::vector<Pixel> pixel_grid(const Intrinsics& intr) {
  std::vector<Pixel> px;
  px.reserve(static_cast<std::size_t>(intr.width) * intr.height);
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      px.emplace_back(static_cast<float>(u) + 0.5f, static_cast<float>(v) + 0.5f);
    }
  }
  return px;
}

}  // namespace voxpose
