#pragma once

#include <vector>

#include <voxpose/lie.hpp>
#include <voxpose/types.hpp>

namespace voxpose {

// Pinhole camera with square pixels and the principal point at the image
// center. focal is in pixels.
struct Intrinsics {
  int width = 0;
  int height = 0;
  double focal = 0.0;
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::Zero();  // unit length
  double t_near = 0.0;
  double t_far = 0.0;
};

// Ray through pixel (u, v), measured in pixels from the top-left corner
// (u right, v down; the center of the top-left pixel is (0.5, 0.5)).
// `pose` maps camera coordinates to world coordinates; the camera looks
// along its local -z axis with +y up in camera space, so
//
//   direction = normalize(R * [(u - w/2) / f, -(v - h/2) / f, -1])
//   origin    = t
//
// The returned t range is a permissive default; the renderer clips rays to
// the grid itself. Throws BadIntrinsics if focal or the image size is not
// positive, OutOfBoundsPixel if (u, v) falls outside [0, w) x [0, h), and
// DegenerateRay if the pose rotation is so broken the direction cannot be
// normalized.
Ray ray_for_pixel(const Pose& pose, const Intrinsics& intr, double u, double v,
                  double t_near = 0.0, double t_far = 1e9);

// All pixel centers in row-major order: (0.5, 0.5), (1.5, 0.5), ...
std::vector<Pixel> pixel_grid(const Intrinsics& intr);

}  // namespace voxpose
