#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <voxpose/renderer.hpp>
#include <voxpose/voxel_grid.hpp>

namespace voxpose {

enum class SceneKind {
  sphere,          // single solid sphere, one color
  box,             // axis-aligned box, one color
  checker_sphere,  // sphere carrying a 3-d checker texture
  two_objects,     // sphere and box side by side, mild view dependence
  uniform_blob,    // smooth radial density, constant color everywhere
};

struct SceneSpec {
  SceneKind kind = SceneKind::checker_sphere;
  int resolution = 64;
  double extent = 1.0;
  double density = 40.0;  // peak density inside the shape
  double radius = 0.62;   // world units
  // Checker cells per world unit along each axis.
  double checker_frequency = 3.0;
  Color color_a = Color(0.85f, 0.18f, 0.12f);
  Color color_b = Color(0.10f, 0.25f, 0.85f);
};

// Fills a grid procedurally. Shape boundaries fall off smoothly over roughly
// two voxel edges so interpolated density stays well behaved under
// resampling. Throws UnsupportedKind for an unknown kind and BadSpec for a
// non-positive density or radius.
VoxelGrid build_scene(const SceneSpec& spec);

// Camera-to-world pose at `eye` looking toward `target` (camera -z axis),
// with +y roughly along `up`.
Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3(0, 1, 0));

// Camera placed `radius` from the origin and looking at it, with uniform
// azimuth and elevation within +-60 degrees (keeps the up vector stable).
Pose random_view_pose(double radius, std::mt19937_64& rng);

struct ReferenceView {
  Pose pose;
  Image image;
};

// Renders `count` views from poses scattered on a sphere of the given radius
// around the origin, all looking at the origin. Deterministic in `seed`.
std::vector<ReferenceView> reference_views(const VoxelGrid& grid, int count,
                                           double radius, std::uint64_t seed,
                                           const Intrinsics& intr,
                                           const RenderConfig& cfg);

}  // namespace voxpose
