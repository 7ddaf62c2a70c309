#include <voxpose/scene.hpp>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include <voxpose/errors.hpp>

namespace voxpose {

namespace {

constexpr double kInvY0 = 1.0 / 0.28209479177387814;

double smooth_edge(double signed_distance, double width) {
  // 1 inside, 0 outside, linear ramp of the given width at the boundary.
  return std::min(1.0, std::max(0.0, -signed_distance / width));
}

double sphere_sdf(const Vec3& p, const Vec3& center, double radius) {
  return (p - center).norm() - radius;
}

double box_sdf(const Vec3& p, const Vec3& center, const Vec3& half) {
  const Vec3 q = (p - center).cwiseAbs() - half;
  return q.maxCoeff();
}

bool checker_parity(const Vec3& p, double freq) {
  const long cx = static_cast<long>(std::floor(p.x() * freq));
  const long cy = static_cast<long>(std::floor(p.y() * freq));
  const long cz = static_cast<long>(std::floor(p.z() * freq));
  return ((cx + cy + cz) & 1) != 0;
}

void set_dc_color(VoxelGrid& g, int x, int y, int z, const Color& c) {
  for (int ch = 0; ch < 3; ++ch) {
    g.set_sh(x, y, z, ch, 0, static_cast<float>(c[ch] * kInvY0));
  }
}

}  // namespace

VoxelGrid build_scene(const SceneSpec& spec) {
  if (!(spec.density > 0.0)) throw BadSpec("build_scene: density must be positive");
  if (!(spec.radius > 0.0)) throw BadSpec("build_scene: radius must be positive");
  switch (spec.kind) {
    case SceneKind::sphere:
    case SceneKind::box:
    case SceneKind::checker_sphere:
    case SceneKind::two_objects:
    case SceneKind::uniform_blob:
      break;
    default:
      throw UnsupportedKind("build_scene: unknown scene kind");
  }

  VoxelGrid g(spec.resolution, spec.extent);
  const double edge_width = 2.0 * g.voxel_edge();
  const Vec3 origin = Vec3::Zero();
  const Vec3 box_half(0.75 * spec.radius, 0.55 * spec.radius, 0.65 * spec.radius);

  for (int z = 0; z < spec.resolution; ++z) {
    for (int y = 0; y < spec.resolution; ++y) {
      for (int x = 0; x < spec.resolution; ++x) {
        const Vec3 p = g.lattice_position(x, y, z);
        double sigma = 0.0;
        Color color = spec.color_a;
        bool view_dep = false;

        switch (spec.kind) {
          case SceneKind::sphere: {
            sigma = spec.density * smooth_edge(sphere_sdf(p, origin, spec.radius),
                                               edge_width);
            break;
          }
          case SceneKind::box: {
            sigma = spec.density *
                    smooth_edge(box_sdf(p, origin, box_half), edge_width);
            break;
          }
          case SceneKind::checker_sphere: {
            sigma = spec.density * smooth_edge(sphere_sdf(p, origin, spec.radius),
                                               edge_width);
            color = checker_parity(p, spec.checker_frequency) ? spec.color_b
                                                              : spec.color_a;
            break;
          }
          case SceneKind::two_objects: {
            const Vec3 c1(0.45 * spec.extent, 0.0, 0.0);
            const Vec3 c2(-0.45 * spec.extent, 0.0, 0.0);
            const double s1 = smooth_edge(sphere_sdf(p, c1, 0.6 * spec.radius),
                                          edge_width);
            const double s2 =
                smooth_edge(box_sdf(p, c2, 0.55 * box_half), edge_width);
            sigma = spec.density * std::max(s1, s2);
            color = s1 >= s2 ? spec.color_a : spec.color_b;
            view_dep = s1 >= s2;
            break;
          }
          case SceneKind::uniform_blob: {
            const double r = p.norm() / spec.radius;
            const double fall = std::max(0.0, 1.0 - r * r);
            sigma = spec.density * fall * fall;
            break;
          }
        }

        if (sigma > 0.0) {
          g.set_density(x, y, z, static_cast<float>(sigma));
          set_dc_color(g, x, y, z, color);
          if (view_dep) {
            // Small z-linear term so colors shift slightly with view angle.
            for (int ch = 0; ch < 3; ++ch) {
              g.set_sh(x, y, z, ch, 2, static_cast<float>(0.15 * color[ch]));
            }
          }
        }
      }
    }
  }
  g.finalize();
  return g;
}

Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 f = (target - eye).normalized();
  Vec3 x = f.cross(up);
  if (x.norm() < 1e-9) {
    x = f.cross(Vec3(1, 0, 0));
    if (x.norm() < 1e-9) x = f.cross(Vec3(0, 0, 1));
  }
  x.normalize();
  const Vec3 z = -f;
  const Vec3 y = z.cross(x);
  Pose pose;
  pose.rotation.col(0) = x;
  pose.rotation.col(1) = y;
  pose.rotation.col(2) = z;
  pose.translation = eye;
  return pose;
}

Pose random_view_pose(double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> azim(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> elev(-M_PI / 3.0, M_PI / 3.0);
  const double a = azim(rng);
  const double e = elev(rng);
  const Vec3 eye(radius * std::cos(e) * std::cos(a), radius * std::sin(e),
                 radius * std::cos(e) * std::sin(a));
  return look_at(eye, Vec3::Zero());
}

std::vector<ReferenceView> reference_views(const VoxelGrid& grid, int count,
                                           double radius, std::uint64_t seed,
                                           const Intrinsics& intr,
                                           const RenderConfig& cfg) {
  std::mt19937_64 rng(seed);
  std::vector<ReferenceView> views;
  views.reserve(count);
  for (int i = 0; i < count; ++i) {
    ReferenceView view;
    view.pose = random_view_pose(radius, rng);
    view.image = render_image(grid, view.pose, intr, cfg);
    views.push_back(std::move(view));
  }
  return views;
}

}  // namespace voxpose
