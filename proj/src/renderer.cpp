#include <voxpose/renderer.hpp>

#include <cmath>
#include <limits>

#include <voxpose/errors.hpp>

namespace voxpose {

namespace {

struct Segment {
  bool hit = false;
  double t0 = 0.0;
  double t1 = 0.0;
};

// Slab test against [-extent, extent]^3 intersected with [t_near, t_far].
Segment clip_to_grid(const VoxelGrid& grid, const Ray& ray) {
  const double e = grid.extent();
  double lo = ray.t_near;
  double hi = ray.t_far;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (std::abs(d) < 1e-15) {
      if (o < -e || o > e) return {};
      continue;
    }
    double ta = (-e - o) / d;
    double tb = (e - o) / d;
    if (ta > tb) std::swap(ta, tb);
    lo = std::max(lo, ta);
    hi = std::min(hi, tb);
  }
  if (!(hi > lo)) return {};
  return {true, lo, hi};
}

// Index of the first sample at or past the exit of the macro block holding
// `cell`, in grid coordinates g(t) = g0 + t * gd.
int skip_empty_block(const TrilinearCell& cell, const Vec3& g0, const Vec3& gd,
                     double t0, double delta, int k) {
  constexpr int m = VoxelGrid::kMacroSize;
  double t_exit = std::numeric_limits<double>::infinity();
  const int base[3] = {cell.i / m * m, cell.j / m * m, cell.k / m * m};
  for (int a = 0; a < 3; ++a) {
    const double d = gd[a];
    if (d == 0.0) continue;
    const double bound = d > 0.0 ? base[a] + m : base[a];
    t_exit = std::min(t_exit, (bound - g0[a]) / d);
  }
  const double k_exit = (t_exit - t0) / delta - 0.5;
  int next = k + 1;
  if (k_exit > next) next = static_cast<int>(std::ceil(k_exit));
  return next;
}

}  // namespace

RayTrace render_ray_traced(const VoxelGrid& grid, const Ray& ray,
                           const RenderConfig& cfg) {
  const double d2 = ray.direction.squaredNorm();
  if (!(d2 > 0.99 && d2 < 1.01) || !std::isfinite(d2)) {
    throw DegenerateRay("render_ray: direction must be unit length");
  }

  RayTrace out;
  const Segment seg = clip_to_grid(grid, ray);
  if (!seg.hit) {
    out.color = cfg.background;
    return out;
  }

  const double step =
      cfg.step_size > 0.0 ? cfg.step_size : 0.5 * grid.voxel_edge();
  const double length = seg.t1 - seg.t0;
  const int n = std::max(1, static_cast<int>(std::ceil(length / step)));
  const double delta = length / n;

  double y[9];
  sh_basis(ray.direction, y);

  const double inv_edge = 1.0 / grid.voxel_edge();
  const Vec3 g0 = (ray.origin.array() + grid.extent()).matrix() * inv_edge;
  const Vec3 gd = ray.direction * inv_edge;

  const bool use_occ = grid.occupancy_valid();
  const float* sh = grid.sh_data();
  const std::size_t nn = grid.resolution();
  const std::size_t sy = nn * 27, sz = nn * nn * 27;

  double T = 1.0;
  double r = 0.0, g = 0.0, b = 0.0;
  double wsum = 0.0;
  int evals = 0;

  int k = 0;
  while (k < n) {
    const double t = seg.t0 + (k + 0.5) * delta;
    const Vec3 gp = g0 + t * gd;
    const TrilinearCell cell = locate_cell(grid, gp);

    if (use_occ) {
      constexpr int ms = VoxelGrid::kMacroSize;
      if (!grid.macro_occupied(cell.i / ms, cell.j / ms, cell.k / ms)) {
        k = skip_empty_block(cell, g0, gd, seg.t0, delta, k);
        continue;
      }
    }

    const double sigma = sample_density(grid, cell);
    ++evals;
    if (sigma > 0.0 && sigma >= cfg.sigma_threshold) {
      const double att = std::exp(-sigma * delta);
      const double w = T * (1.0 - att);

      const std::size_t base = (cell.i + nn * (cell.j + nn * cell.k)) * 27;
      const float* p000 = sh + base;
      const float* p010 = p000 + sy;
      const float* p001 = p000 + sz;
      const float* p011 = p001 + sy;
      const double wx1 = cell.fx, wx0 = 1.0 - wx1;
      const double wy1 = cell.fy, wy0 = 1.0 - wy1;
      const double wz1 = cell.fz, wz0 = 1.0 - wz1;
      const double cw[8] = {wx0 * wy0 * wz0, wx1 * wy0 * wz0, wx0 * wy1 * wz0,
                            wx1 * wy1 * wz0, wx0 * wy0 * wz1, wx1 * wy0 * wz1,
                            wx0 * wy1 * wz1, wx1 * wy1 * wz1};
      const float* corners[8] = {p000, p000 + 27, p010, p010 + 27,
                                 p001, p001 + 27, p011, p011 + 27};
      double cr = 0.0, cg = 0.0, cb = 0.0;
      for (int c = 0; c < 8; ++c) {
        const float* q = corners[c];
        double dr = 0.0, dg = 0.0, db = 0.0;
        for (int i = 0; i < 9; ++i) {
          dr += q[i] * y[i];
          dg += q[9 + i] * y[i];
          db += q[18 + i] * y[i];
        }
        cr += cw[c] * dr;
        cg += cw[c] * dg;
        cb += cw[c] * db;
      }
      cr = std::min(1.0, std::max(0.0, cr));
      cg = std::min(1.0, std::max(0.0, cg));
      cb = std::min(1.0, std::max(0.0, cb));

      r += w * cr;
      g += w * cg;
      b += w * cb;
      wsum += w;
      T *= att;
      if (T < kMinTransmittance) break;
    }
    ++k;
  }

  r += T * cfg.background[0];
  g += T * cfg.background[1];
  b += T * cfg.background[2];
  out.color = Color(static_cast<float>(r), static_cast<float>(g),
                    static_cast<float>(b));
  out.weight_sum = wsum;
  out.final_transmittance = T;
  out.samples = evals;
  return out;
}

Color render_ray(const VoxelGrid& grid, const Ray& ray, const RenderConfig& cfg) {
  return render_ray_traced(grid, ray, cfg).color;
}

RenderedPixels render_pixels(const VoxelGrid& grid, const Pose& pose,
                             const Intrinsics& intr,
                             const std::vector<Pixel>& pixels,
                             const RenderConfig& cfg) {
  RenderedPixels out(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const Ray ray = ray_for_pixel(pose, intr, pixels[i].x(), pixels[i].y());
    out[i] = render_ray_traced(grid, ray, cfg).color;
  }
  return out;
}

Image render_image(const VoxelGrid& grid, const Pose& pose,
                   const Intrinsics& intr, const RenderConfig& cfg) {
  Image img(intr.width, intr.height);
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const Ray ray = ray_for_pixel(pose, intr, u + 0.5, v + 0.5);
      img.set(u, v, render_ray_traced(grid, ray, cfg).color);
    }
  }
  return img;
}

PixelBatch batch_from_image(const Image& img, const std::vector<Pixel>& pixels) {
  PixelBatch batch;
  batch.pixels = pixels;
  batch.colors.reserve(pixels.size());
  for (const Pixel& p : pixels) {
    int x = static_cast<int>(p.x());
    int y = static_cast<int>(p.y());
    x = std::min(img.width - 1, std::max(0, x));
    y = std::min(img.height - 1, std::max(0, y));
    batch.colors.push_back(img.at(x, y));
  }
  return batch;
}

Residual photometric_error(const RenderedPixels& rendered,
                           const PixelBatch& batch) {
  if (rendered.size() != batch.colors.size()) {
    throw LengthMismatch("photometric_error: rendered and reference counts differ");
  }
  Residual res;
  res.delta.resize(3 * static_cast<Eigen::Index>(rendered.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const float d = rendered[i][c] - batch.colors[i][c];
      res.delta[3 * i + c] = d;
      acc += static_cast<double>(d) * d;
    }
  }
  res.sum_sq = acc;
  return res;
}

}  // namespace voxpose
