#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <voxpose/types.hpp>

namespace voxpose {

// Dense cubic lattice over [-extent, extent]^3. Lattice point (ix, iy, iz)
// sits at -extent + 2 * extent * i / (n - 1) per axis. Each point stores a
// density (>= 0) and 27 spherical-harmonic color coefficients laid out
// channel-major: R0..R8, G0..G8, B0..B8 (degree-2 real SH).
//
// Storage is x-fastest: corner_index = ix + n * (iy + n * iz).
class VoxelGrid {
 public:
  explicit VoxelGrid(int resolution, double extent = 1.0);
  VoxelGrid(int resolution, double extent, std::vector<float> density,
            std::vector<float> sh);

  int resolution() const { return n_; }
  double extent() const { return extent_; }
  // Spacing between neighboring lattice points.
  double voxel_edge() const { return 2.0 * extent_ / (n_ - 1); }
  std::size_t corner_count() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  std::size_t corner_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(n_) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(n_) * iz);
  }

  Vec3 lattice_position(int ix, int iy, int iz) const {
    const double s = voxel_edge();
    return Vec3(-extent_ + s * ix, -extent_ + s * iy, -extent_ + s * iz);
  }

  float density_at(int ix, int iy, int iz) const {
    return density_[corner_index(ix, iy, iz)];
  }
  void set_density(int ix, int iy, int iz, float value) {
    density_[corner_index(ix, iy, iz)] = value;
    dirty_ = true;
  }
  // Coefficient k (0..8) of channel c (0=R, 1=G, 2=B).
  float sh_at(int ix, int iy, int iz, int c, int k) const {
    return sh_[corner_index(ix, iy, iz) * 27 + 9 * c + k];
  }
  void set_sh(int ix, int iy, int iz, int c, int k, float value) {
    sh_[corner_index(ix, iy, iz) * 27 + 9 * c + k] = value;
  }

  const std::vector<float>& density() const { return density_; }
  const std::vector<float>& sh() const { return sh_; }
  const float* density_data() const { return density_.data(); }
  const float* sh_data() const { return sh_.data(); }

  // Direct write access; marks the occupancy table stale.
  std::vector<float>& mutable_density() {
    dirty_ = true;
    return density_;
  }
  std::vector<float>& mutable_sh() { return sh_; }

  // Coarse occupancy over blocks of kMacroSize^3 cells, used by the
  // renderer to step over empty space. A macro block is occupied when any
  // lattice point on or inside its boundary has positive density, so
  // trilinear interpolation inside an unoccupied block is exactly zero.
  static constexpr int kMacroSize = 8;
  void finalize();
  bool occupancy_valid() const { return !dirty_; }
  int macro_resolution() const { return macro_n_; }
  bool macro_occupied(int mx, int my, int mz) const {
    return occupancy_[static_cast<std::size_t>(mx) +
                      static_cast<std::size_t>(macro_n_) *
                          (static_cast<std::size_t>(my) +
                           static_cast<std::size_t>(macro_n_) * mz)] != 0;
  }

 private:
  int n_;
  double extent_;
  std::vector<float> density_;
  std::vector<float> sh_;
  std::vector<std::uint8_t> occupancy_;
  int macro_n_ = 0;
  bool dirty_ = true;
};

// Interpolation support point: the cell base corner (each in 0..n-2) and the
// fractional offsets within the cell.
struct TrilinearCell {
  int i, j, k;
  double fx, fy, fz;
};

// Continuous lattice coordinate of a world point: (p + extent) / voxel_edge,
// so lattice point i sits at coordinate i exactly.
inline Vec3 world_to_grid(const VoxelGrid& g, const Vec3& p) {
  return (p.array() + g.extent()).matrix() / g.voxel_edge();
}

// Cell lookup from a continuous lattice coordinate. Coordinates on the far
// boundary clamp into the last cell so the whole closed cube is sampleable.
inline TrilinearCell locate_cell(const VoxelGrid& g, const Vec3& grid_pos) {
  const int top = g.resolution() - 2;
  TrilinearCell c;
  c.i = std::min(top, std::max(0, static_cast<int>(grid_pos.x())));
  c.j = std::min(top, std::max(0, static_cast<int>(grid_pos.y())));
  c.k = std::min(top, std::max(0, static_cast<int>(grid_pos.z())));
  c.fx = grid_pos.x() - c.i;
  c.fy = grid_pos.y() - c.j;
  c.fz = grid_pos.z() - c.k;
  return c;
}

inline double sample_density(const VoxelGrid& g, const TrilinearCell& c) {
  const float* d = g.density_data();
  const std::size_t n = g.resolution();
  const std::size_t base = c.i + n * (c.j + n * c.k);
  const std::size_t sy = n, sz = n * n;
  const double c00 = d[base] + c.fx * (d[base + 1] - d[base]);
  const double c10 = d[base + sy] + c.fx * (d[base + sy + 1] - d[base + sy]);
  const double c01 = d[base + sz] + c.fx * (d[base + sz + 1] - d[base + sz]);
  const double c11 =
      d[base + sy + sz] + c.fx * (d[base + sy + sz + 1] - d[base + sy + sz]);
  const double c0 = c00 + c.fy * (c10 - c00);
  const double c1 = c01 + c.fy * (c11 - c01);
  return c0 + c.fz * (c1 - c0);
}

void sample_sh(const VoxelGrid& g, const TrilinearCell& c, double out[27]);

// Density and SH coefficients interpolated at a world point.
struct SamplePoint {
  double sigma;
  std::array<double, 27> sh;
};

// Throws OutOfGrid when p lies outside the closed cube [-extent, extent]^3.
SamplePoint trilinear_sample(const VoxelGrid& g, const Vec3& p);

// Real spherical harmonics up to degree 2, PlenOctrees ordering and signs.
inline void sh_basis(const Vec3& d, double out[9]) {
  const double x = d.x(), y = d.y(), z = d.z();
  out[0] = 0.28209479177387814;
  out[1] = -0.4886025119029199 * y;
  out[2] = 0.4886025119029199 * z;
  out[3] = -0.4886025119029199 * x;
  out[4] = 1.0925484305920792 * x * y;
  out[5] = -1.0925484305920792 * y * z;
  out[6] = 0.31539156525252005 * (2.0 * z * z - x * x - y * y);
  out[7] = -1.0925484305920792 * x * z;
  out[8] = 0.5462742152960396 * (x * x - y * y);
}

// View-dependent color from 27 SH coefficients (channel-major) along unit
// direction d, clamped to [0,1] per channel.
Color sh_eval(const std::array<double, 27>& sh, const Vec3& d);

// Binary grid file (little-endian): magic "VOXG", u32 version (= 1),
// u32 resolution, f64 extent, then the density and SH arrays as f32.
void save_grid(const VoxelGrid& g, const std::filesystem::path& path);
VoxelGrid load_grid(const std::filesystem::path& path);

// New grid of the same extent whose lattice values are trilinear samples of
// the source. Throws BadSpec if new_resolution < 2.
VoxelGrid resample_grid(const VoxelGrid& g, int new_resolution);

}  // namespace voxpose
