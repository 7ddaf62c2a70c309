#include <voxpose/voxel_grid.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>

#include <voxpose/errors.hpp>

namespace voxpose {

VoxelGrid::VoxelGrid(int resolution, double extent)
    : n_(resolution), extent_(extent) {
  if (resolution < 2) throw BadSpec("VoxelGrid: resolution must be at least 2");
  if (!(extent > 0.0)) throw BadSpec("VoxelGrid: extent must be positive");
  density_.assign(corner_count(), 0.0f);
  sh_.assign(corner_count() * 27, 0.0f);
}

VoxelGrid::VoxelGrid(int resolution, double extent, std::vector<float> density,
                     std::vector<float> sh)
    : VoxelGrid(resolution, extent) {
  if (density.size() != corner_count() || sh.size() != corner_count() * 27) {
    throw CorruptLength("VoxelGrid: array sizes do not match resolution^3");
  }
  density_ = std::move(density);
  sh_ = std::move(sh);
  dirty_ = true;
}

void VoxelGrid::finalize() {
  const int cells = n_ - 1;
  macro_n_ = (cells + kMacroSize - 1) / kMacroSize;
  occupancy_.assign(
      static_cast<std::size_t>(macro_n_) * macro_n_ * macro_n_, 0);
  for (int mz = 0; mz < macro_n_; ++mz) {
    for (int my = 0; my < macro_n_; ++my) {
      for (int mx = 0; mx < macro_n_; ++mx) {
        const int x0 = mx * kMacroSize, y0 = my * kMacroSize, z0 = mz * kMacroSize;
        const int x1 = std::min(n_ - 1, x0 + kMacroSize);
        const int y1 = std::min(n_ - 1, y0 + kMacroSize);
        const int z1 = std::min(n_ - 1, z0 + kMacroSize);
        bool occ = false;
        for (int z = z0; z <= z1 && !occ; ++z) {
          for (int y = y0; y <= y1 && !occ; ++y) {
            const float* row = density_.data() + corner_index(x0, y, z);
            for (int x = x0; x <= x1; ++x) {
              if (row[x - x0] > 0.0f) {
                occ = true;
                break;
              }
            }
          }
        }
        occupancy_[static_cast<std::size_t>(mx) +
                   static_cast<std::size_t>(macro_n_) *
                       (static_cast<std::size_t>(my) +
                        static_cast<std::size_t>(macro_n_) * mz)] = occ ? 1 : 0;
      }
    }
  }
  dirty_ = false;
}

void sample_sh(const VoxelGrid& g, const TrilinearCell& c, double out[27]) {
  const float* s = g.sh_data();
  const std::size_t n = g.resolution();
  const std::size_t base = (c.i + n * (c.j + n * c.k)) * 27;
  const std::size_t sy = n * 27, sz = n * n * 27;
  const double w000 = (1 - c.fx) * (1 - c.fy) * (1 - c.fz);
  const double w100 = c.fx * (1 - c.fy) * (1 - c.fz);
  const double w010 = (1 - c.fx) * c.fy * (1 - c.fz);
  const double w110 = c.fx * c.fy * (1 - c.fz);
  const double w001 = (1 - c.fx) * (1 - c.fy) * c.fz;
  const double w101 = c.fx * (1 - c.fy) * c.fz;
  const double w011 = (1 - c.fx) * c.fy * c.fz;
  const double w111 = c.fx * c.fy * c.fz;
  const float* p000 = s + base;
  const float* p100 = p000 + 27;
  const float* p010 = s + base + sy;
  const float* p110 = p010 + 27;
  const float* p001 = s + base + sz;
  const float* p101 = p001 + 27;
  const float* p011 = s + base + sy + sz;
  const float* p111 = p011 + 27;
  for (int k = 0; k < 27; ++k) {
    out[k] = w000 * p000[k] + w100 * p100[k] + w010 * p010[k] + w110 * p110[k] +
             w001 * p001[k] + w101 * p101[k] + w011 * p011[k] + w111 * p111[k];
  }
}

SamplePoint trilinear_sample(const VoxelGrid& g, const Vec3& p) {
  const double e = g.extent();
  if (p.x() < -e || p.x() > e || p.y() < -e || p.y() > e || p.z() < -e ||
      p.z() > e) {
    throw OutOfGrid("trilinear_sample: point outside grid");
  }
  const TrilinearCell c = locate_cell(g, world_to_grid(g, p));
  SamplePoint out;
  out.sigma = sample_density(g, c);
  sample_sh(g, c, out.sh.data());
  return out;
}

Color sh_eval(const std::array<double, 27>& sh, const Vec3& d) {
  double y[9];
  sh_basis(d, y);
  Color out;
  for (int c = 0; c < 3; ++c) {
    double v = 0.0;
    for (int k = 0; k < 9; ++k) v += sh[9 * c + k] * y[k];
    out[c] = static_cast<float>(std::min(1.0, std::max(0.0, v)));
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'V', 'O', 'X', 'G'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ofstream& f, const void* p, std::size_t bytes) {
  f.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
}

void read_bytes(std::ifstream& f, void* p, std::size_t bytes) {
  f.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(f.gcount()) != bytes) {
    throw CorruptLength("load_grid: file ends early");
  }
}

}  // namespace

void save_grid(const VoxelGrid& g, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("save_grid: cannot open " + path.string());
  write_bytes(f, kMagic, 4);
  const std::uint32_t version = kVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(g.resolution());
  const double extent = g.extent();
  write_bytes(f, &version, 4);
  write_bytes(f, &n, 4);
  write_bytes(f, &extent, 8);
  write_bytes(f, g.density_data(), g.density().size() * sizeof(float));
  write_bytes(f, g.sh_data(), g.sh().size() * sizeof(float));
  if (!f) throw IoError("save_grid: write failed for " + path.string());
}

VoxelGrid load_grid(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_grid: cannot open " + path.string());
  char magic[4];
  read_bytes(f, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw BadMagic("load_grid: not a voxel grid file");
  }
  std::uint32_t version = 0, n = 0;
  double extent = 0.0;
  read_bytes(f, &version, 4);
  if (version != kVersion) {
    throw UnsupportedVersion("load_grid: unsupported version " +
                             std::to_string(version));
  }
  read_bytes(f, &n, 4);
  read_bytes(f, &extent, 8);
  if (n < 2 || !(extent > 0.0)) throw CorruptLength("load_grid: bad header");
  const std::size_t corners = static_cast<std::size_t>(n) * n * n;
  std::vector<float> density(corners);
  std::vector<float> sh(corners * 27);
  read_bytes(f, density.data(), density.size() * sizeof(float));
  read_bytes(f, sh.data(), sh.size() * sizeof(float));
  f.peek();
  if (!f.eof()) throw CorruptLength("load_grid: trailing bytes");
  VoxelGrid g(static_cast<int>(n), extent, std::move(density), std::move(sh));
  g.finalize();
  return g;
}

VoxelGrid resample_grid(const VoxelGrid& g, int new_resolution) {
  if (new_resolution < 2) throw BadSpec("resample_grid: resolution must be >= 2");
  VoxelGrid out(new_resolution, g.extent());
  auto& density = out.mutable_density();
  auto& sh = out.mutable_sh();
  double coeffs[27];
  for (int z = 0; z < new_resolution; ++z) {
    for (int y = 0; y < new_resolution; ++y) {
      for (int x = 0; x < new_resolution; ++x) {
        const Vec3 p = out.lattice_position(x, y, z);
        const TrilinearCell c = locate_cell(g, world_to_grid(g, p));
        const std::size_t idx = out.corner_index(x, y, z);
        density[idx] = static_cast<float>(sample_density(g, c));
        sample_sh(g, c, coeffs);
        for (int k = 0; k < 27; ++k) {
          sh[idx * 27 + k] = static_cast<float>(coeffs[k]);
        }
      }
    }
  }
  out.finalize();
  return out;
}

}  // namespace voxpose
