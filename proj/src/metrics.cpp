#include <voxpose/metrics.hpp>

#include <voxpose/lie.hpp>

namespace voxpose {

double rotation_error_deg(const Mat3& a, const Mat3& b) {
  return log_so3(a * b.transpose()).norm() * 180.0 / M_PI;
}

double translation_error(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace voxpose
