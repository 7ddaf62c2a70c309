#include <voxpose/lie.hpp>

#include <Eigen/Dense>
#include <cmath>

#include <voxpose/errors.hpp>

namespace voxpose {

namespace {
constexpr double kTinyAngle = 1e-6;
}

Mat3 hat(const Vec3& w) {
  Mat3 m;
  // clang-format off
  m <<    0.0, -w.z(),  w.y(),
        w.z(),    0.0, -w.x(),
       -w.y(),  w.x(),    0.0;
  // clang-format on
  return m;
}

Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
    throw NonSkewInput("vee: matrix is not skew-symmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Mat3 exp_so3(const Vec3& omega) {
  const double theta = omega.norm();
  const Mat3 k = hat(omega);
  double a, b;
  if (theta < kTinyAngle) {
    // sin(t)/t ~ 1 - t^2/6, (1-cos(t))/t^2 ~ 1/2 - t^2/24
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * k + b * (k * k);
}

Vec3 log_so3(const Mat3& r) {
  if (!is_rotation(r)) {
    throw NotARotation("log_so3: input is not a rotation matrix");
  }
  // The antisymmetric part measures sin(theta) and the trace cos(theta);
  // atan2 of the pair is well conditioned over the whole angle range,
  // unlike acos of the trace alone.
  const Vec3 axis_raw(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double sin_theta = 0.5 * axis_raw.norm();
  const double cos_theta = 0.5 * (r.trace() - 1.0);
  const double theta = std::atan2(sin_theta, cos_theta);

  if (theta < kTinyAngle) {
    // log R ~ (R - R^T)/2 to first order.
    return 0.5 * axis_raw;
  }
  if (theta < M_PI - 1e-3) {
    return (theta / (2.0 * sin_theta)) * axis_raw;
  }
  // Close to pi the antisymmetric part no longer determines the axis;
  // recover it from the symmetric part: (R + R^T)/2 = I + (1-cos t)(aa^T - I).
  const Mat3 b = 0.5 * (r + r.transpose());
  const Mat3 outer = (b - cos_theta * Mat3::Identity()) / (1.0 - cos_theta);
  int i = 0;
  if (outer(1, 1) > outer(i, i)) i = 1;
  if (outer(2, 2) > outer(i, i)) i = 2;
  Vec3 axis = outer.col(i) / std::sqrt(outer(i, i));
  // axis sign is free at exactly pi; below pi pick the one matching R - R^T.
  if (axis.dot(axis_raw) < 0.0) axis = -axis;
  return theta * axis;
}

Mat3 project_to_so3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

bool is_rotation(const Mat3& r, double tol) {
  if ((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  return r.determinant() > 0.0;
}

Pose compose(const Pose& a, const Pose& b) {
  return Pose{a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose inverse(const Pose& p) {
  Mat3 rt = p.rotation.transpose();
  return Pose{rt, -(rt * p.translation)};
}

Vec3 apply(const Pose& p, const Vec3& x) { return p.rotation * x + p.translation; }

}  // namespace voxpose
