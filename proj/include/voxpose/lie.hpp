#pragma once

#include <voxpose/types.hpp>

namespace voxpose {

// Skew-symmetric matrix of a rotation vector, hat(w) * v == w.cross(v):
//
//   [   0  -w.z   w.y ]
//   [  w.z    0  -w.x ]
//   [ -w.y   w.x    0 ]
Mat3 hat(const Vec3& omega);

// Inverse of hat. Throws NonSkewInput if the matrix is not antisymmetric
// within 1e-8.
Vec3 vee(const Mat3& m);

// Rodrigues' formula. Angles below 1e-6 rad use the second-order series to
// avoid the 0/0 in sin(t)/t.
Mat3 exp_so3(const Vec3& omega);

// Principal log of a rotation matrix; the result has norm in [0, pi].
// Handles the three regimes (near zero, generic, near pi) separately.
// Throws NotARotation if r is not orthonormal with determinant +1.
Vec3 log_so3(const Mat3& r);

// Nearest rotation matrix in the Frobenius sense (polar factor via SVD).
// Used to strip accumulated round-off after many incremental updates.
Mat3 project_to_so3(const Mat3& m);

bool is_rotation(const Mat3& r, double tol = 1e-6);

// Rigid transform, applied to points as x -> rotation * x + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
};

// compose(a, b) applies b first, then a.
Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);

Vec3 apply(const Pose& p, const Vec3& x);

}  // namespace voxpose
