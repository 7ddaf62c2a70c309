#pragma once

#include <voxpose/types.hpp>

namespace voxpose {

// Geodesic angle between two rotations in degrees: |log(a b^T)| * 180 / pi.
// Throws NotARotation when either input is not a rotation matrix.
double rotation_error_deg(const Mat3& a, const Mat3& b);

// Euclidean distance between camera centers.
double translation_error(const Vec3& a, const Vec3& b);

}  // namespace voxpose
