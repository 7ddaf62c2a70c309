#pragma once

#include <Eigen/Core>

namespace voxpose {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Linear RGB in [0,1].
using Color = Eigen::Vector3f;

using Pixel = Eigen::Vector2f;

}  // namespace voxpose
