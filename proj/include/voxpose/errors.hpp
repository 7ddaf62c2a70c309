#pragma once

#include <stdexcept>
#include <string>

namespace voxpose {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lie
struct NonSkewInput : Error {
  using Error::Error;
};
struct NotARotation : Error {
  using Error::Error;
};

// camera
struct BadIntrinsics : Error {
  using Error::Error;
};
struct OutOfBoundsPixel : Error {
  using Error::Error;
};

// voxel_grid
struct OutOfGrid : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct BadMagic : Error {
  using Error::Error;
};
struct UnsupportedVersion : Error {
  using Error::Error;
};
struct CorruptLength : Error {
  using Error::Error;
};

// renderer
struct DegenerateRay : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};

// scene_builder
struct UnsupportedKind : Error {
  using Error::Error;
};

// pose_optimizer
struct ShapeMismatch : Error {
  using Error::Error;
};
struct NonFiniteUpdate : Error {
  using Error::Error;
};

// cli / config parsing
struct BadSpec : Error {
  using Error::Error;
};
struct BadPose : Error {
  using Error::Error;
};

}  // namespace voxpose
