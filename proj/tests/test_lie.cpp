#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <random>

#include <voxpose/errors.hpp>
#include <voxpose/lie.hpp>

using namespace voxpose;

namespace {

Vec3 random_omega(std::mt19937_64& rng, double max_norm) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 dir(n(rng), n(rng), n(rng));
  while (dir.norm() < 1e-12) dir = Vec3(n(rng), n(rng), n(rng));
  dir.normalize();
  std::uniform_real_distribution<double> mag(0.0, max_norm);
  return mag(rng) * dir;
}

Pose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Pose p;
  p.rotation = exp_so3(random_omega(rng, M_PI - 0.1));
  p.translation = Vec3(u(rng), u(rng), u(rng));
  return p;
}

Eigen::Matrix4d homogeneous(const Pose& p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = p.rotation;
  m.topRightCorner<3, 1>() = p.translation;
  return m;
}

}  // namespace

TEST_CASE("hat of zero is the zero matrix") {
  CHECK(hat(Vec3::Zero()).isZero(0.0));
}

TEST_CASE("hat matches the skew layout") {
  const Mat3 m = hat(Vec3(1.0, 2.0, 3.0));
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == -3.0);
  CHECK(m(0, 2) == 2.0);
  CHECK(m(1, 0) == 3.0);
  CHECK(m(1, 1) == 0.0);
  CHECK(m(1, 2) == -1.0);
  CHECK(m(2, 0) == -2.0);
  CHECK(m(2, 1) == 1.0);
  CHECK(m(2, 2) == 0.0);
}

TEST_CASE("hat acts as a cross product") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng));
    const Vec3 v(u(rng), u(rng), u(rng));
    CHECK(((hat(a) * v) - a.cross(v)).norm() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("vee inverts hat exactly") {
  CHECK(vee(Mat3::Zero()) == Vec3::Zero());
  CHECK(vee(hat(Vec3(1.0, 2.0, 3.0))) == Vec3(1.0, 2.0, 3.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 w(u(rng), u(rng), u(rng));
    const Vec3 back = vee(hat(w));
    CHECK(back.x() == w.x());
    CHECK(back.y() == w.y());
    CHECK(back.z() == w.z());
  }
}

TEST_CASE("vee rejects non-skew input") {
  Mat3 m = Mat3::Identity();
  CHECK_THROWS_AS(vee(m), NonSkewInput);
  m = hat(Vec3(1, 2, 3));
  m(0, 1) += 1e-6;
  CHECK_THROWS_AS(vee(m), NonSkewInput);
}

TEST_CASE("exp of zero is the identity") {
  CHECK((exp_so3(Vec3::Zero()) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quarter turn about z rotates x onto y") {
  const Mat3 r = exp_so3(Vec3(0, 0, M_PI / 2));
  CHECK((r * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("exp matches the quaternion path") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = random_omega(rng, 2.0 * M_PI);
    const double theta = w.norm();
    Mat3 expected = Mat3::Identity();
    if (theta > 0.0) {
      expected = Eigen::Quaterniond(Eigen::AngleAxisd(theta, w / theta))
                     .toRotationMatrix();
    }
    CHECK((exp_so3(w) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("exp output is orthonormal with unit determinant") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = exp_so3(random_omega(rng, 4.0 * M_PI));
    CHECK((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("exp handles tiny angles through the series branch") {
  const Vec3 w(3e-7, -2e-7, 1e-7);
  const Mat3 r = exp_so3(w);
  CHECK(is_rotation(r, 1e-12));
  CHECK((log_so3(r) - w).norm() < 1e-15);
}

TEST_CASE("log of the identity is zero") {
  CHECK(log_so3(Mat3::Identity()).norm() == 0.0);
}

TEST_CASE("log inverts exp on a fixed vector") {
  const Vec3 w(0.1, -0.2, 0.3);
  CHECK((log_so3(exp_so3(w)) - w).norm() < 1e-10);
}

TEST_CASE("log exp roundtrip across magnitudes") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 20000; ++i) {
    const Vec3 w = random_omega(rng, M_PI - 1e-6);
    CHECK((log_so3(exp_so3(w)) - w).norm() < 1e-9);
  }
}

TEST_CASE("log near pi recovers the axis") {
  // Half turn about x: diag(1, -1, -1).
  Mat3 r = Mat3::Identity();
  r(1, 1) = -1.0;
  r(2, 2) = -1.0;
  const Vec3 w = log_so3(r);
  CHECK(w.norm() == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(std::abs(w.x()) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(w.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.z() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((exp_so3(w) - r).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    Vec3 axis = random_omega(rng, 1.0);
    axis.normalize();
    std::uniform_real_distribution<double> near_pi(M_PI - 5e-3, M_PI);
    const Vec3 w2 = near_pi(rng) * axis;
    const Mat3 r2 = exp_so3(w2);
    const Vec3 back = log_so3(r2);
    CHECK((exp_so3(back) - r2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(back.norm() <= M_PI + 1e-12);
  }
}

TEST_CASE("log rejects non-rotations") {
  CHECK_THROWS_AS(log_so3(2.0 * Mat3::Identity()), NotARotation);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(log_so3(reflection), NotARotation);
}

TEST_CASE("projection repairs drift and fixes reflections") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> noise(-1e-4, 1e-4);
  for (int i = 0; i < 200; ++i) {
    const Mat3 r = exp_so3(random_omega(rng, M_PI - 0.1));
    Mat3 dirty = r;
    for (int k = 0; k < 9; ++k) dirty(k / 3, k % 3) += noise(rng);
    const Mat3 fixed = project_to_so3(dirty);
    CHECK(is_rotation(fixed, 1e-12));
    CHECK((fixed - r).cwiseAbs().maxCoeff() < 1e-3);
  }
  Mat3 reflection = Mat3::Identity();
  reflection(0, 0) = -1.0;
  CHECK(is_rotation(project_to_so3(reflection), 1e-12));
}

TEST_CASE("long composition chains stay orthonormal under projection") {
  std::mt19937_64 rng(31);
  Mat3 r = Mat3::Identity();
  for (int i = 0; i < 1000000; ++i) {
    r = project_to_so3(exp_so3(random_omega(rng, 0.3)) * r);
  }
  CHECK((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("compose with identity returns the pose") {
  std::mt19937_64 rng(37);
  const Pose p = random_pose(rng);
  const Pose q = compose(Pose{}, p);
  CHECK((q.rotation - p.rotation).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.translation - p.translation).norm() == 0.0);
}

TEST_CASE("compose against the homogeneous matrix oracle") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    const Pose c = compose(a, b);
    const Eigen::Matrix4d expected = homogeneous(a) * homogeneous(b);
    CHECK((homogeneous(c) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("inverse composes to the identity") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 500; ++i) {
    const Pose p = random_pose(rng);
    const Pose id = compose(p, inverse(p));
    CHECK((id.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(id.translation.norm() < 1e-12);
    const Pose back = inverse(inverse(p));
    CHECK((back.rotation - p.rotation).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.translation - p.translation).norm() < 1e-12);
  }
}

TEST_CASE("apply matches rotation plus translation") {
  std::mt19937_64 rng(47);
  const Pose p = random_pose(rng);
  const Vec3 x(0.3, -0.7, 1.1);
  CHECK((apply(p, x) - (p.rotation * x + p.translation)).norm() == 0.0);
}
