#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <optional>
#include <vector>

#include "splatsim/scene.hpp"

namespace splatsim {

enum class ShRotationMode { Exact, Truncate };

// Pinhole camera, OpenCV convention: x right, y down, z forward.
struct CameraSpec {
    double fx = 500.0, fy = 500.0;
    double cx = 320.0, cy = 240.0;
    int width = 640, height = 480;
    Eigen::Isometry3d world_to_camera = Eigen::Isometry3d::Identity();

    void validate() const;
    Eigen::Vector3d position() const;  // camera center in world frame

    static CameraSpec look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                              const Eigen::Vector3d& up, double fov_deg, int width, int height);

    EIGEN_MAKE_ALIGNED_OPERATOR_NEW
};

inline constexpr double kNearPlane = 0.01;
// Isotropic floor added to projected covariance diagonals (px^2).
inline constexpr double kCovarianceFloor = 0.3;

// World covariance R S S^T R^T of a splat.
Eigen::Matrix3d covariance(const GaussianSplat& splat);

// EWA local-affine projection of a world covariance to 2x2 pixel space,
// Jacobian evaluated at `mu`. Returns nullopt when mu is behind the near
// plane (cull, not an error).
std::optional<Eigen::Matrix2d> project_covariance(const Eigen::Matrix3d& sigma,
                                                  const CameraSpec& camera,
                                                  const Eigen::Vector3d& mu);

// Real SH color evaluation with the usual splatting constants and the +0.5
// offset; channels clamped to >= 0. `dir` must be unit length.
Eigen::Vector3d eval_sh(const std::vector<Eigen::Vector3d>& sh, const Eigen::Vector3d& dir);

// Rotates SH coefficients so the represented directional function follows
// the object: eval_sh(rotate_sh(sh, q), q * d) == eval_sh(sh, d).
// Degree 0 is invariant, degree 1 transforms as a vector, degrees 2-3 use
// numerically built per-band rotation matrices (Truncate zeroes them).
std::vector<Eigen::Vector3d> rotate_sh(const std::vector<Eigen::Vector3d>& sh,
                                       const Eigen::Quaterniond& q,
                                       ShRotationMode mode = ShRotationMode::Exact);

}  // namespace splatsim
