#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <vector>

namespace splatsim {

// One anisotropic 3D Gaussian. Scales are linear lengths and opacity is in
// (0, 1]; the on-disk log/logit encodings are handled entirely by scene_io.
struct GaussianSplat {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // unit
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();               // > 0
    double opacity = 1.0;
    // Spherical-harmonic color coefficients, term-major: sh[i] is the RGB
    // coefficient of basis term i; size is (degree+1)^2, degree 0..3.
    std::vector<Eigen::Vector3d> sh = {Eigen::Vector3d::Zero()};
    int object_id = 0;

    EIGEN_MAKE_ALIGNED_OPERATOR_NEW
};

struct GaussianScene {
    std::vector<GaussianSplat> splats;
    Eigen::AlignedBox3d bounds;

    void recompute_bounds();
    // Throws ValidationError when a splat violates its invariants.
    void validate() const;
    int sh_degree() const;
    std::vector<int> object_ids() const;  // sorted, unique
};

int sh_terms_for_degree(int degree);
int sh_degree_for_terms(int terms);  // -1 when not a supported count

}  // namespace splatsim
