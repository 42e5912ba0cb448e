#include "splatsim/gaussians.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <random>

#include "splatsim/errors.hpp"

namespace splatsim {

namespace {

// Splat-convention real SH constants (degree 0-3).
constexpr double kSH0 = 0.28209479177387814;
constexpr double kSH1 = 0.4886025119029199;
constexpr double kSH2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                            -1.0925484305920792, 0.5462742152960396};
constexpr double kSH3[7] = {-0.5900435899266435, 2.890611442640554,  -0.4570457994644658,
                            0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                            -0.5900435899266435};

// Basis values of one band at a unit direction, in coefficient order.
void sh_band_basis(int l, const Eigen::Vector3d& d, double* out) {
    const double x = d.x(), y = d.y(), z = d.z();
    switch (l) {
        case 0:
            out[0] = kSH0;
            return;
        case 1:
            out[0] = -kSH1 * y;
            out[1] = kSH1 * z;
            out[2] = -kSH1 * x;
            return;
        case 2: {
            const double xx = x * x, yy = y * y, zz = z * z;
            out[0] = kSH2[0] * x * y;
            out[1] = kSH2[1] * y * z;
            out[2] = kSH2[2] * (2.0 * zz - xx - yy);
            out[3] = kSH2[3] * x * z;
            out[4] = kSH2[4] * (xx - yy);
            return;
        }
        case 3: {
            const double xx = x * x, yy = y * y, zz = z * z;
            out[0] = kSH3[0] * y * (3.0 * xx - yy);
            out[1] = kSH3[1] * x * y * z;
            out[2] = kSH3[2] * y * (4.0 * zz - xx - yy);
            out[3] = kSH3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy);
            out[4] = kSH3[4] * x * (4.0 * zz - xx - yy);
            out[5] = kSH3[5] * z * (xx - yy);
            out[6] = kSH3[6] * x * (xx - 3.0 * yy);
            return;
        }
        default:
            throw SimulationError("unsupported SH band " + std::to_string(l));
    }
}

// Per-band rotation matrices for l >= 2 are built numerically: with fixed
// sample directions d_j, the band basis satisfies b_m(q^-1 d) = sum_k M_mk
// b_k(d); M is recovered by least squares against the precomputed basis
// matrix A_jk = b_k(d_j).
struct BandProjector {
    std::vector<Eigen::Vector3d> samples;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

const BandProjector& band_projector(int l) {
    static std::array<BandProjector, 4> projectors;
    static std::once_flag once;
    std::call_once(once, [] {
        std::mt19937_64 rng(0x5eedb411u);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int band = 2; band <= 3; ++band) {
            const int m = 2 * band + 1;
            const int n_samples = 3 * m;
            BandProjector& p = projectors[size_t(band)];
            Eigen::MatrixXd a(n_samples, m);
            for (int j = 0; j < n_samples; ++j) {
                Eigen::Vector3d d;
                do {
                    d = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
                } while (d.norm() < 1e-3);
                d.normalize();
                p.samples.push_back(d);
                std::vector<double> basis(size_t(m));
                sh_band_basis(band, d, basis.data());
                for (int k = 0; k < m; ++k) a(j, k) = basis[size_t(k)];
            }
            p.qr.compute(a);
        }
    });
    return projectors[size_t(l)];
}

// Solves for the band-l coefficient rotation (c' = X c).
Eigen::MatrixXd band_rotation(int l, const Eigen::Quaterniond& q) {
    const BandProjector& p = band_projector(l);
    const int m = 2 * l + 1;
    const Eigen::Quaterniond q_inv = q.conjugate();
    Eigen::MatrixXd g(p.samples.size(), m);
    std::vector<double> basis(size_t(m));
    for (size_t j = 0; j < p.samples.size(); ++j) {
        const Eigen::Vector3d rotated = q_inv * p.samples[j];
        sh_band_basis(l, rotated, basis.data());
        for (int k = 0; k < m; ++k) g(long(j), k) = basis[size_t(k)];
    }
    return p.qr.solve(g);
}

}  // namespace

void CameraSpec::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("camera focal lengths must be positive");
    if (width <= 0 || height <= 0) throw ValidationError("camera image size must be positive");
    const Eigen::Matrix3d r = world_to_camera.rotation();
    if ((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() > 1e-6)
        throw ValidationError("camera rotation is not orthonormal");
}

Eigen::Vector3d CameraSpec::position() const {
    return world_to_camera.inverse().translation();
}

CameraSpec CameraSpec::look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                               const Eigen::Vector3d& up, double fov_deg, int width, int height) {
    Eigen::Vector3d forward = target - eye;
    if (forward.norm() < 1e-12) throw ValidationError("camera eye and target coincide");
    forward.normalize();
    Eigen::Vector3d right = forward.cross(up);
    if (right.norm() < 1e-9) throw ValidationError("camera up vector parallel to view direction");
    right.normalize();
    const Eigen::Vector3d down = forward.cross(right);

    CameraSpec cam;
    cam.width = width;
    cam.height = height;
    cam.fy = 0.5 * height / std::tan(0.5 * fov_deg * M_PI / 180.0);
    cam.fx = cam.fy;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    Eigen::Matrix3d r;
    r.row(0) = right;
    r.row(1) = down;
    r.row(2) = forward;
    cam.world_to_camera.linear() = r;
    cam.world_to_camera.translation() = -r * eye;
    return cam;
}

Eigen::Matrix3d covariance(const GaussianSplat& splat) {
    const Eigen::Matrix3d r = splat.rotation.normalized().toRotationMatrix();
    const Eigen::Matrix3d m = r * splat.scale.asDiagonal();
    Eigen::Matrix3d sigma = m * m.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

std::optional<Eigen::Matrix2d> project_covariance(const Eigen::Matrix3d& sigma,
                                                  const CameraSpec& camera,
                                                  const Eigen::Vector3d& mu) {
    const Eigen::Vector3d t = camera.world_to_camera * mu;
    const double z = t.z();
    if (z <= kNearPlane) return std::nullopt;

    Eigen::Matrix<double, 2, 3> j;
    j << camera.fx / z, 0.0, -camera.fx * t.x() / (z * z),
         0.0, camera.fy / z, -camera.fy * t.y() / (z * z);
    const Eigen::Matrix<double, 2, 3> jw = j * camera.world_to_camera.rotation();
    Eigen::Matrix2d out = jw * sigma * jw.transpose();
    out = 0.5 * (out + out.transpose().eval());
    out(0, 0) += kCovarianceFloor;
    out(1, 1) += kCovarianceFloor;
    return out;
}

Eigen::Vector3d eval_sh(const std::vector<Eigen::Vector3d>& sh, const Eigen::Vector3d& dir) {
    const int degree = sh_degree_for_terms(int(sh.size()));
    if (degree < 0) throw ValidationError("unsupported SH term count " + std::to_string(sh.size()));

    Eigen::Vector3d color = Eigen::Vector3d::Zero();
    double basis[7];
    int offset = 0;
    for (int l = 0; l <= degree; ++l) {
        sh_band_basis(l, dir, basis);
        for (int k = 0; k < 2 * l + 1; ++k) color += basis[k] * sh[size_t(offset + k)];
        offset += 2 * l + 1;
    }
    color.array() += 0.5;
    return color.cwiseMax(0.0);
}

std::vector<Eigen::Vector3d> rotate_sh(const std::vector<Eigen::Vector3d>& sh,
                                       const Eigen::Quaterniond& q, ShRotationMode mode) {
    const int degree = sh_degree_for_terms(int(sh.size()));
    if (degree < 0) throw ValidationError("unsupported SH term count " + std::to_string(sh.size()));

    std::vector<Eigen::Vector3d> out = sh;
    if (degree >= 1) {
        // Band 1 is a linear form v.d; its coefficients transform as the
        // rotated vector. Basis order maps (c1,c2,c3) -> w = (-c3,-c1,c2).
        const Eigen::Matrix3d r = q.toRotationMatrix();
        for (int channel = 0; channel < 3; ++channel) {
            const Eigen::Vector3d w(-sh[3][channel], -sh[1][channel], sh[2][channel]);
            const Eigen::Vector3d wr = r * w;
            out[1][channel] = -wr.y();
            out[2][channel] = wr.z();
            out[3][channel] = -wr.x();
        }
    }
    for (int l = 2; l <= degree; ++l) {
        const int base = l * l;
        const int m = 2 * l + 1;
        if (mode == ShRotationMode::Truncate) {
            for (int k = 0; k < m; ++k) out[size_t(base + k)].setZero();
            continue;
        }
        const Eigen::MatrixXd rot = band_rotation(l, q);
        for (int channel = 0; channel < 3; ++channel) {
            Eigen::VectorXd c(m);
            for (int k = 0; k < m; ++k) c[k] = sh[size_t(base + k)][channel];
            const Eigen::VectorXd rotated = rot * c;
            for (int k = 0; k < m; ++k) out[size_t(base + k)][channel] = rotated[k];
        }
    }
    return out;
}

}  // namespace splatsim
