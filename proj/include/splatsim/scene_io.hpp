#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "splatsim/scene.hpp"

namespace splatsim {

// Reads a binary little-endian splat PLY (x,y,z, f_dc_*, f_rest_*, opacity,
// scale_*, rot_*, optional uint object_id). On-disk log scales and logit
// opacities are mapped to linear values; quaternions normalized.
GaussianScene load_splat_ply(const std::filesystem::path& path);

// Bit-exact writer for the same layout (float32 fields + uint object_id).
void save_splat_ply(const GaussianScene& scene, const std::filesystem::path& path);

// Plain point PLY used for driving-particle inspection dumps.
void save_points_ply(const std::vector<Eigen::Vector3d>& positions,
                     const std::vector<int>& object_ids,
                     const std::vector<double>& radii,
                     const std::filesystem::path& path);

}  // namespace splatsim
