#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace splatsim {

// Uniform-grid index over a fixed point set. Queries are deterministic:
// neighbor lists are ordered by (distance, index).
class SpatialHash {
public:
    SpatialHash(const std::vector<Eigen::Vector3d>& points, double cell_size);

    // k nearest neighbors of `query` (ties broken by index). `exclude`
    // skips one point index, for self-exclusion.
    std::vector<int> k_nearest(const Eigen::Vector3d& query, int k, int exclude = -1) const;

    void for_each_in_radius(const Eigen::Vector3d& query, double radius,
                            const std::function<void(int, double)>& fn) const;

    double cell_size() const { return cell_; }

    // Cell size giving ~`per_cell` points per occupied cell for a roughly
    // uniform cloud.
    static double suggest_cell_size(const std::vector<Eigen::Vector3d>& points,
                                    double per_cell);

private:
    Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const;
    static uint64_t key_of(const Eigen::Vector3i& c);

    const std::vector<Eigen::Vector3d>& points_;
    double cell_;
    std::unordered_map<uint64_t, std::vector<int>> buckets_;
};

}  // namespace splatsim
