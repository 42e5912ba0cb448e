#include "splatsim/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace splatsim {

SpatialHash::SpatialHash(const std::vector<Eigen::Vector3d>& points, double cell_size)
    : points_(points), cell_(std::max(cell_size, 1e-12)) {
    buckets_.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        buckets_[key_of(cell_of(points[i]))].push_back(int(i));
}

Eigen::Vector3i SpatialHash::cell_of(const Eigen::Vector3d& p) const {
    return {int(std::floor(p.x() / cell_)), int(std::floor(p.y() / cell_)),
            int(std::floor(p.z() / cell_))};
}

uint64_t SpatialHash::key_of(const Eigen::Vector3i& c) {
    // 21 bits per signed axis.
    auto enc = [](int v) { return uint64_t(uint32_t(v + (1 << 20))) & 0x1FFFFF; };
    return enc(c.x()) | (enc(c.y()) << 21) | (enc(c.z()) << 42);
}

std::vector<int> SpatialHash::k_nearest(const Eigen::Vector3d& query, int k, int exclude) const {
    std::vector<std::pair<double, int>> best;  // (squared distance, index)
    if (k <= 0 || points_.empty()) return {};
    best.reserve(size_t(k) + 8);
    const Eigen::Vector3i center = cell_of(query);

    auto consider = [&](int idx) {
        if (idx == exclude) return;
        const double d2 = (points_[size_t(idx)] - query).squaredNorm();
        best.emplace_back(d2, idx);
    };
    auto prune = [&] {
        std::sort(best.begin(), best.end());
        if (best.size() > size_t(k)) best.resize(size_t(k));
    };

    const int max_ring = 1 + int(std::ceil(std::cbrt(double(points_.size())))) + 2;
    for (int ring = 0; ring <= max_ring + 1; ++ring) {
        // Cells in ring n are at least (n-1)*cell away from the query.
        if (best.size() >= size_t(k)) {
            prune();
            const double reach = double(ring - 1) * cell_;
            if (reach > 0.0 && best.back().first <= reach * reach) break;
        }
        bool any_cell = false;
        for (int dx = -ring; dx <= ring; ++dx) {
            for (int dy = -ring; dy <= ring; ++dy) {
                for (int dz = -ring; dz <= ring; ++dz) {
                    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                    auto it = buckets_.find(key_of(center + Eigen::Vector3i(dx, dy, dz)));
                    if (it == buckets_.end()) continue;
                    any_cell = true;
                    for (int idx : it->second) consider(idx);
                }
            }
        }
        (void)any_cell;
        if (ring > max_ring) break;
    }
    prune();
    std::vector<int> out;
    out.reserve(best.size());
    for (const auto& [d2, idx] : best) out.push_back(idx);
    return out;
}

void SpatialHash::for_each_in_radius(const Eigen::Vector3d& query, double radius,
                                     const std::function<void(int, double)>& fn) const {
    const double r2 = radius * radius;
    const Eigen::Vector3i lo = cell_of(query - Eigen::Vector3d::Constant(radius));
    const Eigen::Vector3i hi = cell_of(query + Eigen::Vector3d::Constant(radius));
    for (int x = lo.x(); x <= hi.x(); ++x) {
        for (int y = lo.y(); y <= hi.y(); ++y) {
            for (int z = lo.z(); z <= hi.z(); ++z) {
                auto it = buckets_.find(key_of({x, y, z}));
                if (it == buckets_.end()) continue;
                for (int idx : it->second) {
                    const double d2 = (points_[size_t(idx)] - query).squaredNorm();
                    if (d2 <= r2) fn(idx, std::sqrt(d2));
                }
            }
        }
    }
}

double SpatialHash::suggest_cell_size(const std::vector<Eigen::Vector3d>& points,
                                      double per_cell) {
    if (points.size() < 2) return 1.0;
    Eigen::AlignedBox3d box;
    for (const auto& p : points) box.extend(p);
    const Eigen::Vector3d extent = box.sizes().cwiseMax(1e-9);
    const double volume = extent.prod();
    return std::cbrt(volume * per_cell / double(points.size()));
}

}  // namespace splatsim
