#include "splatsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "splatsim/errors.hpp"

namespace splatsim {

void GaussianScene::recompute_bounds() {
    bounds.setEmpty();
    for (const auto& s : splats) bounds.extend(s.center);
}

void GaussianScene::validate() const {
    if (splats.empty()) throw ValidationError("scene has no splats");
    for (size_t i = 0; i < splats.size(); ++i) {
        const auto& s = splats[i];
        const std::string where = "splat " + std::to_string(i);
        if (std::abs(s.rotation.norm() - 1.0) > 1e-6)
            throw ValidationError(where + ": rotation quaternion not unit");
        if (!(s.scale.array() > 0.0).all())
            throw ValidationError(where + ": non-positive scale");
        if (!(s.opacity > 0.0 && s.opacity <= 1.0))
            throw ValidationError(where + ": opacity outside (0,1]");
        if (sh_degree_for_terms(int(s.sh.size())) < 0)
            throw ValidationError(where + ": unsupported SH term count " +
                                  std::to_string(s.sh.size()));
        if (!bounds.contains(s.center))
            throw ValidationError(where + ": center outside scene bounds");
    }
}

int GaussianScene::sh_degree() const {
    int degree = 0;
    for (const auto& s : splats)
        degree = std::max(degree, sh_degree_for_terms(int(s.sh.size())));
    return degree;
}

std::vector<int> GaussianScene::object_ids() const {
    std::set<int> ids;
    for (const auto& s : splats) ids.insert(s.object_id);
    return std::vector<int>(ids.begin(), ids.end());
}

int sh_terms_for_degree(int degree) { return (degree + 1) * (degree + 1); }

int sh_degree_for_terms(int terms) {
    for (int d = 0; d <= 3; ++d)
        if (sh_terms_for_degree(d) == terms) return d;
    return -1;
}

}  // namespace splatsim
