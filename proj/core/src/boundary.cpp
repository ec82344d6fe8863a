#include "nswm/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace nswm {

DriftDistribution estimate_left(std::span<const uint8_t> read, std::span<const uint8_t> flank,
                                const IdsParams& params, const DriftWindow& window) {
    const EmissionTable emissions(params);
    DriftDistribution dist = DriftDistribution::point(window, 0);
    std::vector<double> next(dist.weights.size());
    for (size_t y = 0; y < flank.size(); ++y) {
        drift_forward_step(emissions, read, static_cast<int>(y), flank[y], window.x_min, dist.weights, next);
        std::swap(dist.weights, next);
        if (!dist.normalize()) {
            break;  // zero mass: boundary lost
        }
    }
    return dist;
}

DriftDistribution estimate_right(std::span<const uint8_t> read, int consensus_start,
                                 std::span<const uint8_t> consensus, const IdsParams& params,
                                 const DriftWindow& window) {
    const EmissionTable emissions(params);
    DriftDistribution dist = DriftDistribution::uniform(window);
    std::vector<double> next(dist.weights.size());
    for (int y = static_cast<int>(consensus.size()) - 1; y >= 0; --y) {
        drift_backward_step(emissions, read, consensus_start + y, consensus[y], window.x_min, dist.weights,
                            next);
        std::swap(dist.weights, next);
        if (!dist.normalize()) {
            break;
        }
    }
    return dist;
}

}  // namespace nswm
