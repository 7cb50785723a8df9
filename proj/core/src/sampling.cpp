#include "sasaki/sampling.hpp"

#include <random>

namespace sasaki {

std::vector<Vec> grid_points(const std::vector<Interval>& box, int per_axis) {
    const std::size_t n = box.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
    std::vector<Vec> out;
    out.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        Vec p(n);
        std::size_t rest = k;
        for (std::size_t i = n; i-- > 0;) {
            const auto j = static_cast<double>(rest % static_cast<std::size_t>(per_axis));
            rest /= static_cast<std::size_t>(per_axis);
            p[i] = box[i].lo + (j + 0.5) / per_axis * (box[i].hi - box[i].lo);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Vec> random_points(const std::vector<Interval>& box, int count, std::uint64_t seed) {
    // mt19937_64 output is specified by the standard; scale by hand so the
    // points do not depend on the library's distribution implementation.
    std::mt19937_64 rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Vec p(box.size());
        for (std::size_t i = 0; i < box.size(); ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p[i] = box[i].lo + u * (box[i].hi - box[i].lo);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Interval> inset(const std::vector<Interval>& box, double fraction) {
    std::vector<Interval> out = box;
    for (auto& iv : out) {
        const double w = iv.hi - iv.lo;
        iv.lo += fraction * w;
        iv.hi -= fraction * w;
    }
    return out;
}

}  // namespace sasaki
