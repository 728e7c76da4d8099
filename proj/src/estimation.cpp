#include "phe/estimation.hpp"

#include <algorithm>
#include <stdexcept>

namespace phe {

double hellinger_sq_to_hazard(const Histogram<IntervalPartition>& h, const Intensity& s,
                              const SurvivalObs& obs) {
    if (s.kind() != Intensity::Kind::Constant && s.kind() != Intensity::Kind::PiecewiseConstant)
        throw std::invalid_argument(
            "hellinger_sq_to_hazard: true hazard must be piecewise constant");

    // merge histogram breakpoints with the hazard's jump locations
    std::vector<double> edges;
    for (const auto& bp : h.partition.breakpoints()) edges.push_back(bp.value());
    if (s.kind() == Intensity::Kind::PiecewiseConstant)
        for (double b : s.breaks()) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    KahanSum acc;
    std::size_t cell = 0;
    const auto& breaks = h.partition.breakpoints();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        while (cell + 2 < breaks.size() && breaks[cell + 1].value() <= lo) ++cell;
        const double mid = 0.5 * (lo + hi);
        const double d = h.sqrt_levels[cell] - std::sqrt(s.value(mid));
        if (d != 0.0) acc.add(d * d * obs.measure_between(lo, hi));
    }
    return std::max(0.0, acc.value());
}

}  // namespace phe
