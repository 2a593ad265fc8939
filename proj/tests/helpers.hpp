#pragma once

#include <random>

#include "bsmap/geometry.hpp"

namespace bsmap::testing {

inline real uniform_angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // two draws so the angle has more entropy than one double
    return norm_angle(two_pi_v() * u(rng) + real(u(rng)) * 1e-14);
}

// random normalized disk isometry: |a|² − |b|² = 1
inline MoebiusMap random_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    real r = real(2) * u(rng);
    cplx b = unit_from_angle(uniform_angle(rng)) * r;
    cplx a = unit_from_angle(uniform_angle(rng)) * sqrt(1 + b.norm());
    return {a, b};
}

inline double angdist(const CirclePoint& a, const CirclePoint& b) {
    return to_double(circ_dist(a.angle, b.angle));
}

// uniform point strictly inside an arc
inline CirclePoint point_in(const CircleArc& arc, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    return CirclePoint(arc.left.angle + arc.length() * u(rng));
}

}  // namespace bsmap::testing
