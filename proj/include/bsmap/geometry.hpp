#pragma once

#include <utility>

#include "bsmap/precision.hpp"

namespace bsmap {

// A point of the unit circle, stored as its angle in [0, 2π).
struct CirclePoint {
    real angle;

    CirclePoint() : angle(0) {}
    explicit CirclePoint(real a) : angle(norm_angle(std::move(a))) {}

    cplx unit() const { return unit_from_angle(angle); }
    bool close_to(const CirclePoint& o, double eps = 1e-9) const {
        return circ_dist(angle, o.angle) < eps;
    }
};

// Left-closed right-open arc, traversed counter-clockwise from left to right.
struct CircleArc {
    CirclePoint left, right;
    bool empty_flag = false;

    CircleArc() = default;
    CircleArc(CirclePoint l, CirclePoint r, bool empty = false)
        : left(std::move(l)), right(std::move(r)), empty_flag(empty) {}

    // (right - left) mod 2π, in (0, 2π] for nonempty arcs
    real length() const;
};

// membership in [left, right) with eps grace at the left endpoint only
bool arc_contains(const CircleArc& arc, const CirclePoint& p, double eps = 1e-9);

struct DiskPoint {
    real re, im;

    DiskPoint() : re(0), im(0) {}
    DiskPoint(real r, real i) : re(std::move(r)), im(std::move(i)) {}
    explicit DiskPoint(const cplx& z) : re(z.re), im(z.im) {}

    cplx as_cplx() const { return {re, im}; }
    real abs2() const { return re * re + im * im; }
};

// Disk-model isometry z ↦ (a z + b)/(conj(b) z + conj(a)), |a|² − |b|² = 1.
struct MoebiusMap {
    cplx a, b;

    MoebiusMap() : a(real(1)), b() {}
    MoebiusMap(cplx a_, cplx b_) : a(std::move(a_)), b(std::move(b_)) {}

    static MoebiusMap identity() { return MoebiusMap(); }

    MoebiusMap inverse() const { return {a.conj(), -b}; }
    real pseudo_det() const { return a.norm() - b.norm(); }

    cplx apply(const cplx& z) const {
        return (a * z + b) / (b.conj() * z + a.conj());
    }
    DiskPoint apply(const DiskPoint& p) const { return DiskPoint(apply(p.as_cplx())); }

    // |M'(z)| at a boundary point; equals 1 exactly on the isometric circle
    real boundary_derivative(const CirclePoint& p) const;

    bool is_identity(double eps = 1e-12) const;   // projective: M = ±I
    double max_entry_distance(const MoebiusMap& o) const;  // min over sign of ±o
};

enum class MapClass { Identity, Elliptic, Parabolic, Hyperbolic };

// returns M1∘M2 renormalized to |a|²−|b|²=1
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);

// image angle of p under the boundary extension of M (angle arithmetic)
CirclePoint apply_boundary(const MoebiusMap& m, const CirclePoint& p);

// rotation by `angle` about c (counter-clockwise for angle > 0)
MoebiusMap elliptic_about(const DiskPoint& c, const real& angle);

// disk translation sending 0 to c
MoebiusMap translate_to(const DiskPoint& c);

MapClass classify(const MoebiusMap& m, double eps_trace = 1e-9);

// both boundary fixed points of a hyperbolic map; throws NotHyperbolicMap
std::pair<CirclePoint, CirclePoint> fixed_points_on_circle(const MoebiusMap& m,
                                                           double eps_trace = 1e-9);

// Geodesic of the disk, stored by its ideal endpoints; Euclidean circle data
// (center, radius) derived when not a diameter.
struct Geodesic {
    CirclePoint e1, e2;   // ideal endpoints
    bool diameter = false;
    cplx center;          // valid when !diameter; |center|² = 1 + radius²
    real radius;

    Geodesic() : radius(0) {}
    Geodesic(CirclePoint a, CirclePoint b);

    // unordered endpoint-pair distance to another geodesic
    real endpoint_gap(const Geodesic& o) const;
};

// geodesic with Euclidean center −conj(a)/conj(b), radius 1/|b|; throws FixesOrigin
Geodesic isometric_circle(const MoebiusMap& m);

// ideal endpoints ordered (beyond-p, beyond-q); throws CoincidentPoints
Geodesic geodesic_between(const DiskPoint& p, const DiskPoint& q);

// hyperbolic distance between interior points
real hyperbolic_distance(const DiskPoint& p, const DiskPoint& q);

}  // namespace bsmap
