#include "bsmap/geometry.hpp"

#include <algorithm>

#include "bsmap/errors.hpp"

namespace bsmap {

real CircleArc::length() const {
    if (empty_flag) return real(0);
    real d = ccw_delta(left.angle, right.angle);
    if (d == 0) return two_pi_v();  // left == right means the full circle
    return d;
}

bool arc_contains(const CircleArc& arc, const CirclePoint& p, double eps) {
    if (arc.empty_flag) return false;
    if (circ_dist(p.angle, arc.left.angle) < eps) return true;
    return ccw_delta(arc.left.angle, p.angle) < arc.length();
}

real MoebiusMap::boundary_derivative(const CirclePoint& p) const {
    cplx den = b.conj() * p.unit() + a.conj();
    return real(1) / den.norm();
}

bool MoebiusMap::is_identity(double eps) const {
    real off = sqrt(b.norm());
    real d1 = cplx(a.re - 1, a.im).abs();
    real d2 = cplx(a.re + 1, a.im).abs();
    real d = (d1 < d2 ? d1 : d2);
    if (off > d) d = off;
    return d < eps;
}

double MoebiusMap::max_entry_distance(const MoebiusMap& o) const {
    auto gap = [&](int s) {
        real da = cplx(a.re - s * o.a.re, a.im - s * o.a.im).abs();
        real db = cplx(b.re - s * o.b.re, b.im - s * o.b.im).abs();
        return to_double(da > db ? da : db);
    };
    return std::min(gap(1), gap(-1));
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    cplx a = m1.a * m2.a + m1.b * m2.b.conj();
    cplx b = m1.a * m2.b + m1.b * m2.a.conj();
    real det = a.norm() - b.norm();
    if (det <= 0) throw Error("compose: pseudo-determinant collapsed");
    real s = sqrt(det);
    return {a / s, b / s};
}

CirclePoint apply_boundary(const MoebiusMap& m, const CirclePoint& p) {
    return CirclePoint(angle_of(m.apply(p.unit())));
}

MoebiusMap translate_to(const DiskPoint& c) {
    real d = sqrt(1 - c.abs2());
    return {cplx(real(1) / d), c.as_cplx() / d};
}

MoebiusMap elliptic_about(const DiskPoint& c, const real& angle) {
    MoebiusMap rot(unit_from_angle(angle / 2), cplx());
    if (c.abs2() == 0) return rot;
    MoebiusMap a = translate_to(c);
    return compose(compose(a, rot), a.inverse());
}

MapClass classify(const MoebiusMap& m, double eps_trace) {
    if (m.is_identity(eps_trace)) return MapClass::Identity;
    real t = 2 * abs(m.a.re);
    real det = m.pseudo_det();
    if (det <= 0) throw Error("classify: invalid map");
    t /= sqrt(det);
    if (t > 2 + eps_trace) return MapClass::Hyperbolic;
    if (t < 2 - eps_trace) return MapClass::Elliptic;
    return MapClass::Parabolic;
}

std::pair<CirclePoint, CirclePoint> fixed_points_on_circle(const MoebiusMap& m,
                                                           double eps_trace) {
    if (classify(m, eps_trace) != MapClass::Hyperbolic)
        throw NotHyperbolicMap("fixed_points_on_circle: map is not hyperbolic");
    real s = sqrt(m.pseudo_det());
    cplx a = m.a / s, b = m.b / s;
    // conj(b) z² + (conj(a) − a) z − b = 0 on |z| = 1
    real root = sqrt(a.re * a.re - 1);
    cplx z1 = cplx(root, a.im) / b.conj();
    cplx z2 = cplx(-root, a.im) / b.conj();
    // attracting where |M'| = 1/|conj(b) z + conj(a)|² < 1
    real d1 = (b.conj() * z1 + a.conj()).norm();
    CirclePoint p1(angle_of(z1)), p2(angle_of(z2));
    if (d1 > 1) return {p1, p2};
    return {p2, p1};
}

Geodesic::Geodesic(CirclePoint a, CirclePoint b) : e1(std::move(a)), e2(std::move(b)), radius(0) {
    real d = circ_dist(e1.angle, e2.angle);
    if (circ_dist(d, pi_v()) == 0) {
        diameter = true;
        return;
    }
    cplx u = e1.unit(), v = e2.unit();
    real det = u.re * v.im - u.im * v.re;
    if (det == 0) {
        diameter = true;  // antipodal up to rounding
        return;
    }
    // ⟨c, e⟩ = 1 for both ideal endpoints
    center = cplx((v.im - u.im) / det, (u.re - v.re) / det);
    radius = sqrt(center.norm() - 1);
}

real Geodesic::endpoint_gap(const Geodesic& o) const {
    real g1 = circ_dist(e1.angle, o.e1.angle);
    real g2 = circ_dist(e2.angle, o.e2.angle);
    real same = (g1 > g2 ? g1 : g2);
    real h1 = circ_dist(e1.angle, o.e2.angle);
    real h2 = circ_dist(e2.angle, o.e1.angle);
    real cross = (h1 > h2 ? h1 : h2);
    return same < cross ? same : cross;
}

Geodesic isometric_circle(const MoebiusMap& m) {
    if (m.b.norm() == 0) throw FixesOrigin("isometric_circle: map fixes the origin");
    cplx center = -m.a.conj() / m.b.conj();
    real radius = real(1) / sqrt(m.b.norm());
    real n2 = center.norm();
    cplx i_r(real(0), radius);
    cplx z1 = center * (cplx(real(1)) + i_r) / n2;
    cplx z2 = center * (cplx(real(1)) - i_r) / n2;
    Geodesic g;
    g.e1 = CirclePoint(angle_of(z1));
    g.e2 = CirclePoint(angle_of(z2));
    g.center = center;
    g.radius = radius;
    g.diameter = false;
    return g;
}

Geodesic geodesic_between(const DiskPoint& p, const DiskPoint& q) {
    cplx diff = p.as_cplx() - q.as_cplx();
    if (diff.norm() == 0) throw CoincidentPoints("geodesic_between: points coincide");
    real det = p.re * q.im - p.im * q.re;
    if (det == 0) {
        // diameter through the origin; beyond-q endpoint lies in the travel direction
        real th = angle_of(cplx(q.re - p.re, q.im - p.im));
        Geodesic g;
        g.e1 = CirclePoint(th + pi_v());  // beyond p
        g.e2 = CirclePoint(th);           // beyond q
        g.diameter = true;
        return g;
    }
    // ⟨c, p⟩ = (|p|²+1)/2 and likewise for q
    real bp = (p.abs2() + 1) / 2;
    real bq = (q.abs2() + 1) / 2;
    cplx center((bp * q.im - bq * p.im) / det, (p.re * bq - q.re * bp) / det);
    real n2 = center.norm();
    real radius = sqrt(n2 - 1);
    cplx i_r(real(0), radius);
    cplx z1 = center * (cplx(real(1)) + i_r) / n2;
    cplx z2 = center * (cplx(real(1)) - i_r) / n2;
    // the inside-disk arc is at most a half circle, so chord distances order points along it
    real d1p = (z1 - p.as_cplx()).norm();
    real d1q = (z1 - q.as_cplx()).norm();
    Geodesic g;
    g.center = center;
    g.radius = radius;
    g.diameter = false;
    if (d1p < d1q) {
        g.e1 = CirclePoint(angle_of(z1));
        g.e2 = CirclePoint(angle_of(z2));
    } else {
        g.e1 = CirclePoint(angle_of(z2));
        g.e2 = CirclePoint(angle_of(z1));
    }
    return g;
}

real hyperbolic_distance(const DiskPoint& p, const DiskPoint& q) {
    real num = (p.as_cplx() - q.as_cplx()).norm();
    real den = (1 - p.abs2()) * (1 - q.abs2());
    return acosh(1 + 2 * num / den);
}

}  // namespace bsmap
