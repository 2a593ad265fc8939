#include "bsmap/net.hpp"

#include <algorithm>
#include <string>

#include "bsmap/errors.hpp"

namespace bsmap {

const CirclePoint& VertexFan::a(int k) const {
    int m = static_cast<int>(endpoints.size());
    int r = (k - 1) % m;
    if (r < 0) r += m;
    return endpoints[r];
}

namespace {

struct GeoCand {
    CirclePoint p, q;
};

bool same_geodesic(const GeoCand& g, const GeoCand& h, double eps) {
    auto close = [&](const CirclePoint& x, const CirclePoint& y) {
        return to_double(circ_dist(x.angle, y.angle)) < eps;
    };
    return (close(g.p, h.p) && close(g.q, h.q)) || (close(g.p, h.q) && close(g.q, h.p));
}

}  // namespace

NetData build_net(const FundamentalDomain& fd, const Tolerances& tol) {
    NetData net;
    net.domain = fd;
    net.tol = tol;

    const std::array<MoebiusMap, 4> stab = {
        compose(fd.T(2), fd.T(4)),  // fixes v1
        fd.T(2),
        compose(fd.T(4), fd.T(2)),  // fixes v3
        fd.T(4),
    };
    const std::array<int, 4> order = {fd.sig.m3, fd.sig.m2, fd.sig.m3, fd.sig.m1};

    for (int i = 1; i <= 4; ++i) {
        VertexFan fan;
        fan.vertex = i;
        fan.stabilizer = stab[i - 1];

        Geodesic ell = fd.side_l(i);  // through v_{i-1}, v_i; e1 is beyond v_{i-1}
        Geodesic rr = fd.side_r(i);
        std::vector<GeoCand> geos;
        MoebiusMap cur = MoebiusMap::identity();
        for (int k = 0; k < order[i - 1]; ++k) {
            for (const Geodesic* g : {&ell, &rr}) {
                GeoCand cand{apply_boundary(cur, g->e1), apply_boundary(cur, g->e2)};
                bool dup = false;
                for (const auto& have : geos)
                    if (same_geodesic(cand, have, tol.eps_point)) { dup = true; break; }
                if (!dup) geos.push_back(cand);
            }
            cur = compose(fan.stabilizer, cur);
        }
        int ni = fd.n_at(i);
        if (static_cast<int>(geos.size()) != ni)
            throw FanCountMismatch("fan at v_" + std::to_string(i) + ": got " +
                                   std::to_string(geos.size()) + ", expected " +
                                   std::to_string(ni));

        // sort counter-clockwise starting at a_i^1 = beyond-v_{i-1} end of g(ℓ_i);
        // offsets within eps of 2π are the base point itself seen across the wrap
        const real& a1 = ell.e1.angle;
        std::vector<real> offs;
        for (const auto& g : geos) {
            for (const CirclePoint* e : {&g.p, &g.q}) {
                real off = ccw_delta(a1, e->angle);
                if (to_double(two_pi_v() - off) < tol.eps_point) off = 0;
                offs.push_back(off);
            }
        }
        std::sort(offs.begin(), offs.end());
        for (const real& off : offs) fan.endpoints.emplace_back(a1 + off);

        // a_i^{n_i+1} must be the other endpoint of g(ℓ_i)
        if (to_double(circ_dist(fan.a(ni + 1).angle, ell.e2.angle)) > tol.eps_point)
            throw GluingFailure("fan at v_" + std::to_string(i) +
                                ": endpoints fail to interleave");
        net.fans[i - 1] = fan;
    }

    // key identities a_i^{n_i} = a_{i+1}^1 and a_i^{2n_i} = a_{i+1}^{n_{i+1}+1}
    for (int i = 1; i <= 4; ++i) {
        int j = mod4(i + 1);
        int ni = fd.n_at(i), nj = fd.n_at(j);
        double d1 = to_double(circ_dist(net.a(i, ni).angle, net.a(j, 1).angle));
        double d2 = to_double(circ_dist(net.a(i, 2 * ni).angle, net.a(j, nj + 1).angle));
        if (d1 > tol.eps_point || d2 > tol.eps_point)
            throw GluingFailure("gluing identity fails between fans " + std::to_string(i) +
                                " and " + std::to_string(j));
    }

    // W = union of the fan endpoints, deduplicated
    std::vector<real> all;
    for (const auto& fan : net.fans)
        for (const auto& p : fan.endpoints) all.push_back(p.angle);
    std::sort(all.begin(), all.end());
    std::vector<real> distinct;
    for (const real& x : all) {
        if (distinct.empty() || to_double(x - distinct.back()) > tol.eps_point)
            distinct.push_back(x);
    }
    if (distinct.size() > 1 &&
        to_double(two_pi_v() - distinct.back() + distinct.front()) < tol.eps_point)
        distinct.pop_back();
    int expected = 0;
    for (int i = 1; i <= 4; ++i) expected += 2 * fd.n_at(i);
    expected -= 8;
    if (static_cast<int>(distinct.size()) != expected)
        throw GluingFailure("|W| = " + std::to_string(distinct.size()) + ", expected " +
                            std::to_string(expected));
    for (real& x : distinct) net.w_points.emplace_back(std::move(x));
    for (size_t k = 0; k < net.w_points.size(); ++k)
        net.cells.emplace_back(net.w_points[k], net.w_points[(k + 1) % net.w_points.size()]);
    return net;
}

CircleArc interval_L(const NetData& net, int i, int j) {
    int ni = net.n_at(i);
    if (j < 1 || j > ni) throw IndexOutOfRange("interval_L: j out of 1..n_i");
    return {net.a(i, 2 * ni - j), net.a(i, 2 * ni - j + 1)};
}

CircleArc interval_R(const NetData& net, int i, int j) {
    int ni = net.n_at(i);
    if (j < 1 || j > ni) throw IndexOutOfRange("interval_R: j out of 1..n_i");
    return {net.a(i, j - 1), net.a(i, j)};  // j−1 wraps to 2n_i when j = 1
}

CircleArc overlap_arc(const NetData& net, int i) {
    int ni = net.n_at(i);
    return {net.a(i, ni), net.a(i, ni + 1)};
}

CircleArc a_region(const NetData& net, int i) {
    // O_{i+1} is a rightmost subarc of L_1(v_i), so the difference is one arc
    int ip1 = mod4(i + 1);
    CircleArc l1 = interval_L(net, i, 1);
    CircleArc o_next = overlap_arc(net, ip1);
    if (!arc_contains(l1, o_next.left, net.tol.eps_point) ||
        to_double(circ_dist(l1.right.angle, o_next.right.angle)) > net.tol.eps_point)
        throw Error("a_region: O_{i+1} is not a rightmost subarc of L_1(v_i)");
    return {l1.left, o_next.left};
}

int branch_of(const NetData& net, const CirclePoint& x) {
    for (int i = 1; i <= 4; ++i) {
        CircleArc arc{net.a(i, 1), net.a(i, net.n_at(i))};
        if (arc_contains(arc, x, net.tol.eps_point)) return i;
    }
    // total by the partition property; reachable only through inconsistent data
    throw Error("branch_of: point escaped the branch partition");
}

int nearest_w_index(const NetData& net, const CirclePoint& x, double eps) {
    int best = -1;
    double best_d = eps;
    for (size_t k = 0; k < net.w_points.size(); ++k) {
        double d = to_double(circ_dist(net.w_points[k].angle, x.angle));
        if (d < best_d) { best_d = d; best = static_cast<int>(k); }
    }
    return best;
}

}  // namespace bsmap
