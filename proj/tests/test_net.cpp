#include <doctest.h>

#include "bsmap/errors.hpp"
#include "bsmap/net.hpp"
#include "helpers.hpp"

using namespace bsmap;
using namespace bsmap::testing;

namespace {

NetData make_net(int m1, int m2, int m3) {
    return build_net(build_domain({m1, m2, m3}));
}

bool arcs_equal(const CircleArc& a, const CircleArc& b, double eps = 1e-9) {
    return to_double(circ_dist(a.left.angle, b.left.angle)) < eps &&
           to_double(circ_dist(a.right.angle, b.right.angle)) < eps;
}

}  // namespace

TEST_CASE("net counts") {
    NetData n663 = make_net(6, 6, 3);
    CHECK(n663.domain.n == std::array<int, 4>{3, 3, 3, 3});
    CHECK(n663.w_points.size() == 16);
    CHECK(n663.cells.size() == 16);

    NetData n443 = make_net(4, 4, 3);
    CHECK(n443.domain.n == std::array<int, 4>{3, 2, 3, 2});
    CHECK(n443.w_points.size() == 12);

    NetData n462 = make_net(4, 6, 2);
    CHECK(n462.domain.n == std::array<int, 4>{2, 3, 2, 2});
    CHECK(n462.w_points.size() == 10);
}

TEST_CASE("gluing identities and endpoint image law") {
    for (auto [m1, m2, m3] : {std::array{6, 6, 3}, {4, 4, 3}, {4, 6, 2}, {8, 4, 3}, {4, 6, 5}}) {
        CAPTURE(m1); CAPTURE(m2); CAPTURE(m3);
        NetData net = make_net(m1, m2, m3);
        for (int i = 1; i <= 4; ++i) {
            int ni = net.n_at(i);
            int j = mod4(i + 1);
            CHECK(angdist(net.a(i, ni), net.a(j, 1)) < 1e-9);
            CHECK(angdist(net.a(i, 2 * ni), net.a(j, net.n_at(j) + 1)) < 1e-9);
            // T_{i-1}(a_i^k) = a_rho(i)^{k-1} and T_i(a_i^k) = a_rho(i)^{k+1}
            for (int k = 1; k <= 2 * ni; ++k) {
                CirclePoint down = apply_boundary(net.domain.T(i - 1), net.a(i, k));
                CirclePoint up = apply_boundary(net.domain.T(i), net.a(i, k));
                CHECK(angdist(down, net.a(rho(i), k - 1)) < 1e-9);
                CHECK(angdist(up, net.a(rho(i), k + 1)) < 1e-9);
            }
        }
    }
}

TEST_CASE("left and right intervals tile the circle per vertex") {
    NetData net = make_net(4, 6, 5);
    for (int i = 1; i <= 4; ++i) {
        real total(0);
        for (int j = 1; j <= net.n_at(i); ++j) {
            total += interval_L(net, i, j).length();
            total += interval_R(net, i, j).length();
        }
        CHECK(to_double(abs(total - two_pi_v())) < 1e-9);
    }
    CHECK_THROWS_AS(interval_L(net, 1, 0), IndexOutOfRange);
    CHECK_THROWS_AS(interval_R(net, 2, net.n_at(2) + 1), IndexOutOfRange);
}

TEST_CASE("interval mapping law") {
    NetData net = make_net(6, 6, 3);
    for (int i = 1; i <= 4; ++i) {
        const MoebiusMap& ti = net.domain.T(i);
        const MoebiusMap& tim1 = net.domain.T(i - 1);
        for (int r = 2; r <= net.n_at(i); ++r) {
            CircleArc src = interval_L(net, i, r);
            CircleArc img{apply_boundary(ti, src.left), apply_boundary(ti, src.right)};
            CHECK(arcs_equal(img, interval_L(net, rho(i), r - 1)));
            CircleArc srcr = interval_R(net, i, r);
            CircleArc imgr{apply_boundary(tim1, srcr.left), apply_boundary(tim1, srcr.right)};
            CHECK(arcs_equal(imgr, interval_R(net, rho(i), r - 1)));
        }
        // fan image law: T_i carries L_1(v_i) onto R_1(v_rho(i))
        CircleArc l1 = interval_L(net, i, 1);
        CircleArc img{apply_boundary(ti, l1.left), apply_boundary(ti, l1.right)};
        CHECK(arcs_equal(img, interval_R(net, rho(i), 1)));
    }
}

TEST_CASE("overlap and A regions") {
    NetData net = make_net(4, 4, 3);
    for (int i = 1; i <= 4; ++i) {
        CircleArc o = overlap_arc(net, i);
        CHECK(arcs_equal(o, interval_L(net, i, net.n_at(i))));
        // A_i ⊔ O_{i+1} = L_1(v_i)
        CircleArc a = a_region(net, i);
        CircleArc o_next = overlap_arc(net, mod4(i + 1));
        CHECK(angdist(a.right, o_next.left) < 1e-12);
        CHECK(to_double(abs(a.length() + o_next.length() - interval_L(net, i, 1).length())) <
              1e-12);
        // O_i sits leftmost in R_2(v_{i+1}), rightmost in L_1(v_{i-1}), inside R_1(v_{i+2})
        CHECK(angdist(o.left, interval_R(net, mod4(i + 1), 2).left) < 1e-12);
        CHECK(angdist(o.right, interval_L(net, mod4(i - 1), 1).right) < 1e-12);
        CircleArc r1 = interval_R(net, mod4(i + 2), 1);
        CHECK(arc_contains(r1, o.left));
        CHECK(to_double(ccw_delta(r1.left.angle, o.right.angle)) <=
              to_double(r1.length()) + 1e-12);
    }
}

TEST_CASE("partition structure of P") {
    NetData net = make_net(6, 6, 3);
    auto is_w = [&](const CirclePoint& p) { return nearest_w_index(net, p, 1e-9) >= 0; };
    auto is_cell = [&](const CircleArc& a) {
        for (const auto& c : net.cells)
            if (arcs_equal(a, c)) return true;
        return false;
    };
    for (int i = 1; i <= 4; ++i) {
        for (int r = 2; r <= net.n_at(i); ++r) CHECK(is_cell(interval_L(net, i, r)));
        for (int s = 3; s <= net.n_at(i); ++s) CHECK(is_cell(interval_R(net, i, s)));
        // unions of cells: endpoints land in W
        for (const CircleArc& a :
             {interval_L(net, i, 1), interval_R(net, i, 1), interval_R(net, i, 2)}) {
            CHECK(is_w(a.left));
            CHECK(is_w(a.right));
        }
    }
}

TEST_CASE("branch_of totality and edges") {
    NetData net = make_net(8, 4, 3);
    for (int i = 1; i <= 4; ++i) {
        CHECK(branch_of(net, net.a(i, 1)) == i);
        // a_i^{n_i} = a_{i+1}^1 starts the next branch
        CHECK(branch_of(net, net.a(i, net.n_at(i))) == mod4(i + 1));
    }
    std::mt19937_64 rng(31);
    for (int k = 0; k < 10000; ++k) {
        CirclePoint x(uniform_angle(rng));
        int hits = 0;
        for (int i = 1; i <= 4; ++i)
            hits += arc_contains(CircleArc{net.a(i, 1), net.a(i, net.n_at(i))}, x, 0.0);
        CHECK(hits == 1);
    }
}

TEST_CASE("fan seeds agree with the first ideal endpoint rule") {
    NetData net = make_net(4, 6, 2);
    for (int i = 1; i <= 4; ++i) {
        Geodesic ell = net.domain.side_l(i);
        CHECK(angdist(net.a(i, 1), ell.e1) < 1e-12);
        CHECK(angdist(net.a(i, net.n_at(i) + 1), ell.e2) < 1e-12);
    }
}
