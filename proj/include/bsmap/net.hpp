#pragma once

#include <array>
#include <vector>

#include "bsmap/group.hpp"

namespace bsmap {

// The net geodesics through one vertex: 2n_i circle endpoints a_i^1..a_i^{2n_i}
// in counter-clockwise order, with a_i^1 the endpoint of g(ℓ_i) beyond v_{i−1}.
struct VertexFan {
    int vertex = 0;          // 1..4
    MoebiusMap stabilizer;   // T2T4 at v1, T2 at v2, T4T2 at v3, T4 at v4
    std::vector<CirclePoint> endpoints;

    int n() const { return static_cast<int>(endpoints.size()) / 2; }
    // 1-based fan label, mod 2n_i
    const CirclePoint& a(int k) const;
};

struct NetData {
    FundamentalDomain domain;
    Tolerances tol;
    std::array<VertexFan, 4> fans;
    std::vector<CirclePoint> w_points;  // W, sorted by angle
    std::vector<CircleArc> cells;       // the partition P

    const VertexFan& fan(int i) const { return fans[mod4(i) - 1]; }
    int n_at(int i) const { return domain.n_at(i); }
    const CirclePoint& a(int i, int k) const { return fan(i).a(k); }
};

// Computes the vertex fans, W and P; asserts the fan sizes, the labeling
// interleaving and the gluing identities. Throws FanCountMismatch / GluingFailure.
NetData build_net(const FundamentalDomain& fd, const Tolerances& tol = {});

// L_j(v_i) = [a_i^{2n_i−j}, a_i^{2n_i−j+1}), R_j(v_i) = [a_i^{j−1}, a_i^j), 1 ≤ j ≤ n_i
CircleArc interval_L(const NetData& net, int i, int j);
CircleArc interval_R(const NetData& net, int i, int j);

// O_i = [a_i^{n_i}, a_i^{n_i+1}) and A_i = L_1(v_i) \ O_{i+1} (a single arc)
CircleArc overlap_arc(const NetData& net, int i);
CircleArc a_region(const NetData& net, int i);

// the unique i with x ∈ [a_i^1, a_i^{n_i})
int branch_of(const NetData& net, const CirclePoint& x);

// index of the nearest W point within eps, or -1
int nearest_w_index(const NetData& net, const CirclePoint& x, double eps);

}  // namespace bsmap
