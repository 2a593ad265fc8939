#include "bsmap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsmap/errors.hpp"

namespace bsmap {

namespace {

double log2_snap_floor(double log2_lambda) {
    // absolute error carried by an orbit point after expansion 2^log2_lambda
    return log2_lambda - static_cast<double>(working_precision_bits()) + 16.0;
}

}  // namespace

const Branch& BoundaryMap::branch_at(const CirclePoint& x) const {
    double eps = net->tol.eps_point;
    for (const auto& br : branches)
        if (arc_contains(br.arc, x, eps)) return br;
    throw Error("branch_at: branches fail to cover the point");
}

BoundaryMap base_map(const NetData& net) {
    BoundaryMap map;
    map.net = &net;
    for (int i = 1; i <= 4; ++i)
        map.branches.push_back({{net.a(i, 1), net.a(i, net.n_at(i))}, mod4(i - 1)});
    std::sort(map.branches.begin(), map.branches.end(),
              [](const Branch& a, const Branch& b) { return a.arc.left.angle < b.arc.left.angle; });
    return map;
}

BoundaryMap deformed_map(const NetData& net, const CirclePoint& alpha) {
    int oi = 0;
    for (int i = 1; i <= 4; ++i)
        if (arc_contains(overlap_arc(net, i), alpha, net.tol.eps_point)) { oi = i; break; }
    if (oi == 0) throw AlphaOutsideOverlap("alpha lies in no overlap interval");

    CircleArc o = overlap_arc(net, oi);
    bool empty = to_double(circ_dist(alpha.angle, o.left.angle)) < net.tol.eps_point;
    CirclePoint a_eff = empty ? o.left : alpha;

    BoundaryMap map = base_map(net);
    Deformation def;
    def.overlap_index = oi;
    def.alpha = a_eff;
    def.differing = CircleArc(o.left, a_eff, empty);

    int gen_d = mod4(oi - 1);
    if (!empty) {
        // O_i starts the branch [a_{i+1}^1, a_{i+1}^{n_{i+1}}); split it at alpha
        for (auto it = map.branches.begin(); it != map.branches.end(); ++it) {
            if (to_double(circ_dist(it->arc.left.angle, o.left.angle)) < net.tol.eps_point) {
                Branch tail{{a_eff, it->arc.right}, it->generator};
                it->arc = CircleArc(o.left, a_eff);
                it->generator = gen_d;
                map.branches.insert(it + 1, tail);
                break;
            }
        }
    }
    const MoebiusMap& t = net.domain.T(gen_d);
    real dmin = t.boundary_derivative(def.differing.left);
    real dr = t.boundary_derivative(a_eff);
    if (dr < dmin) dmin = dr;
    def.expansive_on_d = to_double(dmin) > 1.0 - 1e-9;
    map.deformation = def;
    return map;
}

std::pair<CirclePoint, int> f_eval(const NetData& net, const CirclePoint& x) {
    int i = branch_of(net, x);
    int g = mod4(i - 1);
    return {apply_boundary(net.domain.T(g), x), g};
}

int theta_of(const NetData& net, int i) {
    i = mod4(i);
    int t = i;
    for (int k = 0; k < net.n_at(i) - 1; ++k) t = rho(t);
    int closed = (i % 2 == 0) ? i : (net.n_at(i) % 2 ? i : rho(i));
    if (t != closed) throw Error("theta: iterate disagrees with the closed form");
    return t;
}

std::vector<int> index_sequence(const NetData& net, int i0, int K) {
    std::vector<int> seq{mod4(i0)};
    for (int k = 0; k < K; ++k) seq.push_back(mod4(theta_of(net, seq.back()) + 1));
    int period = net.domain.sig.m3 % 2 == 0 ? 2 : 4;
    for (size_t k = 0; k + period < seq.size(); ++k)
        if (seq[k] != seq[k + period]) throw Error("index sequence is not purely periodic");
    for (size_t k = 0; k + 1 < seq.size(); ++k)
        if ((seq[k] + seq[k + 1]) % 2 == 0) throw Error("index sequence parity fails to alternate");
    return seq;
}

MoebiusMap giant_step_map(const NetData& net, int i) {
    i = mod4(i);
    MoebiusMap acc = MoebiusMap::identity();
    int k = i;
    for (int step = 0; step < net.n_at(i) - 1; ++step) {
        acc = compose(net.domain.T(k), acc);
        k = rho(k);
    }
    CircleArc o = overlap_arc(net, i);
    CircleArc l1 = interval_L(net, theta_of(net, i), 1);
    if (to_double(circ_dist(apply_boundary(acc, o.left).angle, l1.left.angle)) > net.tol.eps_point ||
        to_double(circ_dist(apply_boundary(acc, o.right).angle, l1.right.angle)) > net.tol.eps_point)
        throw Error("giant step image is not L_1(v_theta(i))");
    return acc;
}

Stepper::Stepper(const BoundaryMap& map, CirclePoint x, bool strict)
    : map_(map), x_(std::move(x)), start_(x_), strict_(strict) {}

const Branch* Stepper::decide_branch() {
    const double eps_point = map_.net->tol.eps_point;
    const unsigned bits = working_precision_bits();

    // nearest branch endpoint (all are left endpoints of some branch)
    const Branch* nearest = nullptr;
    real best = two_pi_v();
    for (const auto& br : map_.branches) {
        real d = circ_dist(x_.angle, br.arc.left.angle);
        if (d < best) { best = d; nearest = &br; }
    }
    double d_log2 = to_double(best) > 0 ? std::log2(to_double(best)) : -1e9;

    if (strict_ && to_double(best) < eps_point) {
        // near-endpoint decision: re-derive the point from the accumulated word
        if (!letters_.empty()) {
            MoebiusMap w = MoebiusMap::identity();
            for (int g : letters_) w = compose(map_.net->domain.T(g), w);
            x_ = apply_boundary(w, start_);
            best = two_pi_v();
            for (const auto& br : map_.branches) {
                real d = circ_dist(x_.angle, br.arc.left.angle);
                if (d < best) { best = d; nearest = &br; }
            }
            d_log2 = to_double(best) > 0 ? std::log2(to_double(best)) : -1e9;
        }
        double floor_log2 = log2_snap_floor(log2_lambda_);
        if (d_log2 < floor_log2) {
            if (floor_log2 > std::log2(eps_point))
                throw PrecisionExhausted("branch decision ambiguous at working precision");
            x_ = nearest->arc.left;  // indistinguishable from the endpoint: left-closed
            snapped_ = true;
            return nearest;
        }
    }
    if (d_log2 < -0.5 * static_cast<double>(bits)) {
        x_ = nearest->arc.left;
        snapped_ = true;
        return nearest;
    }
    for (const auto& br : map_.branches)
        if (arc_contains(br.arc, x_, 0.0)) return &br;
    throw Error("stepper: branches fail to cover the point");
}

int Stepper::step() {
    const Branch* br = decide_branch();
    const MoebiusMap& t = map_.net->domain.T(br->generator);
    log2_lambda_ += std::log2(std::max(to_double(t.boundary_derivative(x_)), 1e-300));
    x_ = apply_boundary(t, x_);
    letters_.push_back(br->generator);
    return br->generator;
}

OrbitRecord orbit(const BoundaryMap& map, const CirclePoint& x, int steps) {
    OrbitRecord rec;
    rec.points.push_back(x);
    Stepper st(map, x, /*strict=*/true);
    MoebiusMap word = MoebiusMap::identity();
    for (int p = 0; p < steps; ++p) {
        int g = st.step();
        rec.letters.push_back(g);
        word = compose(map.net->domain.T(g), word);
        rec.words.push_back(word);
        rec.points.push_back(st.point());
    }
    rec.snapped = st.snapped();
    return rec;
}

const MatchingEntry* MatchingTable::entry_of(const CirclePoint& x, double eps) const {
    for (const auto& e : entries)
        if (arc_contains(e.arc, x, eps)) return &e;
    return nullptr;
}

double MatchingTable::boundary_distance(const CirclePoint& x) const {
    double best = 1e30;
    for (const auto& e : entries) {
        best = std::min(best, to_double(circ_dist(x.angle, e.arc.left.angle)));
        best = std::min(best, to_double(circ_dist(x.angle, e.arc.right.angle)));
    }
    return best;
}

MatchingTable matching_sets(const NetData& net, int i, int ell_max, double residual_target) {
    i = mod4(i);
    MatchingTable table;
    table.overlap_index = i;
    CircleArc o = overlap_arc(net, i);
    table.overlap_length = o.length();

    CirclePoint lo = o.left, hi = o.right;
    MoebiusMap acc = MoebiusMap::identity();
    long r = 0;
    int k = i;
    table.residual = table.overlap_length;
    for (int ell = 1; ell <= ell_max; ++ell) {
        acc = compose(giant_step_map(net, k), acc);
        r += net.n_at(k) - 1;
        int knext = mod4(theta_of(net, k) + 1);
        CirclePoint split = apply_boundary(acc.inverse(), overlap_arc(net, knext).left);
        if (!arc_contains(CircleArc(lo, hi), split, 0.0)) {
            // split point escaped the residual interval: tail is at the precision
            // floor, fold it into this entry and stop
            table.entries.push_back({ell, CircleArc(lo, hi), r});
            table.residual = 0;
            return table;
        }
        table.entries.push_back({ell, CircleArc(lo, split), r});
        lo = split;
        table.residual = ccw_delta(lo.angle, hi.angle);
        if (to_double(table.residual) < residual_target) return table;
        k = knext;
    }
    return table;
}

MatchingOutcome matching_index(const NetData& net, const CirclePoint& x, int cap) {
    int oi = 0;
    for (int i = 1; i <= 4; ++i)
        if (arc_contains(overlap_arc(net, i), x, net.tol.eps_point)) { oi = i; break; }
    if (oi == 0) throw AlphaOutsideOverlap("matching_index: point lies in no overlap");

    BoundaryMap f = base_map(net);
    Stepper xs(f, x, /*strict=*/true);
    Stepper ys(f, apply_boundary(net.domain.T(mod4(oi - 1)), x), /*strict=*/true);

    const unsigned bits = working_precision_bits();
    MatchingOutcome out;
    int k = oi;
    for (int ell = 1; ell <= cap; ++ell) {
        for (int s = 0; s < net.n_at(k) - 1; ++s) { xs.step(); ys.step(); }
        out.giant_r += net.n_at(k) - 1;
        // equality threshold tracks the accumulated expansion of both orbits
        double lam = std::max(xs.log2_expansion(), ys.log2_expansion());
        double eps_log2 = std::max(-0.5 * static_cast<double>(bits),
                                   lam - static_cast<double>(bits) + 16.0);
        if (eps_log2 > std::log2(1e-6))
            throw PrecisionExhausted("matching_index: orbit outgrew the working precision");
        CirclePoint fx = f_eval(net, xs.point()).first;
        if (to_double(circ_dist(fx.angle, ys.point().angle)) < std::exp2(eps_log2)) {
            out.ell = ell;
            return out;
        }
        k = mod4(theta_of(net, k) + 1);
        if (!arc_contains(overlap_arc(net, k), xs.point(), net.tol.eps_point))
            out.anomaly = true;
    }
    out.ell = std::nullopt;
    return out;
}

CollisionAuditResult collision_audit(const BoundaryMap& map, const CirclePoint& x,
                                     long steps, int ell_cap) {
    if (!map.deformation) throw Error("collision_audit requires a deformed map");
    const NetData& net = *map.net;
    const CircleArc& d_arc = map.deformation->differing;
    const unsigned bits = working_precision_bits();

    CollisionAuditResult res;
    Stepper outer(map, x, /*strict=*/false);
    for (long j = 0; j < steps; ++j) {
        CirclePoint z = outer.point();
        if (!d_arc.empty_flag && arc_contains(d_arc, z, 0.0)) {
            ++res.d_entries;
            CollisionEvent ev{j, 0, 0};
            MatchingOutcome mi = matching_index(net, z, ell_cap);
            if (mi.ell) {
                ev.ell = *mi.ell;
                long r = mi.giant_r;
                // target f^{r+1}(z) on the f-orbit
                BoundaryMap f = base_map(net);
                Stepper ft(f, z, /*strict=*/true);
                for (long s = 0; s < r + 1; ++s) ft.step();
                CirclePoint target = ft.point();
                double eps_log2 = std::max(-0.5 * static_cast<double>(bits),
                                           ft.log2_expansion() - bits + 16.0);
                real eps(std::exp2(eps_log2));
                // f_alpha powers of z up to r+1
                std::vector<CirclePoint> w{z};
                Stepper fa(map, z, /*strict=*/false);
                for (long s = 0; s < r + 1; ++s) { fa.step(); w.push_back(fa.point()); }
                auto hits = [&](const CirclePoint& p) {
                    return circ_dist(p.angle, target.angle) < eps;
                };
                if (hits(w[r + 1])) ev.form = 1;
                else if (hits(f_eval(net, w[r]).first)) ev.form = 2;
                else if (r >= 1 && hits(f_eval(net, f_eval(net, w[r - 1]).first).first)) ev.form = 3;
            }
            res.events.push_back(ev);
        }
        outer.step();
    }
    return res;
}

}  // namespace bsmap
