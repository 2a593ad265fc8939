#pragma once

#include <optional>
#include <vector>

#include "bsmap/net.hpp"

namespace bsmap {

struct Branch {
    CircleArc arc;
    int generator;  // 1..4
};

struct Deformation {
    int overlap_index;      // i with α ∈ O_i
    CirclePoint alpha;
    CircleArc differing;    // D = [a_i^{n_i}, α), empty iff α = a_i^{n_i}
    bool expansive_on_d;    // D lies within the isometric circle of T_{i−1}
};

// Piecewise-Möbius circle map: the Bowen-Series f or a deformation f_α.
struct BoundaryMap {
    const NetData* net = nullptr;
    std::vector<Branch> branches;  // sorted by left endpoint, tiling the circle
    std::optional<Deformation> deformation;

    const Branch& branch_at(const CirclePoint& x) const;
};

BoundaryMap base_map(const NetData& net);

// f_α per the deformation family; throws AlphaOutsideOverlap
BoundaryMap deformed_map(const NetData& net, const CirclePoint& alpha);

// one application of the base map: (T_{i−1}(x), i−1) for x ∈ [a_i^1, a_i^{n_i})
std::pair<CirclePoint, int> f_eval(const NetData& net, const CirclePoint& x);

// index bookkeeping: θ(i) = ρ^{n_i−1}(i), cross-checked against its closed form
int theta_of(const NetData& net, int i);

// i_0 = i0, i_k = θ(i_{k−1}) + 1; returns i_0..i_K and checks pure periodicity
// (period 2 for even m3, else 4) with alternating parity
std::vector<int> index_sequence(const NetData& net, int i0, int K);

// the Möbius composite realizing f^{n_i−1} on O_i = L_{n_i}(v_i);
// asserted to carry O_i onto L_1(v_θ(i))
MoebiusMap giant_step_map(const NetData& net, int i);

// Orbit stepping. Strict mode re-derives near-endpoint branch decisions from
// the accumulated word and raises PrecisionExhausted when a decision stays
// ambiguous at the working precision; exploratory mode only snaps.
class Stepper {
  public:
    Stepper(const BoundaryMap& map, CirclePoint x, bool strict);

    int step();  // advances once, returns the generator applied
    const CirclePoint& point() const { return x_; }
    double log2_expansion() const { return log2_lambda_; }
    bool snapped() const { return snapped_; }

  private:
    const BoundaryMap& map_;
    CirclePoint x_;
    CirclePoint start_;
    std::vector<int> letters_;
    double log2_lambda_ = 0;
    bool strict_;
    bool snapped_ = false;

    const Branch* decide_branch();
};

struct OrbitRecord {
    std::vector<CirclePoint> points;  // x, f(x), ..., length steps+1
    std::vector<int> letters;         // generator indices, length steps
    std::vector<MoebiusMap> words;    // γ_p for p = 1..steps
    bool snapped = false;
};

// strict-mode orbit with γ_p word tracking: map^p(x) = γ_p[x]·x
OrbitRecord orbit(const BoundaryMap& map, const CirclePoint& x, int steps);

struct MatchingEntry {
    int ell;
    CircleArc arc;   // M_ℓ
    long giant_r;    // r_ℓ = Σ_{k<ℓ} (n_{i_k} − 1)
};

struct MatchingTable {
    int overlap_index;
    std::vector<MatchingEntry> entries;
    real residual;        // unclassified tail length
    real overlap_length;

    // entry whose arc contains x, if any
    const MatchingEntry* entry_of(const CirclePoint& x, double eps) const;
    // distance from x to the nearest M_ℓ boundary
    double boundary_distance(const CirclePoint& x) const;
};

// interval pullback of the matching decomposition O_i = ⊔ M_ℓ
MatchingTable matching_sets(const NetData& net, int i, int ell_max, double residual_target);

struct MatchingOutcome {
    std::optional<int> ell;  // nullopt = Unresolved (cap exceeded)
    long giant_r = 0;        // r_ℓ when resolved
    bool anomaly = false;    // some x_k left O_{i_k} before matching
};

// direct giant-step simulation oracle, independent of matching_sets
MatchingOutcome matching_index(const NetData& net, const CirclePoint& x, int cap);

struct CollisionEvent {
    long step;  // orbit index j of the D-entry
    int ell;    // matching index of the entry point (0 when unresolved)
    int form;   // 1..3 per the collision shapes; 0 = anomaly
};

struct CollisionAuditResult {
    std::vector<CollisionEvent> events;
    long d_entries = 0;
};

// follows the f_α-orbit of x and audits every entry into D against the three
// collision forms f_α^{r+1}, f∘f_α^{r}, f²∘f_α^{r−1} of the matching step r+1
CollisionAuditResult collision_audit(const BoundaryMap& map, const CirclePoint& x,
                                     long steps, int ell_cap);

}  // namespace bsmap
