#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "bsmap/dynamics.hpp"

namespace bsmap {

struct AlphaCandidate {
    CirclePoint alpha;
    int overlap_index;
    bool attracting;
};

struct HyperbolicAlpha {
    CirclePoint attracting, repelling;
    std::vector<AlphaCandidate> in_overlap;  // fixed points lying in ∪O_i
};

// fixed points of a hyperbolic word and their overlap membership;
// throws NotHyperbolicMap
HyperbolicAlpha hyperbolic_alpha(const NetData& net, const GroupWord& w);

// Surjectivity of f_α per the three-way characterization: n_i > 2, or
// n_i = 2 with n_{i+2} > 2, or α in the closure of M_1.
bool surjectivity_predicate(const NetData& net, int i, const CirclePoint& alpha,
                            const MatchingTable& table);

struct Coverage {
    bool surjective;
    std::vector<CircleArc> gaps;  // maximal uncovered arcs
    double uncovered_length;
};

// exact union of the branch-image arcs against the full circle
Coverage surjectivity_empirical(const BoundaryMap& map);

enum class MarkovVerdict { Markov, NotMarkovWithinCap };

struct OrbitClosure {
    long preperiod = 0, period = 0;
};

struct MarkovResult {
    MarkovVerdict verdict;
    std::vector<CirclePoint> w_alpha;  // sorted; filled when Markov
    std::vector<CircleArc> cells;      // P_α
    std::array<OrbitClosure, 2> closures;  // orbit of α, orbit of T_{i−1}α
    long iterations = 0;
    std::size_t from_w = 0, from_alpha = 0, from_t_alpha = 0;  // endpoint provenance
};

// grows W_α by iterating f_α on α and T_{i−1}α; a recurrence candidate is
// accepted only after its closing group word is verified to fix the point
MarkovResult markov_check(const BoundaryMap& map, const Caps& caps);

struct TransitionMatrix {
    int size = 0;
    std::vector<std::vector<std::uint64_t>> rows;

    bool get(int j, int k) const { return rows[j][k >> 6] >> (k & 63) & 1; }
    void set(int j, int k) { rows[j][k >> 6] |= std::uint64_t(1) << (k & 63); }
};

// entry (j,k) true iff the one-step image of cell j covers cell k;
// image endpoints must land in the endpoint set (NotMarkovCell otherwise)
TransitionMatrix transition_matrix(const BoundaryMap& map,
                                   const std::vector<CirclePoint>& endpoints,
                                   const std::vector<CircleArc>& cells);

struct Aperiodicity {
    bool aperiodic;
    long power = 0;  // a compositional power covering everything, when aperiodic
};

Aperiodicity aperiodicity_check(const TransitionMatrix& t);

struct AlphaSpec {
    std::optional<GroupWord> word;
    std::optional<std::string> angle;            // decimal radians
    std::optional<bool> pick_attracting;         // disambiguation when both fixed points qualify
};

struct AnalysisReport {
    Signature sig;
    std::string alpha_angle;  // radians, 17 significant digits
    std::optional<std::string> alpha_word;
    int overlap_index = 0;
    bool surjective_predicate = false;
    bool surjective_empirical = false;
    MarkovVerdict markov = MarkovVerdict::NotMarkovWithinCap;
    std::optional<std::size_t> w_alpha_size;
    std::optional<std::array<long, 4>> cycle_lengths;  // preperiod/period per orbit
    std::optional<bool> aperiodic;
    std::optional<long> aperiodic_power;
    double m1_left = 0, m1_right = 0;
    double matching_residual = 0;
    std::map<std::string, double> timings_ms;
};

// full pipeline: build → net → α resolution → matching → surjectivity both
// ways → markov → aperiodicity, enforcing the predicate/empirical agreement
// and the aperiodic ⟺ surjective equivalence among Markov cases
AnalysisReport analyze(const Signature& sig, const AlphaSpec& spec, const Config& cfg);

}  // namespace bsmap
