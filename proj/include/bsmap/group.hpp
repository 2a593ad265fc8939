#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bsmap/config.hpp"
#include "bsmap/geometry.hpp"

namespace bsmap {

// index helpers on {1,2,3,4}; i±1 means the representative mod 4
int mod4(int i);
int sigma(int i);  // side-pairing partner index: even ↦ i−1, odd ↦ i+1
int rho(int i);    // sigma(i) + 1; vertex image index: T_i(v_i) = v_{rho(i)}

struct Signature {
    int m1 = 0, m2 = 0, m3 = 0;

    int at(int k) const { return k == 1 ? m1 : (k == 2 ? m2 : m3); }
    bool operator==(const Signature&) const = default;
};

enum class SignatureVerdict { InE, ExtensionImpossible, NotHyperbolic, Degenerate };

struct SignatureClass {
    SignatureVerdict verdict;
    std::optional<Signature> canonical;  // set only for InE
};

const char* verdict_name(SignatureVerdict v);

// Signature gate plus the ordering rules of the admissible set:
// both of m1, m2 even, and any 2 in the signature placed at m3.
// Throws InvalidOrder when some m_i < 2.
SignatureClass classify_signature(int m1, int m2, int m3);

struct GroupWord {
    std::vector<int> letters;  // over {1,2,3,4}; leftmost letter is the outermost factor

    static GroupWord parse(const std::string& comma_separated);
    std::string str() const;
};

// The Bowen-Series quadrilateral: v2, v4 on the vertical diameter, v1..v4
// counter-clockwise, internal angles π/m3 at v1,v3 and 2π/m2, 2π/m1 at v2, v4.
struct FundamentalDomain {
    Signature sig;
    std::array<int, 4> n;             // (m3, m2/2, m3, m1/2)
    std::array<DiskPoint, 4> vertex;  // v1..v4
    std::array<MoebiusMap, 4> pairing;

    const DiskPoint& v(int i) const { return vertex[mod4(i) - 1]; }
    const MoebiusMap& T(int i) const { return pairing[mod4(i) - 1]; }
    int n_at(int i) const { return n[mod4(i) - 1]; }

    Geodesic side_r(int i) const;  // r_i = geodesic segment carrier through v_i, v_{i+1}
    Geodesic side_l(int i) const;  // ℓ_i through v_{i−1}, v_i (same as r_{i−1})
};

// Builds the domain for a canonical signature (classify_signature must give InE).
// Throws SignatureRejected / PlacementFailure.
FundamentalDomain build_domain(const Signature& sig, const Tolerances& tol = {});

struct RelationReport {
    struct Entry {
        std::string name;
        double residual;
    };
    std::vector<Entry> entries;
    double max_residual = 0;

    bool pass(double tol) const { return max_residual < tol; }
};

// residuals of the side-pairing relation block plus the elliptic orders
RelationReport verify_relations(const FundamentalDomain& fd);

// ordered product of the named generators; empty word means the identity
MoebiusMap word_to_map(const FundamentalDomain& fd, const GroupWord& w);

}  // namespace bsmap
