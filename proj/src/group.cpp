#include "bsmap/group.hpp"

#include <algorithm>
#include <sstream>

#include "bsmap/errors.hpp"

namespace bsmap {

int mod4(int i) {
    int r = (i - 1) % 4;
    if (r < 0) r += 4;
    return r + 1;
}

int sigma(int i) {
    i = mod4(i);
    return mod4(i % 2 == 0 ? i - 1 : i + 1);
}

int rho(int i) { return mod4(sigma(i) + 1); }

const char* verdict_name(SignatureVerdict v) {
    switch (v) {
        case SignatureVerdict::InE: return "InE";
        case SignatureVerdict::ExtensionImpossible: return "ExtensionImpossible";
        case SignatureVerdict::NotHyperbolic: return "NotHyperbolic";
        case SignatureVerdict::Degenerate: return "Degenerate";
    }
    return "?";
}

SignatureClass classify_signature(int m1, int m2, int m3) {
    std::array<int, 3> m{m1, m2, m3};
    for (int x : m)
        if (x < 2) throw InvalidOrder("signature entries must be >= 2");

    // hyperbolic iff 1/m1 + 1/m2 + 1/m3 < 1, decided in integers
    long p = static_cast<long>(m[0]) * m[1] * m[2];
    long s = static_cast<long>(m[1]) * m[2] + static_cast<long>(m[0]) * m[2] +
             static_cast<long>(m[0]) * m[1];
    if (s >= p) return {SignatureVerdict::NotHyperbolic, std::nullopt};

    int odd = 0;
    for (int x : m) odd += x % 2;
    if (odd >= 2) return {SignatureVerdict::ExtensionImpossible, std::nullopt};

    bool has_two = std::find(m.begin(), m.end(), 2) != m.end();
    if (has_two) {
        // a 2 must sit at position 3; the rest must be even
        std::array<int, 3> rest{};
        int cnt = 0;
        bool used = false;
        for (int x : m) {
            if (x == 2 && !used) { used = true; continue; }
            rest[cnt++] = x;
        }
        if (rest[0] % 2 || rest[1] % 2)
            return {SignatureVerdict::Degenerate, std::nullopt};
        return {SignatureVerdict::InE, Signature{rest[0], rest[1], 2}};
    }

    // no 2: the odd entry (if any) goes to position 3, preserving the order of the rest
    std::array<int, 3> even{};
    int cnt = 0, odd_entry = 0;
    for (int x : m) (x % 2 ? odd_entry : even[cnt++]) = x;
    if (odd == 1) return {SignatureVerdict::InE, Signature{even[0], even[1], odd_entry}};
    return {SignatureVerdict::InE, Signature{m[0], m[1], m[2]}};
}

GroupWord GroupWord::parse(const std::string& s) {
    GroupWord w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int v = std::stoi(tok);
        if (v < 1 || v > 4) throw Error("word letters must be in 1..4");
        w.letters.push_back(v);
    }
    return w;
}

std::string GroupWord::str() const {
    std::string out;
    for (size_t k = 0; k < letters.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(letters[k]);
    }
    return out;
}

Geodesic FundamentalDomain::side_r(int i) const { return geodesic_between(v(i), v(i + 1)); }
Geodesic FundamentalDomain::side_l(int i) const { return geodesic_between(v(i - 1), v(i)); }

namespace {

// pick the rotation sign for which T maps the carrier of r_i onto the carrier of r_sigma(i)
MoebiusMap oriented_pairing(const FundamentalDomain& fd, int i, double eps_geo) {
    const real& m_angle = two_pi_v();
    real phi = (i == 2 || i == 1) ? m_angle / fd.sig.m2 : m_angle / fd.sig.m1;
    const DiskPoint& c = (i == 2 || i == 1) ? fd.v(2) : fd.v(4);
    Geodesic from = fd.side_r(i);
    Geodesic to = fd.side_r(sigma(i));
    for (int s : {+1, -1}) {
        MoebiusMap t = elliptic_about(c, s * phi);
        Geodesic image(apply_boundary(t, from.e1), apply_boundary(t, from.e2));
        if (to_double(image.endpoint_gap(to)) < eps_geo) return t;
    }
    throw PlacementFailure("no rotation sign pairs the sides");
}

}  // namespace

FundamentalDomain build_domain(const Signature& sig, const Tolerances& tol) {
    auto cls = classify_signature(sig.m1, sig.m2, sig.m3);
    if (cls.verdict != SignatureVerdict::InE || !(sig == *cls.canonical))
        throw SignatureRejected("build_domain requires a canonical signature in the admissible set");

    const real& pi = pi_v();
    real a2 = pi / sig.m2;  // half the internal angle at v2
    real a4 = pi / sig.m1;  // half the internal angle at v4
    real a1 = pi / sig.m3;  // internal angle at v1

    // triangle v2-v4-v1 with those angles; hyperbolic law of cosines
    real d24 = acosh((cos(a2) * cos(a4) + cos(a1)) / (sin(a2) * sin(a4)));
    real d41 = acosh((cos(a4) * cos(a1) + cos(a2)) / (sin(a4) * sin(a1)));

    // Every vertical placement satisfies the isometric-circle conditions (the
    // circle |T'| = 1 is exactly {|Tz| = |z|}, and each pairing sends side
    // endpoints to mirror images of equal modulus), so we pin the origin at
    // the hyperbolic midpoint of [v4, v2] and assert the conditions below.
    real half = d24 / 2;
    auto radial = [](const real& d) { return (exp(d) - 1) / (exp(d) + 1); };
    FundamentalDomain fd;
    fd.sig = sig;
    fd.n = {sig.m3, sig.m2 / 2, sig.m3, sig.m1 / 2};
    fd.vertex[3] = DiskPoint(real(0), -radial(half));  // v4
    fd.vertex[1] = DiskPoint(real(0), radial(half));   // v2
    MoebiusMap lift = translate_to(fd.vertex[3]);
    cplx dir = unit_from_angle(pi / 2 - a4) * radial(d41);
    fd.vertex[0] = lift.apply(DiskPoint(dir));                            // v1
    fd.vertex[2] = DiskPoint(-fd.vertex[0].re, fd.vertex[0].im);          // v3

    fd.pairing[1] = oriented_pairing(fd, 2, tol.eps_geo);  // T2 about v2
    fd.pairing[3] = oriented_pairing(fd, 4, tol.eps_geo);  // T4 about v4
    fd.pairing[0] = fd.pairing[1].inverse();               // T1
    fd.pairing[2] = fd.pairing[3].inverse();               // T3

    // all four sides must coincide with the isometric circles of their pairings
    for (int i = 1; i <= 4; ++i) {
        Geodesic side = fd.side_r(i);
        Geodesic iso = isometric_circle(fd.T(i));
        if (to_double(side.endpoint_gap(iso)) > tol.eps_geo)
            throw PlacementFailure("side r_" + std::to_string(i) +
                                   " is off the isometric circle of T_" + std::to_string(i));
    }
    RelationReport rep = verify_relations(fd);
    if (!rep.pass(1e3 * tol.eps_mat))
        throw PlacementFailure("side-pairing relations fail: max residual " +
                               std::to_string(rep.max_residual));
    return fd;
}

RelationReport verify_relations(const FundamentalDomain& fd) {
    RelationReport rep;
    MoebiusMap id = MoebiusMap::identity();
    auto add = [&](std::string name, double r) {
        rep.entries.push_back({std::move(name), r});
        rep.max_residual = std::max(rep.max_residual, r);
    };
    for (int i = 1; i <= 4; ++i) {
        add("T_sigma(i)T_i=I, i=" + std::to_string(i),
            compose(fd.T(sigma(i)), fd.T(i)).max_entry_distance(id));
        add("T_rho(i)T_{i-1}=I, i=" + std::to_string(i),
            compose(fd.T(rho(i)), fd.T(i - 1)).max_entry_distance(id));
        // vertex relations T_{i-1}(v_i) = v_rho(i) = T_i(v_i)
        for (int g : {i - 1, i}) {
            DiskPoint im = fd.T(g).apply(fd.v(i));
            cplx diff = im.as_cplx() - fd.v(rho(i)).as_cplx();
            add("T_" + std::to_string(mod4(g)) + "(v_" + std::to_string(i) + ")=v_rho",
                to_double(diff.abs()));
        }
    }
    // elliptic orders: (T2T4)^m3, T2^m2, T4^m1 all ±I
    auto power = [](const MoebiusMap& m, int k) {
        MoebiusMap acc = MoebiusMap::identity();
        for (int j = 0; j < k; ++j) acc = compose(m, acc);
        return acc;
    };
    add("(T2T4)^m3=±I", power(compose(fd.T(2), fd.T(4)), fd.sig.m3).max_entry_distance(id));
    add("T2^m2=±I", power(fd.T(2), fd.sig.m2).max_entry_distance(id));
    add("T4^m1=±I", power(fd.T(4), fd.sig.m1).max_entry_distance(id));
    return rep;
}

MoebiusMap word_to_map(const FundamentalDomain& fd, const GroupWord& w) {
    MoebiusMap acc = MoebiusMap::identity();
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        acc = compose(fd.T(*it), acc);
    return acc;
}

}  // namespace bsmap
