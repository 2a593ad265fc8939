#include "bsmap/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "bsmap/errors.hpp"

namespace bsmap {

using nlohmann::json;

std::string domain_to_json(const NetData& net) {
    const FundamentalDomain& fd = net.domain;
    json j;
    j["signature"] = {fd.sig.m1, fd.sig.m2, fd.sig.m3};
    j["n"] = fd.n;
    json verts = json::array();
    for (const auto& v : fd.vertex) verts.push_back({to_double(v.re), to_double(v.im)});
    j["vertices"] = verts;
    json gens = json::array();
    for (const auto& t : fd.pairing)
        gens.push_back({to_double(t.a.re), to_double(t.a.im), to_double(t.b.re), to_double(t.b.im)});
    j["generators"] = gens;

    json eps = json::object();
    for (int i = 1; i <= 4; ++i) {
        json fan = json::array();
        for (const auto& p : net.fan(i).endpoints) fan.push_back(to_double(p.angle));
        eps[std::to_string(i)] = fan;
    }
    j["endpoints"] = eps;
    json w = json::array();
    for (const auto& p : net.w_points) w.push_back(to_double(p.angle));
    j["W"] = w;
    json cells = json::array();
    for (const auto& c : net.cells)
        cells.push_back({to_double(c.left.angle), to_double(c.right.angle)});
    j["cells"] = cells;
    return j.dump(2);
}

FundamentalDomain domain_from_json(const std::string& text) {
    json j = json::parse(text);
    FundamentalDomain fd;
    fd.sig = {j["signature"][0], j["signature"][1], j["signature"][2]};
    for (int k = 0; k < 4; ++k) fd.n[k] = j["n"][k];
    for (int k = 0; k < 4; ++k) {
        fd.vertex[k] = DiskPoint(real(j["vertices"][k][0].get<double>()),
                                 real(j["vertices"][k][1].get<double>()));
        cplx a(real(j["generators"][k][0].get<double>()), real(j["generators"][k][1].get<double>()));
        cplx b(real(j["generators"][k][2].get<double>()), real(j["generators"][k][3].get<double>()));
        fd.pairing[k] = MoebiusMap(a, b);
    }
    return fd;
}

std::string report_to_json(const AnalysisReport& rep) {
    json j;
    j["signature"] = {rep.sig.m1, rep.sig.m2, rep.sig.m3};
    json alpha;
    alpha["angle"] = rep.alpha_angle;
    if (rep.alpha_word) alpha["word"] = *rep.alpha_word;
    alpha["overlap"] = rep.overlap_index;
    j["alpha"] = alpha;
    j["surjective"] = {{"predicate", rep.surjective_predicate},
                       {"empirical", rep.surjective_empirical}};
    json markov;
    markov["verdict"] = rep.markov == MarkovVerdict::Markov ? "Markov" : "NotMarkovWithinCap";
    if (rep.w_alpha_size) markov["W_alpha_size"] = *rep.w_alpha_size;
    if (rep.cycle_lengths) markov["cycle_lengths"] = *rep.cycle_lengths;
    j["markov"] = markov;
    json ap;
    if (rep.aperiodic) {
        ap["verdict"] = *rep.aperiodic;
        if (rep.aperiodic_power) ap["power"] = *rep.aperiodic_power;
    } else {
        ap["verdict"] = nullptr;
    }
    j["aperiodic"] = ap;
    j["matching"] = {{"M1", {rep.m1_left, rep.m1_right}}, {"residual", rep.matching_residual}};
    json t = json::object();
    for (const auto& [k, v] : rep.timings_ms) t[k] = v;
    j["timings_ms"] = t;
    return j.dump(2);
}

namespace {

void plot_row(std::ostream& os, double x, double fx, int branch, int gen) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", x, fx, branch, gen);
    os << buf;
}

}  // namespace

void write_plot_csv(std::ostream& os, const BoundaryMap& map, int samples) {
    const NetData& net = *map.net;
    os << "x_angle,f_angle,branch_index,generator\n";
    struct Row {
        double x;
        int order;  // left-limit rows sort before the branch's own value
        double fx;
        int branch, gen;
    };
    std::vector<Row> rows;
    int nb = static_cast<int>(map.branches.size());
    for (int b = 0; b < nb; ++b) {
        const Branch& br = map.branches[b];
        const MoebiusMap& t = net.domain.T(br.generator);
        // the jump at br.left: value of the previous branch's limit, then ours
        int prev = (b + nb - 1) % nb;
        const Branch& pb = map.branches[prev];
        rows.push_back({to_double(br.arc.left.angle), 0,
                        to_double(apply_boundary(net.domain.T(pb.generator), br.arc.left).angle),
                        prev, pb.generator});
        rows.push_back({to_double(br.arc.left.angle), 1,
                        to_double(apply_boundary(t, br.arc.left).angle), b, br.generator});
    }
    for (int s = 0; s < samples; ++s) {
        real x = two_pi_v() * (2 * s + 1) / (2 * samples);
        CirclePoint p{x};
        for (int b = 0; b < nb; ++b) {
            if (arc_contains(map.branches[b].arc, p, 0.0)) {
                const MoebiusMap& t = net.domain.T(map.branches[b].generator);
                rows.push_back({to_double(x), 1, to_double(apply_boundary(t, p).angle), b,
                                map.branches[b].generator});
                break;
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.x < b.x || (a.x == b.x && a.order < b.order);
    });
    for (const auto& r : rows) plot_row(os, r.x, r.fx, r.branch, r.gen);
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << "alpha,surjective_predicate,surjective_empirical,markov_within_cap\n";
    for (const auto& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%d\n", r.alpha, r.surjective_predicate ? 1 : 0,
                      r.surjective_empirical ? 1 : 0, r.markov_within_cap ? 1 : 0);
        os << buf;
    }
}

}  // namespace bsmap
