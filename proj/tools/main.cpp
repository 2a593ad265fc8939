#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsmap/errors.hpp"
#include "bsmap/serialize.hpp"

using namespace bsmap;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSignature = 3;
constexpr int kExitPrecision = 4;
constexpr int kExitConsistency = 5;

struct CliOptions {
    Config cfg;
    int m1 = 0, m2 = 0, m3 = 0;
    std::string alpha_word, alpha_angle, fixed_point, out;
    int samples = 512;
    int overlap = 0;
    long markov_cap = 0;
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw Error("cannot open output file: " + path);
    return file;
}

Signature require_in_e(int m1, int m2, int m3) {
    auto cls = classify_signature(m1, m2, m3);
    if (cls.verdict != SignatureVerdict::InE)
        throw SignatureRejected(std::string("signature rejected: ") + verdict_name(cls.verdict));
    return *cls.canonical;
}

int cmd_check(const CliOptions& o) {
    auto cls = classify_signature(o.m1, o.m2, o.m3);
    nlohmann::json j;
    j["verdict"] = verdict_name(cls.verdict);
    if (cls.canonical)
        j["canonical"] = {cls.canonical->m1, cls.canonical->m2, cls.canonical->m3};
    std::ofstream f;
    open_out(o.out, f) << j.dump(2) << "\n";
    return cls.verdict == SignatureVerdict::InE ? 0 : kExitSignature;
}

int cmd_build(const CliOptions& o) {
    set_working_precision(o.cfg.precision_bits);
    Signature sig = require_in_e(o.m1, o.m2, o.m3);
    NetData net = build_net(build_domain(sig, o.cfg.tol), o.cfg.tol);
    std::ofstream f;
    open_out(o.out, f) << domain_to_json(net) << "\n";
    return 0;
}

BoundaryMap make_map(const NetData& net, const CliOptions& o) {
    if (!o.alpha_word.empty()) {
        GroupWord w = GroupWord::parse(o.alpha_word);
        HyperbolicAlpha ha = hyperbolic_alpha(net, w);
        if (ha.in_overlap.empty())
            throw NoFixedPointInOverlap("neither fixed point lies in an overlap");
        if (ha.in_overlap.size() == 2 && o.fixed_point.empty())
            throw AmbiguousFixedPoint("both fixed points qualify; pass --fixed-point");
        const AlphaCandidate* pick = &ha.in_overlap.front();
        for (const auto& c : ha.in_overlap)
            if (!o.fixed_point.empty() && c.attracting == (o.fixed_point == "attracting"))
                pick = &c;
        return deformed_map(net, pick->alpha);
    }
    if (!o.alpha_angle.empty())
        return deformed_map(net, CirclePoint(real(o.alpha_angle)));
    return base_map(net);
}

int cmd_plot(const CliOptions& o) {
    set_working_precision(o.cfg.precision_bits);
    Signature sig = require_in_e(o.m1, o.m2, o.m3);
    NetData net = build_net(build_domain(sig, o.cfg.tol), o.cfg.tol);
    BoundaryMap map = make_map(net, o);
    std::ofstream f;
    write_plot_csv(open_out(o.out, f), map, o.samples);
    return 0;
}

int cmd_analyze(const CliOptions& o) {
    AlphaSpec spec;
    if (!o.alpha_word.empty()) spec.word = GroupWord::parse(o.alpha_word);
    if (!o.alpha_angle.empty()) spec.angle = o.alpha_angle;
    if (!o.fixed_point.empty()) spec.pick_attracting = (o.fixed_point == "attracting");
    AnalysisReport rep = analyze(Signature{o.m1, o.m2, o.m3}, spec, o.cfg);
    std::ofstream f;
    open_out(o.out, f) << report_to_json(rep) << "\n";
    return 0;
}

int cmd_scan(const CliOptions& o) {
    set_working_precision(o.cfg.precision_bits);
    Signature sig = require_in_e(o.m1, o.m2, o.m3);
    NetData net = build_net(build_domain(sig, o.cfg.tol), o.cfg.tol);
    if (o.overlap < 1 || o.overlap > 4) throw Error("overlap index must be 1..4");
    MatchingTable table = matching_sets(net, o.overlap, o.cfg.caps.ell_max,
                                        o.cfg.caps.residual_target);
    CircleArc ov = overlap_arc(net, o.overlap);
    double excl = 10 * o.cfg.tol.eps_point;

    std::vector<real> alphas;
    for (int g = 0; g < o.cfg.grid; ++g) {
        real a = ov.left.angle + ov.length() * (2 * g + 1) / (2 * o.cfg.grid);
        CirclePoint p{a};
        bool skip = false;
        for (const auto& c : net.cells)
            if (to_double(circ_dist(p.angle, c.left.angle)) < excl) { skip = true; break; }
        if (to_double(circ_dist(p.angle, table.entries.front().arc.left.angle)) < excl ||
            to_double(circ_dist(p.angle, table.entries.front().arc.right.angle)) < excl)
            skip = true;
        if (!skip) alphas.push_back(a);
    }

    Caps caps = o.cfg.caps;
    if (o.markov_cap > 0) caps.max_iter = o.markov_cap;
    std::vector<ScanRow> rows(alphas.size());
    unsigned workers = o.cfg.threads ? o.cfg.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            set_working_precision(o.cfg.precision_bits);
            for (size_t k = w; k < alphas.size(); k += workers) {
                CirclePoint alpha{alphas[k]};
                BoundaryMap fa = deformed_map(net, alpha);
                ScanRow row;
                row.alpha = to_double(alpha.angle);
                row.surjective_predicate = surjectivity_predicate(net, o.overlap, alpha, table);
                row.surjective_empirical = surjectivity_empirical(fa).surjective;
                row.markov_within_cap =
                    markov_check(fa, caps).verdict == MarkovVerdict::Markov;
                rows[k] = row;
            }
        });
    }
    for (auto& t : pool) t.join();
    std::ofstream f;
    write_scan_csv(open_out(o.out, f), rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bowen-Series boundary maps of cocompact triangle groups and their deformations"};
    app.require_subcommand(1);
    app.fallthrough();
    CliOptions o;

    app.add_option("--precision", o.cfg.precision_bits, "working precision in bits (>= 64)")
        ->check(CLI::Range(64u, 65536u));
    app.add_option("--tol", o.cfg.tol.eps_point, "point tolerance (radians)");
    app.add_option("--eps-mat", o.cfg.tol.eps_mat, "matrix residual tolerance");
    app.add_option("--eps-geo", o.cfg.tol.eps_geo, "geodesic coincidence tolerance");
    app.add_option("--eps-cycle", o.cfg.tol.eps_cycle, "orbit recurrence tolerance");
    app.add_option("--max-iter", o.cfg.caps.max_iter, "markov orbit step cap");
    app.add_option("--max-size", o.cfg.caps.max_size, "W_alpha size cap");
    app.add_option("--lmax", o.cfg.caps.ell_max, "matching-set budget");
    app.add_option("--residual", o.cfg.caps.residual_target, "matching residual target");
    app.add_option("--grid", o.cfg.grid, "alpha grid size for scans");
    app.add_option("--seed", o.cfg.seed, "random seed");
    app.add_option("--threads", o.cfg.threads, "worker thread count (0 = hardware)");

    auto add_sig = [&](CLI::App* c) {
        c->add_option("m1", o.m1, "first signature entry")->required();
        c->add_option("m2", o.m2, "second signature entry")->required();
        c->add_option("m3", o.m3, "third signature entry")->required();
        c->add_option("--out", o.out, "output file (default stdout)");
    };

    auto* check = app.add_subcommand("check", "classify a signature");
    add_sig(check);

    auto* build = app.add_subcommand("build", "build the domain and net, emit JSON");
    add_sig(build);

    auto* plot = app.add_subcommand("plot", "sample f or f_alpha to CSV");
    add_sig(plot);
    plot->add_option("--alpha-word", o.alpha_word, "deformation word (comma-separated letters)");
    plot->add_option("--alpha-angle", o.alpha_angle, "deformation angle in radians");
    plot->add_option("--fixed-point", o.fixed_point, "attracting|repelling when both qualify")
        ->check(CLI::IsMember({"attracting", "repelling"}));
    plot->add_option("--samples", o.samples, "uniform sample count");

    auto* analyze_cmd = app.add_subcommand("analyze", "full verdict pipeline for one alpha");
    add_sig(analyze_cmd);
    auto* aw = analyze_cmd->add_option("--alpha-word", o.alpha_word, "alpha as a group word");
    auto* aa = analyze_cmd->add_option("--alpha-angle", o.alpha_angle, "alpha as an angle");
    analyze_cmd->add_option("--fixed-point", o.fixed_point, "attracting|repelling")
        ->check(CLI::IsMember({"attracting", "repelling"}));
    aw->excludes(aa);

    auto* scan = app.add_subcommand("scan", "alpha-grid sweep over one overlap");
    add_sig(scan);
    scan->add_option("--overlap", o.overlap, "overlap index 1..4")->required();
    scan->add_option("--markov-cap", o.markov_cap, "orbit cap for the markov column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(o);
        if (build->parsed()) return cmd_build(o);
        if (plot->parsed()) return cmd_plot(o);
        if (analyze_cmd->parsed()) {
            if (o.alpha_word.empty() && o.alpha_angle.empty()) {
                std::cerr << "analyze requires --alpha-word or --alpha-angle\n";
                return kExitUsage;
            }
            return cmd_analyze(o);
        }
        if (scan->parsed()) return cmd_scan(o);
    } catch (const SignatureRejected& e) {
        std::cerr << e.what() << "\n";
        return kExitSignature;
    } catch (const PrecisionExhausted& e) {
        std::cerr << e.what() << "\n";
        return kExitPrecision;
    } catch (const ConsistencyViolation& e) {
        std::cerr << e.what() << "\n";
        return kExitConsistency;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
