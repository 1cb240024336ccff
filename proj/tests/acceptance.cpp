// Acceptance run: one PASS/FAIL line per criterion, exit status 0 when the set of failing
// criteria equals --expect-red (empty by default).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gvd/io.hpp"
#include "gvd/verify.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gvd;
using namespace gvd::test;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Line {
    int id;
    bool pass;
    std::string text;
};
std::vector<Line> results;

void report(int id, bool pass, const std::string& text) {
    results.push_back({id, pass, text});
    std::printf("[%s] %d %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
    std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

// Last line of a command's stdout, with its exit status.
std::pair<int, std::string> run(const std::string& cmd) {
    std::string out;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return {-1, ""};
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) out = buf;
    int rc = pclose(p);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string case_name(const SuiteCase& c) { return fmt("%s n=%d m=%d seed=%llu", c.family.c_str(), c.n, c.m, (unsigned long long)c.seed); }

struct Built {
    std::unique_ptr<Prepared> prep;
    Gvd g;
};

Built build(const SuiteCase& c) {
    Built b;
    b.prep = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
    b.g = build_gvd(b.prep->tree, *b.prep->engine);
    return b;
}

void oracle_agreement(const std::vector<SuiteCase>& suite, int samples) {
    fs::path dir = fs::temp_directory_path() / "gvd_acceptance";
    fs::create_directories(dir);
    auto t0 = Clock::now();
    long cells = 0, subcells = 0;
    int failed_runs = 0;
    for (const SuiteCase& c : suite) {
        Instance inst = c.instance;
        inst.jitter = 1e-7;
        inst.seed = c.seed;
        std::string in = (dir / "case.json").string(), out = (dir / "case.diagram.json").string();
        write_instance(in, inst);
        auto [brc, bline] = run(std::string(GVD_CLI) + " build --input " + in + " --output " + out);
        auto [vrc, vline] = run(std::string(GVD_CLI) + " verify --input " + in + " --diagram " + out +
                                fmt(" --samples %d --seed %llu", samples, (unsigned long long)c.seed));
        nlohmann::json j = nlohmann::json::parse(vline, nullptr, false);
        if (brc != 0 || j.is_discarded()) {
            ++failed_runs;
            std::printf("    %s: build exit %d, verify exit %d\n", case_name(c).c_str(), brc, vrc);
            continue;
        }
        long cm = j.value("cell_mismatches", -1L), sm = j.value("subcell_mismatches", -1L);
        if (cm != 0 || sm != 0) std::printf("    %s: %ld cell, %ld subcell mismatches\n", case_name(c).c_str(), cm, sm);
        cells += cm;
        subcells += sm;
    }
    double secs = seconds_since(t0);
    bool ok = failed_runs == 0 && cells == 0 && subcells == 0 && secs < 600;
    report(1, ok,
           fmt("oracle agreement: %zu instances x %d samples via the CLI, %ld cell / %ld subcell mismatches, %d failed runs, %.1f s (limit 600 s)",
               suite.size(), samples, cells, subcells, failed_runs, secs));
}

void known_answers() {
    std::vector<std::string> bad;
    auto of_kind = [](const Gvd& g, VertexKind k) {
        std::vector<Point> out;
        for (const GvdVertex& v : g.vertices)
            if (v.kind == k) out.push_back(v.position);
        return out;
    };
    auto near = [](const std::vector<Point>& ps, Point x) {
        return std::any_of(ps.begin(), ps.end(), [&](Point p) { return dist(p, x) <= 1e-7; });
    };
    {
        auto p = prepare(kSquare, {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}});
        Gvd g = build_gvd(p->tree, *p->engine);
        auto d3 = of_kind(g, VertexKind::Degree3);
        if (d3.size() != 1 || !near(d3, {0.5, 0.425})) bad.push_back("three-site circumcenter");
    }
    {
        auto p = prepare(kSquare, {{0.3, 0.5}, {0.7, 0.5}});
        Gvd g = build_gvd(p->tree, *p->engine);
        auto d1 = of_kind(g, VertexKind::Degree1);
        if (d1.size() != 2 || !near(d1, {0.5, 0}) || !near(d1, {0.5, 1})) bad.push_back("two-site bisector ends");
    }
    {
        auto p = prepare(kSquare, {{0.3, 0.4}});
        Gvd g = build_gvd(p->tree, *p->engine);
        if (!g.edges.empty() || g.locate(p->tree, {0.9, 0.9}).site != 0) bad.push_back("single site");
    }
    std::string why;
    for (const auto& b : bad) why += " " + b;
    report(2, bad.empty(), "known answers: circumcenter (0.5,0.425), bisector ends (0.5,0)/(0.5,1), one site no edges" +
                               (bad.empty() ? std::string() : ", failing:" + why));
}

struct SuiteStats {
    int cases = 0;
    int wrong_cells = 0, literal_relation = 0, general_relation = 0, bad_vertices = 0, vertex_bound = 0;
    int with_cycles = 0;
    double max_vertex_ratio = 0;
    std::map<std::string, int> counter_violations;
    double max_k = 0, max_a = 0, max_i = 0, max_s = 0;
};

SuiteStats structure_and_counters(const std::vector<SuiteCase>& suite) {
    SuiteStats st;
    CounterBounds b = frozen_bounds();
    for (const SuiteCase& c : suite) {
        Built x = build(c);
        GeodesicOracle o(x.prep->input.polygon.vertices, x.prep->input.sites.sites);
        StructuralReport r = structural_checks(x.g, x.prep->tree, o, b);
        ++st.cases;
        st.wrong_cells += r.cells != r.m;
        bool literal = r.v1 == r.v3 + 2 * r.components;
        if (!literal) {
            ++st.literal_relation;
            std::printf("    %s: V1=%d V3=%d components=%d cycles=%d\n", case_name(c).c_str(), r.v1, r.v3, r.components, r.cycles);
        }
        st.general_relation += !r.vertex_relation;
        st.with_cycles += r.cycles > 0;
        st.bad_vertices += r.bad_degree3 + r.bad_degree1 + r.bad_breakpoints + r.degree_anomalies;
        double nm = c.n + c.m;
        double ratio = double(x.g.vertices.size()) / nm;
        st.max_vertex_ratio = std::max(st.max_vertex_ratio, ratio);
        st.vertex_bound += ratio > b.per_size_vertices;
        for (const auto& v : r.counter_violations) ++st.counter_violations[v];
        st.max_k = std::max(st.max_k, x.g.counters.K / double(c.m));
        st.max_a = std::max(st.max_a, x.g.counters.A / nm);
        st.max_i = std::max(st.max_i, x.g.counters.I / nm);
        st.max_s = std::max(st.max_s, x.g.diagnostics.split_ops / double(c.m));
    }
    return st;
}

void structural_counts(const SuiteStats& st) {
    CounterBounds b = frozen_bounds();
    bool ok = st.wrong_cells == 0 && st.literal_relation == 0 && st.bad_vertices == 0 && st.vertex_bound == 0;
    report(3, ok,
           fmt("structure on %d instances: %d with cells != m, %d violating V1 = V3 + 2*components, %d failed equidistance/degree "
               "checks, %d above %.2f*(n+m) vertices (max ratio %.3f)",
               st.cases, st.wrong_cells, st.literal_relation, st.bad_vertices, st.vertex_bound, b.per_size_vertices, st.max_vertex_ratio));
    // informational: the network relation once enclosed cells (independent cycles) are accounted for
    std::printf("    V1 = V3 + 2*(components - cycles): %d violations; %d instances have cycles\n", st.general_relation, st.with_cycles);
}

void counter_lemmas(const SuiteStats& st, int seeds) {
    CounterBounds b = frozen_bounds();
    bool bounds_ok = st.counter_violations.empty();
    for (const auto& [what, n] : st.counter_violations) std::printf("    %d instances exceed %s\n", n, what.c_str());

    // doubling sweep: mean K over seeds at m and 2m, fixed family and n. The gate uses the
    // suite's own site counts; larger m is printed for context.
    struct Pairs {
        int count = 0, over = 0;
        double worst = 0;
    } small, large;
    int zero_base = 0;
    double sweep_per_site = 0;
    for (const std::string fam : {"convex", "comb", "spiral", "random"})
        for (int n : {16, 32, 64}) {
            std::map<int, double> mean;
            for (int m : {1, 2, 4, 8, 16, 32, 64}) {
                double sum = 0;
                for (int s = 0; s < seeds; ++s) {
                    std::uint64_t seed = 7000 + std::uint64_t(n * 1000 + m * 20 + s);
                    Instance inst = generate_instance(n, m, fam, seed);
                    auto p = prepare(inst.polygon, inst.sites, 1e-7, seed);
                    sum += double(build_gvd(p->tree, *p->engine).counters.K);
                }
                mean[m] = sum / seeds;
                sweep_per_site = std::max(sweep_per_site, mean[m] / m);
            }
            for (int m : {1, 2, 4, 8, 16, 32}) {
                if (mean[m] <= 0) {
                    ++zero_base;
                    continue;
                }
                Pairs& p = m < 8 ? small : large;
                double r = mean[2 * m] / mean[m];
                ++p.count;
                p.worst = std::max(p.worst, r);
                if (r > 2.5) {
                    ++p.over;
                    std::printf("    %s n=%d: mean K(%d)=%.1f K(%d)=%.1f ratio %.2f\n", fam.c_str(), n, m, mean[m], 2 * m, mean[2 * m], r);
                }
            }
        }
    std::printf("    doubling for m >= 8: worst ratio %.2f over %d pairs, %d over 2.5\n", large.worst, large.count, large.over);
    std::printf("    sweep up to m = 64: largest mean K/m %.2f (C_K %.1f)\n", sweep_per_site, b.per_site_K);
    std::printf("    %d pairs skipped with mean K(m) = 0 (a single site has no events)\n", zero_base);
    report(4, bounds_ok && small.over == 0,
           fmt("counters: max K/m %.2f (C_K %.1f), A/(n+m) %.2f (C_A %.1f), I/(n+m) %.2f (C_I %.1f), splits/m %.2f (C_S %.1f); "
               "doubling m in 2..8: worst mean-K ratio %.2f over %d pairs (limit 2.5), %d over",
               st.max_k, b.per_site_K, st.max_a, b.per_size_A, st.max_i, b.per_size_I, st.max_s, b.per_site_split, small.worst,
               small.count, small.over));
}

void cross_operation(const std::vector<SuiteCase>& suite, int samples) {
    int fixtures = 0, differing = 0;
    for (std::uint64_t seed = 1; fixtures < 50 && seed < 2000; ++seed) {
        auto f = cut_fixture(seed);
        if (!f) continue;
        ++fixtures;
        SweepContext ctx(f->prep->tree, *f->prep->engine);
        const TreeTriangle& T = ctx.tree.triangle(f->tri);
        Wavefront wf = op_initiate(ctx, f->tri, {T.v1, T.v12, T.v2}, true, true);
        auto s = op_split(ctx, wf);
        if (!same_cut(s, op_divide(ctx, wf, false)) || !same_cut(s, op_divide(ctx, wf, true))) ++differing;
    }
    int instances = 0, checked = 0, moved = 0;
    for (const SuiteCase& c : suite) {
        if (instances == 20) break;
        if (c.m < 2) continue;
        Built x = build(c);
        auto leaves = x.prep->tree.leaf_candidates();
        int other_root = -1;
        for (int l : leaves)
            if (l != x.prep->tree.root()) other_root = l;
        if (other_root < 0) continue;
        ++instances;
        PartitionTree other(x.prep->input.polygon, triangulate(x.prep->input.polygon), x.prep->input.sites, other_root);
        GeodesicEngine eng(other);
        Gvd h = build_gvd(other, eng);
        ArcProximity near(x.g.arcs);
        for (Point p : sample_polygon(x.prep->tree, samples, c.seed)) {
            if (near.within(p, 1e-6)) continue;
            ++checked;
            if (x.g.locate(x.prep->tree, p).site != h.locate(other, p).site) ++moved;
        }
    }
    report(5, fixtures == 50 && differing == 0 && instances == 20 && moved == 0,
           fmt("cross-operation: split vs divide differ on %d of %d fixtures; re-rooting moved %d of %d samples over %d instances",
               differing, fixtures, moved, checked, instances));
}

void geodesic_primitive(const std::vector<SuiteCase>& suite, int pairs) {
    std::mt19937_64 rng(99);
    int done = 0, bad = 0;
    double worst = 0;
    int per_case = (pairs + int(suite.size()) - 1) / int(suite.size());
    for (const SuiteCase& c : suite) {
        auto p = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        GeodesicOracle o(p->input.polygon.vertices, p->input.sites.sites);
        for (int k = 0; k < per_case && done < pairs; ++k, ++done) {
            Point a = sample_inside(p->input.polygon, rng), b = sample_inside(p->input.polygon, rng);
            double e = std::abs(p->engine->geodesic_distance(a, b) - o.distance(a, b));
            worst = std::max(worst, e);
            bad += e > 1e-9;
        }
    }
    int convex = 0, convex_bad = 0;
    double convex_worst = 0;
    for (const SuiteCase& c : suite) {
        if (c.family != "convex") continue;
        auto p = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        for (int k = 0; k < 100; ++k, ++convex) {
            Point a = sample_inside(p->input.polygon, rng), b = sample_inside(p->input.polygon, rng);
            double e = std::abs(p->engine->geodesic_distance(a, b) - dist(a, b));
            convex_worst = std::max(convex_worst, e);
            convex_bad += e > 1e-12;
        }
    }
    report(6, bad == 0 && convex_bad == 0 && done == pairs && convex > 0,
           fmt("geodesic distance: %d pairs vs oracle, max error %.2e (tol 1e-9), %d over; %d convex pairs vs Euclidean, max %.2e (tol "
               "1e-12), %d over",
               done, worst, bad, convex, convex_worst, convex_bad));
}

void asymptotics() {
    // Not reproducible by construction: the geodesic engine answers in O(n) per query. Reported, not gated.
    std::printf("[N/A ] 7 wall-clock asymptotics not reproducible with the O(n)-per-query geodesic engine; see criterion 4 and "
                "`gvd bench` for counters\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int count = 100, samples = 10000, pairs = 10000, seeds = 10;
    std::uint64_t seed = 1;
    std::vector<int> expect_red;
    app.add_option("--count", count, "suite size");
    app.add_option("--seed", seed, "suite base seed (calibration used 1000)");
    app.add_option("--samples", samples, "verification samples per instance");
    app.add_option("--pairs", pairs, "distance pairs for the geodesic check");
    app.add_option("--doubling-seeds", seeds, "seeds per (family, n, m) in the doubling sweep");
    app.add_option("--expect-red", expect_red, "criteria known to fail; the exit status checks the failing set equals this");
    CLI11_PARSE(app, argc, argv);

    auto t0 = Clock::now();
    auto suite = standard_suite(count, seed);
    oracle_agreement(suite, samples);
    known_answers();
    SuiteStats st = structure_and_counters(suite);
    structural_counts(st);
    counter_lemmas(st, seeds);
    cross_operation(suite, samples);
    geodesic_primitive(suite, pairs);
    asymptotics();

    std::set<int> red, want(expect_red.begin(), expect_red.end());
    for (const Line& l : results)
        if (!l.pass) red.insert(l.id);
    std::printf("total %.1f s; failing:", seconds_since(t0));
    for (int r : red) std::printf(" %d", r);
    std::printf("%s\n", red.empty() ? " none" : "");
    if (red != want) {
        std::printf("failing set differs from --expect-red\n");
        return 1;
    }
    return 0;
}
