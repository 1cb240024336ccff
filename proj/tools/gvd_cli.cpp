// gvd: build, verify, render, generate and benchmark geodesic Voronoi diagrams.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gvd/io.hpp"
#include "gvd/verify.hpp"

namespace {

using namespace gvd;

bool trace_from_env() {
    const char* v = std::getenv("GVD_TRACE");
    return v && std::string(v) == "1";
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& item : split_list(s)) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            fail_input("not an integer: " + item);
        }
    }
    return out;
}

struct BuildArgs {
    std::string input, output, dump_sd, dump_sdp;
    std::optional<double> jitter;
    std::optional<std::uint64_t> seed;
    bool trace = false;
};

int run_build(const BuildArgs& a) {
    Instance inst = read_instance(a.input);
    std::optional<double> jitter = a.jitter ? a.jitter : inst.jitter;
    std::uint64_t seed = a.seed.value_or(inst.seed);
    auto p = prepare(inst.polygon, inst.sites, jitter, seed);
    BuildOptions opt;
    opt.keep_fragments = !a.dump_sd.empty() || !a.dump_sdp.empty();
    if (a.trace || trace_from_env()) opt.trace = [](const std::string& line) { std::cerr << line << "\n"; };
    Gvd g = build_gvd(p->tree, *p->engine, opt);
    write_text(a.output, serialize_diagram(p->input, p->tree, g, p->jittered));
    if (!a.dump_sd.empty()) write_text(a.dump_sd, serialize_subdivision("SD", p->input, g.sd, g.borders));
    if (!a.dump_sdp.empty()) write_text(a.dump_sdp, serialize_subdivision("SD'", p->input, g.sd_prime, g.borders));
    std::printf("built: %zu vertices (%d degree-3, %d degree-1, %d breakpoints), %zu edges%s\n", g.vertices.size(),
                g.count(VertexKind::Degree3), g.count(VertexKind::Degree1), g.count(VertexKind::Breakpoint), g.edges.size(),
                p->jittered ? ", sites jittered" : "");
    return 0;
}

// The diagram must describe the instance: same polygon, same sites up to the recorded jitter.
void check_matches_instance(const DiagramBundle& d, const Instance& inst) {
    PreparedInput want = validate_and_normalize(inst.polygon, inst.sites);
    const auto& got = d.input;
    if (want.polygon.vertices.size() != got.polygon.vertices.size() || want.sites.sites.size() != got.sites.sites.size())
        fail_input("diagram does not belong to this instance");
    for (std::size_t i = 0; i < want.polygon.vertices.size(); ++i)
        if (dist(want.polygon.vertices[i], got.polygon.vertices[i]) > 1e-9) fail_input("diagram polygon differs from the instance");
    double slack = d.jittered ? 1e-3 : 1e-9;
    for (std::size_t i = 0; i < want.sites.sites.size(); ++i)
        if (dist(want.sites.sites[i], got.sites.sites[i]) > slack) fail_input("diagram sites differ from the instance");
}

void print_report(const char* name, const SampleReport& r) {
    std::printf("%s: drawn %d, excluded %d, checked %d, mismatches %d\n", name, r.drawn, r.excluded, r.checked, r.mismatches);
    for (const Mismatch& m : r.details)
        std::printf("  mismatch %s at (%.17g, %.17g): expected site %d, got %d, gap %.3g\n", m.what.c_str(), m.x.x, m.x.y, m.expected,
                    m.got, m.gap);
}

int run_verify(const std::string& input, const std::string& diagram, int samples, std::uint64_t seed) {
    Instance inst = read_instance(input);
    DiagramBundle d = read_diagram(diagram);
    check_matches_instance(d, inst);
    GeodesicOracle oracle(d.input.polygon.vertices, d.input.sites.sites);
    SampleReport cells = verify_samples(d.gvd, d.tree, oracle, samples, seed);
    SampleReport subcells = oracle_subcell_check(d.gvd, d.tree, oracle, samples, seed);
    StructuralReport s = structural_checks(d.gvd, d.tree, oracle);
    print_report("cells", cells);
    print_report("subcells", subcells);
    std::printf("structure: cells %d/%d, V1 %d, V3 %d, breakpoints %d, components %d, cycles %d\n", s.cells, s.m, s.v1, s.v3,
                s.breakpoints, s.components, s.cycles);
    std::printf("  bad degree-3 %d, bad degree-1 %d, bad breakpoints %d, degree anomalies %d, V1 = V3 + 2(components - cycles): %s\n",
                s.bad_degree3, s.bad_degree1, s.bad_breakpoints, s.degree_anomalies, s.vertex_relation ? "yes" : "no");
    for (const std::string& v : s.counter_violations) std::printf("  counter bound violated: %s\n", v.c_str());
    bool ok = cells.mismatches == 0 && subcells.mismatches == 0 && s.ok();
    std::printf("{\"cell_mismatches\": %d, \"subcell_mismatches\": %d, \"structure_ok\": %s, \"counter_violations\": %zu, \"ok\": %s}\n",
                cells.mismatches, subcells.mismatches, s.ok() ? "true" : "false", s.counter_violations.size(), ok ? "true" : "false");
    return ok ? 0 : 1;
}

// ---- SVG ----

struct SvgFrame {
    double lo_x, lo_y, size;
    static constexpr double kPixels = 800, kMargin = 20;
    double x(Point p) const { return kMargin + (p.x - lo_x) / size * kPixels; }
    double y(Point p) const { return kMargin + (lo_y + size - p.y) / size * kPixels; }
};

std::string svg_path(const SvgFrame& f, const std::vector<Point>& pts, bool closed) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", i ? "L" : "M", f.x(pts[i]), f.y(pts[i]));
        out += buf;
    }
    if (closed) out += "Z";
    return out;
}

std::string render_svg(const DiagramBundle& d, double tol) {
    const auto& poly = d.input.polygon.vertices;
    double lx = INFINITY, ly = INFINITY, hx = -INFINITY, hy = -INFINITY;
    for (Point p : poly) {
        lx = std::min(lx, p.x);
        ly = std::min(ly, p.y);
        hx = std::max(hx, p.x);
        hy = std::max(hy, p.y);
    }
    SvgFrame f{lx, ly, std::max({hx - lx, hy - ly, 1e-12})};
    double side = SvgFrame::kPixels + 2 * SvgFrame::kMargin;
    std::ostringstream o;
    char buf[160];
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side << "\" viewBox=\"0 0 " << side << " "
      << side << "\">\n";
    o << "<path d=\"" << svg_path(f, poly, true) << "\" fill=\"#f4f4f4\" stroke=\"#222\" stroke-width=\"1.5\"/>\n";
    for (const DiagramArc& a : d.gvd.spm_arcs)
        o << "<path d=\"" << svg_path(f, a.polyline(tol), false)
          << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"/>\n";
    for (const DiagramArc& a : d.gvd.arcs)
        o << "<path d=\"" << svg_path(f, a.polyline(tol), false) << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.4\"/>\n";
    for (const GvdVertex& v : d.gvd.vertices) {
        double x = f.x(v.position), y = f.y(v.position);
        switch (v.kind) {
        case VertexKind::Degree3:
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3.5\" fill=\"#c0392b\"/>\n", x, y);
            break;
        case VertexKind::Degree1:
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\" fill=\"none\" stroke=\"#c0392b\"/>\n", x, y);
            break;
        case VertexKind::Breakpoint:
            std::snprintf(buf, sizeof buf, "<path d=\"M%.3f %.3f L%.3f %.3f\" stroke=\"#2c3e50\" stroke-width=\"2\"/>\n", x - 4, y, x + 4, y);
            break;
        }
        o << buf;
    }
    for (Point s : d.input.sites.sites) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#2471a3\"/>\n", f.x(s), f.y(s));
        o << buf;
    }
    o << "</svg>\n";
    return o.str();
}

int run_bench(const std::string& families, const std::string& sizes, const std::string& sites, std::uint64_t seed,
              const std::string& output) {
    std::ostringstream csv;
    csv << "family,n,m,wall_ms,K_total,I_total,A_total,splits,vertices_by_type\n";
    std::uint64_t s = seed;
    for (const std::string& fam : split_list(families))
        for (int n : int_list(sizes))
            for (int m : int_list(sites)) {
                Instance inst = generate_instance(n, m, fam, s++);
                auto t0 = std::chrono::steady_clock::now();
                auto p = prepare(inst.polygon, inst.sites, 1e-7, inst.seed);
                Gvd g = build_gvd(p->tree, *p->engine);
                double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                char buf[256];
                std::snprintf(buf, sizeof buf, "%s,%d,%d,%.2f,%ld,%ld,%ld,%ld,deg3=%d;deg1=%d;breakpoint=%d\n", fam.c_str(), n, m, ms,
                              g.counters.K, g.counters.I, g.counters.A, g.diagnostics.split_ops, g.count(VertexKind::Degree3),
                              g.count(VertexKind::Degree1), g.count(VertexKind::Breakpoint));
                csv << buf;
            }
    write_text(output, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic Voronoi diagrams in simple polygons"};
    app.require_subcommand(1);

    BuildArgs ba;
    auto* build = app.add_subcommand("build", "build the diagram of an instance");
    build->add_option("--input", ba.input, "instance file")->required();
    build->add_option("--output", ba.output, "diagram file")->required();
    build->add_option("--dump-sd", ba.dump_sd, "write the first subdivision");
    build->add_option("--dump-sdp", ba.dump_sdp, "write the second subdivision");
    build->add_option("--jitter", ba.jitter, "perturbation radius for tied sites (input units)");
    build->add_option("--seed", ba.seed, "perturbation seed");
    build->add_flag("--trace", ba.trace, "log every operation to stderr");

    std::string v_input, v_diagram;
    int v_samples = 10000;
    std::uint64_t v_seed = 1;
    auto* verify = app.add_subcommand("verify", "check a diagram against the brute-force oracle");
    verify->add_option("--input", v_input, "instance file")->required();
    verify->add_option("--diagram", v_diagram, "diagram file")->required();
    verify->add_option("--samples", v_samples, "sample points");
    verify->add_option("--seed", v_seed, "sampling seed");

    std::string r_diagram, r_output;
    double r_tol = 1e-4;
    auto* render = app.add_subcommand("render", "draw a diagram as SVG");
    render->add_option("--diagram", r_diagram, "diagram file")->required();
    render->add_option("--output", r_output, "SVG file")->required();
    render->add_option("--flatten-tol", r_tol, "max sag of flattened arcs");

    int g_n = 8, g_m = 2;
    std::string g_family = "random", g_output;
    std::uint64_t g_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--n", g_n, "polygon vertices")->required();
    gen->add_option("--m", g_m, "sites")->required();
    gen->add_option("--family", g_family, "convex, comb, spiral or random")
        ->check(CLI::IsMember({"convex", "comb", "spiral", "random"}));
    gen->add_option("--seed", g_seed, "seed");
    gen->add_option("--output", g_output, "instance file")->required();

    std::string b_families = "convex,comb,spiral,random", b_sizes = "8,16,32,64", b_sites = "1,2,4,8", b_output;
    std::uint64_t b_seed = 1;
    auto* bench = app.add_subcommand("bench", "build generated instances and record counters");
    bench->add_option("--families", b_families, "comma-separated families");
    bench->add_option("--sizes", b_sizes, "comma-separated polygon sizes");
    bench->add_option("--sites", b_sites, "comma-separated site counts");
    bench->add_option("--seed", b_seed, "first seed");
    bench->add_option("--output", b_output, "CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) return run_build(ba);
        if (*verify) return run_verify(v_input, v_diagram, v_samples, v_seed);
        if (*render) {
            write_text(r_output, render_svg(read_diagram(r_diagram), r_tol));
            return 0;
        }
        if (*gen) {
            write_instance(g_output, generate_instance(g_n, g_m, g_family, g_seed));
            return 0;
        }
        if (*bench) return run_bench(b_families, b_sizes, b_sites, b_seed, b_output);
    } catch (const GvdError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
