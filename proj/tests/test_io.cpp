#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>

#include "gvd/error.hpp"
#include "gvd/io.hpp"
#include "gvd/verify.hpp"
#include "support.hpp"

using namespace gvd;
using namespace gvd::test;

namespace fs = std::filesystem;

namespace {

int code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const GvdError& e) {
        return e.exit_code();
    }
    return 0;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "gvd_tests";
    fs::create_directories(dir);
    return dir / name;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(GVD_CLI) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("instance files round-trip and reject malformed input") {
    Instance inst = generate_instance(9, 3, "comb", 4);
    inst.jitter = 1e-6;
    Instance back = parse_instance(serialize_instance(inst));
    CHECK(back.polygon == inst.polygon);
    CHECK(back.sites == inst.sites);
    CHECK(back.seed == inst.seed);
    CHECK(back.jitter == inst.jitter);
    CHECK(code_of([] { parse_instance("{\"polygon\": [[0,0],[1,0]"); }) == 2);
    CHECK(code_of([] { parse_instance("{\"sites\": []}"); }) == 2);
    CHECK(code_of([] { parse_instance("{\"polygon\": [[0,0,1]], \"sites\": []}"); }) == 2);
    CHECK(code_of([] { parse_instance("{\"polygon\": [[0,\"a\"]], \"sites\": []}"); }) == 2);
}

TEST_CASE("diagram files round-trip exactly") {
    for (const SuiteCase& c : standard_suite(12, 300)) {
        auto p = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        Gvd g = build_gvd(p->tree, *p->engine);
        std::string text = serialize_diagram(p->input, p->tree, g, p->jittered);
        DiagramBundle d = parse_diagram(text);
        INFO(c.family << " n=" << c.n << " m=" << c.m);
        CHECK(serialize_diagram(d.input, d.tree, d.gvd, d.jittered) == text);
        CHECK(d.tree.root() == p->tree.root());
        CHECK(d.input.polygon.reflex == p->input.polygon.reflex);
        REQUIRE(d.gvd.triangles.size() == g.triangles.size());
        for (std::size_t t = 0; t < g.triangles.size(); ++t) {
            CHECK(d.gvd.triangles[t].sources.size() == g.triangles[t].sources.size());
            CHECK(d.gvd.triangles[t].arcs.size() == g.triangles[t].arcs.size());
        }
        // the loaded diagram answers queries exactly like the built one
        for (Point x : sample_polygon(p->tree, 200, c.seed)) {
            auto a = g.locate(p->tree, x), b = d.gvd.locate(d.tree, x);
            CHECK(a.site == b.site);
            CHECK(a.distance == b.distance);
        }
    }
}

TEST_CASE("diagram files with dangling ids are rejected") {
    auto p = prepare(kSquare, {{0.3, 0.5}, {0.7, 0.5}});
    Gvd g = build_gvd(p->tree, *p->engine);
    std::string text = serialize_diagram(p->input, p->tree, g, false);
    std::string broken = text;
    auto at = broken.find("\"v0\": ");
    REQUIRE(at != std::string::npos);
    broken.replace(at, 7, "\"v0\": 9");
    CHECK(code_of([&] { parse_diagram(broken); }) == 2);
    CHECK(code_of([&] { parse_diagram("{\"format\": \"something else\"}"); }) == 2);
}

TEST_CASE("subdivision dumps list both sweeps") {
    auto inst = generate_instance(12, 3, "spiral", 8);
    auto p = prepare(inst.polygon, inst.sites, 1e-7, 8);
    BuildOptions opt;
    opt.keep_fragments = true;
    Gvd g = build_gvd(p->tree, *p->engine, opt);
    std::string sd = serialize_subdivision("SD", p->input, g.sd, g.borders);
    CHECK(sd.find("\"subdivision\": \"SD\"") != std::string::npos);
    CHECK(sd.find("\"borders\"") != std::string::npos);
}

TEST_CASE("command line: generate, build, verify, render") {
    auto inst = scratch("n4.json"), diag = scratch("n4.diagram.json"), svg1 = scratch("a.svg"), svg2 = scratch("b.svg");
    REQUIRE(run_cli("gen --n 4 --m 2 --family convex --seed 3 --output " + inst.string()) == 0);
    REQUIRE(run_cli("build --input " + inst.string() + " --output " + diag.string()) == 0);
    CHECK(run_cli("verify --input " + inst.string() + " --diagram " + diag.string() + " --samples 1000 --seed 1") == 0);
    CHECK(run_cli("render --diagram " + diag.string() + " --output " + svg1.string()) == 0);
    CHECK(run_cli("render --diagram " + diag.string() + " --output " + svg2.string()) == 0);
    CHECK(read_text(svg1.string()) == read_text(svg2.string()));
}

TEST_CASE("command line exit codes") {
    auto bow = scratch("bowtie.json"), out = scratch("bowtie.diagram.json");
    write_text(bow.string(), "{\"polygon\": [[0,0],[1,1],[1,0],[0,1]], \"sites\": [[0.5,0.2]]}");
    CHECK(run_cli("build --input " + bow.string() + " --output " + out.string()) == 2);
    CHECK(run_cli("build --input " + scratch("missing.json").string() + " --output " + out.string()) == 2);

    auto tie = scratch("tie.json");
    write_text(tie.string(), "{\"polygon\": [[0,0],[1,0],[1,0.5],[0.5,0.5],[0.5,1],[0,1]], \"sites\": [[0.2,0.2],[0.8,0.2],[0.2,0.8]]}");
    CHECK(run_cli("build --input " + tie.string() + " --output " + out.string()) == 3);
    CHECK(run_cli("build --input " + tie.string() + " --output " + out.string() + " --jitter 1e-4 --seed 2") == 0);
    CHECK(run_cli("verify --input " + tie.string() + " --diagram " + out.string() + " --samples 500 --seed 1") == 0);

    // a diagram checked against a different instance is refused
    auto other = scratch("other.json");
    write_instance(other.string(), generate_instance(6, 2, "convex", 1));
    CHECK(run_cli("verify --input " + other.string() + " --diagram " + out.string() + " --samples 10 --seed 1") == 2);
}

TEST_CASE("command line bench writes one row per case") {
    auto csv = scratch("bench.csv");
    REQUIRE(run_cli("bench --families convex,comb --sizes 8 --sites 1,4 --seed 5 --output " + csv.string()) == 0);
    std::string text = read_text(csv.string());
    CHECK(text.rfind("family,n,m,wall_ms,K_total,I_total,A_total,splits,vertices_by_type\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
