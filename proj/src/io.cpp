#include "gvd/io.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace gvd {

using nlohmann::json;

namespace {

constexpr const char* kDiagramFormat = "gvd-diagram";
constexpr const char* kSubdivisionFormat = "gvd-subdivision";
constexpr int kVersion = 1;

json pt(Point p) { return json::array({p.x, p.y}); }

Point to_point(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail_input(std::string(what) + ": expected [x, y], got " + j.dump());
    Point p{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail_input(std::string(what) + ": non-finite coordinate");
    return p;
}

std::vector<Point> to_points(const json& j, const char* what) {
    if (!j.is_array()) fail_input(std::string(what) + ": expected a list of points");
    std::vector<Point> out;
    for (const json& e : j) out.push_back(to_point(e, what));
    return out;
}

json points(const std::vector<Point>& ps) {
    json a = json::array();
    for (Point p : ps) a.push_back(pt(p));
    return a;
}

// Indented dump with every [x, y] pair kept on one line.
std::string pretty(const json& j) {
    std::string in = j.dump(1), out;
    out.reserve(in.size());
    auto number_end = [&](std::size_t i) {
        while (i < in.size() && (std::isdigit(static_cast<unsigned char>(in[i])) || std::strchr("+-.eE", in[i]))) ++i;
        return i;
    };
    auto skip_ws = [&](std::size_t i) {
        while (i < in.size() && std::isspace(static_cast<unsigned char>(in[i]))) ++i;
        return i;
    };
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '[') {
            std::size_t a0 = skip_ws(i + 1), a1 = number_end(a0);
            if (a1 > a0 && a1 < in.size() && in[a1] == ',') {
                std::size_t b0 = skip_ws(a1 + 1), b1 = number_end(b0);
                std::size_t close = skip_ws(b1);
                if (b1 > b0 && close < in.size() && in[close] == ']') {
                    out += '[';
                    out.append(in, a0, a1 - a0);
                    out += ", ";
                    out.append(in, b0, b1 - b0);
                    out += ']';
                    i = close;
                    continue;
                }
            }
        }
        out += in[i];
    }
    return out + "\n";
}

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail_input(std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail_input(std::string("missing field '") + key + "'");
    return *it;
}

json anchor_json(const AnchorRecord& a) {
    json j{{"vertex", a.vertex}, {"site", a.site}, {"position", pt(a.pos)}, {"weight", a.weight}};
    j["pred"] = a.has_pred ? json{{"vertex", a.pred_vertex}, {"position", pt(a.pred_pos)}} : json(nullptr);
    return j;
}

AnchorRecord anchor_from(const json& j) {
    AnchorRecord a;
    a.vertex = field(j, "vertex").get<int>();
    a.site = field(j, "site").get<int>();
    a.pos = to_point(field(j, "position"), "anchor position");
    a.weight = field(j, "weight").get<double>();
    const json& p = field(j, "pred");
    if (!p.is_null()) {
        a.has_pred = true;
        a.pred_vertex = field(p, "vertex").get<int>();
        a.pred_pos = to_point(field(p, "position"), "anchor predecessor");
    }
    return a;
}

json cone_json(const ConeSource& s) {
    json j{{"full", s.full}, {"tag", s.tag}};
    if (!s.full) {
        j["left"] = pt(s.left);
        j["right"] = pt(s.right);
    }
    return j;
}

ConeSource cone_from(const AnchorRecord& a, const json& j) {
    ConeSource s;
    s.anchor = a;
    s.full = field(j, "full").get<bool>();
    s.tag = field(j, "tag").get<int>();
    if (!s.full) {
        s.left = to_point(field(j, "left"), "cone left");
        s.right = to_point(field(j, "right"), "cone right");
    }
    return s;
}

json arc_json(int id, const DiagramArc& a, double tol) {
    return json{{"id", id},
                {"kind", a.spm ? "spm" : "bisector"},
                {"tri", a.tri},
                {"anchors", json::array({anchor_json(a.a), anchor_json(a.b)})},
                {"t0", a.t0},
                {"t1", a.t1},
                {"p0", pt(a.p0)},
                {"p1", pt(a.p1)},
                {"polyline", points(a.polyline(tol))}};
}

DiagramArc arc_from(const json& j) {
    DiagramArc a;
    a.spm = field(j, "kind").get<std::string>() == "spm";
    a.tri = field(j, "tri").get<int>();
    const json& an = field(j, "anchors");
    if (!an.is_array() || an.size() != 2) fail_input("arc needs two anchors");
    a.a = anchor_from(an[0]);
    a.b = anchor_from(an[1]);
    a.t0 = field(j, "t0").get<double>();
    a.t1 = field(j, "t1").get<double>();
    a.p0 = to_point(field(j, "p0"), "arc p0");
    a.p1 = to_point(field(j, "p1"), "arc p1");
    return a;
}

const char* kind_name(VertexKind k) {
    switch (k) {
    case VertexKind::Degree3: return "degree3";
    case VertexKind::Degree1: return "degree1";
    case VertexKind::Breakpoint: return "breakpoint";
    }
    return "degree3";
}

VertexKind kind_from(const std::string& s) {
    if (s == "degree3") return VertexKind::Degree3;
    if (s == "degree1") return VertexKind::Degree1;
    if (s == "breakpoint") return VertexKind::Breakpoint;
    fail_input("unknown vertex type '" + s + "'");
}

json frame_json(const Normalization& n) { return json{{"offset", pt(n.offset)}, {"scale", n.scale}}; }

json counters_json(const OpCounters& c) { return json{{"K", c.K}, {"A", c.A}, {"I", c.I}}; }

OpCounters counters_from(const json& j) {
    return {field(j, "K").get<long>(), field(j, "A").get<long>(), field(j, "I").get<long>()};
}

json ledger_json(const CounterLedger& l) {
    json ops = json::object();
    for (const auto& [name, t] : l.ops) ops[name] = json{{"calls", t.calls}, {"counters", counters_json(t.counters)}};
    return json{{"K", l.K}, {"A", l.A}, {"I", l.I}, {"ops", ops}};
}

CounterLedger ledger_from(const json& j) {
    CounterLedger l;
    l.K = field(j, "K").get<long>();
    l.A = field(j, "A").get<long>();
    l.I = field(j, "I").get<long>();
    for (const auto& [name, t] : field(j, "ops").items())
        l.ops[name] = OpTally{field(t, "calls").get<long>(), counters_from(field(t, "counters"))};
    return l;
}

// One field list for writing and reading.
#define GVD_DIAGNOSTICS(X)                                                                                                      \
    X(check_failures) X(near_ties) X(search_mismatches) X(insert_mismatches) X(merge_curve_mismatches) X(potential_created)                 \
        X(potential_processed) X(potential_stale) X(split_ops) X(divide_ops) X(search_probes) X(degree_anomalies)

json diagnostics_json(const BuildDiagnostics& d) {
    json j = json::object();
#define X(f) j[#f] = d.f;
    GVD_DIAGNOSTICS(X)
#undef X
    return j;
}

BuildDiagnostics diagnostics_from(const json& j) {
    BuildDiagnostics d;
#define X(f) d.f = field(j, #f).get<long>();
    GVD_DIAGNOSTICS(X)
#undef X
    return d;
}

json borders_json(const std::vector<BorderVertex>& bs) {
    json a = json::array();
    for (const BorderVertex& b : bs) a.push_back(json{{"diagonal", b.diag}, {"position", pt(b.position)}});
    return a;
}

std::vector<BorderVertex> borders_from(const json& j) {
    std::vector<BorderVertex> out;
    for (const json& b : j) out.push_back({field(b, "diagonal").get<int>(), to_point(field(b, "position"), "border")});
    return out;
}

// Triangle records with the subcells (sources) of each triangle and its arcs.
struct Listing {
    json triangles = json::array(), subcells = json::array(), arcs = json::array(), spm_arcs = json::array();
};

Listing list_parts(const std::vector<LocalDiagram>& parts, const PartitionTree* tree, double tol) {
    Listing out;
    int sub = 0, arc = 0, spm = 0;
    for (const LocalDiagram& ld : parts) {
        json ids = json::array();
        for (const ConeSource& s : ld.sources) {
            out.subcells.push_back(json{{"id", sub}, {"cell", s.anchor.site}, {"tri", ld.tri}, {"anchor", anchor_json(s.anchor)},
                                        {"cone", cone_json(s)}});
            ids.push_back(sub++);
        }
        json t{{"id", ld.tri}, {"subcells", ids}};
        if (tree) {
            const TreeTriangle& tt = tree->triangle(ld.tri);
            t["vertices"] = json::array({tt.v[0], tt.v[1], tt.v[2]});
            t["parent"] = tt.parent;
        }
        out.triangles.push_back(std::move(t));
        for (const DiagramArc& a : ld.arcs) out.arcs.push_back(arc_json(arc++, a, tol));
        for (const DiagramArc& a : ld.spm_arcs) out.spm_arcs.push_back(arc_json(spm++, a, tol));
    }
    return out;
}

// Checks that every id a record refers to exists.
void check_ref(const json& j, const char* key, std::size_t limit, const char* what, bool allow_none = false) {
    int v = field(j, key).get<int>();
    if ((allow_none && v == -1) || (v >= 0 && std::size_t(v) < limit)) return;
    fail_input(std::string(what) + " refers to missing id " + std::to_string(v));
}

Triangulation triangulation_from(const json& tris, int n) {
    Triangulation tr;
    std::map<std::pair<int, int>, int> side_owner;
    for (const json& t : tris) {
        const json& vs = field(t, "vertices");
        if (!vs.is_array() || vs.size() != 3) fail_input("triangle needs three vertices");
        Triangle T;
        for (int i = 0; i < 3; ++i) {
            T.v[std::size_t(i)] = vs[std::size_t(i)].get<int>();
            if (T.v[std::size_t(i)] < 0 || T.v[std::size_t(i)] >= n) fail_input("triangle vertex out of range");
        }
        T.nbr = {-1, -1, -1};
        if (field(t, "id").get<int>() != int(tr.triangles.size())) fail_input("triangles must be listed by id");
        tr.triangles.push_back(T);
    }
    for (std::size_t t = 0; t < tr.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            const Triangle& T = tr.triangles[t];
            side_owner[{T.v[std::size_t(i)], T.v[std::size_t((i + 1) % 3)]}] = int(t);
        }
    for (Triangle& T : tr.triangles)
        for (int i = 0; i < 3; ++i) {
            auto it = side_owner.find({T.v[std::size_t((i + 1) % 3)], T.v[std::size_t(i)]});
            if (it != side_owner.end()) T.nbr[std::size_t(i)] = it->second;
        }
    return tr;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    json j = parse_json(text, "instance");
    if (!j.is_object()) fail_input("instance: expected an object");
    Instance inst;
    try {
        inst.polygon = to_points(field(j, "polygon"), "polygon");
        inst.sites = to_points(field(j, "sites"), "sites");
        if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("jitter") && !j["jitter"].is_null()) inst.jitter = j["jitter"].get<double>();
    } catch (const json::exception& e) {
        fail_input(std::string("instance: ") + e.what());
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json j{{"polygon", points(inst.polygon)}, {"sites", points(inst.sites)}, {"seed", inst.seed}};
    if (inst.jitter) j["jitter"] = *inst.jitter;
    return pretty(j);
}

Instance read_instance(const std::string& path) { return parse_instance(read_text(path)); }
void write_instance(const std::string& path, const Instance& inst) { write_text(path, serialize_instance(inst)); }

std::string serialize_diagram(const PreparedInput& input, const PartitionTree& tree, const Gvd& g, bool jittered,
                              const WriteOptions& opt) {
    json j;
    j["format"] = kDiagramFormat;
    j["version"] = kVersion;
    j["frame"] = frame_json(input.normalization);
    j["polygon"] = points(input.polygon.vertices);
    j["sites"] = points(input.sites.sites);
    j["jittered"] = jittered;
    j["root"] = tree.root();

    json vs = json::array();
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        const GvdVertex& v = g.vertices[i];
        vs.push_back(json{{"id", i}, {"type", kind_name(v.kind)}, {"position", pt(v.position)}, {"sites", v.sites}, {"degree", v.degree}});
    }
    j["vertices"] = vs;

    json es = json::array();
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const GvdEdge& e = g.edges[i];
        es.push_back(json{{"id", i}, {"sites", json::array({e.site_a, e.site_b})}, {"v0", e.v0}, {"v1", e.v1}, {"arcs", e.arcs}});
    }
    j["edges"] = es;

    Listing l = list_parts(g.triangles, &tree, opt.flatten_tol);
    j["arcs"] = std::move(l.arcs);
    j["spm_arcs"] = std::move(l.spm_arcs);

    json cells = json::array();
    for (int s = 0; s < input.sites.size(); ++s) {
        json ids = json::array();
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            if (g.edges[i].site_a == s || g.edges[i].site_b == s) ids.push_back(i);
        cells.push_back(json{{"site", s}, {"edges", ids}});
    }
    j["cells"] = cells;
    j["subcells"] = std::move(l.subcells);
    j["triangles"] = std::move(l.triangles);
    j["components"] = g.components;
    j["cycles"] = g.cycles;
    j["borders"] = borders_json(g.borders);
    j["counters"] = ledger_json(g.counters);
    j["diagnostics"] = diagnostics_json(g.diagnostics);
    return pretty(j);
}

DiagramBundle parse_diagram(const std::string& text) {
    json j = parse_json(text, "diagram");
    DiagramBundle b;
    try {
        if (!j.is_object() || j.value("format", "") != kDiagramFormat) fail_input("diagram: not a diagram file");
        if (field(j, "version").get<int>() != kVersion) fail_input("diagram: unsupported version");
        const json& fr = field(j, "frame");
        b.input.normalization.offset = to_point(field(fr, "offset"), "frame offset");
        b.input.normalization.scale = field(fr, "scale").get<double>();
        Polygon& poly = b.input.polygon;
        poly.vertices = to_points(field(j, "polygon"), "polygon");
        int n = poly.size();
        if (n < 3) fail_input("diagram: polygon needs at least three vertices");
        poly.reflex.assign(std::size_t(n), false);
        for (int i = 0; i < n; ++i) poly.reflex[std::size_t(i)] = orient(poly[poly.prev(i)], poly[i], poly[poly.next(i)]) < 0;
        b.input.sites.sites = to_points(field(j, "sites"), "sites");
        b.jittered = field(j, "jittered").get<bool>();

        const json& tris = field(j, "triangles");
        Triangulation tr = triangulation_from(tris, n);
        b.tree = PartitionTree(poly, tr, b.input.sites, field(j, "root").get<int>());
        for (const json& t : tris)
            if (field(t, "parent").get<int>() != b.tree.triangle(field(t, "id").get<int>()).parent)
                fail_input("diagram: triangle parents do not match the rebuilt tree");

        Gvd& g = b.gvd;
        std::size_t nv = field(j, "vertices").size(), na = field(j, "arcs").size();
        for (const json& v : field(j, "vertices")) {
            GvdVertex gv;
            gv.kind = kind_from(field(v, "type").get<std::string>());
            gv.position = to_point(field(v, "position"), "vertex");
            gv.sites = field(v, "sites").get<std::vector<int>>();
            gv.degree = field(v, "degree").get<int>();
            g.vertices.push_back(std::move(gv));
        }
        for (const json& e : field(j, "edges")) {
            check_ref(e, "v0", nv, "edge", true);
            check_ref(e, "v1", nv, "edge", true);
            GvdEdge ge;
            auto sites = field(e, "sites").get<std::vector<int>>();
            if (sites.size() != 2) fail_input("edge needs a site pair");
            ge.site_a = sites[0];
            ge.site_b = sites[1];
            ge.v0 = field(e, "v0").get<int>();
            ge.v1 = field(e, "v1").get<int>();
            ge.arcs = field(e, "arcs").get<std::vector<int>>();
            for (int a : ge.arcs)
                if (a < 0 || std::size_t(a) >= na) fail_input("edge refers to missing arc " + std::to_string(a));
            g.edges.push_back(std::move(ge));
        }
        for (const json& a : field(j, "arcs")) g.arcs.push_back(arc_from(a));
        for (const json& a : field(j, "spm_arcs")) g.spm_arcs.push_back(arc_from(a));

        int nt = int(b.tree.triangles().size());
        g.triangles.resize(std::size_t(nt));
        for (int t = 0; t < nt; ++t) g.triangles[std::size_t(t)].tri = t;
        const json& subs = field(j, "subcells");
        for (const json& t : tris)
            for (const json& id : field(t, "subcells")) {
                int s = id.get<int>();
                if (s < 0 || std::size_t(s) >= subs.size()) fail_input("triangle refers to missing subcell");
                const json& sc = subs[std::size_t(s)];
                g.triangles[std::size_t(field(t, "id").get<int>())].sources.push_back(
                    cone_from(anchor_from(field(sc, "anchor")), field(sc, "cone")));
            }
        for (const DiagramArc& a : g.arcs) {
            if (a.tri < 0 || a.tri >= nt) fail_input("arc refers to missing triangle");
            g.triangles[std::size_t(a.tri)].arcs.push_back(a);
        }
        for (const DiagramArc& a : g.spm_arcs) {
            if (a.tri < 0 || a.tri >= nt) fail_input("arc refers to missing triangle");
            g.triangles[std::size_t(a.tri)].spm_arcs.push_back(a);
        }
        for (const json& c : field(j, "cells"))
            for (const json& e : field(c, "edges"))
                if (e.get<int>() < 0 || e.get<std::size_t>() >= g.edges.size()) fail_input("cell refers to missing edge");
        g.components = field(j, "components").get<int>();
        g.cycles = field(j, "cycles").get<int>();
        g.borders = borders_from(field(j, "borders"));
        g.counters = ledger_from(field(j, "counters"));
        g.diagnostics = diagnostics_from(field(j, "diagnostics"));
    } catch (const json::exception& e) {
        fail_input(std::string("diagram: ") + e.what());
    }
    return b;
}

DiagramBundle read_diagram(const std::string& path) { return parse_diagram(read_text(path)); }

std::string serialize_subdivision(const std::string& name, const PreparedInput& input, const std::vector<LocalDiagram>& parts,
                                  const std::vector<BorderVertex>& borders, const WriteOptions& opt) {
    Listing l = list_parts(parts, nullptr, opt.flatten_tol);
    json j{{"format", kSubdivisionFormat},
           {"version", kVersion},
           {"subdivision", name},
           {"frame", frame_json(input.normalization)},
           {"triangles", std::move(l.triangles)},
           {"subcells", std::move(l.subcells)},
           {"arcs", std::move(l.arcs)},
           {"spm_arcs", std::move(l.spm_arcs)},
           {"borders", borders_json(borders)}};
    return pretty(j);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_input("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_input("cannot write " + path);
    out << text;
    if (!out) fail_input("write failed for " + path);
}

}  // namespace gvd
