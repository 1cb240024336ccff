#include <catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include "gvd/error.hpp"
#include "support.hpp"

using namespace gvd;
using namespace gvd::test;

namespace {

int error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const GvdError& e) {
        return e.exit_code();
    }
    return 0;
}

}  // namespace

TEST_CASE("invalid polygons and sites are rejected as input errors") {
    std::vector<Point> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(error_code([&] { validate_and_normalize(bowtie, {{0.5, 0.2}}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize({{0, 0}, {1, 0}}, {}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize({{0, 0}, {1, 0}, {1, 0}, {0, 1}}, {{0.2, 0.2}}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize(kSquare, {{1.5, 0.5}}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize(kSquare, {{1.0, 0.5}}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize(kSquare, {{0.3, 0.3}, {0.3, 0.3}}); }) == 2);
    CHECK(error_code([&] { validate_and_normalize(kSquare, {{0.3, 0.3}}); }) == 0);
}

TEST_CASE("clockwise input is reoriented and normalized into the unit box") {
    std::vector<Point> cw{{0, 0}, {0, 4}, {4, 4}, {4, 0}};
    PreparedInput in = validate_and_normalize(cw, {{1, 1}});
    double area = 0;
    for (int i = 0; i < in.polygon.size(); ++i) area += cross(in.polygon[i], in.polygon[in.polygon.next(i)]);
    CHECK(area > 0);
    for (Point p : in.polygon.vertices) {
        CHECK(p.x >= -1e-12);
        CHECK(p.x <= 1 + 1e-12);
    }
    CHECK(dist(in.normalization.invert(in.sites[0]), {1, 1}) < 1e-12);
}

TEST_CASE("reflex flags mark the inner corner of the L") {
    PreparedInput in = validate_and_normalize(kLShape, {{0.25, 0.25}});
    int reflex = 0;
    for (int i = 0; i < in.polygon.size(); ++i)
        if (in.polygon.reflex[std::size_t(i)]) {
            ++reflex;
            CHECK(dist(in.polygon[i], {0.5, 0.5}) < 1e-12);
        }
    CHECK(reflex == 1);
}

TEST_CASE("triangulation and dual tree shapes on generated polygons") {
    for (const std::string fam : {"convex", "comb", "spiral", "random"})
        for (int n : {5, 12, 33}) {
            Instance inst = generate_instance(n, 4, fam, 17 + std::uint64_t(n));
            PreparedInput in = validate_and_normalize(inst.polygon, inst.sites);
            Triangulation tri = triangulate(in.polygon);
            REQUIRE(int(tri.triangles.size()) == n - 2);
            double area = 0, poly_area = 0;
            for (const Triangle& t : tri.triangles) {
                double a = signed_area2(in.polygon[t.v[0]], in.polygon[t.v[1]], in.polygon[t.v[2]]);
                CHECK(a > 0);
                area += a;
            }
            for (int i = 0; i < n; ++i) poly_area += cross(in.polygon[i], in.polygon[in.polygon.next(i)]);
            CHECK(std::abs(area - poly_area) < 1e-9);

            PartitionTree tree(in.polygon, tri, in.sites);
            CHECK(int(tree.diagonals().size()) == n - 3);
            int roots = 0;
            for (const TreeTriangle& t : tree.triangles()) roots += t.parent < 0;
            CHECK(roots == 1);
            CHECK(tree.preorder().size() == tri.triangles.size());
            CHECK(std::set<int>(tree.postorder().begin(), tree.postorder().end()).size() == tri.triangles.size());
            for (int s = 0; s < in.sites.size(); ++s) CHECK(tree.contains(tree.site_triangle(s), in.sites[s], 1e-12));
            for (std::size_t d = 0; d < tree.diagonals().size(); ++d) {
                const auto& below = tree.below(int(d));
                auto above = tree.above(int(d));
                CHECK(below.size() + above.size() == std::size_t(in.sites.size()));
                for (int s : below) CHECK(tree.is_below(tree.site_triangle(s), int(d)));
            }
        }
}

TEST_CASE("tree corners follow the root diagonal naming") {
    Instance inst = generate_instance(20, 3, "random", 5);
    PreparedInput in = validate_and_normalize(inst.polygon, inst.sites);
    PartitionTree tree(in.polygon, triangulate(in.polygon), in.sites);
    for (const TreeTriangle& t : tree.triangles()) {
        CHECK(orient(in.polygon[t.v1], in.polygon[t.v2], in.polygon[t.v12]) > 0);
        if (t.root_diag >= 0) {
            const Diagonal& d = tree.diagonal(t.root_diag);
            CHECK(std::set<int>{d.v1, d.v2} == std::set<int>{t.v1, t.v2});
        }
    }
}

TEST_CASE("forced root must be a leaf triangle") {
    Instance inst = generate_instance(12, 2, "convex", 3);
    PreparedInput in = validate_and_normalize(inst.polygon, inst.sites);
    Triangulation tri = triangulate(in.polygon);
    PartitionTree base(in.polygon, tri, in.sites);
    auto leaves = base.leaf_candidates();
    REQUIRE(leaves.size() >= 2);
    PartitionTree other(in.polygon, tri, in.sites, leaves.back());
    CHECK(other.root() == leaves.back());
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        int nb = 0;
        for (int o : tri.triangles[t].nbr) nb += o >= 0;
        if (nb == 3) CHECK(error_code([&] { PartitionTree(in.polygon, tri, in.sites, int(t)); }) == 2);
    }
}

TEST_CASE("tied sites need jitter") {
    // a check that never passes stands in for a detected tie
    auto passes = [](const SiteSet&) { return false; };
    PreparedInput in = validate_and_normalize(kSquare, {{0.3, 0.5}, {0.7, 0.5}});
    CHECK(error_code([&] { enforce_general_position(in.polygon, in.sites, std::nullopt, 1, passes); }) == 3);
}
