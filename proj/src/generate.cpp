#include "gvd/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gvd/error.hpp"
#include "gvd/polygon.hpp"

namespace gvd {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

bool is_simple(const std::vector<Point>& v) {
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect({v[i], v[(i + 1) % n]}, {v[j], v[(j + 1) % n]})) return false;
        }
    return true;
}

std::vector<Point> convex_polygon(int n, Rng& rng) {
    std::vector<double> ang;
    for (int i = 0; i < n; ++i) ang.push_back(uniform(rng, 0, 2 * std::numbers::pi));
    std::sort(ang.begin(), ang.end());
    // keep consecutive angles apart so no vertex is nearly collinear with its neighbours
    double gap = std::numbers::pi / (4.0 * n);
    for (int i = 1; i < n; ++i) ang[std::size_t(i)] = std::max(ang[std::size_t(i)], ang[std::size_t(i - 1)] + gap);
    double span = ang.back() - ang.front();
    double limit = 2 * std::numbers::pi - gap;
    if (span > limit)
        for (double& a : ang) a = ang.front() + (a - ang.front()) * limit / span;
    std::vector<Point> out;
    for (double a : ang) out.push_back({0.5 + 0.5 * std::cos(a), 0.5 + 0.5 * std::sin(a)});
    return out;
}

std::vector<Point> comb_polygon(int n, Rng& rng) {
    int k = std::max(1, n / 4);
    int extra = n - 4 * k;
    std::vector<double> cuts{0.0};
    for (int i = 0; i < 2 * k - 1; ++i) cuts.push_back(uniform(rng, 0.05, 0.95));
    cuts.push_back(1.0);
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i - 1] + 0.3 / (2 * k);
        cuts[i] = std::max(cuts[i], lo);
    }
    double s = 1.0 / cuts[cuts.size() - 2] * (1.0 - 0.3 / (2 * k));
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) cuts[i] *= s;
    // every notch corner gets its own depth so no three corners line up
    double notch = uniform(rng, 0.2, 0.4);
    std::vector<Point> out{{0, 0}};
    for (int e = 1; e <= extra; ++e) {
        double x = double(e) / (extra + 1);
        out.push_back({x, -0.1 * std::sin(std::numbers::pi * x)});
    }
    out.push_back({1, 0});
    for (int t = k - 1; t >= 0; --t) {
        double x0 = cuts[std::size_t(2 * t)], x1 = cuts[std::size_t(2 * t + 1)];
        if (t == k - 1) x1 = 1.0;
        out.push_back({x1, 1});
        out.push_back({x0, 1});
        if (t > 0) {
            out.push_back({x0, notch + uniform(rng, -0.05, 0.05)});
            out.push_back({cuts[std::size_t(2 * t - 1)], notch + uniform(rng, -0.05, 0.05)});
        }
    }
    // (0,1) is last and closes to (0,0)
    return out;
}

std::vector<Point> spiral_polygon(int n, Rng& rng) {
    int half = std::max(2, n / 2);
    double turns = std::min(2.5 * std::numbers::pi, (half - 1) * std::numbers::pi / 4.0);
    double b = uniform(rng, 0.9, 1.1);
    double width = 0.55 * 2 * std::numbers::pi * b;
    std::vector<Point> outer, inner;
    for (int i = 0; i < half; ++i) {
        double th = turns * i / (half - 1);
        double r = 1.0 + b * th;
        inner.push_back({r * std::cos(th), r * std::sin(th)});
        outer.push_back({(r + width) * std::cos(th), (r + width) * std::sin(th)});
    }
    std::vector<Point> out = inner;
    for (int i = half - 1; i >= 0; --i) out.push_back(outer[std::size_t(i)]);
    if (int(out.size()) < n) out.insert(out.begin(), Point{0.9 * inner[0].x + 0.1 * outer[0].x - 0.3, inner[0].y - 0.5});
    return out;
}

std::vector<Point> random_polygon(int n, Rng& rng) {
    std::vector<Point> v;
    for (int i = 0; i < n; ++i) v.push_back({uniform(rng, 0, 1), uniform(rng, 0, 1)});
    std::size_t m = v.size();
    for (int pass = 0; pass < 100000; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i < m && !changed; ++i)
            for (std::size_t j = i + 2; j < m && !changed; ++j) {
                if (i == 0 && j == m - 1) continue;
                if (segments_intersect({v[i], v[i + 1]}, {v[j], v[(j + 1) % m]})) {
                    std::reverse(v.begin() + std::ptrdiff_t(i + 1), v.begin() + std::ptrdiff_t(j + 1));
                    changed = true;
                }
            }
        if (!changed) break;
    }
    return v;
}

std::vector<Point> to_unit_box(std::vector<Point> v) {
    double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
    for (Point p : v) {
        x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
    double s = std::max(x1 - x0, y1 - y0);
    for (Point& p : v) p = {(p.x - x0) / s, (p.y - y0) / s};
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    if (a < 0) std::reverse(v.begin(), v.end());
    return v;
}

bool acceptable(const std::vector<Point>& v) {
    if (!is_simple(v)) return false;
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        if (orient(v[(i + n - 1) % n], v[i], v[(i + 1) % n], 1e-6) == 0) return false;
    return true;
}

}  // namespace

std::vector<Point> generate_polygon(int n, const std::string& family, std::uint64_t seed) {
    if (n < 3) fail_input("polygon needs at least 3 vertices");
    Rng rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Point> v;
        if (family == "convex") v = convex_polygon(n, rng);
        else if (family == "comb") v = comb_polygon(n, rng);
        else if (family == "spiral") v = spiral_polygon(n, rng);
        else if (family == "random") v = random_polygon(n, rng);
        else fail_input("unknown polygon family: " + family);
        v = to_unit_box(std::move(v));
        if (acceptable(v)) return v;
    }
    fail_input("could not generate a simple polygon for family " + family);
}

std::vector<Point> generate_sites(const std::vector<Point>& polygon, int m, std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Polygon poly;
    poly.vertices = polygon;
    std::vector<Point> out;
    double margin = 0.004;
    for (int tries = 0; int(out.size()) < m; ++tries) {
        if (tries > 1000000) fail_input("could not place sites");
        if (tries % 100000 == 99999) margin *= 0.5;
        Point p{uniform(rng, 0, 1), uniform(rng, 0, 1)};
        if (!point_in_polygon(poly, p) || distance_to_boundary(poly, p) < margin) continue;
        bool close = false;
        for (Point q : out) close = close || dist(p, q) < 0.01;
        if (!close) out.push_back(p);
    }
    return out;
}

Instance generate_instance(int n, int m, const std::string& family, std::uint64_t seed) {
    Instance inst;
    inst.polygon = generate_polygon(n, family, seed);
    inst.sites = generate_sites(inst.polygon, m, seed);
    inst.seed = seed;
    return inst;
}

std::vector<SuiteCase> standard_suite(int count, std::uint64_t base_seed) {
    static const char* families[] = {"convex", "comb", "spiral", "random"};
    static const int sizes[] = {8, 16, 32, 64};
    static const int site_counts[] = {1, 2, 4, 8};
    std::vector<SuiteCase> out;
    for (int i = 0; i < count; ++i) {
        SuiteCase c;
        c.family = families[i % 4];
        c.n = sizes[(i / 4) % 4];
        c.m = site_counts[(i / 16) % 4];
        c.seed = base_seed + std::uint64_t(i);
        c.instance = generate_instance(c.n, c.m, c.family, c.seed);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gvd
