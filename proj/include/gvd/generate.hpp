#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gvd/geometry.hpp"

namespace gvd {

struct Instance {
    std::vector<Point> polygon;
    std::vector<Point> sites;
    std::uint64_t seed = 0;
    std::optional<double> jitter;
};

// Polygon families: convex, comb, spiral, random. Deterministic per seed.
std::vector<Point> generate_polygon(int n, const std::string& family, std::uint64_t seed);
// m sites inside the polygon, kept away from the boundary and from each other.
std::vector<Point> generate_sites(const std::vector<Point>& polygon, int m, std::uint64_t seed);
Instance generate_instance(int n, int m, const std::string& family, std::uint64_t seed);

struct SuiteCase {
    std::string family;
    int n = 0, m = 0;
    std::uint64_t seed = 0;
    Instance instance;
};

// Instances cycling through every family, size n in {8,16,32,64} and site count m in {1,2,4,8};
// case i uses seed base_seed + i.
std::vector<SuiteCase> standard_suite(int count, std::uint64_t base_seed);

}  // namespace gvd
