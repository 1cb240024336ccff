// Calibration run for the growth constants: builds a suite and prints the largest observed ratio
// of each counter to its size measure.
#include <algorithm>
#include <cstdio>

#include "CLI11.hpp"
#include "gvd/builder.hpp"
#include "gvd/generate.hpp"

int main(int argc, char** argv) {
    CLI::App app{"calibrate counter growth constants"};
    int count = 100;
    std::uint64_t seed = 1000;
    app.add_option("--count", count, "suite size");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    double k = 0, a = 0, i = 0, s = 0, v = 0;
    for (const gvd::SuiteCase& c : gvd::standard_suite(count, seed)) {
        auto p = gvd::prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        gvd::Gvd g = gvd::build_gvd(p->tree, *p->engine);
        double m = c.m, nm = c.n + c.m;
        k = std::max(k, g.counters.K / m);
        a = std::max(a, g.counters.A / nm);
        i = std::max(i, g.counters.I / nm);
        s = std::max(s, g.diagnostics.split_ops / m);
        v = std::max(v, double(g.vertices.size()) / nm);
        std::printf("%s n=%d m=%d seed=%llu K=%ld A=%ld I=%ld splits=%ld vertices=%zu\n", c.family.c_str(), c.n, c.m,
                    static_cast<unsigned long long>(c.seed), g.counters.K, g.counters.A, g.counters.I, g.diagnostics.split_ops,
                    g.vertices.size());
    }
    std::printf("max K/m %.4f\nmax A/(n+m) %.4f\nmax I/(n+m) %.4f\nmax splits/m %.4f\nmax vertices/(n+m) %.4f\n", k, a, i, s, v);
    return 0;
}
