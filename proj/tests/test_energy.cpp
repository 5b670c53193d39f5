#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sgsolver/energy.hpp"
#include "sgsolver/gasket.hpp"

using namespace sg;

namespace {

int vertex_at(const GasketLevel& g, std::vector<std::int64_t> numer) {
    auto idx = g.find_vertex(numer);
    REQUIRE(idx.has_value());
    return *idx;
}

DiscreteFunction random_zero_boundary(std::shared_ptr<const GasketLevel> level,
                                      std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DiscreteFunction u(level, true);
    for (int v = 0; v < level->vertex_count(); ++v)
        if (!level->is_boundary(v)) u[v] = dist(rng);
    return u;
}

DiscreteFunction random_free(std::shared_ptr<const GasketLevel> level, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DiscreteFunction u(level, false);
    for (int v = 0; v < level->vertex_count(); ++v) u[v] = dist(rng);
    return u;
}

}  // namespace

TEST_CASE("unit spike at a level-1 midpoint has energy 20/3") {
    auto g = build_level(3, 1);
    DiscreteFunction u(g, true);
    u[vertex_at(*g, {1, 1, 0})] = 1.0;
    CHECK(energy(u) == doctest::Approx(20.0 / 3.0).epsilon(1e-14));
    CHECK(inner(u, u) == doctest::Approx(energy(u)).epsilon(1e-15));
}

TEST_CASE("harmonic corner profile has energy 2") {
    // boundary data (1,0,0) extended by the 2/5 - 2/5 - 1/5 rule
    auto g = build_level(3, 1);
    DiscreteFunction u(g, false);
    u[vertex_at(*g, {2, 0, 0})] = 1.0;
    u[vertex_at(*g, {1, 1, 0})] = 2.0 / 5.0;
    u[vertex_at(*g, {1, 0, 1})] = 2.0 / 5.0;
    u[vertex_at(*g, {0, 1, 1})] = 1.0 / 5.0;
    CHECK(energy(u) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("midpoint spikes have mutual energy product -5/3") {
    auto g = build_level(3, 1);
    DiscreteFunction u(g, true), v(g, true);
    u[vertex_at(*g, {1, 1, 0})] = 1.0;
    v[vertex_at(*g, {1, 0, 1})] = 1.0;
    CHECK(inner(u, v) == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
    CHECK(inner(v, u) == doctest::Approx(inner(u, v)).epsilon(1e-15));
}

TEST_CASE("extension of a corner indicator is the 2/5 2/5 1/5 profile") {
    auto g0 = build_level(3, 0);
    auto g1 = build_level(3, 1);
    DiscreteFunction u(g0, false);
    u[vertex_at(*g0, {1, 0, 0})] = 1.0;
    auto ext = harmonic_extension(u, g1);
    CHECK(ext[vertex_at(*g1, {2, 0, 0})] == 1.0);
    CHECK(ext[vertex_at(*g1, {0, 2, 0})] == 0.0);
    CHECK(ext[vertex_at(*g1, {0, 0, 2})] == 0.0);
    CHECK(ext[vertex_at(*g1, {1, 1, 0})] == 2.0 / 5.0);
    CHECK(ext[vertex_at(*g1, {1, 0, 1})] == 2.0 / 5.0);
    CHECK(ext[vertex_at(*g1, {0, 1, 1})] == 1.0 / 5.0);
}

TEST_CASE("harmonic extension preserves energy") {
    std::mt19937 rng(20260815);
    for (int m = 0; m <= 3; ++m) {
        auto coarse = build_level(3, m);
        auto fine = build_level(3, m + 1);
        for (int rep = 0; rep < 25; ++rep) {
            auto u = random_free(coarse, rng);
            auto ext = harmonic_extension(u, fine);
            double e0 = energy(u);
            double e1 = energy(ext);
            CHECK(std::abs(e1 - e0) <= 1e-10 * (1.0 + e0));
        }
    }
}

TEST_CASE("restriction of an extension returns the original values") {
    std::mt19937 rng(7);
    auto coarse = build_level(3, 2);
    auto u = random_free(coarse, rng);
    auto ext = harmonic_extension(u);
    auto back = restrict_to(ext, coarse);
    for (int v = 0; v < coarse->vertex_count(); ++v) CHECK(back[v] == u[v]);
}

TEST_CASE("energy of a restriction never exceeds the fine energy") {
    std::mt19937 rng(99);
    for (int m = 0; m <= 3; ++m) {
        auto coarse = build_level(3, m);
        auto fine = build_level(3, m + 1);
        for (int rep = 0; rep < 25; ++rep) {
            auto u = random_free(fine, rng);
            auto r = restrict_to(u, coarse);
            double ef = energy(u);
            CHECK(energy(r) <= ef * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("uniform bound with the explicit embedding constant") {
    std::mt19937 rng(1234);
    auto g = build_level(3, 3);
    for (int rep = 0; rep < 50; ++rep) {
        auto u = random_zero_boundary(g, rng);
        auto chk = sup_norm_bound_check(u);
        CHECK(chk.holds);
        CHECK(chk.bound == doctest::Approx(9.0 * std::sqrt(energy(u))).epsilon(1e-14));
    }
    DiscreteFunction free_fn(g, false);
    free_fn[g->boundary[0]] = 1.0;
    CHECK_THROWS_AS(sup_norm_bound_check(free_fn), std::invalid_argument);
}

TEST_CASE("lipschitz composition contracts energy") {
    std::mt19937 rng(4321);
    std::uniform_real_distribution<double> slope(-2.0, 2.0);
    std::uniform_real_distribution<double> knot(0.1, 0.9);
    auto g = build_level(3, 3);
    for (int rep = 0; rep < 30; ++rep) {
        // piecewise-linear odd-ish profile through 0 with two knots
        double k1 = knot(rng), s1 = slope(rng), s2 = slope(rng);
        double L = std::max(std::abs(s1), std::abs(s2));
        auto h = [=](double t) {
            double a = std::abs(t);
            double y = a <= k1 ? s1 * a : s1 * k1 + s2 * (a - k1);
            return t < 0 ? -y : y;
        };
        auto u = random_zero_boundary(g, rng);
        auto hu = lipschitz_compose(h, L, u);
        CHECK(energy(hu) <= L * L * energy(u) + 1e-12);
    }
    // identity keeps energy exactly
    auto u = random_zero_boundary(g, rng);
    auto same = lipschitz_compose([](double t) { return t; }, 1.0, u);
    CHECK(energy(same) == doctest::Approx(energy(u)).epsilon(1e-15));
    // scaling by 2 quadruples it
    auto dbl = lipschitz_compose([](double t) { return 2.0 * t; }, 2.0, u);
    CHECK(energy(dbl) == doctest::Approx(4.0 * energy(u)).epsilon(1e-13));
    CHECK_THROWS_AS(lipschitz_compose([](double t) { return t + 1.0; }, 1.0, u),
                    std::invalid_argument);
}

TEST_CASE("cauchy-schwarz for the bilinear form") {
    std::mt19937 rng(555);
    auto g = build_level(3, 2);
    for (int rep = 0; rep < 40; ++rep) {
        auto u = random_zero_boundary(g, rng);
        auto v = random_zero_boundary(g, rng);
        double ip = inner(u, v);
        CHECK(ip * ip <= energy(u) * energy(v) * (1.0 + 1e-12));
    }
}

TEST_CASE("linear combinations and in-place updates") {
    std::mt19937 rng(777);
    auto g = build_level(3, 2);
    auto u = random_zero_boundary(g, rng);
    auto v = random_zero_boundary(g, rng);
    auto w = lin_comb(2.0, u, -3.0, v);
    for (int i = 0; i < u.size(); ++i)
        CHECK(w[i] == doctest::Approx(2.0 * u[i] - 3.0 * v[i]).epsilon(1e-15));
    CHECK(w.zero_boundary());
    auto z = u;
    z.add_scaled(-1.0, u);
    CHECK(z.sup_norm() == 0.0);
    // bilinearity
    CHECK(inner(w, v) ==
          doctest::Approx(2.0 * inner(u, v) - 3.0 * energy(v)).epsilon(1e-12));
}

TEST_CASE("level mismatch and bad constructions throw") {
    auto g1 = build_level(3, 1);
    auto g2 = build_level(3, 2);
    DiscreteFunction a(g1, true), b(g2, true);
    CHECK_THROWS_AS((void)inner(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)lin_comb(1.0, a, 1.0, b), std::invalid_argument);
    std::vector<double> vals(static_cast<size_t>(g1->vertex_count()), 1.0);
    CHECK_THROWS_AS(DiscreteFunction(g1, vals, true), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteFunction(g1, std::vector<double>{1.0}, false),
                    std::invalid_argument);
}
