#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgsolver/critical.hpp"
#include "sgsolver/energy.hpp"
#include "sgsolver/functional.hpp"
#include "sgsolver/gasket.hpp"
#include "sgsolver/nonlinearity.hpp"
#include "sgsolver/thresholds.hpp"

using namespace sg;

namespace {

// level-1 context with every interior vertex frozen except the first midpoint;
// the functional reduces to a scalar profile in the remaining coordinate
struct ScalarFixture {
    std::shared_ptr<const GasketLevel> g;
    int free_vertex;
    double D;  // energy of the unit spike, W(phi) = scale * degree
    double w;  // measure weight at the spike

    explicit ScalarFixture()
        : g(build_level(3, 1)) {
        auto idx = g->find_vertex(std::vector<std::int64_t>{1, 1, 0});
        REQUIRE(idx.has_value());
        free_vertex = *idx;
        DiscreteFunction phi(g, true);
        phi[free_vertex] = 1.0;
        D = energy(phi);
        w = g->weights[static_cast<size_t>(free_vertex)];
    }

    std::vector<int> frozen() const {
        std::vector<int> f;
        for (int v = 0; v < g->vertex_count(); ++v)
            if (!g->is_boundary(v) && v != free_vertex) f.push_back(v);
        return f;
    }

    DiscreteFunction spike(double tau) const {
        DiscreteFunction u(g, true);
        u[free_vertex] = tau;
        return u;
    }
};

SolverOptions default_opts() { return SolverOptions{}; }

void check_monotone(const std::vector<double>& hist) {
    for (size_t i = 1; i < hist.size(); ++i)
        CHECK(hist[i] <= hist[i - 1] + 1e-12 * (1.0 + std::abs(hist[i - 1])));
}

}  // namespace

TEST_CASE("minimize stays at the critical zero") {
    auto g = build_level(3, 2);
    ProblemSpec spec;
    spec.level = 2;
    FunctionalContext ctx(g, power_problem(spec));
    auto rep = minimize(ctx, DiscreteFunction(g, true), default_opts());
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.residual == 0.0);
    CHECK(rep.energy_value == 0.0);
    CHECK(rep.kind == "minimizer");
}

TEST_CASE("minimize quadratic functional reaches zero from anywhere") {
    auto g = build_level(3, 2);
    FunctionalContext ctx(g, expression_problem("0", "0", {1.0}));
    DiscreteFunction u0(g, true);
    for (int v = 0; v < g->vertex_count(); ++v)
        if (!g->is_boundary(v)) u0[v] = 0.3 + 0.1 * (v % 5);
    auto rep = minimize(ctx, u0, default_opts());
    CHECK(rep.converged);
    CHECK(rep.energy_value <= 1e-15);
    check_monotone(rep.value_history);
}

TEST_CASE("minimize matches the scalar sublinear oracle") {
    ScalarFixture fx;
    // I(tau) = D tau^2/2 - w/s |tau|^s has its positive minimum at (w/D)^(1/(2-s))
    const double s = 1.8;
    FunctionalContext ctx(fx.g, power_single_term(1.0, s), fx.frozen());
    const double tau_star = std::pow(fx.w / fx.D, 1.0 / (2.0 - s));
    auto rep = minimize(ctx, fx.spike(1.0), default_opts());
    CHECK(rep.converged);
    CHECK(rep.u[fx.free_vertex] == doctest::Approx(tau_star).epsilon(1e-6));
    CHECK(rep.energy_value < 0.0);
    // closed form of the optimal value: D tau*^2 (1/2 - 1/s)
    const double expect = fx.D * tau_star * tau_star * (0.5 - 1.0 / s);
    CHECK(rep.energy_value == doctest::Approx(expect).epsilon(1e-6));
    check_monotone(rep.value_history);
    // stopping rule honored both absolutely and relative to the iterate
    CHECK(rep.residual <= 1e-8);
    CHECK(rep.residual <= 1e-8 * std::sqrt(fx.D) * rep.u[fx.free_vertex] * (1 + 1e-9));
}

TEST_CASE("minimize rejects a seed from another level") {
    auto g2 = build_level(3, 2);
    auto g3 = build_level(3, 3);
    ProblemSpec spec;
    spec.level = 2;
    FunctionalContext ctx(g2, power_problem(spec));
    CHECK_THROWS_AS((void)minimize(ctx, DiscreteFunction(g3, true), default_opts()),
                    std::invalid_argument);
}

TEST_CASE("ball minimization: zero stays put and bad seeds throw") {
    auto g = build_level(3, 2);
    ProblemSpec spec;
    spec.level = 2;
    FunctionalContext ctx(g, power_problem(spec));
    auto rep = minimize_in_ball(ctx, 0.5, DiscreteFunction(g, true), default_opts());
    CHECK(rep.converged);
    CHECK_FALSE(rep.constrained);
    CHECK(rep.energy_value == 0.0);
    CHECK(rep.kind == "ball-minimizer");

    DiscreteFunction big(g, true);
    for (int v = 0; v < g->vertex_count(); ++v)
        if (!g->is_boundary(v)) big[v] = 10.0;
    CHECK_THROWS_AS((void)minimize_in_ball(ctx, 1e-3, big, default_opts()),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)minimize_in_ball(ctx, -1.0, DiscreteFunction(g, true),
                                           default_opts()),
                    std::invalid_argument);
}

TEST_CASE("ball minimization against the linear-forcing oracle") {
    // f = 1/2 everywhere makes I quadratic with unconstrained minimizer
    // solving W(u, phi_v) = w(v)/2
    auto g = build_level(3, 2);
    FunctionalContext ctx(g, expression_problem("0.5", "0.5*t", {1.0}));
    DiscreteFunction rhs(g, true);
    for (int v = 0; v < g->vertex_count(); ++v)
        if (!g->is_boundary(v)) rhs[v] = 0.5 * g->weights[static_cast<size_t>(v)];
    auto star = ctx.solve_energy_identity(rhs);
    const double star_norm = energy_norm(star);
    REQUIRE(star_norm > 0.0);

    SUBCASE("large ball: interior minimum matches the linear solve") {
        auto rep = minimize_in_ball(ctx, 2.0 * star_norm, DiscreteFunction(g, true),
                                    default_opts());
        CHECK(rep.converged);
        CHECK_FALSE(rep.constrained);
        auto diff = lin_comb(1.0, rep.u, -1.0, star);
        CHECK(energy_norm(diff) <= 1e-6 * star_norm);
    }

    SUBCASE("small ball: minimizer pins to the sphere with outward gradient") {
        const double R = 0.5 * star_norm;
        auto rep = minimize_in_ball(ctx, R, DiscreteFunction(g, true), default_opts());
        CHECK(rep.converged);
        CHECK(rep.constrained);
        CHECK(energy_norm(rep.u) == doctest::Approx(R).epsilon(1e-9));
        // multiplier test: gradient is a nonpositive multiple of u plus a
        // negligible tangential part
        auto grad = ctx.energy_gradient(rep.u);
        const double a = inner(grad, rep.u) / (R * R);
        CHECK(a <= 0.0);
        auto tangential = lin_comb(1.0, grad, -a, rep.u);
        CHECK(energy_norm(tangential) <= 1e-7 * (1.0 + energy_norm(grad)));
        check_monotone(rep.value_history);
    }
}

TEST_CASE("mountain pass matches the exact scalar barrier") {
    ScalarFixture fx;
    ProblemSpec spec;
    spec.level = 1;
    spec.lambda = 0.0;
    spec.eta = 0.0;
    FunctionalContext ctx(fx.g, power_problem(spec), fx.frozen());
    // I(tau) = D tau^2/2 - w tau^4/4: barrier at sqrt(D/w) with value D^2/(4w)
    const double tau_dagger = std::sqrt(fx.D / fx.w);
    const double kappa = fx.D * fx.D / (4.0 * fx.w);
    CHECK(kappa == doctest::Approx(50.0).epsilon(1e-12));

    auto e = fx.spike(8.0);
    REQUIRE(ctx.value(e) < 0.0);
    auto rep = mountain_pass(ctx, e, 33, default_opts());
    CHECK(rep.converged);
    CHECK(rep.kind == "mountain-pass");
    CHECK(rep.energy_value == doctest::Approx(kappa).epsilon(1e-6));
    CHECK(rep.u[fx.free_vertex] == doctest::Approx(tau_dagger).epsilon(1e-5));
    check_monotone(rep.value_history);

    // the estimate never exceeds the initial segment's true maximum; the scan
    // must be fine enough that its own error sits below the comparison slack
    double ray_max = 0.0;
    for (int i = 0; i <= 200000; ++i)
        ray_max = std::max(ray_max, ctx.value(fx.spike(8.0 * i / 200000.0)));
    CHECK(rep.energy_value <= ray_max + 1e-9 * (1.0 + ray_max));
}

TEST_CASE("mountain pass rejects bad targets") {
    ScalarFixture fx;
    ProblemSpec spec;
    spec.level = 1;
    FunctionalContext ctx(fx.g, power_problem(spec), fx.frozen());
    CHECK_THROWS_AS((void)mountain_pass(ctx, fx.spike(1.0), 33, default_opts()),
                    std::invalid_argument);  // I(e) > 0
    CHECK_THROWS_AS((void)mountain_pass(ctx, fx.spike(0.0), 33, default_opts()),
                    std::invalid_argument);  // zero target
    CHECK_THROWS_AS((void)mountain_pass(ctx, fx.spike(8.0), 2, default_opts()),
                    std::invalid_argument);  // too few path points
}

TEST_CASE("mountain pass resolves a barrier far below the target scale") {
    // with a weak repulsive term the positive hill sits around 1e-16 while the
    // target lives at 4e-8; the initial path sees no mountain and must zoom
    ScalarFixture fx;
    ProblemSpec spec;
    spec.level = 1;
    spec.lambda = 1.0;
    spec.eta = 1e-5;
    FunctionalContext ctx(fx.g, power_problem(spec), fx.frozen());

    auto I_of = [&](double tau) { return ctx.value(fx.spike(tau)); };
    const double tau_e = std::pow(fx.w / fx.D, 1.0 / 0.2);  // sublinear dip bottom
    REQUIRE(I_of(tau_e) < 0.0);

    auto rep = mountain_pass(ctx, fx.spike(tau_e), 33, default_opts());
    CHECK(rep.converged);
    CHECK(rep.note.find("shrunk") != std::string::npos);

    // dense logarithmic scan for the true barrier value
    double kappa_scan = 0.0;
    const double lo = 1e-20, hi = tau_e;
    const int K = 200000;
    for (int i = 0; i <= K; ++i) {
        double tau = lo * std::pow(hi / lo, static_cast<double>(i) / K);
        kappa_scan = std::max(kappa_scan, I_of(tau));
    }
    REQUIRE(kappa_scan > 0.0);
    CHECK(rep.energy_value == doctest::Approx(kappa_scan).epsilon(1e-3));
    CHECK(rep.energy_value > 0.0);
    check_monotone(rep.value_history);
}

TEST_CASE("mountain pass on the full level-2 graph") {
    auto g = build_level(3, 2);
    ProblemSpec spec;
    spec.level = 2;
    FunctionalContext ctx(g, power_problem(spec));
    auto bump = harmonic_bump(g);
    // I(t b) = t^2 W/2 - t^4 (int b^4)/4 crosses zero at sqrt(2W / int b^4)
    const double t_zero = std::sqrt(2.0 * energy(bump) / ctx.integral_pow(bump, 4.0));
    auto e = bump;
    e.scale(1.3 * t_zero);
    REQUIRE(ctx.value(e) <= 0.0);

    auto rep = mountain_pass(ctx, e, 17, default_opts());
    CHECK(rep.converged);
    CHECK(rep.energy_value > 0.0);
    CHECK(rep.residual <= 1e-8);
    check_monotone(rep.value_history);

    double ray_max = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        auto p = e;
        p.scale(static_cast<double>(i) / 2000.0);
        ray_max = std::max(ray_max, ctx.value(p));
    }
    CHECK(rep.energy_value <= ray_max + 1e-9 * (1.0 + ray_max));
}

TEST_CASE("solver runs are bit-deterministic") {
    ScalarFixture fx;
    ProblemSpec spec;
    spec.level = 1;
    FunctionalContext ctx(fx.g, power_problem(spec), fx.frozen());
    auto a = mountain_pass(ctx, fx.spike(8.0), 33, default_opts());
    auto b = mountain_pass(ctx, fx.spike(8.0), 33, default_opts());
    CHECK(a.energy_value == b.energy_value);
    CHECK(a.residual == b.residual);
    CHECK(a.iterations == b.iterations);
    CHECK(a.value_history == b.value_history);
    CHECK(a.u.values() == b.u.values());
}
