#include "sgsolver/critical.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sgsolver/numeric.hpp"

namespace sg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool critical_enough(double res, double unorm, const SolverOptions& opt) {
    return res <= opt.tol_residual && res <= opt.tol_residual_rel * unorm;
}

DiscreteFunction sanitize_seed(const FunctionalContext& ctx, const DiscreteFunction& u0) {
    require(u0.level().level == ctx.level().level && u0.level().points == ctx.level().points,
            "solver: seed lives on a different level than the functional");
    DiscreteFunction u(ctx.level_ptr(), u0.values(), false);
    for (int v = 0; v < u.size(); ++v)
        if (!ctx.is_free(v)) u[v] = 0.0;
    return DiscreteFunction(ctx.level_ptr(), u.values(), true);
}

} // namespace

SolutionReport minimize(const FunctionalContext& ctx, const DiscreteFunction& u0,
                        const SolverOptions& opt) {
    const auto t0 = Clock::now();
    DiscreteFunction u = sanitize_seed(ctx, u0);
    double I = ctx.value(u);

    SolutionReport rep{u, I, 0.0, "minimizer"};
    rep.value_history.push_back(I);

    for (long it = 0; it < opt.max_iterations; ++it) {
        rep.iterations = it;
        DiscreteFunction g = ctx.energy_gradient(u);
        const double gg = energy(g);
        const double res = std::sqrt(gg);
        if (critical_enough(res, energy_norm(u), opt)) {
            rep.u = u;
            rep.energy_value = I;
            rep.residual = res;
            rep.converged = true;
            rep.wall_time_ms = elapsed_ms(t0);
            return rep;
        }

        double step = opt.initial_step;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= 0.5) {
            DiscreteFunction trial = lin_comb(1.0, u, -step, g);
            const double It = ctx.value(trial);
            if (It <= I - opt.sufficient_decrease * step * gg) {
                u = std::move(trial);
                I = It;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            rep.u = u;
            rep.energy_value = I;
            rep.residual = res;
            rep.converged = false;
            rep.note = "line search stalled above tolerance";
            rep.wall_time_ms = elapsed_ms(t0);
            return rep;
        }
        rep.value_history.push_back(I);
    }

    DiscreteFunction g = ctx.energy_gradient(u);
    rep.u = u;
    rep.energy_value = I;
    rep.residual = energy_norm(g);
    rep.iterations = opt.max_iterations;
    rep.converged = false;
    rep.note = "iteration cap reached";
    rep.wall_time_ms = elapsed_ms(t0);
    return rep;
}

SolutionReport minimize_in_ball(const FunctionalContext& ctx, double R,
                                const DiscreteFunction& u0, const SolverOptions& opt) {
    require(R > 0.0, "minimize_in_ball: radius must be positive");
    const auto t0 = Clock::now();
    DiscreteFunction u = sanitize_seed(ctx, u0);
    {
        const double n0 = energy_norm(u);
        require(n0 <= R * (1.0 + 1e-12), "minimize_in_ball: seed lies outside the ball");
        if (n0 > R) u.scale(R / n0);
    }
    double I = ctx.value(u);

    SolutionReport rep{u, I, 0.0, "ball-minimizer"};
    rep.value_history.push_back(I);

    auto finish = [&](const DiscreteFunction& point, double value, double res, bool conv,
                      bool pinned, long iters, std::string note) {
        rep.u = point;
        rep.energy_value = value;
        rep.residual = res;
        rep.converged = conv;
        rep.constrained = pinned;
        rep.iterations = iters;
        rep.note = std::move(note);
        rep.wall_time_ms = elapsed_ms(t0);
        return rep;
    };

    for (long it = 0; it < opt.max_iterations; ++it) {
        DiscreteFunction g = ctx.energy_gradient(u);
        const double gg = energy(g);
        const double res = std::sqrt(gg);
        const double un = energy_norm(u);
        const bool on_sphere = un >= R * (1.0 - 1e-9);

        if (critical_enough(res, un, opt))
            return finish(u, I, res, true, false, it, {});
        if (on_sphere && un > 0.0) {
            // stationarity of the constrained problem: gradient points outward
            // (g = a*u with a <= 0) up to a small tangential remainder
            const double a = inner(g, u) / (un * un);
            const double tan2 = std::max(gg - a * a * un * un, 0.0);
            const double pinned_res = a <= 0.0 ? std::sqrt(tan2) : res;
            if (critical_enough(pinned_res, un, opt))
                return finish(u, I, res, true, true, it,
                              "pinned to the sphere; multiplier " + std::to_string(-a));
        }

        double step = opt.initial_step;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= 0.5) {
            DiscreteFunction trial = lin_comb(1.0, u, -step, g);
            const double tn = energy_norm(trial);
            if (tn > R) trial.scale(R / tn);
            // predicted first-order decrease of the projected step
            const double pred = inner(g, lin_comb(1.0, u, -1.0, trial));
            if (pred <= 0.0) continue;
            const double It = ctx.value(trial);
            if (It <= I - opt.sufficient_decrease * pred) {
                u = std::move(trial);
                I = It;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            return finish(u, I, res, false, on_sphere,
                          it, "projected line search stalled above tolerance");
        rep.value_history.push_back(I);
    }

    DiscreteFunction g = ctx.energy_gradient(u);
    return finish(u, I, energy_norm(g), false, false, opt.max_iterations,
                  "iteration cap reached");
}

// --- mountain pass -------------------------------------------------------

namespace {

struct Path {
    std::vector<DiscreteFunction> pts;
    std::vector<double> vals;

    double max_all() const { return *std::max_element(vals.begin(), vals.end()); }
    double span() const {
        double s = 0.0;
        for (double v : vals) s = std::max(s, std::abs(v));
        return s;
    }
    int argmax_interior() const {
        int k = 1;
        for (int i = 2; i + 1 < static_cast<int>(pts.size()); ++i)
            if (vals[i] > vals[k]) k = i;
        return k;
    }
};

Path straight_path(const FunctionalContext& ctx, const DiscreteFunction& e, int K) {
    Path p;
    p.pts.reserve(K);
    p.vals.reserve(K);
    for (int i = 0; i < K; ++i) {
        const double t = static_cast<double>(i) / (K - 1);
        p.pts.push_back(lin_comb(t, e, 0.0, e));
        p.vals.push_back(ctx.value(p.pts.back()));
    }
    return p;
}

// Uniform energy-norm arclength resampling of the polyline. The sampled max
// may rise here: when the descended ridge point slides off the barrier, the
// resampled path re-covers the crossing segment the samples had lost. That is
// a corrected estimate, not a worse path, so it is always committed; the
// reported estimate sequence stays monotone by taking the running best.
void re_equalize(const FunctionalContext& ctx, Path& p) {
    const int K = static_cast<int>(p.pts.size());
    std::vector<double> cum(K, 0.0);
    for (int i = 1; i < K; ++i)
        cum[i] = cum[i - 1] + energy_norm(lin_comb(1.0, p.pts[i], -1.0, p.pts[i - 1]));
    const double total = cum[K - 1];
    if (total <= 0.0) return;

    Path out;
    out.pts.reserve(K);
    out.vals.reserve(K);
    out.pts.push_back(p.pts.front());
    out.vals.push_back(p.vals.front());
    int seg = 0;
    for (int j = 1; j + 1 < K; ++j) {
        const double target = total * j / (K - 1);
        while (seg + 2 < K && cum[seg + 1] < target) ++seg;
        const double w = cum[seg + 1] > cum[seg]
                             ? (target - cum[seg]) / (cum[seg + 1] - cum[seg])
                             : 0.0;
        out.pts.push_back(lin_comb(1.0 - w, p.pts[seg], w, p.pts[seg + 1]));
        out.vals.push_back(ctx.value(out.pts.back()));
    }
    out.pts.push_back(p.pts.back());
    out.vals.push_back(p.vals.back());
    p = std::move(out);
}

} // namespace

SolutionReport mountain_pass(const FunctionalContext& ctx, const DiscreteFunction& e,
                             int path_points, const SolverOptions& opt) {
    require(path_points >= 3, "mountain_pass: need at least 3 path points");
    require(energy(e) > 0.0, "mountain_pass: target must be nonzero");
    const auto t0 = Clock::now();

    DiscreteFunction target = sanitize_seed(ctx, e);
    SolutionReport rep{target, 0.0, 0.0, "mountain-pass"};
    long iters = 0;
    int collapses = 0;

    auto finish = [&](const DiscreteFunction& point, bool conv, std::string note) {
        rep.u = point;
        rep.energy_value = ctx.value(point);
        rep.residual = energy_norm(ctx.energy_gradient(point));
        rep.converged = conv;
        rep.iterations = iters;
        if (collapses > 0)
            note += (note.empty() ? "" : "; ") + std::string("target shrunk ") +
                    std::to_string(collapses) + "x to resolve a small-scale barrier";
        rep.note = std::move(note);
        rep.wall_time_ms = elapsed_ms(t0);
        return rep;
    };

    // saddle polish: reflect the gradient component along the secant through
    // the flanking path points, so the ridge direction is climbed while the
    // orthogonal complement keeps descending; the saddle is a stable fixed
    // point of this field.
    auto refine = [&](DiscreteFunction z, const DiscreteFunction& left,
                      const DiscreteFunction& right) {
        DiscreteFunction secant = lin_comb(1.0, right, -1.0, left);
        const double sn = energy_norm(secant);
        if (sn > 0.0) secant.scale(1.0 / sn);

        DiscreteFunction g = ctx.energy_gradient(z);
        double res = energy_norm(g);
        double step = 1.0;
        for (int it = 0; it < opt.max_refine; ++it, ++iters) {
            if (critical_enough(res, energy_norm(z), opt))
                return finish(z, true, {});
            if (sn <= 0.0) break;
            const double along = inner(g, secant);
            DiscreteFunction force = lin_comb(-1.0, g, 2.0 * along, secant);

            bool accepted = false;
            for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= 0.5) {
                DiscreteFunction trial = lin_comb(1.0, z, step, force);
                DiscreteFunction gt = ctx.energy_gradient(trial);
                const double rest = energy_norm(gt);
                if (rest < res * (1.0 - opt.sufficient_decrease * std::min(step, 1.0))) {
                    z = std::move(trial);
                    g = std::move(gt);
                    res = rest;
                    accepted = true;
                    step = std::min(step * 2.0, 1.0);
                    break;
                }
            }
            rep.refine_history.push_back(ctx.value(z));
            if (!accepted) break;
        }
        return finish(z, false, "saddle refinement stalled at residual " + std::to_string(res));
    };

    double parent_span = -1.0;  // value scale of the path that triggered a shrink
    double best = std::numeric_limits<double>::infinity();
    for (;;) {  // collapse restarts
        const double Ie = ctx.value(target);
        if (parent_span < 0.0)
            require(Ie <= 0.0, "mountain_pass: target must have nonpositive value");
        else if (Ie > 1e-9 * parent_span)
            return finish(target, false,
                          "collapse zoom overshot the barrier: no resolvable mountain "
                          "geometry at this scale");

        Path path = straight_path(ctx, target, path_points);
        int stagnant = 0;
        bool restart = false;

        for (int outer = 0; outer < opt.max_outer; ++outer, ++iters) {
            const int k = path.argmax_interior();
            const double endpoint_max = std::max(path.vals.front(), path.vals.back());

            if (path.vals[k] <= endpoint_max + 1e-12 * path.span()) {
                // no interior mountain at this resolution; zoom onto path[1]
                if (++collapses > opt.max_collapse_depth)
                    return finish(target, false,
                                  "path collapsed onto an endpoint: no mountain geometry at tolerance");
                target = path.pts[1];
                if (energy(target) <= 0.0)
                    return finish(target, false,
                                  "path collapsed onto an endpoint: no mountain geometry at tolerance");
                parent_span = std::max(path.span(), 1e-300);
                restart = true;
                break;
            }

            DiscreteFunction g = ctx.energy_gradient(path.pts[k]);
            const double gg = energy(g);
            const double res = std::sqrt(gg);
            if (critical_enough(res, energy_norm(path.pts[k]), opt))
                return finish(path.pts[k], true, {});

            double step = opt.initial_step;
            bool accepted = false;
            for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= 0.5) {
                DiscreteFunction trial = lin_comb(1.0, path.pts[k], -step, g);
                const double It = ctx.value(trial);
                if (It <= path.vals[k] - opt.sufficient_decrease * step * gg) {
                    path.pts[k] = std::move(trial);
                    path.vals[k] = It;
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                return refine(path.pts[k], path.pts[k - 1], path.pts[k + 1]);

            re_equalize(ctx, path);
            best = std::min(best, path.max_all());
            if (!rep.value_history.empty() &&
                std::abs(best - rep.value_history.back()) <=
                    opt.stagnation_tol * (1.0 + std::abs(best)))
                ++stagnant;
            else
                stagnant = 0;
            rep.value_history.push_back(best);

            if (stagnant >= opt.stagnation_window) {
                const int kk = path.argmax_interior();
                return refine(path.pts[kk], path.pts[kk - 1], path.pts[kk + 1]);
            }
        }
        if (restart) continue;

        // sweep budget exhausted without stagnation; polish what we have
        const int kk = path.argmax_interior();
        if (path.vals[kk] > std::max(path.vals.front(), path.vals.back()))
            return refine(path.pts[kk], path.pts[kk - 1], path.pts[kk + 1]);
        return finish(path.pts[kk], false, "sweep budget exhausted without mountain geometry");
    }
}

} // namespace sg
