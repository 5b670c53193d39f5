#include "sgsolver/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

namespace {

double sup_distance(const DiscreteFunction& a, const DiscreteFunction& b) {
    return lin_comb(1.0, a, -1.0, b).sup_norm();
}

} // namespace

ThreeSolutionsResult three_solutions(const ProblemSpec& spec_in, const PipelineOptions& opt) {
    ProblemSpec spec = spec_in;
    ThreeSolutionsResult out;
    out.thresholds.constants = compute_constants(spec.points, spec.q, spec.s);
    const ThresholdConstants& k = out.thresholds.constants;
    if (opt.auto_lambda) spec.lambda = 0.5 * k.Lambda;
    spec.validate();
    out.thresholds.points = spec.points;
    out.thresholds.level = spec.level;
    out.thresholds.lambda = spec.lambda;

    auto level = build_level(spec.points, spec.level);

    // sublinear stage: u_lambda
    ULambdaResult ul = compute_u_lambda(spec, level, opt.solver);
    out.thresholds.lambda_resolved = true;
    out.thresholds.degenerate = ul.degenerate;
    out.thresholds.u_norm = ul.norm;
    out.thresholds.psi_value = ul.psi_value;
    out.thresholds.identity_gap_rel = ul.identity_gap_rel;
    out.thresholds.norm_bound = ul.norm_bound;
    out.thresholds.norm_bound_ok = ul.norm_bound_ok;
    out.thresholds.norm_below_R = ul.norm < k.R;

    if (spec.lambda == 0.0) {
        out.spec = spec;
        out.status = "inapplicable";
        out.detail = "lambda = 0: the sublinear stage has only the zero minimizer";
        return out;
    }
    if (ul.degenerate) {
        out.spec = spec;
        out.status = "solver-failure";
        out.detail = "stage u_lambda: " + (ul.solve.note.empty() ? "collapsed to zero" : ul.solve.note);
        return out;
    }

    EtaThresholds etas = eta_thresholds(spec, k, ul.u);
    out.thresholds.etas = etas;
    out.thresholds.etas_valid = true;
    if (opt.auto_eta) spec.eta = 0.5 * etas.eta;
    out.spec = spec;
    out.in_regime = 0.0 < spec.lambda && spec.lambda < k.Lambda &&
                    0.0 <= spec.eta && spec.eta < etas.eta;

    FunctionalContext ctx(level, power_problem(spec));

    // stage 1: minimize inside the ball of radius R, seeded at u_lambda
    DiscreteFunction seed1 = ul.u;
    {
        const double n1 = energy_norm(seed1);
        if (n1 > k.R) {
            seed1.scale(0.9 * k.R / n1);
            out.detail = "u_lambda outside the ball; seed rescaled";
        }
    }
    try {
        out.solutions.push_back(minimize_in_ball(ctx, k.R, seed1, opt.solver));
        out.solutions.back().kind = "ball-minimizer";
    } catch (const std::exception& ex) {
        out.status = "solver-failure";
        out.detail = std::string("stage ball-minimizer: ") + ex.what();
        return out;
    }

    // stage 2: mountain pass between 0 and u_lambda
    try {
        out.solutions.push_back(mountain_pass(ctx, ul.u, opt.path_points, opt.solver));
        out.solutions.back().kind = "mountain-pass-small";
    } catch (const std::exception& ex) {
        out.status = "solver-failure";
        out.detail = std::string("stage mountain-pass-small: ") + ex.what();
        return out;
    }

    // stage 3: push the target beyond the sphere and below zero, then pass again
    double t = 1.0;
    const double un = energy_norm(ul.u);
    bool found = false;
    for (int d = 0; d <= opt.doubling_cap; ++d, t *= 2.0) {
        if (t * un > k.R && ctx.value(lin_comb(t, ul.u, 0.0, ul.u)) < 0.0) {
            out.doublings = d;
            found = true;
            break;
        }
    }
    if (!found) {
        out.status = "solver-failure";
        out.detail = "stage large-target: doubling cap exhausted before I(t u_lambda) < 0 "
                     "beyond the sphere";
        return out;
    }
    DiscreteFunction e3 = lin_comb(t, ul.u, 0.0, ul.u);
    try {
        out.solutions.push_back(mountain_pass(ctx, e3, opt.path_points, opt.solver));
        out.solutions.back().kind = "mountain-pass-large";
    } catch (const std::exception& ex) {
        out.status = "solver-failure";
        out.detail = std::string("stage mountain-pass-large: ") + ex.what();
        return out;
    }

    const SolutionReport& u1 = out.solutions[0];
    const SolutionReport& u2 = out.solutions[1];
    const SolutionReport& u3 = out.solutions[2];
    out.ordering.u1_negative = u1.energy_value < 0.0;
    out.ordering.u2_nonnegative = 0.0 <= u2.energy_value;
    out.ordering.u2_below_barrier = u2.energy_value < k.barrier;
    out.ordering.u3_above_barrier = k.barrier <= u3.energy_value;
    out.sup_dist_12 = sup_distance(u1.u, u2.u);
    out.sup_dist_13 = sup_distance(u1.u, u3.u);
    out.sup_dist_23 = sup_distance(u2.u, u3.u);

    if (!out.all_converged()) {
        out.status = "solver-failure";
        for (const auto& s : out.solutions)
            if (!s.converged) {
                out.detail = "stage " + s.kind + ": " + (s.note.empty() ? "did not converge" : s.note);
                break;
            }
        return out;
    }
    if (!out.in_regime) {
        out.status = "out-of-regime";
        return out;
    }
    if (u1.constrained) {
        out.status = "falsified";
        out.detail = "ball minimizer pinned to the sphere contradicts the interior-minimum argument";
        return out;
    }
    if (!out.ordering.all()) {
        out.status = "falsified";
        out.detail = "in-regime energy ordering violated";
        return out;
    }
    out.status = "ok";
    return out;
}

} // namespace sg
