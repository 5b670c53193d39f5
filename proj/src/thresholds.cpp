#include "sgsolver/thresholds.hpp"

#include <cmath>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

ThresholdConstants compute_constants(int N, double q, double s) {
    require(N >= 2, "compute_constants: need at least 2 simplex corners");
    require(q > 2.0, "compute_constants: q must exceed 2");
    require(1.0 < s && s < 2.0, "compute_constants: s must lie in ]1,2[");

    ThresholdConstants k;
    k.c = 2.0 * N + 3.0;
    k.R = std::pow(k.c, -q / (q - 2.0));
    k.barrier = 0.5 * (0.5 - 1.0 / q) * k.R * k.R;
    const double csRs = std::pow(k.c, s) * std::pow(k.R, s);
    k.Lambda = std::min(k.barrier * s / csRs, std::pow(k.R, 2.0 - s) / std::pow(k.c, s));

    const double identity = std::pow(k.c, q) * std::pow(k.R, q);
    if (!rel_close(identity, k.R * k.R, 1e-14, 0.0))
        throw std::logic_error("compute_constants: c^q R^q = R^2 drifted beyond 1e-14");
    return k;
}

DiscreteFunction harmonic_bump(std::shared_ptr<const GasketLevel> level) {
    require(level->level >= 1, "harmonic_bump: need at least one refinement level");
    auto base = level->level == 1 ? level : build_level(level->points, 1);
    DiscreteFunction u(base, true);
    for (int v = 0; v < base->vertex_count(); ++v)
        if (!base->is_boundary(v)) u[v] = 1.0;
    for (int m = 2; m <= level->level; ++m) {
        auto fine = m == level->level ? level : build_level(level->points, m);
        u = harmonic_extension(u, fine);
    }
    return u;
}

namespace {

double integral_abs_pow(const DiscreteFunction& u, double p) {
    CompensatedSum acc;
    const auto& w = u.level().weights;
    for (int v = 0; v < u.size(); ++v) acc.add(w[v] * std::pow(std::abs(u[v]), p));
    return acc.value();
}

} // namespace

ULambdaResult compute_u_lambda(const ProblemSpec& spec,
                               std::shared_ptr<const GasketLevel> level,
                               const SolverOptions& opt) {
    spec.validate();
    require(level->points == spec.points && level->level == spec.level,
            "compute_u_lambda: level does not match the problem spec");
    const double lam = spec.lambda, s = spec.s;
    const double c = 2.0 * spec.points + 3.0;

    if (lam == 0.0) {
        ULambdaResult out{DiscreteFunction(level, true), SolutionReport{DiscreteFunction(level, true)}};
        out.solve.kind = "minimizer";
        out.solve.converged = true;
        out.solve.note = "lambda = 0: the sublinear stage has only the zero minimizer";
        out.degenerate = true;
        out.norm_bound_ok = true;
        return out;
    }

    FunctionalContext psi(level, power_single_term(lam, s));
    DiscreteFunction v = harmonic_bump(level);

    // scale the bump so psi(t v) sits at half the admissible negativity bound:
    // t^(2-s) = lambda int|v|^s / (s ||v||^2) makes psi(t v) = -(lambda/2s) t^s int|v|^s
    const double vv = energy(v);
    const double vs = integral_abs_pow(v, s);
    const double t = std::pow(lam * vs / (s * vv), 1.0 / (2.0 - s));
    DiscreteFunction seed = lin_comb(t, v, 0.0, v);

    ULambdaResult out{seed, minimize(psi, seed, opt)};
    out.u = out.solve.u;
    out.psi_value = out.solve.energy_value;
    const double uu = energy(out.u);
    out.norm = std::sqrt(uu);
    out.degenerate = !(out.psi_value < 0.0) || uu == 0.0;
    if (out.degenerate)
        out.solve.note += (out.solve.note.empty() ? "" : "; ") +
                          std::string("sublinear stage collapsed to zero");

    if (uu > 0.0) {
        const double us = integral_abs_pow(out.u, s);
        out.identity_gap_rel = std::abs(uu - lam * us) / uu;
    }
    out.norm_bound = std::pow(lam * std::pow(c, s), 1.0 / (2.0 - s));
    out.norm_bound_ok = out.norm <= out.norm_bound;
    return out;
}

EtaThresholds eta_thresholds(const ProblemSpec& spec, const ThresholdConstants& consts,
                             const DiscreteFunction& u_lambda) {
    spec.validate();
    const double uu = energy(u_lambda);
    require(uu > 0.0, "eta_thresholds: needs a nonzero u_lambda");
    const double ir = integral_abs_pow(u_lambda, spec.r);
    if (ir <= 0.0)
        throw std::logic_error("eta_thresholds: int |u_lambda|^r vanished for a nonzero function");
    const double iq = integral_abs_pow(u_lambda, spec.q);

    EtaThresholds out;
    out.eta1 = spec.r * (uu * (1.0 / spec.s - 0.5) + iq / spec.q) / ir;
    out.eta2 = consts.barrier * spec.r / ir;
    out.eta = std::min(out.eta1, out.eta2);
    return out;
}

Rho2Estimate estimate_rho2(const Nonlinearity& nl, double t1,
                           std::shared_ptr<const GasketLevel> level,
                           int ascent_steps) {
    require(t1 != 0.0, "estimate_rho2: plateau level t1 must be nonzero");
    FunctionalContext ctx(level, nl);

    // clipped-bump witness: a nonnegative (t1 > 0) bump exceeding t1, cut off
    // at t1 by a 1-Lipschitz truncation fixing 0
    DiscreteFunction bump = harmonic_bump(level);
    bump.scale(2.0 * t1);
    auto clip = t1 > 0.0 ? std::function<double(double)>([t1](double x) { return std::min(x, t1); })
                         : std::function<double(double)>([t1](double x) { return std::max(x, t1); });
    DiscreteFunction u1 = lipschitz_compose(clip, 1.0, bump);

    Rho2Estimate out{0.0, 0.0, u1, u1};
    for (int v = 0; v < u1.size(); ++v)
        if (u1[v] == t1) ++out.plateau_vertices;

    const double J1 = ctx.integral_F(u1);
    const double Phi1 = 0.5 * energy(u1);
    require(Phi1 > 0.0, "estimate_rho2: truncated witness has zero energy");
    if (J1 <= 0.0)
        throw std::runtime_error(
            "estimate_rho2: truncated witness has nonpositive numerator; the "
            "positivity condition fails for this nonlinearity at t1");
    out.truncated_ratio = J1 / Phi1;

    // normalized gradient ascent on J/Phi, kept away from Phi = 0
    DiscreteFunction cur = u1;
    double best = out.truncated_ratio;
    const double norm_floor = 1e-6 * energy_norm(u1);
    double step_rel = 0.25;
    for (int it = 0; it < ascent_steps; ++it) {
        const double cc = energy(cur);
        if (cc <= norm_floor * norm_floor) break;
        DiscreteFunction rhs(level, true);
        for (int v = 0; v < cur.size(); ++v)
            if (ctx.is_free(v)) rhs[v] = level->weights[v] * nl.f(v, cur[v]);
        DiscreteFunction gJ = ctx.solve_energy_identity(rhs);
        const double rho = ctx.integral_F(cur) / (0.5 * cc);
        DiscreteFunction dir = lin_comb(1.0, gJ, -rho, cur);
        const double dn = energy_norm(dir);
        if (dn == 0.0) break;

        DiscreteFunction trial = lin_comb(1.0, cur, step_rel * energy_norm(cur) / dn, dir);
        const double tt = energy(trial);
        if (tt <= norm_floor * norm_floor) {
            step_rel *= 0.5;
            continue;
        }
        const double rho_t = ctx.integral_F(trial) / (0.5 * tt);
        if (rho_t > best) {
            best = rho_t;
            cur = std::move(trial);
            out.improved_witness = cur;
            step_rel = std::min(step_rel * 1.5, 1.0);
        } else {
            step_rel *= 0.5;
            if (step_rel < 1e-12) break;
        }
    }

    out.rho2_lower = best;
    out.Lambda_upper = 1.0 / best;
    return out;
}

} // namespace sg
