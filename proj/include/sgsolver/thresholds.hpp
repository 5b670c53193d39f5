#pragma once

#include <memory>
#include <string>

#include "sgsolver/critical.hpp"

namespace sg {

// Explicit constants delimiting the three-solution parameter region.
struct ThresholdConstants {
    double c = 0.0;        // sup-norm embedding constant, 2N+3
    double R = 0.0;        // ball radius c^(-q/(q-2)), so c^q R^q = R^2
    double barrier = 0.0;  // barrier level (1/2)(1/2 - 1/q) R^2, named m elsewhere
    double Lambda = 0.0;   // admissible upper bound for lambda
};

// c = 2N+3, R = c^(-q/(q-2)), barrier = (1/2)(1/2-1/q)R^2,
// Lambda = min(barrier*s/(c^s R^s), R^(2-s)/c^s).
// Throws when the defining identity c^q R^q = R^2 drifts beyond 1e-14 relative.
ThresholdConstants compute_constants(int N, double q, double s);

struct ULambdaResult {
    DiscreteFunction u;
    SolutionReport solve;
    bool degenerate = false;        // minimizer is (numerically) zero
    double psi_value = 0.0;         // (1/2)||u||^2 - (lambda/s) int |u|^s at the result
    double norm = 0.0;              // ||u||
    double identity_gap_rel = 0.0;  // | ||u||^2 - lambda int|u|^s | / ||u||^2
    double norm_bound = 0.0;        // (lambda c^s)^(1/(2-s))
    bool norm_bound_ok = false;     // ||u|| <= norm_bound
};

// Minimize the sublinear-stage functional psi(u) = (1/2)||u||^2 - (lambda/s) int |u|^s
// from a canonical positive seed: the harmonic bump scaled so psi starts negative.
ULambdaResult compute_u_lambda(const ProblemSpec& spec,
                               std::shared_ptr<const GasketLevel> level,
                               const SolverOptions& opt);

struct EtaThresholds {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta = 0.0;  // min of the two
};

// eta1 = r*(||u||^2 (1/s - 1/2) + (1/q) int|u|^q) / int|u|^r,
// eta2 = barrier * r / int|u|^r; both positive for nonzero u.
EtaThresholds eta_thresholds(const ProblemSpec& spec, const ThresholdConstants& consts,
                             const DiscreteFunction& u_lambda);

// Aggregate emitted by the thresholds stage and embedded in pipeline reports.
struct ThresholdReport {
    ThresholdConstants constants;
    int points = 0;
    int level = 0;
    double lambda = 0.0;
    bool lambda_resolved = false;  // lambda diagnostics below are meaningful
    bool degenerate = false;
    double u_norm = 0.0;
    double psi_value = 0.0;
    double identity_gap_rel = 0.0;
    double norm_bound = 0.0;
    bool norm_bound_ok = false;
    bool norm_below_R = false;
    EtaThresholds etas;
    bool etas_valid = false;
    std::string notes;
};

struct Rho2Estimate {
    double rho2_lower = 0.0;
    double Lambda_upper = 0.0;  // 1/rho2_lower
    DiscreteFunction truncated_witness;
    DiscreteFunction improved_witness;
    double truncated_ratio = 0.0;
    int plateau_vertices = 0;  // where the truncation clips at t1
};

// One-sided bound on rho2 = sup J/Phi over positive-energy functions for a
// nonlinearity satisfying the growth conditions with plateau level t1:
// build the clipped bump witness, then improve the ratio by normalized
// gradient ascent kept away from Phi = 0. Lambda_upper = 1/rho2_lower is an
// upper bound only; the true supremum may be larger (even infinite).
Rho2Estimate estimate_rho2(const Nonlinearity& nl, double t1,
                           std::shared_ptr<const GasketLevel> level,
                           int ascent_steps = 50);

// The positive profile used as a canonical seed: 1 at every depth-1 interior
// vertex, 0 on the boundary, extended harmonically down to the given level.
DiscreteFunction harmonic_bump(std::shared_ptr<const GasketLevel> level);

} // namespace sg
