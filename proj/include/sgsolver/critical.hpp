#pragma once

#include <string>
#include <vector>

#include "sgsolver/functional.hpp"

namespace sg {

struct SolverOptions {
    // A point counts as critical only when the gradient is small both
    // absolutely and relative to the iterate: minimizers of the sublinear
    // stage live at norms around 1e-22, where an absolute test alone is
    // vacuously true long before criticality.
    double tol_residual = 1e-8;
    double tol_residual_rel = 1e-8;
    int max_iterations = 50000;
    double initial_step = 1.0;
    double sufficient_decrease = 1e-4;
    int max_backtracks = 60;

    // mountain-pass controls
    int max_outer = 4000;            // path deformation sweeps
    int stagnation_window = 12;      // sweeps of flat path max before refinement
    double stagnation_tol = 1e-6;
    int max_collapse_depth = 12;     // times the target may shrink onto path[1]
    int max_refine = 20000;          // saddle refinement steps
};

struct SolutionReport {
    DiscreteFunction u;
    double energy_value = 0.0;
    double residual = 0.0;
    std::string kind{};      // minimizer | ball-minimizer | mountain-pass
    bool converged = false;
    bool constrained = false;  // pinned to the ball boundary (not a critical point)
    long iterations = 0;
    double wall_time_ms = 0.0;
    std::string note{};
    // minimize: I per accepted iterate. mountain_pass: running best (lowest)
    // sampled path max, so nonincreasing; refine_history tracks the saddle polish.
    std::vector<double> value_history{};
    std::vector<double> refine_history{};
};

// Gradient descent in the energy metric with backtracking line search.
// Monotone nonincreasing I along accepted iterates by construction.
SolutionReport minimize(const FunctionalContext& ctx, const DiscreteFunction& u0,
                        const SolverOptions& opt);

// Projected descent over the closed ball of radius R in the energy norm.
// An interior converged point is a genuine critical point; a boundary-pinned
// stationary point is flagged constrained instead.
SolutionReport minimize_in_ball(const FunctionalContext& ctx, double R,
                                const DiscreteFunction& u0, const SolverOptions& opt);

// Path-deformation mountain pass between 0 and e. The straight segment is
// sampled at path_points; each sweep pulls the maximal point downhill and
// re-equalizes the parametrization by energy-norm arclength. Once the path
// max stagnates, the maximal point is polished to the saddle by reflecting
// the gradient component along the local path secant. A path whose interior
// never rises above the endpoints shrinks the target onto path[1] and
// restarts (the barrier may sit at a much smaller norm than e).
SolutionReport mountain_pass(const FunctionalContext& ctx, const DiscreteFunction& e,
                             int path_points, const SolverOptions& opt);

} // namespace sg
