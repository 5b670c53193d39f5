#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgsolver/critical.hpp"
#include "sgsolver/thresholds.hpp"

namespace sg {

struct PipelineOptions {
    SolverOptions solver;
    int path_points = 33;
    // step-3 scale search: double t until ||t u_lambda|| > R and I(t u_lambda) < 0.
    // The sublinear minimizer can sit 20 orders of magnitude below R, so the
    // cap must accommodate t around 2^90.
    int doubling_cap = 200;
    bool auto_lambda = false;  // resolve lambda = Lambda/2
    bool auto_eta = false;     // resolve eta = eta_lambda/2
};

struct OrderingCheck {
    bool u1_negative = false;       // I(u1) < 0
    bool u2_nonnegative = false;    // 0 <= I(u2)
    bool u2_below_barrier = false;  // I(u2) < barrier
    bool u3_above_barrier = false;  // barrier <= I(u3)
    bool all() const {
        return u1_negative && u2_nonnegative && u2_below_barrier && u3_above_barrier;
    }
};

struct ThreeSolutionsResult {
    ProblemSpec spec;  // lambda and eta resolved to their numeric values
    ThresholdReport thresholds;
    std::vector<SolutionReport> solutions;  // ball minimizer, small pass, large pass
    OrderingCheck ordering;
    double sup_dist_12 = 0.0;
    double sup_dist_13 = 0.0;
    double sup_dist_23 = 0.0;
    bool in_regime = false;
    int doublings = 0;
    // ok | out-of-regime | inapplicable | falsified | solver-failure
    std::string status;
    std::string detail;

    bool all_converged() const {
        if (solutions.size() != 3) return false;
        for (const auto& s : solutions)
            if (!s.converged) return false;
        return true;
    }
};

// The three-stage run: (1) sublinear minimizer seeds a ball-constrained
// minimization inside radius R; (2) mountain pass between 0 and the sublinear
// minimizer; (3) mountain pass between 0 and a doubled multiple of it beyond
// the sphere. Verifies the energy ordering
//   I(u1) < 0 <= I(u2) < barrier <= I(u3)
// in-regime; a violation there is reported as "falsified", never swallowed.
ThreeSolutionsResult three_solutions(const ProblemSpec& spec, const PipelineOptions& opt);

} // namespace sg
