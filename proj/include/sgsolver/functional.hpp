#pragma once

#include <memory>
#include <vector>

#include "sgsolver/energy.hpp"
#include "sgsolver/gasket.hpp"
#include "sgsolver/nonlinearity.hpp"

namespace sg {

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

// The discrete energy functional I(u) = 1/2 W(u) - sum_x w(x) F(x, u(x))
// together with its weak derivative and the gradient in the energy metric.
// Immutable after construction; all evaluation methods are const and reentrant.
class FunctionalContext {
public:
    FunctionalContext(std::shared_ptr<const GasketLevel> level, Nonlinearity nl);
    // Variant with extra frozen vertices that are held at zero like the
    // boundary; used for reduced (few-degrees-of-freedom) surrogates.
    FunctionalContext(std::shared_ptr<const GasketLevel> level, Nonlinearity nl,
                      const std::vector<int>& frozen);

    const GasketLevel& level() const { return *level_; }
    const std::shared_ptr<const GasketLevel>& level_ptr() const { return level_; }
    const Nonlinearity& nonlinearity() const { return nl_; }
    bool is_free(int v) const { return free_[v] != 0; }
    int free_count() const { return free_count_; }

    // I(u); u must be zero on the boundary (and on frozen vertices).
    double value(const DiscreteFunction& u) const;

    // Dual coefficients of I'(u) against vertex indicators: at a free vertex x
    // the component is W(u, phi_x) - w(x) f(x, u(x)); zero elsewhere.
    DiscreteFunction weak_residual(const DiscreteFunction& u) const;

    // Riesz representative g of I'(u): W(g, phi_x) = weak_residual(u)(x) on
    // free vertices, g = 0 elsewhere. ||g|| in the energy norm is the
    // residual magnitude used by every stopping rule.
    DiscreteFunction energy_gradient(const DiscreteFunction& u, SolveStats* stats = nullptr) const;

    // Solve W(g, phi_x) = rhs(x) for free x (SPD, matrix-free preconditioned
    // conjugate gradients, relative tolerance cg_tol).
    DiscreteFunction solve_energy_identity(const DiscreteFunction& rhs,
                                           SolveStats* stats = nullptr) const;

    // Quadrature sums over the vertex measure.
    double integral_pow(const DiscreteFunction& u, double p) const;  // sum w |u|^p
    double integral_F(const DiscreteFunction& u) const;              // sum w F(x,u(x))

    double cg_tol = 1e-12;
    int cg_max_rounds = 10;  // multiples of the free-vertex count

private:
    void build_adjacency(const std::vector<int>& frozen);

    std::shared_ptr<const GasketLevel> level_;
    Nonlinearity nl_;
    std::vector<int> adj_offsets_;
    std::vector<int> adj_;
    std::vector<char> free_;
    std::vector<double> inv_diag_;  // preconditioner: 1/(scale*degree) on free vertices
    int free_count_ = 0;
};

} // namespace sg
