////////////////////////////////////////////////////////////////////////////////
// energy.hpp
//
// Discrete functions on a gasket level and the renormalized graph energy
//
//   W_m(u) = ((N+2)/N)^m * sum over edges (u(x) - u(y))^2,
//
// each unordered edge counted once, accumulated with compensated summation in
// a fixed edge order. The scaling makes W_m nondecreasing in m on restrictions
// and makes the per-cell harmonic extension energy-preserving.
////////////////////////////////////////////////////////////////////////////////
#ifndef SGSOLVER_ENERGY_HPP
#define SGSOLVER_ENERGY_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "sgsolver/gasket.hpp"

namespace sg {

class DiscreteFunction {
public:
    // Zero function on the level; zero_boundary marks the admissible class
    // (values pinned to 0 on the corner set).
    explicit DiscreteFunction(std::shared_ptr<const GasketLevel> level,
                              bool zero_boundary = true);
    DiscreteFunction(std::shared_ptr<const GasketLevel> level,
                     std::vector<double> values, bool zero_boundary);

    const GasketLevel& level() const { return *level_; }
    const std::shared_ptr<const GasketLevel>& level_ptr() const { return level_; }
    bool zero_boundary() const { return zero_boundary_; }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int v) const { return values_[v]; }
    double& operator[](int v) { return values_[v]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // In-place this += alpha * v (same level required).
    void add_scaled(double alpha, const DiscreteFunction& v);
    void scale(double alpha);

    double sup_norm() const;

private:
    std::shared_ptr<const GasketLevel> level_;
    std::vector<double> values_;
    bool zero_boundary_;
};

// a*u + b*v on the common level.
DiscreteFunction lin_comb(double a, const DiscreteFunction& u,
                          double b, const DiscreteFunction& v);

// W_m(u).
double energy(const DiscreteFunction& u);

// Bilinear form with inner(u, u) == energy(u). Throws on level mismatch.
double inner(const DiscreteFunction& u, const DiscreteFunction& v);

inline double energy_norm(const DiscreteFunction& u);

struct SupBoundCheck {
    double sup = 0.0;
    double bound = 0.0; // (2N+3) * sqrt(W_m(u))
    bool holds = false;
};

// Uniform-norm bound with the explicit constant 2N+3; requires zero boundary.
SupBoundCheck sup_norm_bound_check(const DiscreteFunction& u);

// Pointwise composition h(u(x)) for L-Lipschitz h with h(0) = 0; the energy of
// the result never exceeds L^2 * energy(u).
DiscreteFunction lipschitz_compose(const std::function<double(double)>& h, double L,
                                   const DiscreteFunction& u);

// Energy-minimizing extension of u to the next level: old vertices keep their
// values, the new vertex between corners i, j of a cell gets
// (2(b_i + b_j) + sum of remaining corners)/(N+2), the unique per-cell
// stationary point. Preserves W exactly in exact arithmetic.
DiscreteFunction harmonic_extension(const DiscreteFunction& u,
                                    std::shared_ptr<const GasketLevel> fine);
DiscreteFunction harmonic_extension(const DiscreteFunction& u);

// Values of u at the vertices of a coarser level of the same gasket.
DiscreteFunction restrict_to(const DiscreteFunction& u,
                             std::shared_ptr<const GasketLevel> coarse);

inline double energy_norm(const DiscreteFunction& u) {
    return std::sqrt(energy(u));
}

} // namespace sg

#endif
