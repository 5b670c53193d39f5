#include "sgsolver/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

FunctionalContext::FunctionalContext(std::shared_ptr<const GasketLevel> level, Nonlinearity nl)
    : level_(std::move(level)), nl_(std::move(nl)) {
    build_adjacency({});
}

FunctionalContext::FunctionalContext(std::shared_ptr<const GasketLevel> level, Nonlinearity nl,
                                     const std::vector<int>& frozen)
    : level_(std::move(level)), nl_(std::move(nl)) {
    build_adjacency(frozen);
}

void FunctionalContext::build_adjacency(const std::vector<int>& frozen) {
    require(static_cast<bool>(nl_.f) && static_cast<bool>(nl_.F),
            "FunctionalContext: nonlinearity must provide both f and F");
    const GasketLevel& g = *level_;
    const int n = g.vertex_count();

    free_.assign(n, 1);
    for (int b : g.boundary) free_[b] = 0;
    for (int v : frozen) {
        require(v >= 0 && v < n, "FunctionalContext: frozen index out of range");
        free_[v] = 0;
    }
    free_count_ = 0;
    for (char c : free_) free_count_ += c;

    std::vector<int> degree(n, 0);
    for (const auto& e : g.edges) {
        ++degree[e[0]];
        ++degree[e[1]];
    }
    adj_offsets_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) adj_offsets_[v + 1] = adj_offsets_[v] + degree[v];
    adj_.assign(adj_offsets_[n], 0);
    std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (const auto& e : g.edges) {
        adj_[cursor[e[0]]++] = e[1];
        adj_[cursor[e[1]]++] = e[0];
    }

    inv_diag_.assign(n, 0.0);
    for (int v = 0; v < n; ++v)
        if (free_[v]) inv_diag_[v] = 1.0 / (g.energy_scale * degree[v]);
}

double FunctionalContext::value(const DiscreteFunction& u) const {
    CompensatedSum acc;
    const auto& w = level_->weights;
    for (int v = 0; v < level_->vertex_count(); ++v)
        if (w[v] != 0.0) acc.add(w[v] * nl_.F(v, u[v]));
    return 0.5 * energy(u) - acc.value();
}

DiscreteFunction FunctionalContext::weak_residual(const DiscreteFunction& u) const {
    const GasketLevel& g = *level_;
    DiscreteFunction r(level_, true);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!free_[v]) continue;
        CompensatedSum acc;
        for (int k = adj_offsets_[v]; k < adj_offsets_[v + 1]; ++k)
            acc.add(u[v] - u[adj_[k]]);
        r[v] = g.energy_scale * acc.value() - g.weights[v] * nl_.f(v, u[v]);
    }
    return r;
}

DiscreteFunction FunctionalContext::solve_energy_identity(const DiscreteFunction& rhs,
                                                          SolveStats* stats) const {
    const GasketLevel& g = *level_;
    const int n = g.vertex_count();

    // A x = vector of W(x, phi_v) over free v; SPD on the free subspace.
    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (int v = 0; v < n; ++v) {
            if (!free_[v]) { out[v] = 0.0; continue; }
            double acc = 0.0;
            for (int k = adj_offsets_[v]; k < adj_offsets_[v + 1]; ++k)
                acc += x[v] - x[adj_[k]];
            out[v] = g.energy_scale * acc;
        }
    };

    std::vector<double> x(n, 0.0), r(n, 0.0), z(n, 0.0), p(n, 0.0), Ap(n, 0.0);
    double bnorm2 = 0.0;
    for (int v = 0; v < n; ++v) {
        if (!free_[v]) continue;
        r[v] = rhs[v];
        bnorm2 += r[v] * r[v];
    }

    SolveStats local;
    if (bnorm2 == 0.0) {
        if (stats) *stats = local;
        return DiscreteFunction(level_, std::move(x), true);
    }

    const double stop2 = bnorm2 * cg_tol * cg_tol;
    double rz = 0.0;
    for (int v = 0; v < n; ++v) {
        z[v] = r[v] * inv_diag_[v];
        p[v] = z[v];
        rz += r[v] * z[v];
    }

    const int max_iter = cg_max_rounds * std::max(free_count_, 1);
    double rnorm2 = bnorm2;
    int it = 0;
    while (rnorm2 > stop2 && it < max_iter) {
        apply(p, Ap);
        double pAp = 0.0;
        for (int v = 0; v < n; ++v)
            if (free_[v]) pAp += p[v] * Ap[v];
        if (pAp <= 0.0) break;  // lost positivity to rounding; return best iterate
        const double alpha = rz / pAp;
        rnorm2 = 0.0;
        for (int v = 0; v < n; ++v) {
            if (!free_[v]) continue;
            x[v] += alpha * p[v];
            r[v] -= alpha * Ap[v];
            rnorm2 += r[v] * r[v];
        }
        double rz_next = 0.0;
        for (int v = 0; v < n; ++v) {
            if (!free_[v]) continue;
            z[v] = r[v] * inv_diag_[v];
            rz_next += r[v] * z[v];
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int v = 0; v < n; ++v)
            if (free_[v]) p[v] = z[v] + beta * p[v];
        ++it;
    }

    local.iterations = it;
    local.residual = std::sqrt(rnorm2 / bnorm2);
    local.converged = rnorm2 <= stop2;
    if (stats) *stats = local;
    if (!local.converged)
        throw std::runtime_error("solve_energy_identity: conjugate gradients stalled at relative residual " +
                                 std::to_string(local.residual));
    return DiscreteFunction(level_, std::move(x), true);
}

DiscreteFunction FunctionalContext::energy_gradient(const DiscreteFunction& u,
                                                    SolveStats* stats) const {
    return solve_energy_identity(weak_residual(u), stats);
}

double FunctionalContext::integral_pow(const DiscreteFunction& u, double p) const {
    CompensatedSum acc;
    const auto& w = level_->weights;
    for (int v = 0; v < level_->vertex_count(); ++v)
        acc.add(w[v] * std::pow(std::abs(u[v]), p));
    return acc.value();
}

double FunctionalContext::integral_F(const DiscreteFunction& u) const {
    CompensatedSum acc;
    const auto& w = level_->weights;
    for (int v = 0; v < level_->vertex_count(); ++v)
        acc.add(w[v] * nl_.F(v, u[v]));
    return acc.value();
}

} // namespace sg
