#include "sgsolver/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

namespace {

void check_same_level(const GasketLevel& a, const GasketLevel& b, const char* what) {
    if (a.points != b.points || a.level != b.level ||
        a.vertex_count() != b.vertex_count())
        throw std::invalid_argument(std::string(what) + ": level mismatch");
}

} // namespace

DiscreteFunction::DiscreteFunction(std::shared_ptr<const GasketLevel> level,
                                   bool zero_boundary)
    : level_(std::move(level)),
      values_(level_->vertex_count(), 0.0),
      zero_boundary_(zero_boundary) {}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const GasketLevel> level,
                                   std::vector<double> values, bool zero_boundary)
    : level_(std::move(level)), values_(std::move(values)), zero_boundary_(zero_boundary) {
    require(static_cast<int>(values_.size()) == level_->vertex_count(),
            "DiscreteFunction: value count does not match the level");
    if (zero_boundary_)
        for (int b : level_->boundary)
            require(values_[b] == 0.0,
                    "DiscreteFunction: zero-boundary function with nonzero corner value");
}

void DiscreteFunction::add_scaled(double alpha, const DiscreteFunction& v) {
    check_same_level(*level_, v.level(), "add_scaled");
    for (int i = 0; i < size(); ++i) values_[i] += alpha * v.values_[i];
    zero_boundary_ = zero_boundary_ && v.zero_boundary_;
}

void DiscreteFunction::scale(double alpha) {
    for (double& x : values_) x *= alpha;
}

double DiscreteFunction::sup_norm() const {
    double s = 0.0;
    for (double x : values_) s = std::max(s, std::abs(x));
    return s;
}

DiscreteFunction lin_comb(double a, const DiscreteFunction& u,
                          double b, const DiscreteFunction& v) {
    check_same_level(u.level(), v.level(), "lin_comb");
    DiscreteFunction out(u.level_ptr(), u.zero_boundary() && v.zero_boundary());
    for (int i = 0; i < u.size(); ++i) out[i] = a * u[i] + b * v[i];
    return out;
}

double energy(const DiscreteFunction& u) {
    const GasketLevel& g = u.level();
    CompensatedSum acc;
    for (const auto& e : g.edges) {
        double d = u[e[0]] - u[e[1]];
        acc.add(d * d);
    }
    return g.energy_scale * acc.value();
}

double inner(const DiscreteFunction& u, const DiscreteFunction& v) {
    check_same_level(u.level(), v.level(), "inner");
    const GasketLevel& g = u.level();
    CompensatedSum acc;
    for (const auto& e : g.edges) {
        double du = u[e[0]] - u[e[1]];
        double dv = v[e[0]] - v[e[1]];
        acc.add(du * dv);
    }
    return g.energy_scale * acc.value();
}

SupBoundCheck sup_norm_bound_check(const DiscreteFunction& u) {
    require(u.zero_boundary(), "sup_norm_bound_check: needs a zero-boundary function");
    SupBoundCheck r;
    r.sup = u.sup_norm();
    r.bound = (2.0 * u.level().points + 3.0) * std::sqrt(energy(u));
    r.holds = r.sup <= r.bound;
    return r;
}

DiscreteFunction lipschitz_compose(const std::function<double(double)>& h, double L,
                                   const DiscreteFunction& u) {
    require(L >= 0.0, "lipschitz_compose: negative Lipschitz constant");
    require(h(0.0) == 0.0, "lipschitz_compose: h(0) must be 0");
    DiscreteFunction out(u.level_ptr(), u.zero_boundary());
    for (int i = 0; i < u.size(); ++i) out[i] = h(u[i]);
    if (u.zero_boundary())
        for (int b : u.level().boundary) out[b] = 0.0;
    return out;
}

DiscreteFunction harmonic_extension(const DiscreteFunction& u,
                                    std::shared_ptr<const GasketLevel> fine) {
    const GasketLevel& c = u.level();
    require(fine->points == c.points && fine->level == c.level + 1,
            "harmonic_extension: target must be the next level of the same gasket");
    const int N = c.points;
    DiscreteFunction out(fine, u.zero_boundary());

    std::vector<std::int64_t> key(N);
    auto fine_index = [&](std::span<const std::int64_t> numer, bool doubled) -> int {
        for (int t = 0; t < N; ++t) key[t] = doubled ? 2 * numer[t] : numer[t];
        auto idx = fine->find_vertex(key);
        if (!idx) throw std::logic_error("harmonic_extension: vertex missing on fine level");
        return *idx;
    };

    std::vector<double> b(N);
    std::vector<std::int64_t> mid(N);
    for (int cell = 0; cell < c.cell_count(); ++cell) {
        auto corners = c.cell(cell);
        double total = 0.0;
        for (int i = 0; i < N; ++i) {
            b[i] = u[corners[i]];
            total += b[i];
            out[fine_index(c.coord(corners[i]), true)] = b[i];
        }
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                auto ci = c.coord(corners[i]);
                auto cj = c.coord(corners[j]);
                for (int t = 0; t < N; ++t) mid[t] = ci[t] + cj[t];
                double z = (2.0 * (b[i] + b[j]) + (total - b[i] - b[j])) / (N + 2);
                out[fine_index(mid, false)] = z;
            }
    }
    return out;
}

DiscreteFunction harmonic_extension(const DiscreteFunction& u) {
    return harmonic_extension(u, build_level(u.level().points, u.level().level + 1));
}

DiscreteFunction restrict_to(const DiscreteFunction& u,
                             std::shared_ptr<const GasketLevel> coarse) {
    const GasketLevel& f = u.level();
    require(coarse->points == f.points && coarse->level <= f.level,
            "restrict_to: target must be a coarser level of the same gasket");
    const int N = f.points;
    const std::int64_t factor = std::int64_t{1} << (f.level - coarse->level);
    DiscreteFunction out(coarse, u.zero_boundary());
    std::vector<std::int64_t> key(N);
    for (int v = 0; v < coarse->vertex_count(); ++v) {
        auto a = coarse->coord(v);
        for (int t = 0; t < N; ++t) key[t] = a[t] * factor;
        auto idx = f.find_vertex(key);
        if (!idx) throw std::logic_error("restrict_to: coarse vertex missing on fine level");
        out[v] = u[*idx];
    }
    return out;
}

} // namespace sg
