#include "sgsolver/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

std::size_t GasketLevel::VecHash::operator()(const std::vector<std::int64_t>& v) const {
    // FNV-1a over the raw words; the tuples are tiny (N entries).
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t x : v) {
        std::uint64_t u = static_cast<std::uint64_t>(x);
        for (int b = 0; b < 8; ++b) {
            h ^= (u >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return static_cast<std::size_t>(h);
}

std::optional<int> GasketLevel::find_vertex(std::span<const std::int64_t> numerators) const {
    std::vector<std::int64_t> key(numerators.begin(), numerators.end());
    auto it = index_of.find(key);
    if (it == index_of.end()) return std::nullopt;
    return it->second;
}

double hausdorff_dimension(int N) {
    require(N >= 2, "hausdorff_dimension: need N >= 2");
    return std::log(static_cast<double>(N)) / std::log(2.0);
}

std::vector<std::vector<double>> simplex_points(int N) {
    require(N >= 2, "simplex_points: need N >= 2");
    // Start from e_i / sqrt(2) in R^N (pairwise distance 1), then express in an
    // orthonormal basis of the hyperplane sum(x) = const to land in R^(N-1).
    int d = N - 1;
    std::vector<std::vector<double>> basis; // d orthonormal vectors in R^N, normal to (1,..,1)
    basis.reserve(d);
    for (int k = 1; k <= d; ++k) {
        // Helmert-style basis: (1,..,1,-k,0,..,0)/sqrt(k(k+1)) with k ones.
        std::vector<double> b(N, 0.0);
        double nrm = std::sqrt(static_cast<double>(k) * (k + 1));
        for (int j = 0; j < k; ++j) b[j] = 1.0 / nrm;
        b[k] = -static_cast<double>(k) / nrm;
        basis.push_back(std::move(b));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<std::vector<double>> pts(N, std::vector<double>(d, 0.0));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < d; ++k)
            pts[i][k] = basis[k][i] * inv_sqrt2; // <e_i/sqrt2, b_k>
    return pts;
}

std::vector<double> GasketLevel::cartesian(int v) const {
    static thread_local int cached_N = -1;
    static thread_local std::vector<std::vector<double>> cached_pts;
    if (cached_N != points) {
        cached_pts = simplex_points(points);
        cached_N = points;
    }
    auto a = coord(v);
    std::vector<double> out(points - 1, 0.0);
    double inv_den = 1.0 / static_cast<double>(denominator);
    for (int i = 0; i < points; ++i) {
        double w = static_cast<double>(a[i]) * inv_den;
        for (int k = 0; k < points - 1; ++k) out[k] += w * cached_pts[i][k];
    }
    return out;
}

namespace {

// Squared distance between two vertices, in units of (2^-m)^2, computed
// exactly on the integer numerators: for barycentric differences d summing to
// zero on a unit-edge simplex, |x - y|^2 = -sum_{i<j} d_i d_j / 4^m.
std::int64_t squared_distance_units(std::span<const std::int64_t> a,
                                    std::span<const std::int64_t> b) {
    std::int64_t acc = 0;
    int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            acc += (a[i] - b[i]) * (a[j] - b[j]);
    return -acc;
}

} // namespace

std::shared_ptr<const GasketLevel> build_level(int N, int m, std::int64_t corner_cap) {
    require(N >= 2, "build_level: need N >= 2");
    require(m >= 0, "build_level: need m >= 0");
    require(m < 62, "build_level: level too deep for exact integer arithmetic");

    // Each of the N^m cells touches N corner slots; that bounds the work and
    // the memory before dedup.
    long double projected = powl(static_cast<long double>(N), m) * N;
    if (projected > static_cast<long double>(corner_cap))
        throw std::length_error("build_level: vertex work exceeds the configured cap");

    auto lvl = std::make_shared<GasketLevel>();
    lvl->points = N;
    lvl->level = m;
    lvl->denominator = std::int64_t{1} << m;
    lvl->energy_scale = 1.0;
    for (int k = 0; k < m; ++k)
        lvl->energy_scale *= static_cast<double>(N + 2) / static_cast<double>(N);

    const std::int64_t ncells = [&] {
        std::int64_t c = 1;
        for (int k = 0; k < m; ++k) c *= N;
        return c;
    }();

    lvl->cells.reserve(static_cast<std::size_t>(ncells) * N);
    lvl->edges.reserve(static_cast<std::size_t>(ncells) * N * (N - 1) / 2);

    auto intern = [&](std::vector<std::int64_t>&& key) -> int {
        auto [it, inserted] = lvl->index_of.try_emplace(std::move(key),
                                                        lvl->vertex_count());
        if (inserted)
            lvl->coords.insert(lvl->coords.end(), it->first.begin(), it->first.end());
        return it->second;
    };

    // Depth-first subdivision. A cell at depth k is its N corner numerator
    // tuples at denominator 2^k; child i replaces corner j by the midpoint of
    // corners i and j (numerators c_i + c_j at the doubled denominator).
    std::vector<std::vector<std::int64_t>> root(N, std::vector<std::int64_t>(N, 0));
    for (int i = 0; i < N; ++i) root[i][i] = 1;

    auto emit_cell = [&](const std::vector<std::vector<std::int64_t>>& corners) {
        std::vector<int> idx(N);
        for (int i = 0; i < N; ++i) {
            std::vector<std::int64_t> key = corners[i];
            idx[i] = intern(std::move(key));
        }
        for (int i = 0; i < N; ++i) lvl->cells.push_back(idx[i]);
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                if (squared_distance_units(lvl->coord(idx[i]), lvl->coord(idx[j])) != 1)
                    throw std::logic_error("build_level: cell edge fails the exact distance test");
                auto [a, b] = std::minmax(idx[i], idx[j]);
                lvl->edges.push_back({a, b});
            }
    };

    // Explicit recursion; depth is at most m.
    struct Rec {
        int N, m;
        decltype(emit_cell)& emit;
        void operator()(std::vector<std::vector<std::int64_t>>& corners, int depth) {
            if (depth == m) { emit(corners); return; }
            for (int i = 0; i < N; ++i) {
                std::vector<std::vector<std::int64_t>> child(corners);
                for (int j = 0; j < N; ++j)
                    for (int t = 0; t < N; ++t)
                        child[j][t] = corners[i][t] + corners[j][t];
                (*this)(child, depth + 1);
            }
        }
    } rec{N, m, emit_cell};
    rec(root, 0);

    // Measure weights from integer incidence counts; the division by N^(m+1)
    // is the only rounding step.
    lvl->cell_incidence.assign(lvl->vertex_count(), 0);
    for (int c = 0; c < lvl->cell_count(); ++c)
        for (int v : lvl->cell(c)) lvl->cell_incidence[v] += 1;
    double cell_share = 1.0;
    for (int k = 0; k < m + 1; ++k) cell_share /= static_cast<double>(N);
    lvl->weights.resize(lvl->vertex_count());
    for (int v = 0; v < lvl->vertex_count(); ++v)
        lvl->weights[v] = static_cast<double>(lvl->cell_incidence[v]) * cell_share;

    // Boundary = the original corners, numerators 2^m * e_i.
    lvl->boundary_flag.assign(lvl->vertex_count(), 0);
    lvl->boundary.resize(N);
    for (int i = 0; i < N; ++i) {
        std::vector<std::int64_t> key(N, 0);
        key[i] = lvl->denominator;
        auto it = lvl->index_of.find(key);
        if (it == lvl->index_of.end())
            throw std::logic_error("build_level: corner vertex missing");
        lvl->boundary[i] = it->second;
        lvl->boundary_flag[it->second] = 1;
    }
    return lvl;
}

std::vector<double> measure_weights(const GasketLevel& level) {
    std::vector<std::int64_t> incidence(level.vertex_count(), 0);
    for (int c = 0; c < level.cell_count(); ++c)
        for (int v : level.cell(c)) incidence[v] += 1;
    double cell_share = 1.0;
    for (int k = 0; k < level.level + 1; ++k)
        cell_share /= static_cast<double>(level.points);
    std::vector<double> w(level.vertex_count());
    for (int v = 0; v < level.vertex_count(); ++v)
        w[v] = static_cast<double>(incidence[v]) * cell_share;
    return w;
}

} // namespace sg
