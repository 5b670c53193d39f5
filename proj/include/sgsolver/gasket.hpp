////////////////////////////////////////////////////////////////////////////////
// gasket.hpp
//
// Level-m graph approximation of the N-point Sierpinski gasket.
//
// The gasket is generated by the maps S_i(x) = (x + p_i)/2 where p_1..p_N are
// the corners of a unit-edge regular simplex. Every vertex of the level-m
// graph is an affine combination of the corners with dyadic coefficients
// a_i / 2^m, sum a_i = 2^m, so vertices are stored as exact integer numerator
// tuples and all dedup/adjacency tests are integer tests. Cartesian
// coordinates (for plotting output only) are derived from a floating-point
// simplex embedding in R^(N-1).
//
// Cells are the images of the corner set under level-m map words, listed in
// word-lexicographic order: cell index c corresponds to the base-N digits of
// c, most significant digit = outermost map. Edges are the corner pairs of
// each cell; distinct cells share at most a vertex, never a pair, so every
// edge belongs to exactly one cell.
////////////////////////////////////////////////////////////////////////////////
#ifndef SGSOLVER_GASKET_HPP
#define SGSOLVER_GASKET_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sg {

struct GasketLevel {
    int points = 0;   // N, number of IFS fixed points (simplex corners)
    int level = 0;    // m
    std::int64_t denominator = 1; // 2^m

    // Barycentric numerators, `points` entries per vertex, flat row-major.
    std::vector<std::int64_t> coords;
    // boundary[i] = vertex index of corner p_{i+1}; flags mark membership.
    std::vector<int> boundary;
    std::vector<char> boundary_flag;
    std::vector<std::array<int, 2>> edges;   // unordered pairs, a < b
    std::vector<int> cells;                  // `points` entries per cell
    // Normalized measure: each cell carries N^-m split evenly over its corners.
    std::vector<double> weights;
    std::vector<std::int32_t> cell_incidence; // integer weight numerators

    // Renormalization factor ((N+2)/N)^m applied to the level-m edge sum.
    double energy_scale = 1.0;

    int vertex_count() const { return static_cast<int>(coords.size()) / points; }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int cell_count() const { return static_cast<int>(cells.size()) / points; }
    int interior_count() const { return vertex_count() - points; }

    std::span<const std::int64_t> coord(int v) const {
        return {coords.data() + static_cast<std::size_t>(v) * points,
                static_cast<std::size_t>(points)};
    }
    std::span<const int> cell(int c) const {
        return {cells.data() + static_cast<std::size_t>(c) * points,
                static_cast<std::size_t>(points)};
    }
    bool is_boundary(int v) const { return boundary_flag[v] != 0; }

    std::optional<int> find_vertex(std::span<const std::int64_t> numerators) const;

    // Embedding coordinates in R^(N-1), unit edge length. Plotting only.
    std::vector<double> cartesian(int v) const;

    struct VecHash {
        std::size_t operator()(const std::vector<std::int64_t>& v) const;
    };
    std::unordered_map<std::vector<std::int64_t>, int, VecHash> index_of;
};

// Builds the level-m approximation. Throws std::invalid_argument for N < 2 or
// m < 0, std::length_error when the projected vertex work exceeds `corner_cap`
// (a resource guard; the default admits N=3 up to roughly m = 13).
std::shared_ptr<const GasketLevel> build_level(int N, int m,
                                               std::int64_t corner_cap = 1 << 24);

// ln N / ln 2.
double hausdorff_dimension(int N);

// Per-vertex weights of the normalized self-similar measure (recomputed from
// the cells; identical to level->weights).
std::vector<double> measure_weights(const GasketLevel& level);

// Corners of a unit-edge regular simplex in R^(N-1).
std::vector<std::vector<double>> simplex_points(int N);

} // namespace sg

#endif
