#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oscillab {

/// Exact arithmetic used by the rational verification mode.
using Rational = boost::multiprecision::cpp_rational;

/// Raised for malformed inputs and violated preconditions.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BaseCube {
    std::vector<double> origin;
    double side = 1.0;

    int dim() const { return static_cast<int>(origin.size()); }
    static BaseCube unit(int dim) { return BaseCube{std::vector<double>(dim, 0.0), 1.0}; }
};

/**
 * @brief A node of the dyadic tree over a base cube.
 *
 * Level j with integer coordinates c_i in [0, 2^j); the cube occupies
 * prod_i [o_i + c_i s 2^-j, o_i + (c_i + 1) s 2^-j).
 */
class DyadicCube {
public:
    DyadicCube() = default;
    DyadicCube(int level, std::vector<std::int64_t> coords);

    static DyadicCube root(int dim) { return DyadicCube(0, std::vector<std::int64_t>(dim, 0)); }

    int level() const { return level_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::int64_t>& coords() const { return coords_; }
    bool is_root() const { return level_ == 0; }

    double side_length(const BaseCube& base) const;
    double volume(const BaseCube& base) const;

    /// True when `other` is this cube or one of its dyadic descendants.
    bool contains(const DyadicCube& other) const;

    /// Child selected by bit i of `mask` along axis i (axis 0 is the most significant bit).
    DyadicCube child(unsigned mask) const;
    std::vector<DyadicCube> children() const;

    std::string to_string() const;

    auto operator<=>(const DyadicCube&) const = default;

private:
    int level_ = 0;
    std::vector<std::int64_t> coords_;
};

DyadicCube dyadic_parent(const DyadicCube& q);

/// Node handle used by the tree passes: level plus row-major index within that level.
struct NodeRef {
    int level = 0;
    std::size_t index = 0;
    auto operator<=>(const NodeRef&) const = default;
};

/**
 * Index arithmetic for the complete dyadic tree of dimension n and depth L.
 * Flat index at level j is sum_i c_i 2^{j(n-1-i)}, axis 0 slowest.
 */
class DyadicGrid {
public:
    DyadicGrid(int dim, int depth);

    int dim() const { return dim_; }
    int depth() const { return depth_; }
    std::size_t fanout() const { return std::size_t{1} << dim_; }
    std::size_t nodes_at(int level) const { return std::size_t{1} << (dim_ * level); }
    std::size_t leaf_count() const { return nodes_at(depth_); }
    std::size_t node_count() const;

    std::size_t encode(int level, std::span<const std::int64_t> coords) const;
    std::vector<std::int64_t> decode(int level, std::size_t index) const;

    NodeRef node(const DyadicCube& q) const;
    DyadicCube cube(NodeRef n) const;

    NodeRef parent(NodeRef n) const;
    std::vector<NodeRef> children(NodeRef n) const;
    std::size_t ancestor_of_leaf(std::size_t leaf, int level) const;
    bool contains(NodeRef outer, NodeRef inner) const;

    /// Leaves under `n` in the local row-major order of the sub-block.
    std::vector<std::size_t> leaves_of(NodeRef n) const;

    /// Volume of a level-j node relative to the root: 2^{-n j}.
    double relative_volume(int level) const;

    /// Dense id over all levels, root first.
    std::size_t dense_id(NodeRef n) const { return level_offset_[n.level] + n.index; }

    template <class Fn>
    void for_each_node(Fn&& fn) const {
        for (int j = 0; j <= depth_; ++j)
            for (std::size_t i = 0; i < nodes_at(j); ++i) fn(NodeRef{j, i});
    }

private:
    int dim_;
    int depth_;
    std::vector<std::size_t> level_offset_;
};

/**
 * @brief Piecewise constant function on the level-L dyadic partition of a base cube.
 *
 * values[k] holds the value on the leaf with multi-index decoded from k
 * (row-major, axis 0 slowest). Immutable after construction.
 */
class GridFunction {
public:
    GridFunction(BaseCube base, int depth, std::vector<double> values);

    int dim() const { return base_.dim(); }
    int depth() const { return depth_; }
    const BaseCube& base() const { return base_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t leaf) const { return values_[leaf]; }
    std::size_t size() const { return values_.size(); }
    DyadicGrid grid() const { return DyadicGrid(dim(), depth_); }
    DyadicCube root() const { return DyadicCube::root(dim()); }

    /// Same grid, new values.
    GridFunction with_values(std::vector<double> values) const;

private:
    BaseCube base_;
    int depth_;
    std::vector<double> values_;
};

GridFunction build_grid_function(int dim, int depth, BaseCube base, std::vector<double> values);

/// Throws unless `q` is a node of the tree of `f`.
void check_cube(const GridFunction& f, const DyadicCube& q);

/// Exact mean of the leaf values under `q`, by pairwise tree summation.
double cube_average(const GridFunction& f, const DyadicCube& q);
Rational cube_average_exact(const GridFunction& f, const DyadicCube& q);

/// The function on the sub-cube `q`, with `q` as the new base cube.
GridFunction restrict_to(const GridFunction& f, const DyadicCube& q);

/// Per-level arrays of node values, levels[j][index].
template <class T>
using LevelArray = std::vector<std::vector<T>>;

/// Averages of every dyadic node, built bottom-up: each parent is the mean of its children.
template <class T>
LevelArray<T> average_tree(const DyadicGrid& grid, const std::vector<T>& leaves) {
    LevelArray<T> levels(grid.depth() + 1);
    levels[grid.depth()] = leaves;
    const T fan = T(static_cast<long>(grid.fanout()));
    for (int j = grid.depth() - 1; j >= 0; --j) {
        levels[j].assign(grid.nodes_at(j), T(0));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) {
            T sum(0);
            for (const NodeRef& c : grid.children(NodeRef{j, i})) sum += levels[j + 1][c.index];
            levels[j][i] = sum / fan;
        }
    }
    return levels;
}

/// Pairwise mean over the leaves under `n` of leaf_value(leaf).
template <class T, class Fn>
T subtree_mean(const DyadicGrid& grid, NodeRef n, Fn&& leaf_value) {
    if (n.level == grid.depth()) return leaf_value(n.index);
    T sum(0);
    for (const NodeRef& c : grid.children(n)) sum += subtree_mean<T>(grid, c, leaf_value);
    return sum / T(static_cast<long>(grid.fanout()));
}

/// Per leaf, the max of node_value over all dyadic ancestors including the leaf.
template <class T>
std::vector<T> sup_over_ancestors(const DyadicGrid& grid, const LevelArray<T>& node_value) {
    std::vector<T> running = node_value[0];
    for (int j = 1; j <= grid.depth(); ++j) {
        std::vector<T> next(grid.nodes_at(j));
        for (std::size_t i = 0; i < next.size(); ++i) {
            const T& up = running[grid.parent(NodeRef{j, i}).index];
            const T& own = node_value[j][i];
            next[i] = own > up ? own : up;
        }
        running = std::move(next);
    }
    return running;
}

std::vector<Rational> to_rational(std::span<const double> values);

}  // namespace oscillab
