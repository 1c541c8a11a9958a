#include "oscillab/dyadic.hpp"

#include <cmath>
#include <sstream>

namespace oscillab {

DyadicCube::DyadicCube(int level, std::vector<std::int64_t> coords)
    : level_(level), coords_(std::move(coords)) {
    if (level_ < 0) throw DomainError("dyadic cube level must be nonnegative");
    if (coords_.empty()) throw DomainError("dyadic cube needs at least one coordinate");
    if (level_ >= 62) throw DomainError("dyadic cube level too deep");
    const std::int64_t extent = std::int64_t{1} << level_;
    for (std::int64_t c : coords_)
        if (c < 0 || c >= extent) throw DomainError("dyadic cube coordinate out of range");
}

double DyadicCube::side_length(const BaseCube& base) const { return std::ldexp(base.side, -level_); }

double DyadicCube::volume(const BaseCube& base) const { return std::pow(side_length(base), dim()); }

bool DyadicCube::contains(const DyadicCube& other) const {
    if (other.dim() != dim() || other.level_ < level_) return false;
    const int shift = other.level_ - level_;
    for (int i = 0; i < dim(); ++i)
        if ((other.coords_[i] >> shift) != coords_[i]) return false;
    return true;
}

DyadicCube DyadicCube::child(unsigned mask) const {
    std::vector<std::int64_t> c(coords_.size());
    const int n = dim();
    for (int i = 0; i < n; ++i) c[i] = 2 * coords_[i] + ((mask >> (n - 1 - i)) & 1u);
    return DyadicCube(level_ + 1, std::move(c));
}

std::vector<DyadicCube> DyadicCube::children() const {
    std::vector<DyadicCube> out;
    const unsigned fan = 1u << dim();
    out.reserve(fan);
    for (unsigned m = 0; m < fan; ++m) out.push_back(child(m));
    return out;
}

std::string DyadicCube::to_string() const {
    std::ostringstream os;
    os << "(level " << level_ << ", [";
    for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
    os << "])";
    return os.str();
}

DyadicCube dyadic_parent(const DyadicCube& q) {
    if (q.is_root()) throw DomainError("the root cube has no dyadic parent");
    std::vector<std::int64_t> c = q.coords();
    for (auto& x : c) x >>= 1;
    return DyadicCube(q.level() - 1, std::move(c));
}

DyadicGrid::DyadicGrid(int dim, int depth) : dim_(dim), depth_(depth) {
    if (dim < 1) throw DomainError("dimension must be at least 1");
    if (depth < 0) throw DomainError("depth must be nonnegative");
    if (dim * depth > 40) throw DomainError("grid too large");
    level_offset_.resize(depth + 2);
    level_offset_[0] = 0;
    for (int j = 0; j <= depth; ++j) level_offset_[j + 1] = level_offset_[j] + nodes_at(j);
}

std::size_t DyadicGrid::node_count() const { return level_offset_[depth_ + 1]; }

std::size_t DyadicGrid::encode(int level, std::span<const std::int64_t> coords) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx = (idx << level) | static_cast<std::size_t>(coords[i]);
    return idx;
}

std::vector<std::int64_t> DyadicGrid::decode(int level, std::size_t index) const {
    std::vector<std::int64_t> c(dim_);
    const std::size_t mask = (std::size_t{1} << level) - 1;
    for (int i = dim_ - 1; i >= 0; --i) {
        c[i] = static_cast<std::int64_t>(index & mask);
        index >>= level;
    }
    return c;
}

NodeRef DyadicGrid::node(const DyadicCube& q) const {
    if (q.dim() != dim_) throw DomainError("cube dimension does not match the grid");
    if (q.level() > depth_) throw DomainError("cube " + q.to_string() + " is deeper than the grid depth");
    return NodeRef{q.level(), encode(q.level(), q.coords())};
}

DyadicCube DyadicGrid::cube(NodeRef n) const { return DyadicCube(n.level, decode(n.level, n.index)); }

NodeRef DyadicGrid::parent(NodeRef n) const {
    auto c = decode(n.level, n.index);
    for (auto& x : c) x >>= 1;
    return NodeRef{n.level - 1, encode(n.level - 1, c)};
}

std::vector<NodeRef> DyadicGrid::children(NodeRef n) const {
    const auto c = decode(n.level, n.index);
    std::vector<NodeRef> out;
    out.reserve(fanout());
    std::vector<std::int64_t> cc(dim_);
    for (unsigned m = 0; m < fanout(); ++m) {
        for (int i = 0; i < dim_; ++i) cc[i] = 2 * c[i] + ((m >> (dim_ - 1 - i)) & 1u);
        out.push_back(NodeRef{n.level + 1, encode(n.level + 1, cc)});
    }
    return out;
}

std::size_t DyadicGrid::ancestor_of_leaf(std::size_t leaf, int level) const {
    auto c = decode(depth_, leaf);
    for (auto& x : c) x >>= (depth_ - level);
    return encode(level, c);
}

bool DyadicGrid::contains(NodeRef outer, NodeRef inner) const {
    if (inner.level < outer.level) return false;
    auto c = decode(inner.level, inner.index);
    for (auto& x : c) x >>= (inner.level - outer.level);
    return encode(outer.level, c) == outer.index;
}

std::vector<std::size_t> DyadicGrid::leaves_of(NodeRef n) const {
    const auto base = decode(n.level, n.index);
    const int sub = depth_ - n.level;
    const std::size_t per_axis = std::size_t{1} << sub;
    const std::size_t count = std::size_t{1} << (dim_ * sub);
    std::vector<std::size_t> out(count);
    std::vector<std::int64_t> c(dim_);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t rest = k;
        for (int i = dim_ - 1; i >= 0; --i) {
            c[i] = (base[i] << sub) + static_cast<std::int64_t>(rest % per_axis);
            rest /= per_axis;
        }
        out[k] = encode(depth_, c);
    }
    return out;
}

double DyadicGrid::relative_volume(int level) const { return std::ldexp(1.0, -dim_ * level); }

GridFunction::GridFunction(BaseCube base, int depth, std::vector<double> values)
    : base_(std::move(base)), depth_(depth), values_(std::move(values)) {
    if (base_.dim() < 1) throw DomainError("dimension must be at least 1");
    if (depth_ < 0) throw DomainError("depth must be nonnegative");
    if (!(base_.side > 0.0) || !std::isfinite(base_.side)) throw DomainError("base cube side must be positive");
    const DyadicGrid grid(base_.dim(), depth_);
    if (values_.size() != grid.leaf_count())
        throw DomainError("length mismatch: expected " + std::to_string(grid.leaf_count()) + " values, got " +
                          std::to_string(values_.size()));
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("non-finite value in grid function");
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    return GridFunction(base_, depth_, std::move(values));
}

GridFunction build_grid_function(int dim, int depth, BaseCube base, std::vector<double> values) {
    if (base.dim() != dim) throw DomainError("base cube dimension does not match dim");
    return GridFunction(std::move(base), depth, std::move(values));
}

void check_cube(const GridFunction& f, const DyadicCube& q) { (void)f.grid().node(q); }

double cube_average(const GridFunction& f, const DyadicCube& q) {
    const DyadicGrid grid = f.grid();
    const auto v = f.values();
    return subtree_mean<double>(grid, grid.node(q), [&](std::size_t leaf) { return v[leaf]; });
}

Rational cube_average_exact(const GridFunction& f, const DyadicCube& q) {
    const DyadicGrid grid = f.grid();
    const auto v = f.values();
    return subtree_mean<Rational>(grid, grid.node(q), [&](std::size_t leaf) { return Rational(v[leaf]); });
}

GridFunction restrict_to(const GridFunction& f, const DyadicCube& q) {
    const DyadicGrid grid = f.grid();
    const NodeRef n = grid.node(q);
    std::vector<double> vals;
    for (std::size_t leaf : grid.leaves_of(n)) vals.push_back(f[leaf]);
    BaseCube base = f.base();
    const double side = q.side_length(f.base());
    for (int i = 0; i < f.dim(); ++i) base.origin[i] += static_cast<double>(q.coords()[i]) * side;
    base.side = side;
    return GridFunction(std::move(base), f.depth() - q.level(), std::move(vals));
}

std::vector<Rational> to_rational(std::span<const double> values) {
    std::vector<Rational> out;
    out.reserve(values.size());
    for (double v : values) out.emplace_back(v);
    return out;
}

}  // namespace oscillab
