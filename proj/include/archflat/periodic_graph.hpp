#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace archflat {

/// Translation by b1*omega1 + b2*omega2 applied to the head vertex of an edge.
struct LatticeOffset {
    int b1 = 0;
    int b2 = 0;

    LatticeOffset operator-() const { return {-b1, -b2}; }
    LatticeOffset operator+(LatticeOffset o) const { return {b1 + o.b1, b2 + o.b2}; }
    LatticeOffset operator-(LatticeOffset o) const { return {b1 - o.b1, b2 - o.b2}; }
    auto operator<=>(const LatticeOffset&) const = default;
};

/// One periodic family of undirected edges: tail in cell c joined to head in cell c + offset.
struct EdgeClass {
    std::size_t tail = 0;
    std::size_t head = 0;
    LatticeOffset offset;
    std::string weight_class;

    bool is_loop() const { return tail == head; }
    bool operator==(const EdgeClass&) const = default;
};

/// Entry of the counterclockwise incidence list at a vertex. `reversed` is set
/// when the vertex sits at the head end of the edge.
struct HalfEdge {
    std::size_t edge = 0;
    bool reversed = false;

    bool operator==(const HalfEdge&) const = default;
};

/// Plot-only planar coordinates of the fundamental domain.
struct Embedding {
    std::vector<std::array<double, 2>> positions;
    std::array<std::array<double, 2>, 2> basis{};

    bool operator==(const Embedding&) const = default;
};

/// Orders labels so that embedded digit runs compare numerically ("g2" < "g10").
inline bool natural_less(const std::string& a, const std::string& b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
            na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
            nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

struct NaturalLess {
    bool operator()(const std::string& a, const std::string& b) const { return natural_less(a, b); }
};

/// A Z^2-periodic graph given by its fundamental domain.
///
/// Construction canonicalizes the edge list: every edge is oriented with
/// tail <= head (loops point along a lexicographically positive offset) and
/// edges are sorted by (tail, head, offset). Half-edge references in the
/// cyclic order are remapped accordingly.
class PeriodicGraph {
public:
    PeriodicGraph() = default;

    PeriodicGraph(std::string name, std::size_t n_vertices, std::vector<EdgeClass> edges,
                  std::vector<std::vector<HalfEdge>> cyclic_order = {},
                  std::optional<Embedding> embedding = std::nullopt)
        : name_(std::move(name)), n_vertices_(n_vertices), edges_(std::move(edges)),
          cyclic_order_(std::move(cyclic_order)), embedding_(std::move(embedding))
    {
        canonicalize();
        validate();
        for (const auto& e : edges_) {
            if (std::find(classes_.begin(), classes_.end(), e.weight_class) == classes_.end())
                classes_.push_back(e.weight_class);
        }
        std::sort(classes_.begin(), classes_.end(), natural_less);
    }

    const std::string& name() const { return name_; }
    std::size_t n_vertices() const { return n_vertices_; }
    const std::vector<EdgeClass>& edges() const { return edges_; }
    bool has_cyclic_order() const { return !cyclic_order_.empty(); }
    const std::vector<std::vector<HalfEdge>>& cyclic_order() const { return cyclic_order_; }
    const std::optional<Embedding>& embedding() const { return embedding_; }

    /// Distinct weight-class labels in natural order.
    const std::vector<std::string>& weight_classes() const { return classes_; }

    std::size_t degree(std::size_t v) const
    {
        std::size_t d = 0;
        for (const auto& e : edges_) {
            if (e.tail == v) ++d;
            if (e.head == v) ++d;
        }
        return d;
    }

    bool operator==(const PeriodicGraph&) const = default;

private:
    void canonicalize()
    {
        std::vector<bool> flipped(edges_.size(), false);
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            auto& e = edges_[i];
            if (e.tail == e.head && e.offset == LatticeOffset{})
                throw ConfigError("edge " + std::to_string(i) + " joins a vertex to itself in the same cell");
            const bool flip = e.tail > e.head || (e.tail == e.head && e.offset < LatticeOffset{});
            if (flip) {
                std::swap(e.tail, e.head);
                e.offset = -e.offset;
                flipped[i] = true;
            }
        }
        std::vector<std::size_t> order(edges_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& x = edges_[a];
            const auto& y = edges_[b];
            return std::tie(x.tail, x.head, x.offset) < std::tie(y.tail, y.head, y.offset);
        });
        std::vector<std::size_t> new_index(edges_.size());
        std::vector<EdgeClass> sorted;
        sorted.reserve(edges_.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            new_index[order[k]] = k;
            sorted.push_back(edges_[order[k]]);
        }
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            const auto& a = sorted[k - 1];
            const auto& b = sorted[k];
            if (a.tail == b.tail && a.head == b.head && a.offset == b.offset)
                throw ConfigError("duplicate edge between vertices " + std::to_string(a.tail) + " and " +
                                  std::to_string(a.head));
        }
        for (auto& row : cyclic_order_) {
            for (auto& h : row) {
                if (h.edge >= edges_.size())
                    throw ConfigError("cyclic order references unknown edge " + std::to_string(h.edge));
                if (flipped[h.edge]) h.reversed = !h.reversed;
                h.edge = new_index[h.edge];
            }
        }
        edges_ = std::move(sorted);
    }

    void validate() const
    {
        if (n_vertices_ == 0) throw ConfigError("graph needs at least one vertex");
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            if (e.tail >= n_vertices_ || e.head >= n_vertices_)
                throw ConfigError("edge " + std::to_string(i) + " references a vertex index >= " +
                                  std::to_string(n_vertices_));
            if (e.weight_class.empty()) throw ConfigError("edge " + std::to_string(i) + " has no weight class");
        }
        for (std::size_t v = 0; v < n_vertices_; ++v) {
            if (degree(v) == 0) throw ConfigError("vertex " + std::to_string(v) + " has no incident edge");
        }
        if (cyclic_order_.empty()) return;
        if (cyclic_order_.size() != n_vertices_) throw ConfigError("cyclic order must list every vertex");
        for (std::size_t v = 0; v < n_vertices_; ++v) {
            std::vector<std::pair<std::size_t, bool>> expected, got;
            for (std::size_t i = 0; i < edges_.size(); ++i) {
                if (edges_[i].tail == v) expected.emplace_back(i, false);
                if (edges_[i].head == v) expected.emplace_back(i, true);
            }
            for (const auto& h : cyclic_order_[v]) got.emplace_back(h.edge, h.reversed);
            std::sort(expected.begin(), expected.end());
            std::sort(got.begin(), got.end());
            if (expected != got)
                throw ConfigError("cyclic order at vertex " + std::to_string(v) +
                                  " does not list each incident half-edge exactly once");
        }
        if (embedding_ && embedding_->positions.size() != n_vertices_)
            throw ConfigError("embedding must give one position per vertex");
    }

    std::string name_;
    std::size_t n_vertices_ = 0;
    std::vector<EdgeClass> edges_;
    std::vector<std::vector<HalfEdge>> cyclic_order_;
    std::optional<Embedding> embedding_;
    std::vector<std::string> classes_;
};

/// Strictly positive edge weights keyed by weight-class label.
class WeightAssignment {
public:
    WeightAssignment() = default;

    explicit WeightAssignment(std::map<std::string, double, NaturalLess> weights) : weights_(std::move(weights))
    {
        for (const auto& [label, value] : weights_) {
            if (!std::isfinite(value) || value <= 0.0)
                throw ConfigError("weight of class '" + label + "' must be finite and > 0");
        }
    }

    /// Assigns `values[i]` to the i-th weight class of `g`.
    static WeightAssignment from_vector(const PeriodicGraph& g, std::span<const double> values)
    {
        const auto& cls = g.weight_classes();
        if (values.size() != cls.size())
            throw ConfigError("expected " + std::to_string(cls.size()) + " weights, got " +
                              std::to_string(values.size()));
        std::map<std::string, double, NaturalLess> m;
        for (std::size_t i = 0; i < cls.size(); ++i) m[cls[i]] = values[i];
        return WeightAssignment(std::move(m));
    }

    double at(const std::string& label) const
    {
        const auto it = weights_.find(label);
        if (it == weights_.end()) throw ConfigError("no weight given for class '" + label + "'");
        return it->second;
    }

    bool contains(const std::string& label) const { return weights_.count(label) != 0; }
    const std::map<std::string, double, NaturalLess>& values() const { return weights_; }

    /// Weights in the class order of `g`.
    std::vector<double> to_vector(const PeriodicGraph& g) const
    {
        std::vector<double> out;
        out.reserve(g.weight_classes().size());
        for (const auto& c : g.weight_classes()) out.push_back(at(c));
        return out;
    }

    /// Every weight multiplied by `c` > 0.
    WeightAssignment scaled(double c) const
    {
        auto m = weights_;
        for (auto& [k, v] : m) v *= c;
        return WeightAssignment(std::move(m));
    }

    bool operator==(const WeightAssignment&) const = default;

private:
    std::map<std::string, double, NaturalLess> weights_;
};

/// Per-edge weights in edge-index order; throws ConfigError on a missing class.
inline std::vector<double> edge_weights(const PeriodicGraph& g, const WeightAssignment& w)
{
    std::vector<double> out;
    out.reserve(g.edges().size());
    for (const auto& e : g.edges()) out.push_back(w.at(e.weight_class));
    return out;
}

/// Sum of incident edge weights at `v`; a loop class contributes twice.
inline double vertex_weight(const PeriodicGraph& g, const WeightAssignment& w, std::size_t v)
{
    if (v >= g.n_vertices()) throw ConfigError("vertex index out of range");
    double mu = 0.0;
    for (const auto& e : g.edges()) {
        const double gamma = w.at(e.weight_class);
        if (e.tail == v) mu += gamma;
        if (e.head == v) mu += gamma;
    }
    return mu;
}

inline constexpr double kVertexWeightRelTol = 1e-12;

/// The common vertex weight, or nothing when vertex weights disagree beyond 1e-12 relative.
inline std::optional<double> constant_vertex_weight(const PeriodicGraph& g, const WeightAssignment& w)
{
    const double mu0 = vertex_weight(g, w, 0);
    double lo = mu0, hi = mu0;
    for (std::size_t v = 1; v < g.n_vertices(); ++v) {
        const double mu = vertex_weight(g, w, v);
        lo = std::min(lo, mu);
        hi = std::max(hi, mu);
    }
    if (hi - lo > kVertexWeightRelTol * hi) return std::nullopt;
    return mu0;
}

/// Like constant_vertex_weight but throws PreconditionError instead of returning nothing.
inline double require_constant_vertex_weight(const PeriodicGraph& g, const WeightAssignment& w)
{
    const auto mu = constant_vertex_weight(g, w);
    if (!mu) {
        std::string msg = "vertex weights of '" + g.name() + "' are not constant:";
        for (std::size_t v = 0; v < g.n_vertices(); ++v) msg += " " + std::to_string(vertex_weight(g, w, v));
        throw PreconditionError(msg);
    }
    return *mu;
}

namespace detail {

inline bool same_weight(double a, double b) { return std::abs(a - b) <= kVertexWeightRelTol * std::max(std::abs(a), std::abs(b)); }

inline bool cyclically_equal(const std::vector<std::pair<double, std::size_t>>& a,
                            const std::vector<std::pair<double, std::size_t>>& b)
{
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const auto& x = a[i];
            const auto& y = b[(i + shift) % n];
            ok = x.second == y.second && same_weight(x.first, y.first);
        }
        if (ok) return true;
    }
    return n == 0;
}

}  // namespace detail

/// Affine description of { gamma > 0 : every vertex weight equals mu }:
/// gamma = particular + basis * t, restricted to the open positive orthant.
struct AffineParametrization {
    std::vector<std::string> classes;
    double mu = 0.0;
    Eigen::VectorXd particular;
    Eigen::MatrixXd basis;  // orthonormal columns
    std::optional<Eigen::VectorXd> interior;  // parameters of gamma = mu / degree when that is admissible

    std::size_t dimension() const { return static_cast<std::size_t>(basis.cols()); }

    Eigen::VectorXd point(const Eigen::VectorXd& t) const { return particular + basis * t; }

    /// Positivity box constraint.
    bool admissible(const Eigen::VectorXd& t) const { return (point(t).array() > 0.0).all(); }

    /// Bounds on each coordinate of t implied by 0 <= gamma <= mu.
    std::vector<std::pair<double, double>> parameter_box() const
    {
        std::vector<std::pair<double, double>> box;
        for (Eigen::Index j = 0; j < basis.cols(); ++j) {
            double lo = 0.0, hi = 0.0;
            for (Eigen::Index i = 0; i < basis.rows(); ++i) {
                const double a = basis(i, j) * (0.0 - particular(i));
                const double b = basis(i, j) * (mu - particular(i));
                lo += std::min(a, b);
                hi += std::max(a, b);
            }
            box.emplace_back(lo, hi);
        }
        return box;
    }

    WeightAssignment weights(const Eigen::VectorXd& t) const
    {
        const Eigen::VectorXd gamma = point(t);
        std::map<std::string, double, NaturalLess> m;
        for (std::size_t i = 0; i < classes.size(); ++i) m[classes[i]] = gamma(static_cast<Eigen::Index>(i));
        return WeightAssignment(std::move(m));
    }

    /// Uniform rejection sample from the admissible set. After `max_tries` misses it
    /// falls back to a hit-and-run walk from `interior`; nothing if there is none.
    template <class Rng>
    std::optional<WeightAssignment> sample(Rng& rng, int max_tries = 20'000) const
    {
        const auto box = parameter_box();
        Eigen::VectorXd t(static_cast<Eigen::Index>(box.size()));
        for (int k = 0; k < max_tries; ++k) {
            for (std::size_t j = 0; j < box.size(); ++j) {
                std::uniform_real_distribution<double> d(box[j].first, box[j].second);
                t(static_cast<Eigen::Index>(j)) = d(rng);
            }
            if (admissible(t)) return weights(t);
        }
        if (!interior) return std::nullopt;
        return weights(hit_and_run(rng, *interior, 50 * (static_cast<int>(dimension()) + 1)));
    }

    template <class Rng>
    Eigen::VectorXd hit_and_run(Rng& rng, Eigen::VectorXd t, int steps) const
    {
        std::normal_distribution<double> normal;
        for (int k = 0; k < steps; ++k) {
            Eigen::VectorXd dir(t.size());
            for (Eigen::Index j = 0; j < t.size(); ++j) dir(j) = normal(rng);
            if (dir.norm() == 0.0) continue;
            dir.normalize();
            const Eigen::VectorXd g = point(t), c = basis * dir;
            double lo = -INFINITY, hi = INFINITY;
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                if (c(i) > 0) lo = std::max(lo, -g(i) / c(i));
                if (c(i) < 0) hi = std::min(hi, -g(i) / c(i));
            }
            if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) continue;
            std::uniform_real_distribution<double> s(lo, hi);
            const Eigen::VectorXd next = t + s(rng) * dir;
            if (admissible(next)) t = next;
        }
        return t;
    }
};

/// Solves the vertex-weight equations sum_{e ~ v} gamma_e = mu for all v.
inline AffineParametrization constant_weight_parametrization(const PeriodicGraph& g, double mu)
{
    if (!(mu > 0.0)) throw DomainError("vertex weight mu must be positive");
    const auto& cls = g.weight_classes();
    const auto rows = static_cast<Eigen::Index>(g.n_vertices());
    const auto cols = static_cast<Eigen::Index>(cls.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& e : g.edges()) {
        const auto c = static_cast<Eigen::Index>(std::find(cls.begin(), cls.end(), e.weight_class) - cls.begin());
        a(static_cast<Eigen::Index>(e.tail), c) += 1.0;
        a(static_cast<Eigen::Index>(e.head), c) += 1.0;
    }
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(rows, mu);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-12 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > cutoff ? 1 : 0;

    Eigen::VectorXd particular = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index i = 0; i < rank; ++i)
        particular += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / sv(i));
    if ((a * particular - b).cwiseAbs().maxCoeff() > 1e-12 * mu)
        throw NoSolutionError("vertex-weight equations of '" + g.name() + "' are inconsistent");

    AffineParametrization p;
    p.classes = cls;
    p.mu = mu;
    p.particular = particular;
    p.basis = svd.matrixV().rightCols(cols - rank);

    const double deg = rows > 0 ? a.row(0).sum() : 0.0;
    if (deg > 0.0) {
        const Eigen::VectorXd even = Eigen::VectorXd::Constant(cols, mu / deg);
        const Eigen::VectorXd t = p.basis.transpose() * (even - particular);
        if ((a * even - b).cwiseAbs().maxCoeff() <= 1e-12 * mu && (p.point(t) - even).cwiseAbs().maxCoeff() <= 1e-9 * mu)
            p.interior = t;
    }
    return p;
}

/// Sizes of the faces met counterclockwise around `v`, traced through the cyclic orders.
inline std::vector<std::size_t> vertex_configuration(const PeriodicGraph& g, std::size_t v)
{
    if (!g.has_cyclic_order()) throw UnsupportedGraphError("graph '" + g.name() + "' has no cyclic order");
    const auto& cyc = g.cyclic_order();
    auto step = [&](LatticeOffset cell, HalfEdge h) {
        const auto& e = g.edges()[h.edge];
        const std::size_t to = h.reversed ? e.tail : e.head;
        const LatticeOffset to_cell = h.reversed ? cell - e.offset : cell + e.offset;
        const HalfEdge back{h.edge, !h.reversed};
        const auto& row = cyc[to];
        const auto pos = static_cast<std::size_t>(std::find(row.begin(), row.end(), back) - row.begin());
        const HalfEdge next = row[(pos + row.size() - 1) % row.size()];
        return std::tuple{to, to_cell, next};
    };
    std::vector<std::size_t> sizes;
    for (const auto& start : cyc[v]) {
        std::size_t at = v;
        LatticeOffset cell{};
        HalfEdge h = start;
        std::size_t n = 0;
        do {
            std::tie(at, cell, h) = step(cell, h);
            if (++n > 64) throw UnsupportedGraphError("face tracing did not close at vertex " + std::to_string(v));
        } while (!(at == v && cell == LatticeOffset{} && h == start));
        sizes.push_back(n);
    }
    return sizes;
}

/// True iff the counterclockwise sequences of (edge weight, following face size) agree
/// up to rotation at every vertex, so equal weights sit on edges of the same type.
/// Reflections are not identified.
inline bool is_monomeric(const PeriodicGraph& g, const WeightAssignment& w)
{
    if (!g.has_cyclic_order()) throw UnsupportedGraphError("graph '" + g.name() + "' has no cyclic order");
    std::vector<std::vector<std::pair<double, std::size_t>>> seq(g.n_vertices());
    for (std::size_t v = 0; v < g.n_vertices(); ++v) {
        const auto faces = vertex_configuration(g, v);
        const auto& row = g.cyclic_order()[v];
        for (std::size_t i = 0; i < row.size(); ++i)
            seq[v].emplace_back(w.at(g.edges()[row[i].edge].weight_class), faces[i]);
    }
    for (std::size_t v = 1; v < g.n_vertices(); ++v) {
        if (!detail::cyclically_equal(seq[0], seq[v])) return false;
    }
    return true;
}

}  // namespace archflat
