#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "floquet.hpp"
#include "format.hpp"
#include "periodic_graph.hpp"

namespace archflat {

/// I - Pi/mu on the M x M torus of fundamental cells; site (c1, c2, v) has
/// index (c1 * M + c2) * n + v.
struct TorusOperator {
    int M = 0;
    std::size_t n = 0;
    double mu = 0.0;
    Eigen::MatrixXd matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

inline TorusOperator build_torus(const PeriodicGraph& g, const WeightAssignment& w, int M)
{
    if (M < 3) throw ConfigError("torus size M must be at least 3");
    TorusOperator op;
    op.M = M;
    op.n = g.n_vertices();
    op.mu = require_constant_vertex_weight(g, w);
    const auto n = static_cast<Eigen::Index>(op.n);
    const Eigen::Index dim = n * M * M;
    Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(dim, dim);
    auto wrap = [M](int x) { return ((x % M) + M) % M; };
    for (const auto& e : g.edges()) {
        const double gamma = w.at(e.weight_class);
        for (int c1 = 0; c1 < M; ++c1) {
            for (int c2 = 0; c2 < M; ++c2) {
                const Eigen::Index t = (c1 * M + c2) * n + static_cast<Eigen::Index>(e.tail);
                const Eigen::Index h =
                    (wrap(c1 + e.offset.b1) * M + wrap(c2 + e.offset.b2)) * n + static_cast<Eigen::Index>(e.head);
                pi(t, h) += gamma;
                pi(h, t) += gamma;
            }
        }
    }
    op.matrix = Eigen::MatrixXd::Identity(dim, dim) - pi / op.mu;
    return op;
}

inline std::vector<double> torus_spectrum(const TorusOperator& op)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline int flat_multiplicity(const std::vector<double>& spectrum, double energy, double tol)
{
    return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(),
                                          [&](double e) { return std::abs(e - energy) <= tol; }));
}

inline int flat_multiplicity(const TorusOperator& op, double energy, double tol)
{
    return flat_multiplicity(torus_spectrum(op), energy, tol);
}

/// Sorted union of the Floquet Laplacian spectra over theta = (2pi/M) * (i1, i2).
inline std::vector<double> floquet_grid_union(const PeriodicGraph& g, const WeightAssignment& w, int M)
{
    std::vector<double> all;
    for (int i1 = 0; i1 < M; ++i1)
        for (int i2 = 0; i2 < M; ++i2) {
            const auto ev = laplacian_eigenvalues(g, w, FloquetPoint(kTwoPi * i1 / M, kTwoPi * i2 / M));
            all.insert(all.end(), ev.begin(), ev.end());
        }
    std::sort(all.begin(), all.end());
    return all;
}

/// max |a_i - b_i| over sorted sequences of equal length.
inline double max_sorted_deviation(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline std::string torus_spectrum_csv(const std::vector<double>& ev)
{
    std::ostringstream os;
    os << "index,eigenvalue\n";
    for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << fmt_num(ev[i]) << '\n';
    return os.str();
}

}  // namespace archflat
