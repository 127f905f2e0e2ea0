#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "format.hpp"
#include "hermitian.hpp"
#include "periodic_graph.hpp"

namespace archflat {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double reduce_angle(double t)
{
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Quasi-momentum (theta1, theta2), each reduced into [0, 2pi).
struct FloquetPoint {
    double theta1 = 0.0;
    double theta2 = 0.0;

    FloquetPoint() = default;
    FloquetPoint(double t1, double t2) : theta1(reduce_angle(t1)), theta2(reduce_angle(t2)) {}

    double phase(LatticeOffset b) const { return b.b1 * theta1 + b.b2 * theta2; }
};

/// Weighted adjacency (Floquet) matrix: edge (u, v, beta) contributes
/// gamma * exp(i <beta, theta>) at (u, v) and its conjugate at (v, u).
inline HermitianMatrix adjacency_matrix(const PeriodicGraph& g, const WeightAssignment& w, const FloquetPoint& th)
{
    HermitianMatrix h(g.n_vertices());
    for (const auto& e : g.edges()) h.add_pair(e.tail, e.head, w.at(e.weight_class) * std::polar(1.0, th.phase(e.offset)));
    return h;
}

/// Normalized Floquet Laplacian I - Pi / mu. Needs constant vertex weight.
inline HermitianMatrix laplacian(const PeriodicGraph& g, const WeightAssignment& w, const FloquetPoint& th)
{
    const double mu = require_constant_vertex_weight(g, w);
    auto h = adjacency_matrix(g, w, th);
    const std::size_t n = h.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = (i == j ? 1.0 : 0.0) - h(i, j) / mu;
    return h;
}

inline std::vector<double> laplacian_eigenvalues(const PeriodicGraph& g, const WeightAssignment& w,
                                                 const FloquetPoint& th)
{
    return eigenvalues(laplacian(g, w, th));
}

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Laplacian spectra over the uniform K x K grid theta = (2pi/K) * (i1, i2).
struct BandStructure {
    int K = 0;
    std::vector<FloquetPoint> grid;           // index i1 * K + i2
    std::vector<std::vector<double>> levels;  // ascending per grid point
    std::vector<Interval> band_ranges;        // per sorted level

    /// Union of the band ranges; ranges closer than `join_tol` are merged.
    std::vector<Interval> spectrum(double join_tol = 1e-9) const
    {
        auto r = band_ranges;
        std::sort(r.begin(), r.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> out;
        for (const auto& iv : r) {
            if (!out.empty() && iv.lo <= out.back().hi + join_tol)
                out.back().hi = std::max(out.back().hi, iv.hi);
            else
                out.push_back(iv);
        }
        return out;
    }
};

inline BandStructure band_structure(const PeriodicGraph& g, const WeightAssignment& w, int K)
{
    if (K < 3) throw ConfigError("grid size K must be at least 3");
    require_constant_vertex_weight(g, w);
    BandStructure bs;
    bs.K = K;
    const std::size_t n = g.n_vertices();
    bs.band_ranges.assign(n, Interval{1e300, -1e300});
    for (int i1 = 0; i1 < K; ++i1) {
        for (int i2 = 0; i2 < K; ++i2) {
            const FloquetPoint th(kTwoPi * i1 / K, kTwoPi * i2 / K);
            auto ev = laplacian_eigenvalues(g, w, th);
            for (std::size_t l = 0; l < n; ++l) {
                bs.band_ranges[l].lo = std::min(bs.band_ranges[l].lo, ev[l]);
                bs.band_ranges[l].hi = std::max(bs.band_ranges[l].hi, ev[l]);
            }
            bs.grid.push_back(th);
            bs.levels.push_back(std::move(ev));
        }
    }
    return bs;
}

inline std::string band_structure_csv(const BandStructure& bs)
{
    std::ostringstream os;
    os << "theta1,theta2,level_index,eigenvalue\n";
    for (std::size_t k = 0; k < bs.grid.size(); ++k) {
        for (std::size_t l = 0; l < bs.levels[k].size(); ++l)
            os << fmt_num(bs.grid[k].theta1) << ',' << fmt_num(bs.grid[k].theta2) << ',' << l << ','
               << fmt_num(bs.levels[k][l]) << '\n';
    }
    return os.str();
}

/// cos t1 + cos t2 + cos(t1 - t2); ranges over [-3/2, 3].
inline double f_kagome(double t1, double t2) { return std::cos(t1) + std::cos(t2) + std::cos(t1 - t2); }

/// cos t1 + cos t2 + cos(t1 + t2); ranges over [-3/2, 3].
inline double f_superkagome(double t1, double t2) { return std::cos(t1) + std::cos(t2) + std::cos(t1 + t2); }

}  // namespace archflat
