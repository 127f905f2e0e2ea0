#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "floquet.hpp"
#include "format.hpp"
#include "periodic_graph.hpp"
#include "tilings.hpp"

namespace archflat {

/// Seed of the random Floquet points used by flat-band detection.
inline constexpr std::uint64_t kFlatBandSeed = 20240917;
inline constexpr double kFlatBandTol = 1e-9;

struct FlatLevel {
    double energy = 0.0;
    int multiplicity = 0;
    double max_deviation = 0.0;
};

struct FlatBandReport {
    std::vector<FlatLevel> energies;  // ascending

    std::size_t count() const { return energies.size(); }
};

/// The structured points followed by `samples` uniform random points.
inline std::vector<FloquetPoint> detection_points(int samples, std::uint64_t seed = kFlatBandSeed)
{
    constexpr double pi = std::numbers::pi;
    std::vector<FloquetPoint> pts{{0.0, 0.0}, {pi, pi}, {2.0 * pi / 3.0, 4.0 * pi / 3.0}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.0, kTwoPi);
    for (int k = 0; k < samples; ++k) {
        const double t1 = d(rng);
        const double t2 = d(rng);
        pts.emplace_back(t1, t2);
    }
    return pts;
}

/// Values present (within tol) in every one of the sorted spectra.
/// The last spectrum is used as reference since it comes from a generic point.
inline std::vector<FlatLevel> common_levels(const std::vector<std::vector<double>>& spectra, double tol)
{
    std::vector<FlatLevel> out;
    if (spectra.empty()) return out;
    const auto& ref = spectra.back();
    for (std::size_t i = 0; i < ref.size();) {
        std::size_t j = i + 1;
        while (j < ref.size() && ref[j] - ref[j - 1] <= tol) ++j;
        double center = 0.0;
        for (std::size_t k = i; k < j; ++k) center += ref[k];
        center /= static_cast<double>(j - i);

        int mult = static_cast<int>(j - i);
        double sum = 0.0, dev = 0.0;
        std::vector<double> nearest;
        bool everywhere = true;
        for (const auto& s : spectra) {
            int c = 0;
            double best = 1e300, best_val = 0.0;
            for (double e : s) {
                const double d = std::abs(e - center);
                if (d <= tol) ++c;
                if (d < best) {
                    best = d;
                    best_val = e;
                }
            }
            if (c == 0) {
                everywhere = false;
                break;
            }
            mult = std::min(mult, c);
            nearest.push_back(best_val);
            sum += best_val;
        }
        if (everywhere) {
            const double energy = sum / static_cast<double>(nearest.size());
            for (double v : nearest) dev = std::max(dev, std::abs(v - energy));
            out.push_back({energy, mult, dev});
        }
        i = j;
    }
    return out;
}

/// Laplacian energies that do not depend on theta.
inline FlatBandReport detect_flat_bands(const PeriodicGraph& g, const WeightAssignment& w, int samples = 8,
                                        double tol = kFlatBandTol, std::uint64_t seed = kFlatBandSeed)
{
    if (samples < 8) throw ConfigError("flat-band detection needs at least 8 random samples");
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    require_constant_vertex_weight(g, w);
    std::vector<std::vector<double>> spectra;
    for (const auto& th : detection_points(samples, seed)) spectra.push_back(laplacian_eigenvalues(g, w, th));
    return {common_levels(spectra, tol)};
}

inline std::string flat_band_csv(const FlatBandReport& r)
{
    std::ostringstream os;
    os << "energy,multiplicity,max_deviation\n";
    for (const auto& f : r.energies) os << fmt_num(f.energy) << ',' << f.multiplicity << ',' << fmt_num(f.max_deviation) << '\n';
    return os.str();
}

/// Pi-level eigenvalue lambda_tilde = mu * (1 - E) for Laplacian energy E.
struct ScaledEnergy {
    double lambda_tilde = 0.0;

    static ScaledEnergy from_laplacian(double energy, double mu) { return {mu * (1.0 - energy)}; }
    double laplacian(double mu) const { return 1.0 - lambda_tilde / mu; }
};

// ---------------------------------------------------------------- Kagome

/// Coefficients of det(Pi - lambda I) in front of 2cos(t1), 2cos(t2),
/// 2cos(t1 - t2) and the constant term. All vanish iff lambda is a flat Pi-eigenvalue.
struct KagomeResiduals {
    std::array<double, 3> products{};
    double scalar = 0.0;

    double max_abs() const
    {
        double m = std::abs(scalar);
        for (double p : products) m = std::max(m, std::abs(p));
        return m;
    }
};

inline KagomeResiduals kagome_condition_residuals(const std::array<double, 6>& g, double lambda)
{
    const auto [g1, g2, g3, g4, g5, g6] = g;
    KagomeResiduals r;
    r.products[0] = lambda * g6 * g3 + g3 * g2 * g4 + g6 * g5 * g1;
    r.products[1] = lambda * g5 * g2 + g6 * g5 * g4 + g1 * g3 * g2;
    r.products[2] = lambda * g1 * g4 + g3 * g5 * g4 + g6 * g2 * g1;
    double sq = 0.0;
    for (double x : g) sq += x * x;
    r.scalar = -lambda * lambda * lambda + lambda * sq + 2.0 * (g4 * g6 * g2 + g3 * g5 * g1);
    return r;
}

/// Normalized form: weights scaled so that g2 + g5 = 1, candidate eigenvalue -1.
inline KagomeResiduals kagome_condition_residuals(const std::array<double, 6>& g)
{
    return kagome_condition_residuals(g, -1.0);
}

// ---------------------------------------------------------------- Super-Kagome

/// Super-Kagome weights after the constant-vertex-weight identities g4 = g1, g5 = g2, g6 = g3.
struct SuperKagomeReduced {
    double g1 = 0, g2 = 0, g3 = 0, g7 = 0, g8 = 0, g9 = 0;

    static SuperKagomeReduced from_weights(const WeightAssignment& w)
    {
        auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
        if (!same(w.at("g1"), w.at("g4")) || !same(w.at("g2"), w.at("g5")) || !same(w.at("g3"), w.at("g6")))
            throw PreconditionError("Super-Kagome reduction needs g4 = g1, g5 = g2, g6 = g3");
        return {w.at("g1"), w.at("g2"), w.at("g3"), w.at("g7"), w.at("g8"), w.at("g9")};
    }
};

/// Signs (s7, s8, s9), each +1 or -1.
using SignPattern = std::array<int, 3>;

/// Three energy residuals lambda_tilde - (-g1 g3 / g2 + s9 g9), lambda_tilde - (-g1 g2 / g3 + s8 g8),
/// lambda_tilde - (-g2 g3 / g1 + s7 g7), then the constant term of det(lambda_tilde I - Pi).
inline std::array<double, 4> superkagome_condition_residuals(const SuperKagomeReduced& r, double lambda_tilde,
                                                             SignPattern s)
{
    const double l = lambda_tilde;
    const auto [g1, g2, g3, g7, g8, g9] = std::array{r.g1, r.g2, r.g3, r.g7, r.g8, r.g9};
    const double a1 = g1 * g1, a2 = g2 * g2, a3 = g3 * g3, b7 = g7 * g7, b8 = g8 * g8, b9 = g9 * g9;
    const double c0 = std::pow(l, 6) - std::pow(l, 4) * (2 * a1 + 2 * a2 + 2 * a3 + b7 + b8 + b9) -
                      4 * l * l * l * g1 * g2 * g3 +
                      l * l * (a1 * a1 + a2 * a2 + a3 * a3 + 2 * a1 * a2 + 2 * a2 * a3 + 2 * a3 * a1 + 2 * a1 * b7 +
                               2 * a2 * b9 + 2 * a3 * b8 + b7 * b8 + b8 * b9 + b9 * b7) +
                      4 * l * g1 * g2 * g3 * (a1 + a2 + a3) - a1 * a1 * b7 - a2 * a2 * b9 - a3 * a3 * b8 -
                      b7 * b8 * b9 + 4 * a1 * a2 * a3;
    return {l - (-g1 * g3 / g2 + s[2] * g9), l - (-g1 * g2 / g3 + s[1] * g8), l - (-g2 * g3 / g1 + s[0] * g7), c0};
}

enum class FamilyCase { MPP, PMM_a, PMM_b };

inline std::string to_string(FamilyCase c)
{
    switch (c) {
    case FamilyCase::MPP: return "mpp";
    case FamilyCase::PMM_a: return "pmm_a";
    case FamilyCase::PMM_b: return "pmm_b";
    }
    return "?";
}

inline FamilyCase family_case_from_string(const std::string& s)
{
    if (s == "mpp") return FamilyCase::MPP;
    if (s == "pmm_a") return FamilyCase::PMM_a;
    if (s == "pmm_b") return FamilyCase::PMM_b;
    throw ConfigError("unknown family '" + s + "' (expected mpp, pmm_a or pmm_b)");
}

/// One of the six one-parameter Super-Kagome weight families with exactly one flat band.
struct OneFlatBandFamily {
    FamilyCase kind = FamilyCase::MPP;
    int rotation = 0;
    double mu = 1.0;

    /// Open parameter interval.
    std::pair<double, double> range() const
    {
        switch (kind) {
        case FamilyCase::MPP: return {mu / 2, mu};
        case FamilyCase::PMM_a: return {0.0, mu / 2};
        case FamilyCase::PMM_b: return {0.0, mu};
        }
        return {0.0, 0.0};
    }

    std::string name() const { return to_string(kind) + "/r" + std::to_string(rotation); }
};

inline std::vector<OneFlatBandFamily> all_families(double mu)
{
    std::vector<OneFlatBandFamily> out;
    for (auto k : {FamilyCase::MPP, FamilyCase::PMM_a, FamilyCase::PMM_b})
        for (int r = 0; r < 3; ++r) out.push_back({k, r, mu});
    return out;
}

struct FamilyPoint {
    std::array<double, 9> gamma{};
    SignPattern signs{};
    double lambda_tilde = 0.0;
    double energy = 0.0;

    WeightAssignment weights() const
    {
        std::map<std::string, double, NaturalLess> m;
        for (std::size_t i = 0; i < 9; ++i) m["g" + std::to_string(i + 1)] = gamma[i];
        return WeightAssignment(std::move(m));
    }
};

/// Rotation by 2pi/3: g1 -> g2 -> g3 -> g1 (likewise g4..g6) and g7 -> g9 -> g8 -> g7.
inline std::array<double, 9> rotate_superkagome(const std::array<double, 9>& g)
{
    std::array<double, 9> o{};
    o[1] = g[0], o[2] = g[1], o[0] = g[2];
    o[4] = g[3], o[5] = g[4], o[3] = g[5];
    o[8] = g[6], o[6] = g[7], o[7] = g[8];
    return o;
}

inline SignPattern rotate_signs(const SignPattern& s) { return {s[1], s[2], s[0]}; }

inline FamilyPoint one_flat_band_family(const OneFlatBandFamily& f, double t)
{
    const double mu = f.mu;
    if (!(mu > 0.0)) throw DomainError("mu must be positive");
    if (f.rotation < 0 || f.rotation > 2) throw DomainError("rotation must be 0, 1 or 2");
    const auto [lo, hi] = f.range();
    if (!(t > lo && t < hi))
        throw DomainError("family parameter " + fmt_num(t) + " outside (" + fmt_num(lo) + ", " + fmt_num(hi) + ")");

    FamilyPoint p;
    double g1 = 0, g2 = 0, g3 = 0, g7 = 0, g8 = 0, g9 = 0;
    switch (f.kind) {
    case FamilyCase::MPP: {
        const double b = mu - 3 * t + std::sqrt(17 * t * t - 8 * t * mu);
        g1 = g3 = (mu - b) / 2;
        g2 = t;
        g7 = g8 = (mu + b) / 2 - t;
        g9 = b;
        p.lambda_tilde = -2 * t + (mu + b) / 2;
        p.signs = {+1, +1, -1};
        break;
    }
    case FamilyCase::PMM_a: {
        const double b = mu + 3 * t - std::sqrt(9 * t * t + 8 * t * mu);
        g1 = g3 = (mu - b) / 2;
        g2 = t;
        g7 = g8 = (mu + b) / 2 - t;
        g9 = b;
        p.lambda_tilde = -(mu + b) / 2;
        p.signs = {-1, -1, +1};
        break;
    }
    case FamilyCase::PMM_b: {
        const double b = (mu - 3 * t + std::sqrt(mu * mu - 2 * t * mu + 5 * t * t)) / 2;
        g1 = t;
        g3 = b;
        g2 = t * b / (t + b);
        g7 = mu - (2 * t * b + b * b) / (t + b);
        g8 = mu - (t * t + 2 * t * b) / (t + b);
        g9 = mu - t - b;
        p.lambda_tilde = mu - 2 * t - 2 * b;
        p.signs = {-1, -1, +1};
        break;
    }
    }
    p.gamma = {g1, g2, g3, g1, g2, g3, g7, g8, g9};
    for (int r = 0; r < f.rotation; ++r) {
        p.gamma = rotate_superkagome(p.gamma);
        p.signs = rotate_signs(p.signs);
    }
    p.energy = 1.0 - p.lambda_tilde / mu;
    return p;
}

/// Family and parameter reproducing `w` to within tol * mu, if any.
inline std::optional<std::pair<OneFlatBandFamily, double>> on_family(const WeightAssignment& w, double tol = 1e-9)
{
    std::array<double, 9> g{};
    for (std::size_t i = 0; i < 9; ++i) g[i] = w.at("g" + std::to_string(i + 1));
    const double mu_v = g[3] + g[5] + g[8];  // vertex v1 meets g4, g6, g9
    for (int r = 0; r < 3; ++r) {
        auto base = g;
        for (int k = 0; k < (3 - r) % 3; ++k) base = rotate_superkagome(base);
        for (auto kind : {FamilyCase::MPP, FamilyCase::PMM_a, FamilyCase::PMM_b}) {
            const OneFlatBandFamily f{kind, r, mu_v};
            const double t = kind == FamilyCase::PMM_b ? base[0] : base[1];
            const auto [lo, hi] = f.range();
            if (!(t > lo && t < hi)) continue;
            const auto p = one_flat_band_family(f, t);
            double d = 0.0;
            for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(p.gamma[i] - g[i]));
            if (d <= tol * mu_v) return std::pair{f, t};
        }
    }
    return std::nullopt;
}

inline WeightAssignment monomeric_kagome_weights(double alpha, double mu)
{
    const double beta = mu / 2 - alpha;
    return WeightAssignment({{"g1", beta}, {"g2", alpha}, {"g3", beta}, {"g4", alpha}, {"g5", beta}, {"g6", alpha}});
}

inline WeightAssignment monomeric_superkagome_weights(double alpha, double mu)
{
    const double beta = mu - 2 * alpha;
    std::map<std::string, double, NaturalLess> m;
    for (int i = 1; i <= 6; ++i) m["g" + std::to_string(i)] = alpha;
    for (int i = 7; i <= 9; ++i) m["g" + std::to_string(i)] = beta;
    return WeightAssignment(std::move(m));
}

struct ClassificationReport {
    std::string lattice;
    int random_trials = 0;
    int monomeric_trials = 0;
    std::map<int, int> random_counts;     // flat-band count -> draws
    std::map<int, int> monomeric_counts;  // flat-band count -> draws
    int mismatches = 0;
    double worst_deviation = 0.0;         // detection spread
    double worst_energy_error = 0.0;      // monomeric draws vs predicted energies

    bool passed() const { return mismatches == 0; }
};

/// Random constant-vertex-weight draws plus random monomeric draws, each
/// checked against the flat-band count predicted by the classification.
inline ClassificationReport verify_flat_band_classification(const std::string& lattice, int trials,
                                                            std::uint64_t seed = 1)
{
    if (lattice != "kagome" && lattice != "super_kagome")
        throw PreconditionError("classification is known for kagome and super_kagome only");
    const bool sk = lattice == "super_kagome";
    const auto g = builtin(lattice);
    const double mu = 1.0;
    const auto param = constant_weight_parametrization(g, mu);
    std::mt19937_64 rng(seed);

    ClassificationReport rep;
    rep.lattice = lattice;
    for (int k = 0; k < trials; ++k) {
        const auto w = param.sample(rng);
        if (!w) throw NoSolutionError("could not sample positive constant-vertex-weight weights");
        const auto fb = detect_flat_bands(g, *w);
        int expected = 0;
        if (is_monomeric(g, *w))
            expected = sk ? 2 : 1;
        else if (sk && on_family(*w))
            expected = 1;
        const int got = static_cast<int>(fb.count());
        ++rep.random_counts[got];
        ++rep.random_trials;
        if (got != expected) ++rep.mismatches;
        for (const auto& f : fb.energies) rep.worst_deviation = std::max(rep.worst_deviation, f.max_deviation);
    }
    std::uniform_real_distribution<double> da(0.0, mu / 2);
    for (int k = 0; k < trials; ++k) {
        double alpha = da(rng);
        while (alpha <= 0.0) alpha = da(rng);
        const auto w = sk ? monomeric_superkagome_weights(alpha, mu) : monomeric_kagome_weights(alpha, mu);
        const auto fb = detect_flat_bands(g, w);
        std::vector<double> predicted = sk ? std::vector<double>{3 * alpha / mu, 2 - alpha / mu}
                                           : std::vector<double>{1.5};
        std::sort(predicted.begin(), predicted.end());
        const int got = static_cast<int>(fb.count());
        ++rep.monomeric_counts[got];
        ++rep.monomeric_trials;
        if (got != static_cast<int>(predicted.size())) {
            ++rep.mismatches;
            continue;
        }
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            const double err = std::abs(fb.energies[i].energy - predicted[i]);
            rep.worst_energy_error = std::max(rep.worst_energy_error, err);
            rep.worst_deviation = std::max(rep.worst_deviation, fb.energies[i].max_deviation);
            if (err > kFlatBandTol) ++rep.mismatches;
        }
    }
    return rep;
}

struct NoFlatBandReport {
    std::string tiling;
    int trials = 0;
    int draws_with_flat_band = 0;

    bool passed() const { return draws_with_flat_band == 0; }
};

/// Random positive weights (uniform in [0.1, 1]) on a tiling other than
/// Kagome and Super-Kagome; flat levels are searched in the spectrum of
/// Pi divided by its largest vertex weight.
inline NoFlatBandReport no_flat_band_sampler(const PeriodicGraph& g, int trials, std::uint64_t seed = 1,
                                             double tol = kFlatBandTol)
{
    if (g.name() == "kagome" || g.name() == "super_kagome")
        throw PreconditionError("'" + g.name() + "' carries flat bands; sampler is for the other tilings");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.1, 1.0);
    const auto pts = detection_points(8, seed ^ kFlatBandSeed);
    NoFlatBandReport rep;
    rep.tiling = g.name();
    for (int k = 0; k < trials; ++k) {
        std::vector<double> vals;
        for (std::size_t i = 0; i < g.weight_classes().size(); ++i) vals.push_back(d(rng));
        const auto w = WeightAssignment::from_vector(g, vals);
        double scale = 0.0;
        for (std::size_t v = 0; v < g.n_vertices(); ++v) scale = std::max(scale, vertex_weight(g, w, v));
        std::vector<std::vector<double>> spectra;
        for (const auto& th : pts) {
            auto ev = eigenvalues(adjacency_matrix(g, w, th));
            for (auto& e : ev) e /= scale;
            spectra.push_back(std::move(ev));
        }
        ++rep.trials;
        if (!common_levels(spectra, tol).empty()) ++rep.draws_with_flat_band;
    }
    return rep;
}

// ---------------------------------------------------------------- compact eigenstates

struct CompactEntry {
    LatticeOffset cell;
    std::size_t vertex = 0;
    double amplitude = 0.0;
};

struct CompactState {
    std::vector<CompactEntry> entries;  // nonzero amplitudes only, max |amplitude| = 1
    double residual = 0.0;              // max over every row of |(Delta - E) v|

    std::size_t support_size() const { return entries.size(); }
};

namespace detail {

using SiteKey = std::tuple<int, int, std::size_t>;

struct Patch {
    std::vector<SiteKey> cols;
    std::vector<SiteKey> rows;
    Eigen::MatrixXd a;
};

inline Patch assemble_patch(const PeriodicGraph& g, const WeightAssignment& w, double mu, double energy, int c1,
                            int c2, int s)
{
    Patch p;
    for (int i = c1; i < c1 + s; ++i)
        for (int j = c2; j < c2 + s; ++j)
            for (std::size_t v = 0; v < g.n_vertices(); ++v) p.cols.emplace_back(i, j, v);
    std::map<SiteKey, Eigen::Index> row_of;
    std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> trip;
    auto row = [&](const SiteKey& k) {
        auto it = row_of.find(k);
        if (it != row_of.end()) return it->second;
        const auto idx = static_cast<Eigen::Index>(p.rows.size());
        row_of.emplace(k, idx);
        p.rows.push_back(k);
        return idx;
    };
    for (std::size_t c = 0; c < p.cols.size(); ++c) {
        const auto [i, j, v] = p.cols[c];
        const auto col = static_cast<Eigen::Index>(c);
        trip.emplace_back(row(p.cols[c]), col, 1.0 - energy);
        for (const auto& e : g.edges()) {
            const double x = -w.at(e.weight_class) / mu;
            if (e.tail == v) trip.emplace_back(row({i + e.offset.b1, j + e.offset.b2, e.head}), col, x);
            if (e.head == v) trip.emplace_back(row({i - e.offset.b1, j - e.offset.b2, e.tail}), col, x);
        }
    }
    p.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.rows.size()), static_cast<Eigen::Index>(p.cols.size()));
    for (const auto& [r, c, x] : trip) p.a(r, c) += x;
    return p;
}

/// Reduced row echelon form in place, partial pivoting.
inline void rref(Eigen::MatrixXd& m, double tol)
{
    Eigen::Index lead = 0;
    for (Eigen::Index c = 0; c < m.cols() && lead < m.rows(); ++c) {
        Eigen::Index piv = lead;
        for (Eigen::Index r = lead + 1; r < m.rows(); ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (std::abs(m(piv, c)) <= tol) continue;
        m.row(piv).swap(m.row(lead));
        m.row(lead) /= m(lead, c);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (r != lead) m.row(r) -= m(r, c) * m.row(lead);
        ++lead;
    }
}

}  // namespace detail

inline constexpr double kCompactSvdCutoff = 1e-10;
inline constexpr double kCompactResidualTol = 1e-10;

/// A finitely supported eigenvector of the infinite Laplacian at energy E
/// living in the cells of Chebyshev radius < `radius`, or nothing.
///
/// Square windows of cells are tried smallest first; within the first window
/// with a nontrivial constrained nullspace the sparsest echelon basis vector wins.
inline std::optional<CompactState> find_compact_eigenstate(const PeriodicGraph& g, const WeightAssignment& w,
                                                           double energy, int radius)
{
    if (radius < 1) throw DomainError("radius must be at least 1");
    const double mu = require_constant_vertex_weight(g, w);
    const int lo = -(radius - 1);
    const int span = 2 * radius - 1;
    for (int s = 1; s <= span; ++s) {
        for (int c1 = lo; c1 + s <= lo + span; ++c1) {
            for (int c2 = lo; c2 + s <= lo + span; ++c2) {
                const auto p = detail::assemble_patch(g, w, mu, energy, c1, c2, s);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.a, Eigen::ComputeFullV);
                const auto& sv = svd.singularValues();
                const double cut = kCompactSvdCutoff * sv(0);
                Eigen::Index rank = 0;
                for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cut ? 1 : 0;
                const Eigen::Index nullity = p.a.cols() - rank;
                if (nullity == 0) continue;

                Eigen::MatrixXd basis = svd.matrixV().rightCols(nullity).transpose();
                detail::rref(basis, 1e-9);
                std::optional<CompactState> best;
                for (Eigen::Index r = 0; r < basis.rows(); ++r) {
                    Eigen::VectorXd x = basis.row(r).transpose();
                    const double amax = x.cwiseAbs().maxCoeff();
                    if (amax == 0.0) continue;
                    Eigen::Index at = 0;
                    x.cwiseAbs().maxCoeff(&at);
                    x /= x(at);
                    for (auto& xi : x) {
                        if (std::abs(xi) < 1e-12) xi = 0.0;
                    }
                    const double res = (p.a * x).cwiseAbs().maxCoeff();
                    if (res > kCompactResidualTol) continue;
                    CompactState st;
                    st.residual = res;
                    for (Eigen::Index k = 0; k < x.size(); ++k) {
                        if (x(k) == 0.0) continue;
                        const auto [i, j, v] = p.cols[static_cast<std::size_t>(k)];
                        st.entries.push_back({{i, j}, v, x(k)});
                    }
                    if (!best || st.support_size() < best->support_size()) best = std::move(st);
                }
                if (best) return best;
            }
        }
    }
    return std::nullopt;
}

inline std::string compact_state_csv(const CompactState& st)
{
    std::ostringstream os;
    os << "cell_b1,cell_b2,vertex,amplitude_re,amplitude_im\n";
    for (const auto& e : st.entries)
        os << e.cell.b1 << ',' << e.cell.b2 << ',' << e.vertex << ',' << fmt_num(e.amplitude) << ",0\n";
    return os.str();
}

}  // namespace archflat
