#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "floquet.hpp"
#include "format.hpp"

namespace archflat {

/// Breathing Kagome weights: alpha on g2, g4, g6 and beta = mu/2 - alpha on g1, g3, g5.
struct MonomericKagome {
    double alpha;
    double mu;

    MonomericKagome(double a, double m) : alpha(a), mu(m)
    {
        if (!(m > 0.0)) throw DomainError("mu must be positive");
        if (!(a > 0.0 && a < m / 2)) throw DomainError("alpha must lie in (0, mu/2), got " + fmt_num(a));
    }
    double beta() const { return mu / 2 - alpha; }
};

/// Monomeric Super-Kagome weights: alpha on the triangles (g1..g6), beta = mu - 2 alpha on g7..g9.
struct MonomericSuperKagome {
    double alpha;
    double mu;

    MonomericSuperKagome(double a, double m) : alpha(a), mu(m)
    {
        if (!(m > 0.0)) throw DomainError("mu must be positive");
        if (!(a > 0.0 && a < m / 2)) throw DomainError("alpha must lie in (0, mu/2), got " + fmt_num(a));
    }
    double beta() const { return mu - 2 * alpha; }
};

/// Ascending dispersion values and the sorted slots holding the flat levels.
template <std::size_t N>
struct Dispersion {
    std::array<double, N> values{};
    std::vector<std::size_t> flat_slots;
};

inline Dispersion<3> kagome_dispersion(const MonomericKagome& k, const FloquetPoint& th)
{
    const double F = f_kagome(th.theta1, th.theta2);
    const double a = k.alpha / k.mu;
    const double rad = 1.0 + 8.0 * (1.0 + (F - 3.0) * (2.0 * a - 4.0 * a * a));
    const double r = std::sqrt(std::max(rad, 0.0));
    Dispersion<3> d;
    d.values = {0.75 - r / 4, 0.75 + r / 4, 1.5};
    std::sort(d.values.begin(), d.values.end());
    for (std::size_t i = 3; i-- > 0;) {
        if (d.values[i] == 1.5) {
            d.flat_slots.push_back(i);
            break;
        }
    }
    return d;
}

/// Six Laplacian levels 1 - root/mu for the Pi-roots
/// {beta - alpha, -alpha - beta, (alpha +- sqrt(9a^2 + 4b^2 +- 4ab sqrt(3 + 2F))) / 2}.
/// F is f_superkagome evaluated at (theta1, -theta2) for the built-in cell orientation.
inline Dispersion<6> superkagome_dispersion(const MonomericSuperKagome& s, const FloquetPoint& th)
{
    const double a = s.alpha, b = s.beta(), mu = s.mu;
    const double F = f_superkagome(th.theta1, -th.theta2);
    const double q = std::sqrt(std::max(3.0 + 2.0 * F, 0.0));
    const double flat_lo = 3 * a / mu, flat_hi = 2 - a / mu;
    std::array<double, 6> v{flat_lo, flat_hi, 0, 0, 0, 0};
    int k = 2;
    for (int inner : {+1, -1}) {
        const double r = std::sqrt(std::max(9 * a * a + 4 * b * b + inner * 4 * a * b * q, 0.0));
        for (int outer : {+1, -1}) v[k++] = 1.0 - 0.5 * (a + outer * r) / mu;
    }
    Dispersion<6> d;
    d.values = v;
    std::sort(d.values.begin(), d.values.end());
    for (double f : {flat_lo, flat_hi}) {
        for (std::size_t i = 0; i < 6; ++i) {
            if (d.values[i] == f && std::find(d.flat_slots.begin(), d.flat_slots.end(), i) == d.flat_slots.end()) {
                d.flat_slots.push_back(i);
                break;
            }
        }
    }
    return d;
}

struct FlatAttachment {
    double energy = 0.0;
    std::string attached_to;  // "max(I1)", "min(I2)", "max(I2)" or "touching"
};

struct SpectrumReport {
    std::vector<Interval> bands;
    std::vector<FlatAttachment> flat_bands;
    double gap_width = 0.0;
};

inline SpectrumReport kagome_spectrum(const MonomericKagome& k)
{
    const double d = std::abs(3 * k.alpha / k.mu - 0.75);
    SpectrumReport r;
    r.bands = {{0.0, 0.75 - d}, {0.75 + d, 1.5}};
    r.flat_bands = {{1.5, "max(I2)"}};
    r.gap_width = std::abs(6 * k.alpha / k.mu - 1.5);
    return r;
}

inline SpectrumReport superkagome_spectrum(const MonomericSuperKagome& s)
{
    const double a = s.alpha, b = s.beta(), mu = s.mu;
    const double mid = 1 - a / (2 * mu);
    const double half = std::abs(3 * a - 2 * b) / (2 * mu);
    SpectrumReport r;
    r.bands = {{0.0, mid - half}, {mid + half, 2 - a / mu}};
    const double crit = 2 * mu / 7;
    const char* where = a < crit ? "max(I1)" : (a > crit ? "min(I2)" : "touching");
    r.flat_bands = {{3 * a / mu, where}, {2 - a / mu, "max(I2)"}};
    r.gap_width = std::abs(7 * a - 2 * mu) / mu;
    return r;
}

struct PhaseDiagramRow {
    double alpha = 0.0;
    Interval i1, i2;
    double flat1 = 0.0;
    std::optional<double> flat2;
    double gap = 0.0;
};

/// alpha_k = (mu/2) k / (n + 1), k = 1..n: n interior points of (0, mu/2).
inline std::vector<double> alpha_grid(double mu, int n)
{
    if (n < 1) throw ConfigError("need at least one grid point");
    std::vector<double> out;
    for (int k = 1; k <= n; ++k) out.push_back(mu / 2 * k / (n + 1));
    return out;
}

inline std::vector<PhaseDiagramRow> phase_diagram(const std::string& lattice, double mu,
                                                  const std::vector<double>& alphas)
{
    if (lattice != "kagome" && lattice != "super_kagome")
        throw ConfigError("phase diagrams exist for kagome and super_kagome only");
    std::vector<PhaseDiagramRow> rows;
    for (double a : alphas) {
        PhaseDiagramRow row;
        row.alpha = a;
        if (lattice == "kagome") {
            const auto r = kagome_spectrum(MonomericKagome(a, mu));
            row.i1 = r.bands[0];
            row.i2 = r.bands[1];
            row.flat1 = r.flat_bands[0].energy;
            row.gap = r.gap_width;
        } else {
            const auto r = superkagome_spectrum(MonomericSuperKagome(a, mu));
            row.i1 = r.bands[0];
            row.i2 = r.bands[1];
            row.flat1 = r.flat_bands[0].energy;
            row.flat2 = r.flat_bands[1].energy;
            row.gap = r.gap_width;
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::string phase_diagram_csv(const std::vector<PhaseDiagramRow>& rows)
{
    std::ostringstream os;
    os << "alpha,i1_lo,i1_hi,i2_lo,i2_hi,flat1,flat2,gap\n";
    for (const auto& r : rows) {
        os << fmt_num(r.alpha) << ',' << fmt_num(r.i1.lo) << ',' << fmt_num(r.i1.hi) << ',' << fmt_num(r.i2.lo) << ','
           << fmt_num(r.i2.hi) << ',' << fmt_num(r.flat1) << ',' << (r.flat2 ? fmt_num(*r.flat2) : std::string())
           << ',' << fmt_num(r.gap) << '\n';
    }
    return os.str();
}

/// Energy on the horizontal axis over [0, 2], alpha vertically over (0, mu/2).
inline std::string phase_diagram_svg(const std::vector<PhaseDiagramRow>& rows, double mu, const std::string& title)
{
    constexpr double W = 800, H = 500, L = 70, R = 30, T = 40, B = 60;
    auto px = [&](double e) { return L + e / 2.0 * (W - L - R); };
    auto py = [&](double a) { return H - B - a / (mu / 2) * (H - T - B); };
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        return std::string(buf);
    };
    auto pt = [&](double x, double y) { return num(x) + ',' + num(y); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
       << "</text>\n";
    auto band = [&](auto lo, auto hi, const char* fill) {
        os << "<polygon fill=\"" << fill << "\" stroke=\"none\" points=\"";
        for (const auto& r : rows) os << pt(px(lo(r)), py(r.alpha)) << ' ';
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) os << pt(px(hi(*it)), py(it->alpha)) << ' ';
        os << "\"/>\n";
    };
    if (!rows.empty()) {
        band([](const PhaseDiagramRow& r) { return r.i1.lo; }, [](const PhaseDiagramRow& r) { return r.i1.hi; },
             "#9ecae1");
        band([](const PhaseDiagramRow& r) { return r.i2.lo; }, [](const PhaseDiagramRow& r) { return r.i2.hi; },
             "#fdae6b");
        auto dashed = [&](auto f) {
            os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"6,4\" points=\"";
            for (const auto& r : rows) os << pt(px(f(r)), py(r.alpha)) << ' ';
            os << "\"/>\n";
        };
        dashed([](const PhaseDiagramRow& r) { return r.flat1; });
        if (rows.front().flat2) dashed([](const PhaseDiagramRow& r) { return *r.flat2; });
    }
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << L << "\" y2=\"" << T << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double e = 0.5 * k;
        os << "<text x=\"" << num(px(e)) << "\" y=\"" << H - B + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fmt_num(e) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">energy</text>\n";
    os << "<text x=\"20\" y=\"" << (T + H - B) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 "
       << (T + H - B) / 2 << ")\">alpha</text>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(mu / 2) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fmt_num(mu / 2) << "</text>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(0) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------- characteristic polynomials

struct KagomeCharpoly {
    cplx compact;     // -l^3 + l(|a|^2+|b|^2+|c|^2) + 2 Re(a c conj(b)) from the matrix entries
    double expanded;  // collected by 2cos(t1), 2cos(t2), 2cos(t1 - t2) and constant
};

/// det(Pi - lambda I) for Kagome weights g1..g6, two ways.
inline KagomeCharpoly kagome_charpoly(const std::array<double, 6>& g, double lambda, const FloquetPoint& th)
{
    const auto [g1, g2, g3, g4, g5, g6] = g;
    const cplx w = std::polar(1.0, th.theta1), z = std::polar(1.0, th.theta2);
    const cplx a = g3 + w * g6, b = w * g4 + z * g1, c = g2 + z * g5;
    KagomeCharpoly r;
    r.compact = -lambda * lambda * lambda + lambda * (std::norm(a) + std::norm(b) + std::norm(c)) +
                a * c * std::conj(b) + std::conj(a * c * std::conj(b));
    const double c1 = 2 * std::cos(th.theta1), c2 = 2 * std::cos(th.theta2), c12 = 2 * std::cos(th.theta1 - th.theta2);
    double sq = 0.0;
    for (double x : g) sq += x * x;
    r.expanded = c1 * (lambda * g6 * g3 + g3 * g2 * g4 + g6 * g5 * g1) +
                 c2 * (lambda * g5 * g2 + g6 * g5 * g4 + g1 * g3 * g2) +
                 c12 * (lambda * g1 * g4 + g3 * g5 * g4 + g6 * g2 * g1) - lambda * lambda * lambda + lambda * sq +
                 2 * (g4 * g6 * g2 + g3 * g5 * g1);
    return r;
}

/// det(lambda I - Pi) for Super-Kagome weights with g4 = g1, g5 = g2, g6 = g3,
/// given as (g1, g2, g3, g7, g8, g9).
inline double superkagome_charpoly(const std::array<double, 6>& g, double lambda, const FloquetPoint& th)
{
    const auto [g1, g2, g3, g7, g8, g9] = g;
    const double l = lambda;
    const double a1 = g1 * g1, a2 = g2 * g2, a3 = g3 * g3, b7 = g7 * g7, b8 = g8 * g8, b9 = g9 * g9;
    const double p = g1 * g2 * g3;
    const double c0 = std::pow(l, 6) - std::pow(l, 4) * (2 * a1 + 2 * a2 + 2 * a3 + b7 + b8 + b9) - 4 * l * l * l * p +
                      l * l * (a1 * a1 + a2 * a2 + a3 * a3 + 2 * a1 * a2 + 2 * a2 * a3 + 2 * a3 * a1 + 2 * a1 * b7 +
                               2 * a2 * b9 + 2 * a3 * b8 + b7 * b8 + b8 * b9 + b9 * b7) +
                      4 * l * p * (a1 + a2 + a3) - a1 * a1 * b7 - a2 * a2 * b9 - a3 * a3 * b8 - b7 * b8 * b9 +
                      4 * a1 * a2 * a3;
    const double cw = l * l * a2 * g7 * g8 + 2 * l * p * g7 * g8 + a1 * a3 * g7 * g8 - a2 * g7 * g8 * b9;
    const double cz = l * l * a3 * g7 * g9 + 2 * l * p * g7 * g9 + a1 * a2 * g7 * g9 - a3 * g7 * b8 * g9;
    const double cwz = l * l * a1 * g8 * g9 + 2 * l * p * g8 * g9 + a2 * a3 * g8 * g9 - a1 * b7 * g8 * g9;
    return c0 - 2 * std::cos(th.theta1) * cw - 2 * std::cos(th.theta2) * cz - 2 * std::cos(th.theta1 - th.theta2) * cwz;
}

/// det(lambda I - Pi) for monomeric Super-Kagome weights in factored form.
inline double superkagome_charpoly_factored(double alpha, double beta, double lambda, const FloquetPoint& th)
{
    const double a = alpha, b = beta, l = lambda;
    const double F = f_superkagome(th.theta1, -th.theta2);
    const double quartic = l * l * l * l - 2 * a * l * l * l - (3 * a * a + 2 * b * b) * l * l +
                           (4 * a * a * a + 2 * a * b * b) * l + 4 * a * a * a * a + a * a * b * b + b * b * b * b -
                           2 * a * a * b * b * F;
    return ((a + l) * (a + l) - b * b) * quartic;
}

}  // namespace archflat
