#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flatband.hpp"
#include "format.hpp"
#include "tilings.hpp"
#include "torus_oracle.hpp"

namespace archflat {

struct SuiteResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;  // worst residual or deviation seen
    std::string detail;
};

/// Random and monomeric draws on both lattices against the known flat-band counts.
inline SuiteResult suite_classification(int trials, std::uint64_t seed)
{
    SuiteResult r{"classification", true, 0.0, {}};
    for (const char* lat : {"kagome", "super_kagome"}) {
        const auto rep = verify_flat_band_classification(lat, trials, seed);
        r.passed = r.passed && rep.passed();
        r.worst = std::max({r.worst, rep.worst_deviation, rep.worst_energy_error});
        r.detail += (r.detail.empty() ? "" : "; ") + std::string(lat) + ": " + std::to_string(rep.mismatches) + " mismatches";
    }
    return r;
}

/// Evenly spaced interior parameters of every one-flat-band family.
inline SuiteResult suite_families(int trials, double mu = 1.0)
{
    SuiteResult r{"families", true, 0.0, {}};
    const auto g = builtin("super_kagome");
    int bad = 0;
    for (const auto& f : all_families(mu)) {
        const auto [lo, hi] = f.range();
        for (int k = 0; k < trials; ++k) {
            const double t = lo + (hi - lo) * (k + 0.5) / trials;
            const auto p = one_flat_band_family(f, t);
            bool ok = std::all_of(p.gamma.begin(), p.gamma.end(), [](double x) { return x > 0.0; });
            if (!ok) {
                ++bad;
                continue;
            }
            const auto w = p.weights();
            const auto m = constant_vertex_weight(g, w);
            ok = m && std::abs(*m - mu) <= 1e-12 * mu && !is_monomeric(g, w);
            const auto res = superkagome_condition_residuals(SuperKagomeReduced::from_weights(w), p.lambda_tilde, p.signs);
            for (double x : res) {
                r.worst = std::max(r.worst, std::abs(x));
                ok = ok && std::abs(x) <= 1e-10;
            }
            const auto fb = detect_flat_bands(g, w);
            ok = ok && fb.count() == 1 && fb.energies[0].multiplicity == 1;
            if (fb.count() == 1) {
                const double err = std::abs(fb.energies[0].energy - p.energy);
                r.worst = std::max(r.worst, err);
                ok = ok && err <= kFlatBandTol;
            }
            if (!ok) ++bad;
        }
    }
    r.passed = bad == 0;
    r.detail = std::to_string(6 * trials) + " points, " + std::to_string(bad) + " failures";
    return r;
}

/// Torus spectrum against the union of grid Floquet spectra for random
/// constant-vertex-weight draws on both lattices.
inline SuiteResult suite_torus(int M, int trials, std::uint64_t seed)
{
    SuiteResult r{"torus", true, 0.0, {}};
    std::mt19937_64 rng(seed);
    for (const char* lat : {"kagome", "super_kagome"}) {
        const auto g = builtin(lat);
        const auto param = constant_weight_parametrization(g, 1.0);
        for (int k = 0; k < trials; ++k) {
            const auto w = param.sample(rng);
            const double d = max_sorted_deviation(torus_spectrum(build_torus(g, *w, M)), floquet_grid_union(g, *w, M));
            r.worst = std::max(r.worst, d);
        }
    }
    r.passed = r.worst <= 1e-9;
    r.detail = "M=" + std::to_string(M) + ", max deviation " + fmt_num(r.worst);
    return r;
}

/// The nine tilings other than Kagome and Super-Kagome under random weights.
inline SuiteResult suite_no_flat(int trials, std::uint64_t seed)
{
    SuiteResult r{"no-flat", true, 0.0, {}};
    int hits = 0;
    for (const auto& name : builtin_names()) {
        if (name == "kagome" || name == "super_kagome") continue;
        const auto rep = no_flat_band_sampler(builtin(name), trials, seed);
        hits += rep.draws_with_flat_band;
        if (!rep.passed()) r.detail += " " + name;
    }
    r.passed = hits == 0;
    r.worst = hits;
    r.detail = "9 tilings x " + std::to_string(trials) + " draws, " + std::to_string(hits) + " with a flat band" + r.detail;
    return r;
}

}  // namespace archflat
