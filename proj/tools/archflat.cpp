#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <archflat/archflat.hpp>

using namespace archflat;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kCrossCheck = 3, kExpectation = 4, kVerify = 5, kCompact = 6 };

struct RunConfig {
    std::string lattice;
    std::string graph_file;
    std::string weights_file;
    std::optional<double> alpha;
    double mu = 1.0;
    bool uniform = false;
    std::string family;
    int rotation = 0;
    std::optional<double> t;
    int grid = 48;
    double tol = kFlatBandTol;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string output;
    std::string svg;
    std::optional<int> expect;
    std::string suite = "all";
    std::optional<int> trials;
    std::optional<int> M;
    int points = 0;
    double energy = 0.0;
    int radius = 3;
    bool expect_found = false;
    bool no_crosscheck = false;
};

double round12(double x) { return std::stod(fmt_num(x)); }

struct Problem {
    PeriodicGraph graph;
    WeightAssignment weights;
    std::optional<double> alpha;  // monomeric built-in
};

PeriodicGraph resolve_graph(const RunConfig& c)
{
    if (c.lattice.empty() == c.graph_file.empty()) throw ConfigError("give exactly one of --lattice or --graph-file");
    return c.lattice.empty() ? load_graph(c.graph_file) : builtin(c.lattice);
}

Problem resolve(const RunConfig& c)
{
    Problem p{resolve_graph(c), {}, std::nullopt};
    const int sources = (c.alpha ? 1 : 0) + (c.weights_file.empty() ? 0 : 1) + (c.family.empty() ? 0 : 1) + (c.uniform ? 1 : 0);
    if (sources != 1) throw ConfigError("give exactly one weight source: --alpha, --weights-file, --family or --uniform");
    if (!(c.mu > 0.0)) throw ConfigError("--mu must be positive");
    if (c.alpha) {
        if (c.lattice == "kagome")
            p.weights = monomeric_kagome_weights(MonomericKagome(*c.alpha, c.mu).alpha, c.mu);
        else if (c.lattice == "super_kagome")
            p.weights = monomeric_superkagome_weights(MonomericSuperKagome(*c.alpha, c.mu).alpha, c.mu);
        else
            throw ConfigError("--alpha needs --lattice kagome or super_kagome");
        p.alpha = *c.alpha;
    } else if (!c.weights_file.empty()) {
        p.weights = load_weights(c.weights_file);
    } else if (!c.family.empty()) {
        if (c.lattice != "super_kagome") throw ConfigError("--family needs --lattice super_kagome");
        if (!c.t) throw ConfigError("--family needs --t");
        p.weights = one_flat_band_family({family_case_from_string(c.family), c.rotation, c.mu}, *c.t).weights();
    } else {
        std::vector<double> ones(p.graph.weight_classes().size(), 1.0);
        p.weights = WeightAssignment::from_vector(p.graph, ones);
    }
    for (const auto& cls : p.graph.weight_classes()) p.weights.at(cls);
    return p;
}

void emit(const RunConfig& c, const std::string& text)
{
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.output, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + c.output + "'");
        out << text;
    }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_spectrum(const RunConfig& c)
{
    const auto p = resolve(c);
    const auto bs = band_structure(p.graph, p.weights, c.grid);
    std::vector<Interval> bands;
    std::vector<FlatAttachment> flats;
    std::optional<double> deviation;

    if (p.alpha && (c.lattice == "kagome" || c.lattice == "super_kagome")) {
        const bool kag = c.lattice == "kagome";
        const auto rep = kag ? kagome_spectrum(MonomericKagome(*p.alpha, c.mu))
                             : superkagome_spectrum(MonomericSuperKagome(*p.alpha, c.mu));
        bands = rep.bands;
        flats = rep.flat_bands;
        if (!c.no_crosscheck) {
            double d = 0.0;
            for (std::size_t k = 0; k < bs.grid.size(); ++k) {
                std::vector<double> cf;
                if (kag) {
                    const auto v = kagome_dispersion(MonomericKagome(*p.alpha, c.mu), bs.grid[k]).values;
                    cf.assign(v.begin(), v.end());
                } else {
                    const auto v = superkagome_dispersion(MonomericSuperKagome(*p.alpha, c.mu), bs.grid[k]).values;
                    cf.assign(v.begin(), v.end());
                }
                for (std::size_t l = 0; l < cf.size(); ++l) d = std::max(d, std::abs(cf[l] - bs.levels[k][l]));
            }
            const auto num = bs.spectrum(1e-7);
            if (num.size() == 1 && bands.size() == 2 && std::abs(bands[0].hi - bands[1].lo) <= 1e-7) {
                d = std::max({d, std::abs(num[0].lo - bands[0].lo), std::abs(num[0].hi - bands[1].hi)});
            } else if (num.size() == bands.size()) {
                for (std::size_t i = 0; i < num.size(); ++i)
                    d = std::max({d, std::abs(num[i].lo - bands[i].lo), std::abs(num[i].hi - bands[i].hi)});
            } else {
                d = INFINITY;
            }
            deviation = d;
        }
    } else {
        bands = bs.spectrum(c.tol);
        for (const auto& f : detect_flat_bands(p.graph, p.weights, 8, c.tol, c.seed).energies) {
            std::string where = "inside";
            for (std::size_t i = 0; i < bands.size(); ++i) {
                if (std::abs(f.energy - bands[i].hi) <= c.tol) where = "max(I" + std::to_string(i + 1) + ")";
                else if (std::abs(f.energy - bands[i].lo) <= c.tol) where = "min(I" + std::to_string(i + 1) + ")";
            }
            flats.push_back({f.energy, where});
        }
    }
    double gap = 0.0;
    for (std::size_t i = 1; i < bands.size(); ++i) gap += std::max(0.0, bands[i].lo - bands[i - 1].hi);

    if (c.format == "json") {
        ordered_json j;
        j["graph"] = p.graph.name();
        j["bands"] = ordered_json::array();
        for (const auto& b : bands) j["bands"].push_back({round12(b.lo), round12(b.hi)});
        j["flat_bands"] = ordered_json::array();
        for (const auto& f : flats) j["flat_bands"].push_back({{"energy", round12(f.energy)}, {"attached_to", f.attached_to}});
        j["gap_width"] = round12(gap);
        if (deviation) j["max_deviation"] = round12(*deviation);
        emit(c, dump(j));
    } else {
        std::ostringstream os;
        os << "quantity,lo,hi,detail\n";
        for (std::size_t i = 0; i < bands.size(); ++i)
            os << "band," << fmt_num(bands[i].lo) << ',' << fmt_num(bands[i].hi) << ",I" << i + 1 << '\n';
        for (const auto& f : flats) os << "flat," << fmt_num(f.energy) << ',' << fmt_num(f.energy) << ',' << f.attached_to << '\n';
        os << "gap," << fmt_num(gap) << ',' << fmt_num(gap) << ",\n";
        if (deviation) os << "max_deviation," << fmt_num(*deviation) << ',' << fmt_num(*deviation) << ",grid " << c.grid << '\n';
        emit(c, os.str());
    }
    if (deviation && !(*deviation <= c.tol)) {
        std::cerr << "closed form and " << c.grid << "x" << c.grid << " sweep disagree by " << fmt_num(*deviation) << "\n";
        return kCrossCheck;
    }
    return kOk;
}

int cmd_flat_bands(const RunConfig& c)
{
    const auto p = resolve(c);
    const auto rep = detect_flat_bands(p.graph, p.weights, std::max(8, c.points), c.tol, c.seed);
    if (c.format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& f : rep.energies)
            j.push_back({{"energy", round12(f.energy)}, {"multiplicity", f.multiplicity}, {"max_deviation", round12(f.max_deviation)}});
        emit(c, dump(j));
    } else {
        emit(c, flat_band_csv(rep));
    }
    if (c.expect && static_cast<int>(rep.count()) != *c.expect) {
        std::cerr << "expected " << *c.expect << " flat bands, found " << rep.count() << "\n";
        return kExpectation;
    }
    return kOk;
}

int cmd_phase_diagram(const RunConfig& c)
{
    if (c.lattice != "kagome" && c.lattice != "super_kagome")
        throw ConfigError("phase-diagram needs --lattice kagome or super_kagome");
    if (!(c.mu > 0.0)) throw ConfigError("--mu must be positive");
    const auto rows = phase_diagram(c.lattice, c.mu, alpha_grid(c.mu, c.points > 0 ? c.points : 199));
    if (c.format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json o{{"alpha", round12(r.alpha)},
                           {"i1", {round12(r.i1.lo), round12(r.i1.hi)}},
                           {"i2", {round12(r.i2.lo), round12(r.i2.hi)}},
                           {"flat1", round12(r.flat1)}};
            o["flat2"] = r.flat2 ? ordered_json(round12(*r.flat2)) : ordered_json(nullptr);
            o["gap"] = round12(r.gap);
            j.push_back(o);
        }
        emit(c, dump(j));
    } else {
        emit(c, phase_diagram_csv(rows));
    }
    if (!c.svg.empty()) {
        std::ofstream out(c.svg, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + c.svg + "'");
        out << phase_diagram_svg(rows, c.mu, c.lattice == "kagome" ? "Kagome" : "Super-Kagome");
    }
    return kOk;
}

int cmd_verify(const RunConfig& c)
{
    static const std::vector<std::string> names{"classification", "families", "torus", "no-flat"};
    if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end())
        throw ConfigError("unknown suite '" + c.suite + "'");
    std::vector<SuiteResult> results;
    auto want = [&](const std::string& s) { return c.suite == "all" || c.suite == s; };
    if (want("classification")) results.push_back(suite_classification(c.trials.value_or(200), c.seed));
    if (want("families")) results.push_back(suite_families(c.trials.value_or(25), c.mu));
    if (want("torus")) {
        if (c.M) {
            results.push_back(suite_torus(*c.M, c.trials.value_or(3), c.seed));
        } else {
            for (int m = 3; m <= 6; ++m) results.push_back(suite_torus(m, c.trials.value_or(3), c.seed));
        }
    }
    if (want("no-flat")) results.push_back(suite_no_flat(c.trials.value_or(100), c.seed));

    bool ok = true;
    if (c.format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& r : results)
            j.push_back({{"suite", r.name}, {"passed", r.passed}, {"worst", round12(r.worst)}, {"detail", r.detail}});
        emit(c, dump(j));
    } else {
        std::ostringstream os;
        os << "suite,status,worst,detail\n";
        for (const auto& r : results)
            os << r.name << ',' << (r.passed ? "pass" : "FAIL") << ',' << fmt_num(r.worst) << ',' << r.detail << '\n';
        emit(c, os.str());
    }
    for (const auto& r : results) ok = ok && r.passed;
    return ok ? kOk : kVerify;
}

int cmd_compact_state(const RunConfig& c)
{
    const auto p = resolve(c);
    const auto st = find_compact_eigenstate(p.graph, p.weights, c.energy, c.radius);
    if (!st) {
        std::cerr << "none found\n";
        if (c.format == "json") emit(c, dump(ordered_json{{"found", false}}));
        return c.expect_found ? kCompact : kOk;
    }
    std::cerr << "support " << st->support_size() << ", residual " << fmt_num(st->residual) << "\n";
    if (c.format == "json") {
        ordered_json j{{"found", true}, {"support", st->support_size()}, {"residual", round12(st->residual)}};
        j["entries"] = ordered_json::array();
        for (const auto& e : st->entries)
            j["entries"].push_back({{"cell", {e.cell.b1, e.cell.b2}}, {"vertex", e.vertex}, {"amplitude", round12(e.amplitude)}});
        emit(c, dump(j));
    } else {
        emit(c, compact_state_csv(*st));
    }
    return kOk;
}

int cmd_bands(const RunConfig& c)
{
    const auto p = resolve(c);
    emit(c, band_structure_csv(band_structure(p.graph, p.weights, c.grid)));
    return kOk;
}

int cmd_torus(const RunConfig& c)
{
    const auto p = resolve(c);
    emit(c, torus_spectrum_csv(torus_spectrum(build_torus(p.graph, p.weights, c.M.value_or(4)))));
    return kOk;
}

void add_graph_options(CLI::App* s, RunConfig& c)
{
    s->add_option("--lattice", c.lattice, "built-in tiling")->check(CLI::IsMember(builtin_names()));
    s->add_option("--graph-file", c.graph_file, "periodic graph in JSON");
}

void add_weight_options(CLI::App* s, RunConfig& c)
{
    add_graph_options(s, c);
    s->add_option("--weights-file", c.weights_file, "class -> weight map in JSON");
    s->add_option("--alpha", c.alpha, "monomeric parameter");
    s->add_option("--mu", c.mu, "vertex weight")->capture_default_str();
    s->add_flag("--uniform", c.uniform, "all weights equal");
    s->add_option("--family", c.family, "one-flat-band family")->check(CLI::IsMember({"mpp", "pmm_a", "pmm_b"}));
    s->add_option("--rotation", c.rotation, "family rotation")->check(CLI::Range(0, 2))->capture_default_str();
    s->add_option("--t", c.t, "family parameter");
}

void add_output_options(CLI::App* s, RunConfig& c)
{
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    s->add_option("--output,-o", c.output, "write to file instead of stdout");
    s->add_option("--seed", c.seed, "random seed")->capture_default_str();
    s->add_option("--tol", c.tol, "tolerance")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet spectra and flat bands of weighted Archimedean tilings"};
    app.require_subcommand(1);
    RunConfig c;

    auto* spectrum = app.add_subcommand("spectrum", "band intervals, flat bands and gap width");
    add_weight_options(spectrum, c);
    add_output_options(spectrum, c);
    spectrum->add_option("--grid", c.grid, "K for the K x K sweep")->check(CLI::Range(3, 4096))->capture_default_str();
    spectrum->add_flag("--no-crosscheck", c.no_crosscheck, "skip the numeric sweep comparison");

    auto* flat = app.add_subcommand("flat-bands", "detect theta-independent levels");
    add_weight_options(flat, c);
    add_output_options(flat, c);
    flat->add_option("--points", c.points, "random Floquet samples (>= 8)");
    flat->add_option("--expect", c.expect, "required number of flat bands");

    auto* phase = app.add_subcommand("phase-diagram", "band edges as a function of alpha");
    add_graph_options(phase, c);
    add_output_options(phase, c);
    phase->add_option("--mu", c.mu, "vertex weight")->capture_default_str();
    phase->add_option("--points", c.points, "interior alpha values (default 199)");
    phase->add_option("--svg", c.svg, "also write an SVG figure");

    auto* verify = app.add_subcommand("verify", "run the property suites");
    add_output_options(verify, c);
    verify->add_option("--suite", c.suite, "all, classification, families, torus or no-flat")->capture_default_str();
    verify->add_option("--trials", c.trials, "draws per suite");
    verify->add_option("--M", c.M, "torus size")->check(CLI::Range(3, 12));
    verify->add_option("--mu", c.mu, "vertex weight for families")->capture_default_str();

    auto* compact = app.add_subcommand("compact-state", "finitely supported eigenvector");
    add_weight_options(compact, c);
    add_output_options(compact, c);
    compact->add_option("--energy,-E", c.energy, "Laplacian energy")->required();
    compact->add_option("--radius", c.radius, "search radius in cells")->capture_default_str();
    compact->add_flag("--expect-found", c.expect_found, "fail when no state exists");

    auto* bands = app.add_subcommand("bands", "export the K x K band structure");
    add_weight_options(bands, c);
    add_output_options(bands, c);
    bands->add_option("--grid", c.grid, "K")->check(CLI::Range(3, 4096))->capture_default_str();

    auto* torus = app.add_subcommand("torus", "export the finite-torus spectrum");
    add_weight_options(torus, c);
    add_output_options(torus, c);
    torus->add_option("--M", c.M, "cells per direction")->check(CLI::Range(3, 12));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(c);
        if (*flat) return cmd_flat_bands(c);
        if (*phase) return cmd_phase_diagram(c);
        if (*verify) return cmd_verify(c);
        if (*compact) return cmd_compact_state(c);
        if (*bands) return cmd_bands(c);
        if (*torus) return cmd_torus(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}
