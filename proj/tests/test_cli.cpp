#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, bool merge_stderr = false)
{
    const std::string cmd = std::string(ARCHFLAT_BIN) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string tmp(const std::string& name) { return std::string(ARCHFLAT_TMP) + "/" + name; }

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, SpectrumKagomeUniform)
{
    const auto r = run("spectrum --lattice kagome --alpha 0.25");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r.out, "quantity,lo,hi,detail\n"));
    EXPECT_TRUE(has(r.out, "band,0,0.75,I1\n"));
    EXPECT_TRUE(has(r.out, "band,0.75,1.5,I2\n"));
    EXPECT_TRUE(has(r.out, "flat,1.5,1.5,max(I2)\n"));
    EXPECT_TRUE(has(r.out, "gap,0,0,\n"));
}

TEST(Cli, SpectrumSuperKagomeJson)
{
    const auto r = run("spectrum --lattice super_kagome --alpha 0.1 --format json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r.out, "\"attached_to\": \"max(I1)\""));
    EXPECT_TRUE(has(r.out, "\"gap_width\": 1.3"));
    EXPECT_TRUE(has(r.out, "\"max_deviation\""));
}

TEST(Cli, SpectrumCrossCheckFailureOnCoarseGrid)
{
    // band edges of the breathing Kagome sit at theta = (2pi/3, 4pi/3), off a 5 x 5 grid
    EXPECT_EQ(run("spectrum --lattice kagome --alpha 0.1 --grid 5").code, 3);
    EXPECT_EQ(run("spectrum --lattice kagome --alpha 0.1 --grid 5 --no-crosscheck").code, 0);
}

TEST(Cli, ConfigErrors)
{
    EXPECT_EQ(run("spectrum --lattice kagome").code, 2);
    EXPECT_EQ(run("spectrum --lattice kagome --alpha 0.7").code, 2);
    EXPECT_EQ(run("spectrum --lattice nope --alpha 0.1").code, 2);
    EXPECT_EQ(run("spectrum --lattice square --alpha 0.1").code, 2);
    EXPECT_EQ(run("flat-bands --lattice kagome --family mpp --t 0.7").code, 2);
    EXPECT_EQ(run("flat-bands --lattice super_kagome --family mpp --t 0.2").code, 2);
    EXPECT_EQ(run("phase-diagram --lattice square").code, 2);
    EXPECT_EQ(run("verify --suite bogus").code, 2);
    EXPECT_EQ(run("torus --lattice kagome --uniform --M 2").code, 2);
    EXPECT_EQ(run("flat-bands --graph-file /nonexistent.json --uniform").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, FlatBandsExpectations)
{
    const auto k = run("flat-bands --lattice kagome --alpha 0.2 --expect 1");
    EXPECT_EQ(k.code, 0);
    EXPECT_TRUE(has(k.out, "1.5")) << k.out;

    const auto f = run("flat-bands --lattice super_kagome --family mpp --t 0.75 --expect 1");
    EXPECT_EQ(f.code, 0);
    EXPECT_TRUE(has(f.out, "1.68127069")) << f.out;

    EXPECT_EQ(run("flat-bands --lattice super_kagome --alpha 0.2 --expect 2").code, 0);
    EXPECT_EQ(run("flat-bands --lattice super_kagome --alpha 0.2 --expect 1").code, 4);
    EXPECT_EQ(run("flat-bands --lattice square --uniform --expect 0").code, 0);
}

TEST(Cli, FlatBandsFromWeightsFile)
{
    const std::string w = tmp("kagome_weights.json"), bad = tmp("bad_weights.json");
    std::ofstream(w) << R"({"g1": 0.3, "g2": 0.2, "g3": 0.25, "g4": 0.2, "g5": 0.3, "g6": 0.25})";
    std::ofstream(bad) << R"({"g1": 0.3, "g2": "x"})";
    const auto r = run("flat-bands --lattice kagome --weights-file " + w + " --expect 0");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(run("flat-bands --lattice kagome --weights-file " + bad).code, 2);
}

TEST(Cli, PhaseDiagramCsvAndSvg)
{
    const std::string s1 = tmp("pd1.svg"), s2 = tmp("pd2.svg");
    const auto a = run("phase-diagram --lattice kagome --svg " + s1);
    const auto b = run("phase-diagram --lattice kagome --svg " + s2);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 200);
    EXPECT_TRUE(has(a.out, "\n0.25,0,0.75,0.75,1.5,1.5,,0\n"));
    const auto svg = slurp(s1);
    EXPECT_FALSE(svg.empty());
    EXPECT_EQ(svg, slurp(s2));
    EXPECT_TRUE(has(svg, "<svg"));

    const auto sk = run("phase-diagram --lattice super_kagome --points 6 --format json");
    ASSERT_EQ(sk.code, 0);
    EXPECT_TRUE(has(sk.out, "\"flat2\""));
}

TEST(Cli, VerifySuites)
{
    const auto t = run("verify --suite torus --M 5 --trials 2");
    EXPECT_EQ(t.code, 0) << t.out;
    EXPECT_TRUE(has(t.out, "torus,pass,")) << t.out;

    const auto f = run("verify --suite families --trials 5");
    EXPECT_EQ(f.code, 0) << f.out;
    EXPECT_TRUE(has(f.out, "30 points, 0 failures")) << f.out;

    // a single draw per tiling is enough to exercise the no-flat path
    EXPECT_EQ(run("verify --suite no-flat --trials 1").code, 0);
}

TEST(Cli, CompactStates)
{
    const auto k = run("compact-state --lattice kagome --uniform --energy 1.5 --expect-found", true);
    EXPECT_EQ(k.code, 0) << k.out;
    EXPECT_TRUE(has(k.out, "support 6")) << k.out;

    const auto none = run("compact-state --lattice kagome --uniform -E 0.7", true);
    EXPECT_EQ(none.code, 0);
    EXPECT_TRUE(has(none.out, "none found"));
    EXPECT_EQ(run("compact-state --lattice kagome --uniform -E 0.7 --expect-found").code, 6);

    const auto s = run("compact-state --lattice super_kagome --alpha 0.2 -E 1.8 --expect-found --format json");
    EXPECT_EQ(s.code, 0);
    EXPECT_TRUE(has(s.out, "\"found\": true"));
}

TEST(Cli, BandsAndTorusExports)
{
    const auto b = run("bands --lattice kagome --uniform --grid 3");
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(std::count(b.out.begin(), b.out.end(), '\n'), 28);

    const std::string path = tmp("torus.csv");
    ASSERT_EQ(run("torus --lattice kagome --uniform --M 3 -o " + path).code, 0);
    const auto csv = slurp(path);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 28);
    EXPECT_TRUE(has(csv, "index,eigenvalue\n"));
}

TEST(Cli, DeterministicOutput)
{
    for (const char* cmd : {"flat-bands --lattice 4612 --uniform --seed 9 --points 12",
                            "spectrum --lattice 3464 --uniform --grid 12 --seed 3 --format json",
                            "verify --suite classification --trials 5 --seed 4",
                            "torus --lattice super_kagome --alpha 0.3 --M 3"}) {
        const auto a = run(cmd), b = run(cmd);
        EXPECT_EQ(a.code, 0) << cmd;
        EXPECT_EQ(a.out, b.out) << cmd;
        EXPECT_FALSE(a.out.empty()) << cmd;
    }
}
