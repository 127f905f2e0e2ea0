#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <Eigen/Dense>

#include <archflat/flatband.hpp>
#include <archflat/floquet.hpp>
#include <archflat/tilings.hpp>

using namespace archflat;
using std::numbers::pi;

namespace {

WeightAssignment ones(const PeriodicGraph& g)
{
    return WeightAssignment::from_vector(g, std::vector<double>(g.weight_classes().size(), 1.0));
}

std::vector<double> eigen_reference(const HermitianMatrix& h)
{
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale)
{
    std::uniform_real_distribution<double> d(-scale, scale);
    HermitianMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = d(rng);
        for (std::size_t j = i + 1; j < n; ++j) h.add_pair(i, j, {d(rng), d(rng)});
    }
    return h;
}

}  // namespace

TEST(FloquetPoint, ReducesModuloTwoPi)
{
    const FloquetPoint p(-pi / 2, 5 * pi);
    EXPECT_NEAR(p.theta1, 1.5 * pi, 1e-15);
    EXPECT_NEAR(p.theta2, pi, 1e-14);
    EXPECT_EQ(FloquetPoint(kTwoPi, 0).theta1, 0.0);
}

TEST(Adjacency, KagomeUnitWeightsAtOrigin)
{
    const auto k = builtin("kagome");
    const auto h = adjacency_matrix(k, ones(k), {0, 0});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(h(i, i), cplx(0.0));
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_NEAR(std::abs(h(i, j) - 2.0), 0.0, 1e-15);
            }
    }
}

TEST(Adjacency, KagomePhaseCancellation)
{
    // entry (v1, v2) is g3 + w g6
    const auto k = builtin("kagome");
    const auto h = adjacency_matrix(k, ones(k), {pi, 0});
    EXPECT_NEAR(std::abs(h(0, 1)), 0.0, 1e-15);
}

TEST(Adjacency, SuperKagomeRowSums)
{
    const auto s = builtin("super_kagome");
    const auto h = adjacency_matrix(s, ones(s), {0, 0});
    for (std::size_t i = 0; i < 6; ++i) {
        cplx sum = 0;
        for (std::size_t j = 0; j < 6; ++j) sum += h(i, j);
        EXPECT_NEAR(std::abs(sum - 3.0), 0.0, 1e-15);
    }
}

TEST(Adjacency, HermitianByConstruction)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.1, 2.0), t(0, kTwoPi);
    for (const auto& name : builtin_names()) {
        const auto g = builtin(name);
        std::vector<double> v;
        for (std::size_t i = 0; i < g.weight_classes().size(); ++i) v.push_back(d(rng));
        const auto h = adjacency_matrix(g, WeightAssignment::from_vector(g, v), {t(rng), t(rng)});
        EXPECT_LE(h.hermiticity_defect(), 1e-14) << name;
    }
}

TEST(Eigenvalues, SmallOracles)
{
    const auto id = eigenvalues(HermitianMatrix::identity(3));
    for (double e : id) EXPECT_DOUBLE_EQ(e, 1.0);

    HermitianMatrix pauli(2);
    pauli.add_pair(0, 1, cplx(0, 1));
    const auto pe = eigenvalues(pauli);
    EXPECT_NEAR(pe[0], -1.0, 1e-15);
    EXPECT_NEAR(pe[1], 1.0, 1e-15);

    const auto k = builtin("kagome");
    const auto ke = eigenvalues(adjacency_matrix(k, ones(k), {0, 0}));
    EXPECT_NEAR(ke[0], -2.0, 1e-14);
    EXPECT_NEAR(ke[1], -2.0, 1e-14);
    EXPECT_NEAR(ke[2], 4.0, 1e-14);
}

TEST(Eigenvalues, AgreesWithEigenSolver)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const auto h = random_hermitian(rng, n, 10.0);
        const auto a = eigenvalues(h);
        const auto b = eigen_reference(h);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-11) << "n=" << n;
    }
}

TEST(Eigenvalues, DegenerateSpectrum)
{
    // U diag(1,1,1,5) U^* for a random unitary from a Householder reflection
    std::mt19937_64 rng(2);
    std::normal_distribution<double> d;
    Eigen::VectorXcd v(4);
    for (int i = 0; i < 4; ++i) v(i) = {d(rng), d(rng)};
    v.normalize();
    const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4) - 2.0 * v * v.adjoint();
    const Eigen::MatrixXcd m = u * Eigen::Vector4cd(1, 1, 1, 5).asDiagonal() * u.adjoint();
    HermitianMatrix h(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = m(i, j);
    const auto e = eigenvalues(h);
    EXPECT_NEAR(e[0], 1, 1e-13);
    EXPECT_NEAR(e[2], 1, 1e-13);
    EXPECT_NEAR(e[3], 5, 1e-13);
}

TEST(Laplacian, KagomeUniformAtOrigin)
{
    const auto k = builtin("kagome");
    const auto e = laplacian_eigenvalues(k, ones(k), {0, 0});
    EXPECT_NEAR(e[0], 0.0, 1e-14);
    EXPECT_NEAR(e[1], 1.5, 1e-14);
    EXPECT_NEAR(e[2], 1.5, 1e-14);
}

TEST(Laplacian, SuperKagomeMonomericFlatValues)
{
    const auto s = builtin("super_kagome");
    const double a = 0.3, mu = 1.0;
    const auto w = monomeric_superkagome_weights(a, mu);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> t(0, kTwoPi);
    for (int k = 0; k < 20; ++k) {
        const auto e = laplacian_eigenvalues(s, w, {t(rng), t(rng)});
        auto near = [&](double x) {
            return std::any_of(e.begin(), e.end(), [&](double y) { return std::abs(x - y) < 1e-12; });
        };
        EXPECT_TRUE(near(3 * a / mu));
        EXPECT_TRUE(near(2 - a / mu));
    }
}

TEST(Laplacian, NonConstantVertexWeight)
{
    const auto k = builtin("kagome");
    const auto w = WeightAssignment::from_vector(k, std::vector<double>{2, 1, 1, 1, 1, 1});
    EXPECT_THROW(laplacian(k, w, {0, 0}), PreconditionError);
}

TEST(Laplacian, AffineMapBoundsAndPeriodicity)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> t(0, kTwoPi);
    for (const char* name : {"kagome", "super_kagome", "4612", "3336"}) {
        const auto g = builtin(name);
        const auto p = constant_weight_parametrization(g, 1.7);
        for (int k = 0; k < 25; ++k) {
            const auto w = *p.sample(rng);
            const double t1 = t(rng), t2 = t(rng);
            const auto lap = laplacian_eigenvalues(g, w, {t1, t2});
            const auto adj = eigenvalues(adjacency_matrix(g, w, {t1, t2}));
            const std::size_t n = lap.size();
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(lap[i], 1.0 - adj[n - 1 - i] / 1.7, 1e-11);
                EXPECT_GE(lap[i], -1e-9);
                EXPECT_LE(lap[i], 2 + 1e-9);
            }
            const auto shifted = laplacian_eigenvalues(g, w, {t1 + 2 * kTwoPi, t2 - 3 * kTwoPi});
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(lap[i], shifted[i], 1e-12);
        }
    }
}

TEST(BandStructure, KagomeUniform)
{
    const auto k = builtin("kagome");
    const auto bs = band_structure(k, ones(k), 48);
    ASSERT_EQ(bs.grid.size(), 48u * 48u);
    EXPECT_NEAR(bs.band_ranges[2].lo, 1.5, 1e-11);
    EXPECT_LE(bs.band_ranges[2].width(), 1e-11);
    EXPECT_NEAR(bs.band_ranges[0].lo, 0.0, 1e-9);
    const auto sp = bs.spectrum();
    ASSERT_EQ(sp.size(), 1u);
    EXPECT_NEAR(sp[0].hi, 1.5, 1e-11);
}

TEST(BandStructure, SuperKagomeHasTwoConstantLevels)
{
    const auto bs = band_structure(builtin("super_kagome"), monomeric_superkagome_weights(0.3, 1.0), 48);
    int flat = 0;
    for (const auto& r : bs.band_ranges) flat += r.width() <= 1e-11 ? 1 : 0;
    EXPECT_EQ(flat, 2);
}

TEST(BandStructure, RejectsSmallGrid)
{
    const auto k = builtin("kagome");
    EXPECT_THROW(band_structure(k, ones(k), 2), ConfigError);
}

TEST(BandStructure, CsvLayout)
{
    const auto k = builtin("kagome");
    const auto csv = band_structure_csv(band_structure(k, ones(k), 3));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta1,theta2,level_index,eigenvalue");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 9 * 3);
    EXPECT_NE(csv.find("\n0,0,0,"), std::string::npos);
}

TEST(Dispersion, TrigonometricSums)
{
    EXPECT_DOUBLE_EQ(f_kagome(0, 0), 3.0);
    EXPECT_NEAR(f_superkagome(2 * pi / 3, 2 * pi / 3), -1.5, 1e-15);
    double mk = 10, ms = 10;
    for (int i = 0; i < 96; ++i)
        for (int j = 0; j < 96; ++j) {
            mk = std::min(mk, f_kagome(kTwoPi * i / 96, kTwoPi * j / 96));
            ms = std::min(ms, f_superkagome(kTwoPi * i / 96, kTwoPi * j / 96));
        }
    EXPECT_NEAR(mk, -1.5, 1e-14);
    EXPECT_NEAR(ms, -1.5, 1e-14);
}
