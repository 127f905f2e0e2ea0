#include <gtest/gtest.h>

#include <random>

#include <archflat/flatband.hpp>
#include <archflat/tilings.hpp>
#include <archflat/torus_oracle.hpp>

using namespace archflat;

TEST(Torus, Dimensions)
{
    EXPECT_EQ(build_torus(builtin("kagome"), monomeric_kagome_weights(0.2, 1.0), 4).dim(), 48);
    EXPECT_EQ(build_torus(builtin("super_kagome"), monomeric_superkagome_weights(0.2, 1.0), 3).dim(), 54);
    EXPECT_THROW(build_torus(builtin("kagome"), monomeric_kagome_weights(0.2, 1.0), 2), ConfigError);
}

TEST(Torus, AdjacencyRowSumsEqualMu)
{
    const auto g = builtin("super_kagome");
    const auto p = constant_weight_parametrization(g, 2.5);
    std::mt19937_64 rng(1);
    const auto op = build_torus(g, *p.sample(rng), 4);
    const Eigen::MatrixXd pi = (Eigen::MatrixXd::Identity(op.dim(), op.dim()) - op.matrix) * op.mu;
    for (Eigen::Index r = 0; r < op.dim(); ++r) EXPECT_NEAR(pi.row(r).sum(), 2.5, 1e-12);
    EXPECT_LE((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Torus, MatchesFloquetGridUnion)
{
    std::mt19937_64 rng(31);
    for (const char* lat : {"kagome", "super_kagome", "3464"}) {
        const auto g = builtin(lat);
        const auto p = constant_weight_parametrization(g, 1.0);
        for (int M = 3; M <= 6; ++M) {
            const auto w = *p.sample(rng);
            const auto torus = torus_spectrum(build_torus(g, w, M));
            const auto floq = floquet_grid_union(g, w, M);
            EXPECT_LE(max_sorted_deviation(torus, floq), 1e-9) << lat << " M=" << M;
            EXPECT_GE(torus.front(), -1e-9);
            EXPECT_LE(torus.back(), 2 + 1e-9);
        }
    }
}

TEST(Torus, KagomeUniformFlatMultiplicity)
{
    // flat level once per grid point, plus the touching of the middle band at theta = 0
    const auto k = builtin("kagome");
    const auto w = monomeric_kagome_weights(0.25, 1.0);
    EXPECT_EQ(flat_multiplicity(build_torus(k, w, 4), 1.5, 1e-9), 17);
    EXPECT_EQ(flat_multiplicity(build_torus(k, w, 6), 1.5, 1e-9), 37);
}

TEST(Torus, SuperKagomeFlatMultiplicity)
{
    const auto s = builtin("super_kagome");
    const double a = 0.2;
    const auto w = monomeric_superkagome_weights(a, 1.0);
    for (int M = 3; M <= 6; ++M) {
        const auto sp = torus_spectrum(build_torus(s, w, M));
        for (double e : {3 * a, 2 - a}) {
            const int m = flat_multiplicity(sp, e, 1e-9);
            EXPECT_GE(m, M * M) << M;
            EXPECT_LE(m, M * M + 2) << M;
        }
    }
    const auto sp5 = torus_spectrum(build_torus(s, w, 5));
    EXPECT_GE(flat_multiplicity(sp5, 3 * a, 1e-9), 25);
    EXPECT_GE(flat_multiplicity(sp5, 2 - a, 1e-9), 25);
}

TEST(Torus, NonMonomericKagomeMultiplicityStaysBounded)
{
    const auto k = builtin("kagome");
    const auto w = WeightAssignment::from_vector(k, std::vector<double>{0.3, 0.2, 0.25, 0.2, 0.3, 0.25});
    for (int M = 3; M <= 8; ++M) {
        const auto sp = torus_spectrum(build_torus(k, w, M));
        int worst = 0;
        for (double e : sp) worst = std::max(worst, flat_multiplicity(sp, e, 1e-9));
        // 1.5 stays an eigenvalue along a line of theta, so multiplicity grows like M, not M^2
        EXPECT_LE(worst, 2 * M) << M;
        if (M >= 4) {
            EXPECT_LT(worst, M * M) << M;
        }
    }
}

TEST(Torus, CsvLayout)
{
    const auto csv = torus_spectrum_csv({0.0, 1.5});
    EXPECT_EQ(csv, "index,eigenvalue\n0,0\n1,1.5\n");
}
