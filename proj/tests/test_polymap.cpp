#include <gtest/gtest.h>

#include <map>
#include <random>

#include "f2ext/polymap.hpp"
#include "oracles.hpp"

using namespace f2ext;

namespace {

MultilinearPoly poly(std::size_t m, std::initializer_list<Monomial> monos) { return MultilinearPoly(m, monos); }

} // namespace

TEST(Eval, Examples) {
    // x1 x2 + x3 with 1-based names: variables 0, 1, 2.
    const auto p = poly(3, {0b011, 0b100});
    EXPECT_TRUE(eval(p, F2Vector::parse("110")));
    EXPECT_FALSE(eval(MultilinearPoly(3), F2Vector::parse("111")));
    const auto id = PolyMap::identity(4);
    EXPECT_EQ(eval_map(id, F2Vector::parse("1011")).to_string(), "1011");
    EXPECT_THROW(eval(p, F2Vector(2)), dimension_error);
}

TEST(Polynomial, DuplicateMonomialsCancel) {
    EXPECT_TRUE(poly(2, {0b01, 0b01}).is_zero());
    EXPECT_EQ(poly(2, {0b11, 0b01, 0b11}), poly(2, {0b01}));
    EXPECT_EQ(MultilinearPoly(3).degree(), 0);
    EXPECT_THROW(poly(2, {0b100}), dimension_error);
}

TEST(TruthTable, Examples) {
    const auto id = truth_table(PolyMap::identity(2));
    EXPECT_EQ(id.values, (std::vector<std::uint64_t>{0b00, 0b01, 0b10, 0b11}));
    const auto one = truth_table(PolyMap(3, {MultilinearPoly::constant(3, true)}));
    for (auto v : one.values) EXPECT_EQ(v, 1U);
    const auto andt = truth_table(PolyMap(2, {poly(2, {0b11})}));
    EXPECT_EQ(andt.values, (std::vector<std::uint64_t>{0, 0, 0, 1}));
    EXPECT_THROW(truth_table(PolyMap::identity(27)), size_error);
}

TEST(TruthTable, TransformAgreesWithTermwiseEvaluation) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 1 + rng() % 8, n = 1 + rng() % 4, d = rng() % (m + 1);
        const auto p = random_map(m, n, d, rng);
        const auto tt = truth_table(p);
        const auto direct = truth_table_direct(p);
        for (std::uint64_t x = 0; x < tt.values.size(); ++x) {
            ASSERT_EQ(tt.values[x], oracle::eval_map(p, x));
            ASSERT_EQ(direct.values[x], tt.values[x]);
        }
    }
}

TEST(Interpolate, ExamplesAndRoundTrip) {
    EXPECT_EQ(interpolate(TruthTable(2, 1, {0, 0, 0, 1})), PolyMap(2, {poly(2, {0b11})}));
    EXPECT_EQ(interpolate(TruthTable(3, 2, std::vector<std::uint64_t>(8, 0))), PolyMap(3, {MultilinearPoly(3), MultilinearPoly(3)}));
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + rng() % 10, n = 1 + rng() % 3;
        std::vector<std::uint64_t> v(std::size_t{1} << m);
        for (auto& x : v) x = rng() & low_mask(n);
        const TruthTable tt(m, n, v);
        EXPECT_EQ(truth_table(interpolate(tt)).values, v);
        const auto p = random_map(m, n, rng() % (m + 1), rng);
        EXPECT_EQ(interpolate(truth_table(p)), p);
    }
}

TEST(Derivative, Examples) {
    // D_{e1}(x1 x2) = x2, 0-based: D_{e0}(x0 x1) = x1.
    EXPECT_EQ(directional_derivative(poly(2, {0b11}), F2Vector::parse("10")), poly(2, {0b10}));
    EXPECT_TRUE(directional_derivative(poly(3, {0b111, 0b001}), F2Vector(3)).is_zero());
}

TEST(Derivative, PointwiseAndDegreeDrop) {
    // Exhaustive in m <= 4, d <= 3 over directions; random polynomials.
    std::mt19937_64 rng(3);
    for (std::size_t m = 1; m <= 4; ++m)
        for (std::size_t d = 0; d <= std::min<std::size_t>(3, m); ++d)
            for (int trial = 0; trial < 20; ++trial) {
                const auto p = random_poly(m, d, rng);
                for (std::uint64_t a = 0; a < (std::uint64_t{1} << m); ++a) {
                    const auto q = directional_derivative(p, F2Vector(m, a));
                    if (p.degree() >= 1) EXPECT_LE(q.degree(), p.degree() - 1);
                    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
                        ASSERT_EQ(q.eval_word(x), p.eval_word(x) != p.eval_word(x ^ a));
                }
            }
}

TEST(RestrictAffine, Examples) {
    const auto p = PolyMap(3, {poly(3, {0b001, 0b010, 0b100})});
    EXPECT_EQ(*restrict_affine(p, F2Matrix(0, 3), F2Vector(0)), p);
    const auto q = restrict_affine(p, F2Matrix::parse(3, {"111"}), F2Vector::parse("0"));
    ASSERT_TRUE(q);
    EXPECT_EQ(q->num_vars(), 2U);
    EXPECT_TRUE(q->output(0).is_zero());
    EXPECT_FALSE(restrict_affine(p, F2Matrix::parse(3, {"111", "111"}), F2Vector::parse("01")));
}

TEST(RestrictAffine, MatchesConditionalHistogram) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 3 + rng() % 6;
        const auto p = random_map(m, 3, 2, rng);
        const auto l = sample_full_rank(1 + rng() % (m - 1), m, rng);
        const F2Vector b(l.rows(), rng());
        const auto q = restrict_affine(p, l, b);
        ASSERT_TRUE(q);
        EXPECT_LE(q->degree(), p.degree());
        std::map<std::uint64_t, std::uint64_t> want;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
            if (l.apply_word(x) == b.word()) ++want[oracle::eval_map(p, x)];
        EXPECT_EQ(oracle::histogram(*q), want);
    }
}

TEST(RestrictAffine, StackedEqualsSequential) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 6;
        const auto p = random_map(m, 2, 2, rng);
        const auto l1 = sample_full_rank(2, m, rng);
        const F2Vector b1(2, rng());
        const auto q1 = restrict_affine(p, l1, b1);
        ASSERT_TRUE(q1);
        // A second constraint expressed on the original variables, then pulled
        // back onto q1's variables through the coset parametrization.
        const auto sol = *solve_affine(l1, b1);
        const F2Vector c(m, rng());
        const auto both = restrict_affine(p, l1.stacked(F2Matrix(m, {c})), F2Vector(3, b1.word() | (std::uint64_t{1} << 2)));
        F2Vector c_local(sol.kernel_basis.size());
        for (std::size_t i = 0; i < sol.kernel_basis.size(); ++i) c_local.set(i, c.dot(sol.kernel_basis[i]));
        const bool rhs = 1 ^ c.dot(sol.particular);
        const auto seq = restrict_affine(*q1, F2Matrix(c_local.size(), {c_local}), F2Vector(1, rhs));
        ASSERT_EQ(both.has_value(), seq.has_value());
        if (both) EXPECT_EQ(oracle::histogram(*both), oracle::histogram(*seq));
    }
}

TEST(RestrictToSubspace, Examples) {
    const auto p = poly(3, {0b011, 0b100});
    EXPECT_EQ(restrict_to_subspace(p, AffineSubspace::whole(3)), p);
    const AffineSubspace diag(2, F2Vector(2), {F2Vector::parse("11")});
    EXPECT_EQ(restrict_to_subspace(poly(2, {0b11}), diag), poly(1, {0b1}));
    std::mt19937_64 rng(6);
    const auto lin = random_poly(5, 1, rng);
    const AffineSubspace u(5, F2Vector(5, 9), {F2Vector(5, 3), F2Vector(5, 12)});
    EXPECT_LE(restrict_to_subspace(lin, u).degree(), 1);
}

TEST(RestrictToSubspace, PointwiseOnSubspaces) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 8;
        const auto p = random_poly(m, 3, rng);
        std::vector<F2Vector> gens;
        for (std::size_t i = 0; i < 1 + rng() % 6; ++i) gens.emplace_back(m, rng());
        const auto u = AffineSubspace::from_generators(m, F2Vector(m, rng()), gens);
        const auto q = restrict_to_subspace(p, u);
        EXPECT_LE(q.degree(), p.degree());
        for (std::uint64_t y = 0; y < u.size(); ++y) ASSERT_EQ(q.eval_word(y), p.eval_word(u.point_at(y).word()));
    }
}

TEST(RandomPoly, DegreeBoundAndFrequencies) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        const auto c = random_poly(4, 0, rng);
        EXPECT_EQ(c.degree(), 0);
        EXPECT_LE(c.monomials().size(), 1U);
    }
    for (int i = 0; i < 100; ++i) EXPECT_LE(random_poly(7, 3, rng).degree(), 3);
    // d = m = 2: 16 polynomials, chi-square against uniform over 10^4 draws.
    std::map<std::vector<Monomial>, int> freq;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) ++freq[random_poly(2, 2, rng).monomials()];
    EXPECT_EQ(freq.size(), 16U);
    double chi = 0;
    for (const auto& [k, c] : freq) chi += (c - draws / 16.0) * (c - draws / 16.0) / (draws / 16.0);
    EXPECT_LT(chi, 37.7); // 0.999 quantile, 15 degrees of freedom
    std::mt19937_64 a(42), b(42);
    EXPECT_EQ(random_map(6, 3, 2, a), random_map(6, 3, 2, b));
}

TEST(MonomialsUpTo, CountsAndOrder) {
    EXPECT_EQ(monomials_up_to(2, 1), (std::vector<Monomial>{0, 1, 2}));
    EXPECT_EQ(monomials_up_to(3, 2).size(), 7U);
    EXPECT_EQ(monomials_up_to(5, 0), (std::vector<Monomial>{0}));
}
