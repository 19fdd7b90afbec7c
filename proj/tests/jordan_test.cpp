#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "perispec/jordan.hpp"
#include "perispec/random.hpp"
#include "perispec/spectrum.hpp"

using namespace perispec;

namespace {

double rel_diff(const CMatrix& x, const CMatrix& y) { return max_abs_diff(x, y) / std::max(1.0, max_norm(y)); }

}  // namespace

TEST(Signature, ValidExamples) {
    EXPECT_NO_THROW(validate_signature({1, 2}, 2));
    EXPECT_NO_THROW(validate_signature({1, 2, 3}, 3));
    EXPECT_NO_THROW(validate_signature({2, 1, 2}, 2));
}

TEST(Signature, RejectsNoUniqueIndex) { EXPECT_THROW(validate_signature({1, 2, 1, 2}, 2), Error); }

TEST(Signature, RejectsMissingIndex) { EXPECT_THROW(validate_signature({1, 1, 3}, 3), Error); }

TEST(Signature, RejectsOutOfRange) {
    EXPECT_THROW(validate_signature({1, 2, 4}, 3), Error);
    EXPECT_THROW(validate_signature({0, 1, 2}, 2), Error);
}

TEST(Signature, ParsesCommaList) {
    const auto sig = parse_signature("2,1,2");
    EXPECT_EQ(sig.k(), 2u);
    EXPECT_EQ(sig.m(), 3u);
    EXPECT_EQ(sig.str(), "2,1,2");
    EXPECT_THROW(parse_signature("1,,2"), Error);
    EXPECT_THROW(parse_signature("1,x"), Error);
}

TEST(GeneralizedProduct, Examples) {
    MatrixSampler rng(31);
    const CMatrix a = rng.gaussian_matrix(3), b = rng.gaussian_matrix(3);
    EXPECT_EQ(generalized_product(validate_signature({1, 2}, 2), {a, CMatrix::identity(3)}), a);
    EXPECT_LE(rel_diff(generalized_product(validate_signature({2, 1, 2}, 2), {a, b}), b * a * b), 1e-14);
    EXPECT_EQ(generalized_product(validate_signature({1, 2}, 2), {CMatrix::unit(3, 0, 1), CMatrix::unit(3, 1, 0)}),
              CMatrix::unit(3, 0, 0));
}

TEST(GeneralizedProduct, RejectsBadOperands) {
    const auto sig = validate_signature({1, 2}, 2);
    EXPECT_THROW(generalized_product(sig, {CMatrix::identity(3)}), Error);
    EXPECT_THROW(generalized_product(sig, {CMatrix::identity(3), CMatrix::identity(2)}), Error);
}

TEST(GeneralizedJordanProduct, Examples) {
    MatrixSampler rng(32);
    const CMatrix p = rng.idempotent(4);
    const auto sig12 = validate_signature({1, 2}, 2);
    const CMatrix jp = generalized_jordan_product(sig12, {p, p});
    EXPECT_LE(rel_diff(jp, 2.0 * p), 1e-12);
    EXPECT_TRUE(spectra_equal(peripheral_spectrum(jp), make_spectrum({2.0})));

    const CMatrix a = rng.gaussian_matrix(3), b = rng.gaussian_matrix(3), c = rng.gaussian_matrix(3);
    EXPECT_LE(rel_diff(generalized_jordan_product(validate_signature({1, 2, 3}, 3), {a, b, c}), a * b * c + c * b * a),
              1e-14);
    EXPECT_LE(rel_diff(generalized_jordan_product(validate_signature({2, 1, 2}, 2), {a, b}), 2.0 * (b * a * b)), 1e-14);
}

TEST(Sandwich, JordanProductCase) {
    MatrixSampler rng(33);
    const CMatrix a = rng.gaussian_matrix(3), b = rng.gaussian_matrix(3);
    EXPECT_LE(rel_diff(sandwich(SandwichExponents(0, 1), a, b), a * b + b * a), 1e-14);
}

TEST(Sandwich, RankOneIdempotent) {
    MatrixSampler rng(34);
    const CMatrix a = rng.gaussian_matrix(4);
    const RankOneOperator p = rng.rank_one_idempotent(4);
    const CMatrix pm = p.materialize();
    const CMatrix sw = sandwich(SandwichExponents(1, 1), a, pm);
    EXPECT_LE(rel_diff(sw, 2.0 * (pm * a * pm)), 1e-12);
    const Complex expected = 2.0 * pairing(a * p.x, p.f);
    EXPECT_TRUE(spectra_equal(peripheral_spectrum(sw), make_spectrum({expected}), 1e-9));
}

TEST(Sandwich, ProbeBlock) {
    const CMatrix a = embed(CMatrix{{1.0, -2.0}, {0.0, 0.0}}, 3);
    const CMatrix b = embed(CMatrix{{1.0, 0.0}, {1.0, 0.0}}, 3);
    for (unsigned s = 1; s <= 3; ++s) {
        const CMatrix sw = sandwich(SandwichExponents(0, s), a, b);
        EXPECT_LE(max_abs_diff(sw, embed(CMatrix{{0.0, -2.0}, {1.0, -2.0}}, 3)), 1e-14);
        EXPECT_TRUE(spectra_equal(peripheral_spectrum(sw), make_spectrum({Complex(-1, 1), Complex(-1, -1)}), 1e-9));
    }
}

TEST(Sandwich, SymmetricInExponents) {
    MatrixSampler rng(35);
    const CMatrix a = rng.gaussian_matrix(4), b = rng.gaussian_matrix(4);
    EXPECT_EQ(sandwich(SandwichExponents(1, 3), a, b), sandwich(SandwichExponents(3, 1), a, b));
    EXPECT_THROW(SandwichExponents(0, 0), Error);
}

TEST(ReduceSignature, Examples) {
    auto red = reduce_signature(validate_signature({1, 2}, 2));
    EXPECT_EQ(red.position, 1u);
    EXPECT_EQ(red.exponents, SandwichExponents(0, 1));
    EXPECT_EQ(red.exponents.m(), 2u);

    red = reduce_signature(validate_signature({1, 2, 3}, 3));
    EXPECT_EQ(red.position, 1u);
    EXPECT_EQ(red.exponents, SandwichExponents(0, 2));

    red = reduce_signature(validate_signature({2, 1, 2}, 2));
    EXPECT_EQ(red.position, 2u);
    EXPECT_EQ(red.exponents, SandwichExponents(1, 1));
    EXPECT_EQ(red.exponents.m(), 3u);
}

TEST(ReduceSignature, PrefersUnbalancedPosition) {
    // positions 2 and 3 are unique; position 3 is central, position 2 is not
    const auto red = reduce_signature(validate_signature({1, 2, 3, 1, 1}, 3));
    EXPECT_EQ(red.position, 2u);
    EXPECT_EQ(red.exponents, SandwichExponents(1, 3));
}

TEST(ReduceSignature, EquivalentToSandwich) {
    const std::vector<std::vector<long long>> corpus = {
        {1, 2}, {1, 2, 3}, {2, 1, 2}, {1, 2, 2}, {2, 2, 1, 2, 2, 2}, {1, 2, 3, 1, 1}, {3, 1, 2, 1, 3}, {2, 2, 1},
        {1, 2, 3, 4}, {2, 1, 2, 2}};
    MatrixSampler rng(36);
    for (const auto& raw : corpus) {
        long long k = 0;
        for (auto t : raw) k = std::max(k, t);
        const auto sig = validate_signature(raw, static_cast<std::size_t>(k));
        const auto red = reduce_signature(sig);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + rng.index(4);
            const CMatrix a = rng.gaussian_matrix(n), b = rng.gaussian_matrix(n);
            const CMatrix lhs = generalized_jordan_product(sig, reduction_operands(sig, red, a, b));
            ASSERT_LE(rel_diff(lhs, sandwich(red.exponents, a, b)), 1e-12) << sig.str();
        }
    }
}

TEST(Preservation, SimilarityPreservesJordanSpectra) {
    MatrixSampler rng(37);
    for (const auto& raw : std::vector<std::vector<long long>>{{1, 2}, {1, 2, 3}, {2, 1, 2}, {1, 2, 2}}) {
        long long k = 0;
        for (auto t : raw) k = std::max(k, t);
        const auto sig = validate_signature(raw, static_cast<std::size_t>(k));
        const double m = static_cast<double>(sig.m());
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + rng.index(3);
            const CMatrix t = rng.invertible(n, 0.05);
            const CMatrix t_inv = inverse(t);
            const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(rng.index(sig.m())) / m);
            std::vector<CMatrix> ops, images;
            for (std::size_t i = 0; i < sig.k(); ++i) {
                ops.push_back(rng.gaussian_matrix(n));
                images.push_back(lambda * (t * ops.back() * t_inv));
            }
            ASSERT_TRUE(spectra_equal(peripheral_spectrum(generalized_jordan_product(sig, images)),
                                      peripheral_spectrum(generalized_jordan_product(sig, ops))))
                << sig.str() << " trial " << trial;
        }
    }
}
