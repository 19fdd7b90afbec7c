#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "perispec/canonical.hpp"
#include "perispec/elimination.hpp"
#include "perispec/matrix.hpp"
#include "perispec/random.hpp"
#include "perispec/schur.hpp"

using namespace perispec;
using namespace std::complex_literals;

namespace {

CMatrix cyclic3() { return CMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}; }

bool contains(const std::vector<Complex>& values, Complex z, double tol) {
    for (const auto& v : values)
        if (std::abs(v - z) <= tol) return true;
    return false;
}

}  // namespace

TEST(Matmul, IdentityIsNeutral) {
    MatrixSampler rng(1);
    const CMatrix a = rng.gaussian_matrix(3);
    EXPECT_EQ(CMatrix::identity(3) * a, a);
}

TEST(Matmul, MatrixUnits) {
    EXPECT_EQ(CMatrix::unit(3, 0, 1) * CMatrix::unit(3, 1, 0), CMatrix::unit(3, 0, 0));
}

TEST(Matmul, ProbeBlockProduct) {
    const Complex alpha = 4.0;
    const CMatrix a{{1.0, alpha - 1.0}, {0.0, 0.0}};
    const CMatrix b{{1.0, 0.0}, {1.0, 0.0}};
    EXPECT_EQ(a * b, (CMatrix{{4.0, 0.0}, {0.0, 0.0}}));
}

TEST(Matmul, RejectsMismatch) {
    EXPECT_THROW(matmul(CMatrix(2, 3), CMatrix(2, 3)), Error);
}

TEST(Power, ZeroExponentIsIdentity) {
    MatrixSampler rng(2);
    EXPECT_EQ(power(rng.gaussian_matrix(4), 0), CMatrix::identity(4));
}

TEST(Power, IdempotentIsStable) {
    const CMatrix p = CMatrix::diagonal({1.0, 1.0, 0.0});
    for (unsigned s = 1; s < 6; ++s) EXPECT_EQ(power(p, s), p);
}

TEST(Power, CyclicPermutationCubesToIdentity) { EXPECT_EQ(power(cyclic3(), 3), CMatrix::identity(3)); }

TEST(Power, RejectsNonSquare) { EXPECT_THROW(power(CMatrix(2, 3), 2), Error); }

TEST(Eigenvalues, Diagonal) {
    const auto ev = eigenvalues(CMatrix::diagonal({1.0, 2.0, 3.0}));
    ASSERT_EQ(ev.size(), 3u);
    for (double v : {1.0, 2.0, 3.0}) EXPECT_TRUE(contains(ev, v, 1e-12));
}

TEST(Eigenvalues, NilpotentJordanBlock) {
    const auto ev = eigenvalues(CMatrix{{0.0, 1.0}, {0.0, 0.0}});
    for (const auto& z : ev) EXPECT_LT(std::abs(z), 1e-12);
}

TEST(Eigenvalues, CubeRootsOfTwo) {
    const CMatrix a = embed(CMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {2.0, 0.0, 0.0}}, 4);
    const auto ev = eigenvalues(a);
    const double r = std::cbrt(2.0);
    for (int k = 0; k < 3; ++k)
        EXPECT_TRUE(contains(ev, std::polar(r, 2.0 * std::numbers::pi * k / 3.0), 1e-12));
    EXPECT_TRUE(contains(ev, 0.0, 1e-12));
}

TEST(Eigenvalues, RejectsOversizeInput) { EXPECT_THROW(eigenvalues(CMatrix(65, 65)), Error); }

TEST(Eigenvalues, TraceAndDeterminantConsistency) {
    MatrixSampler rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        const CMatrix a = rng.gaussian_matrix(n);
        const auto ev = eigenvalues(a);
        Complex sum{}, prod = 1.0;
        for (const auto& z : ev) {
            sum += z;
            prod *= z;
        }
        const double scale = std::max(1.0, max_norm(a) * static_cast<double>(n));
        ASSERT_LE(std::abs(sum - trace(a)), 1e-9 * scale) << "n=" << n;
        ASSERT_LE(std::abs(prod - determinant(a)), 1e-9 * std::max(1.0, std::abs(determinant(a))) * scale);
    }
}

TEST(Schur, ReassemblesInput) {
    MatrixSampler rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix a = rng.gaussian_matrix(2 + rng.index(8));
        const auto sd = schur(a);
        EXPECT_LE(max_abs_diff(sd.q * sd.t * adjoint(sd.q), a), 1e-11);
        EXPECT_LE(max_abs_diff(adjoint(sd.q) * sd.q, CMatrix::identity(a.rows())), 1e-12);
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(CMatrix(4, 4)), 0u);
    MatrixSampler rng(5);
    EXPECT_EQ(rank(rng.rank_one(5).materialize()), 1u);
    CMatrix sq(4, 4);
    sq(0, 2) = 1.0;
    sq(1, 3) = 1.0;
    EXPECT_EQ(rank(sq), 2u);
}

TEST(Rank, SimilarityInvariance) {
    MatrixSampler rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng.index(4);
        const std::size_t k = 1 + rng.index(n);
        const CMatrix a = rng.rank_k(n, k);
        const CMatrix s = rng.invertible(n, 0.05);
        ASSERT_EQ(rank(a), k);
        ASSERT_EQ(rank(inverse(s) * a * s), rank(a));
    }
}

TEST(Pairing, Bilinear) {
    MatrixSampler rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(8);
        const CVector x{rng.vector(n)}, y{rng.vector(n)};
        const CCovector f{rng.vector(n)};
        const Complex alpha = rng.gaussian();
        CVector lhs{x.entries};
        for (std::size_t i = 0; i < n; ++i) lhs.entries[i] = alpha * x.entries[i] + y.entries[i];
        const Complex expect = alpha * pairing(x, f) + pairing(y, f);
        EXPECT_LE(std::abs(pairing(lhs, f) - expect), 1e-12 * std::max(1.0, std::abs(expect)));
    }
}

TEST(Pairing, MaterializedRankOneActsByPairing) {
    MatrixSampler rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(8);
        const RankOneOperator op = rng.rank_one(n);
        const CVector y{rng.vector(n)};
        const CVector lhs = op.materialize() * y;
        const Complex p = pairing(y, op.f);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_LE(std::abs(lhs.entries[i] - p * op.x.entries[i]), 1e-12 * std::max(1.0, std::abs(lhs.entries[i])));
        }
    }
}

TEST(Pairing, IdempotentIffUnitPairing) {
    MatrixSampler rng(9);
    const RankOneOperator p = rng.rank_one_idempotent(4);
    EXPECT_TRUE(p.is_idempotent());
    const CMatrix m = p.materialize();
    EXPECT_LE(max_abs_diff(m * m, m), 1e-12 * std::max(1.0, max_norm(m)));
    RankOneOperator q = p;
    for (auto& z : q.f.entries) z *= 2.0;
    EXPECT_FALSE(q.is_idempotent());
}

TEST(CanonicalForm, EigenAndShiftExample) {
    const CMatrix a = CMatrix::unit(3, 0, 0) + CMatrix::unit(3, 1, 2);
    const auto cf = rank2_canonical_form(a);
    EXPECT_EQ(cf.form, CanonicalForm::kEigenAndShift);
    EXPECT_LE(std::abs(cf.a - 1.0), 1e-12);
    EXPECT_LE(max_abs_diff(cf.s, CMatrix::identity(3)), 1e-12);
}

TEST(CanonicalForm, ChainAlreadyCanonical) {
    const CMatrix a = CMatrix::unit(3, 0, 1) + CMatrix::unit(3, 1, 2);
    const auto cf = rank2_canonical_form(a);
    EXPECT_EQ(cf.form, CanonicalForm::kChain);
    EXPECT_LE(max_abs_diff(cf.s, CMatrix::identity(3)), 1e-12);
}

TEST(CanonicalForm, RejectsWrongRank) {
    EXPECT_THROW(rank2_canonical_form(CMatrix::identity(3)), Error);
    EXPECT_THROW(rank2_canonical_form(CMatrix::unit(3, 0, 1)), Error);
}

TEST(CanonicalForm, RoundTripEveryForm) {
    MatrixSampler rng(10);
    const std::vector<std::pair<CanonicalForm, CMatrix>> seeds = {
        {CanonicalForm::kEigenPair, CMatrix{{1.0, 0.0, 0.5}, {0.0, 0.0, 0.0}, {0.0, 0.0, -2.0}}},
        {CanonicalForm::kEigenAndShift, CMatrix{{1.5, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}}},
        {CanonicalForm::kChain, CMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}}},
        {CanonicalForm::kSquareZero, [] {
             CMatrix m(4, 4);
             m(0, 2) = 1.0;
             m(1, 3) = 1.0;
             return m;
         }()},
    };
    for (const auto& [form, block] : seeds) {
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = block.rows() + rng.index(3);
            CMatrix hat = embed(block, n);
            if (form == CanonicalForm::kEigenPair) {
                hat(0, 0) = rng.gaussian();
                hat(0, 2) = rng.gaussian();
                hat(2, 2) = rng.gaussian();
            } else if (form == CanonicalForm::kEigenAndShift) {
                hat(0, 0) = rng.gaussian();
            }
            const CMatrix s0 = rng.invertible(n, 0.05);
            const CMatrix a = s0 * hat * inverse(s0);
            const auto cf = rank2_canonical_form(a);
            ASSERT_EQ(cf.form, form) << "trial " << trial;
            ASSERT_LE(max_abs_diff(cf.reassemble(), a), 1e-8 * std::max(1.0, max_norm(a)));
            ASSERT_LE(max_abs_diff(cf.s * cf.s_inv, CMatrix::identity(n)), 1e-8);
        }
    }
}

TEST(CanonicalForm, RecoversEigenvalues) {
    MatrixSampler rng(11);
    const CMatrix hat{{2.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0i}};
    const CMatrix s0 = rng.invertible(3, 0.05);
    const auto cf = rank2_canonical_form(s0 * hat * inverse(s0));
    EXPECT_LE(std::abs(cf.a - 2.0), 1e-9);
    EXPECT_LE(std::abs(cf.c - 1.0i), 1e-9);
}

TEST(Embedding, DirectSumAndExtract) {
    const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const CMatrix b{{5.0}};
    const CMatrix d = direct_sum(a, b);
    EXPECT_EQ(extract(d, 0, 0, 2, 2), a);
    EXPECT_EQ(extract(d, 2, 2, 1, 1), b);
    EXPECT_EQ(embed(a, 3), direct_sum(a, CMatrix(1, 1)));
}

TEST(Construction, RejectsNonFiniteEntries) {
    EXPECT_THROW(CMatrix(1, 1, {Complex(std::nan(""), 0.0)}), Error);
    EXPECT_THROW(CMatrix(1, 2, {Complex(1.0, 0.0)}), Error);
}
