#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "perispec/canonical.hpp"
#include "perispec/elimination.hpp"
#include "perispec/jordan.hpp"
#include "perispec/matrix.hpp"
#include "perispec/random.hpp"
#include "perispec/schur.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

enum class InvariantClass { kRankOne, kRankTwoSquareZero, kOther };

inline std::string_view class_name(InvariantClass c) {
    switch (c) {
        case InvariantClass::kRankOne: return "RankOne";
        case InvariantClass::kRankTwoSquareZero: return "RankTwoSquareZero";
        case InvariantClass::kOther: return "Other";
    }
    return "?";
}

/// Which construction produced a witness. Wire names come from `case_label`.
enum class WitnessCase {
    kLeadingBlock,         // r > 0, rank >= 3: diagonal B on a triangularized 3x3 compression
    kRotationEigenPair,    // r > 0, rank 2, two nonzero eigenvalues
    kRotationEigenShift,   // r > 0, rank 2, one nonzero eigenvalue
    kCyclicChain,          // r > 0, A^3 = 0, s = 2r
    kTwistedChain,         // r > 0, A^3 = 0, s != 2r
    kRotationSquareZero,   // r > 0, A^2 = 0
    kJordanEigenPair,      // r = 0, rank 2, two nonzero eigenvalues
    kJordanEigenShift,     // r = 0, rank 2, one nonzero eigenvalue
    kJordanChain,          // r = 0, rank 2, A^3 = 0
    kCompanion1,           // r = 0, cyclic vector, (c1, c2, c3) = (*, 0, any)
    kCompanion2,           // (*, *, 0)
    kCompanion3,           // (*, *, *)
    kCompanion4,           // (0, *, *)
    kCompanion5,           // (0, 0, *)
    kCompanion6,           // (0, *, 0)
    kCompanion7,           // (0, 0, 0)
    kScalar,               // r = 0, A = aI
    kTwoEigenvalues,       // r = 0, quadratic minimal polynomial, no zero eigenvalue
    kEigenvalueAndZero,    // r = 0, spectrum {a, 0}
    kSquareZeroBlocks,     // r = 0, A^2 = 0, rank >= 3
    kSearch,               // randomized search
};

inline std::string_view case_label(WitnessCase c) {
    switch (c) {
        case WitnessCase::kLeadingBlock: return "L2.1-rank3";
        case WitnessCase::kRotationEigenPair: return "L2.1-(i)";
        case WitnessCase::kRotationEigenShift: return "L2.1-(ii)";
        case WitnessCase::kCyclicChain: return "L2.1-(iii)-s=2r";
        case WitnessCase::kTwistedChain: return "L2.1-(iii)-s/r!=2";
        case WitnessCase::kRotationSquareZero: return "L2.1-(iv)";
        case WitnessCase::kJordanEigenPair: return "L2.2-(i)";
        case WitnessCase::kJordanEigenShift: return "L2.2-(ii)";
        case WitnessCase::kJordanChain: return "L2.2-(iii)";
        case WitnessCase::kCompanion1: return "L2.2-Case1-Sub1";
        case WitnessCase::kCompanion2: return "L2.2-Case1-Sub2";
        case WitnessCase::kCompanion3: return "L2.2-Case1-Sub3";
        case WitnessCase::kCompanion4: return "L2.2-Case1-Sub4";
        case WitnessCase::kCompanion5: return "L2.2-Case1-Sub5";
        case WitnessCase::kCompanion6: return "L2.2-Case1-Sub6";
        case WitnessCase::kCompanion7: return "L2.2-Case1-Sub7";
        case WitnessCase::kScalar: return "L2.2-Case2-scalar";
        case WitnessCase::kTwoEigenvalues: return "L2.2-Case2-Sub1";
        case WitnessCase::kEigenvalueAndZero: return "L2.2-Case2-Sub2";
        case WitnessCase::kSquareZeroBlocks: return "C2.3-rank6";
        case WitnessCase::kSearch: return "search";
    }
    return "?";
}

struct WitnessReport {
    CMatrix b;
    std::size_t rank_b = 0;
    PeripheralSpectrum spectrum;
    WitnessCase label = WitnessCase::kSearch;
};

/// Rank class of a nonzero A; with r = 0 a rank-two square-zero A is singled out.
inline InvariantClass classify(const CMatrix& a, const SandwichExponents& exp, double tol = kRankTol) {
    require_square(a, "classify");
    const double nu = max_norm(a);
    if (nu == 0.0) throw Error(ErrorKind::kPrecondition, "classify: zero matrix");
    const std::size_t rk = rank(a, tol);
    if (rk == 1) return InvariantClass::kRankOne;
    if (exp.r() == 0 && rk == 2 && max_norm(a * a) <= tol * nu * nu) return InvariantClass::kRankTwoSquareZero;
    return InvariantClass::kOther;
}

namespace detail {

struct BuiltWitness {
    CMatrix b;
    WitnessCase label;
};

inline constexpr double kCoefficientTol = 1e-8;
inline constexpr std::uint64_t kWitnessSeed = 0x9e3779b97f4a7c15ULL;

inline CMatrix rotation(double theta) {
    return CMatrix{{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

inline Complex principal_root(Complex z, unsigned k) {
    if (k == 1 || z == Complex{}) return z;
    return std::pow(z, 1.0 / static_cast<double>(k));
}

inline Complex unit_root(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

/// S (block ⊕ 0) S^{-1}.
inline CMatrix lift(const CMatrix& s, const CMatrix& s_inv, const CMatrix& block) {
    return s * embed(block, s.rows()) * s_inv;
}

/// diag(1, e^{2πi/3s}, e^{4πi/3s}): its s-th power is diag(1, ω, ω²).
inline CMatrix cube_root_probe(unsigned s) {
    const double k = 3.0 * static_cast<double>(s);
    return CMatrix::diagonal({1.0, unit_root(1.0 / k), unit_root(2.0 / k)});
}

/**
 * Block R(θ) ⊕ d for an operator acting as [a,0,b; 0,0,0; 0,0,c] on the first three
 * coordinates. The 2x2 part contributes ±i a sin((r-s)θ), the corner 2 c d^{r+s};
 * d is chosen so the three points share a modulus with distinct phases.
 */
inline CMatrix eigen_pair_block(Complex a, Complex c, const SandwichExponents& exp) {
    const unsigned rs = exp.r() + exp.s();
    const double theta = std::numbers::pi / (2.0 * rs);
    const double sine = std::sin((static_cast<double>(exp.r()) - static_cast<double>(exp.s())) * theta);
    const Complex target = Complex(0.0, 1.0) * a * sine * unit_root(0.125);
    return direct_sum(rotation(theta), CMatrix{{principal_root(target / (2.0 * c), rs)}});
}

inline BuiltWitness rank_two_witness(const CMatrix& a, const SandwichExponents& exp, double tol) {
    const auto cf = rank2_canonical_form(a, tol);
    const unsigned r = exp.r(), s = exp.s(), rs = r + s;
    const CMatrix cyclic{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}};
    switch (cf.form) {
        case CanonicalForm::kEigenPair:
            return {lift(cf.s, cf.s_inv, eigen_pair_block(cf.a, cf.c, exp)),
                    r > 0 ? WitnessCase::kRotationEigenPair : WitnessCase::kJordanEigenPair};
        case CanonicalForm::kEigenAndShift: {
            if (r == 0) {
                const CMatrix c{{0.5, cf.a, 0.0}, {0.0, 0.0, 0.0}, {-0.5, 0.0, -2.0}};
                return {lift(cf.s, cf.s_inv, diagonalizable_root(c, s)), WitnessCase::kJordanEigenShift};
            }
            const double theta = std::numbers::pi / rs;
            const double sine = std::sin((static_cast<double>(r) - static_cast<double>(s)) * theta);
            const Complex target = Complex(0.0, sine) * unit_root(0.125);
            const CMatrix block = direct_sum(CMatrix{{principal_root(target / (2.0 * cf.a), rs)}}, rotation(theta));
            return {lift(cf.s, cf.s_inv, block), WitnessCase::kRotationEigenShift};
        }
        case CanonicalForm::kChain: {
            if (r == 0) return {lift(cf.s, cf.s_inv, diagonalizable_root(cyclic, s)), WitnessCase::kJordanChain};
            if (s == 2 * r) return {lift(cf.s, cf.s_inv, diagonalizable_root(cyclic, r)), WitnessCase::kCyclicChain};
            // B^s = I and B^r = M0 with M0 = [1,α,0; 0,u,0; m,1,v] similar to diag(1, u, v).
            const Complex u = unit_root(static_cast<double>(r) / s);
            const Complex v = u * u;
            const Complex denom = 2.0 * u + v + 1.0;
            const Complex m = -3.0 / denom;
            const Complex alpha = denom * (5.0 + 13.0 * u + 8.0 * v) / 9.0;
            const CMatrix m0{{1.0, alpha, 0.0}, {0.0, u, 0.0}, {m, 1.0, v}};
            const CMatrix vecs = from_columns({eigenvector(m0, 1.0), eigenvector(m0, u), eigenvector(m0, v)});
            const CMatrix roots = CMatrix::diagonal({1.0, unit_root(1.0 / s), unit_root(2.0 / s)});
            const CMatrix block = vecs * roots * inverse(vecs);
            return {lift(cf.s, cf.s_inv, block), WitnessCase::kTwistedChain};
        }
        case CanonicalForm::kSquareZero: {
            // In the basis (f1, f3, f2 + f4, f4) the block reads J2 ⊕ [1,1; -1,-1].
            const CMatrix g{{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 1.0}};
            const double theta = std::numbers::pi / rs;
            const double sine = std::sin((static_cast<double>(r) - static_cast<double>(s)) * theta);
            const Complex target = Complex(0.0, sine) * unit_root(0.125);
            const CMatrix block3 = direct_sum(rotation(theta), CMatrix{{principal_root(target / 2.0, rs)}});
            const CMatrix block4 = g * embed(block3, 4) * inverse(g);
            return {lift(cf.s, cf.s_inv, block4), WitnessCase::kRotationSquareZero};
        }
    }
    throw Error(ErrorKind::kVerificationFailure, "unhandled canonical form");
}

/// r > 0, rank >= 3: compress A to a 3-dimensional piece with invertible, triangular block.
inline BuiltWitness leading_block_witness(const CMatrix& a, const SandwichExponents& exp, double tol) {
    const std::size_t n = a.rows();
    const auto piv = independent_columns(a, tol);
    const CMatrix q = from_columns({standard_basis_vector(n, piv[0]), standard_basis_vector(n, piv[1]),
                                    standard_basis_vector(n, piv[2])});
    const CMatrix y = a * q;

    MatrixSampler rng(kWitnessSeed);
    const std::vector<CMatrix> candidates = {y,
                                             q,
                                             y + q,
                                             y + Complex(0.0, 1.0) * q,
                                             y - q,
                                             y + 2.0 * q,
                                             rng.gaussian_matrix(n, 3)};
    const CMatrix* best = nullptr;
    double best_score = -1.0;
    for (const auto& z : candidates) {
        const CMatrix zh = adjoint(z);
        const double score =
            std::min(LUDecomposition(zh * q).min_pivot_ratio(), LUDecomposition(zh * y).min_pivot_ratio());
        if (score > best_score) {
            best_score = score;
            best = &z;
        }
        if (score > 1e-3) break;
    }
    if (best_score <= 1e-12) throw Error(ErrorKind::kVerificationFailure, "no complement makes the compression invertible");
    const CMatrix zh = adjoint(*best);
    const CMatrix l = inverse(zh * q) * (zh * y);
    const auto sd = schur(l);

    std::vector<std::vector<Complex>> cols;
    const CMatrix qu = q * sd.q;
    for (std::size_t j = 0; j < 3; ++j) cols.push_back(column(qu, j));
    for (auto& k : kernel_basis(zh)) cols.push_back(std::move(k));
    const CMatrix s = from_columns(cols);

    const unsigned rs = exp.r() + exp.s();
    const Complex t0 = sd.t(0, 0);
    std::vector<Complex> d(3);
    for (std::size_t k = 0; k < 3; ++k) {
        const Complex target = t0 * unit_root(static_cast<double>(k) / 3.0);
        d[k] = k == 0 ? Complex(1.0) : principal_root(target / sd.t(k, k), rs);
    }
    return {lift(s, inverse(s, 1e-13), CMatrix::diagonal(d)), WitnessCase::kLeadingBlock};
}

/// Finds x with x, Ax, A^2x independent: standard basis first, then seeded random vectors.
inline std::optional<std::vector<Complex>> cyclic_vector(const CMatrix& a) {
    const std::size_t n = a.rows();
    auto works = [&](const std::vector<Complex>& x) {
        const auto ax = perispec::apply(a, x);
        const auto a2x = perispec::apply(a, ax);
        SpanBuilder span(n, 1e-6);
        for (const auto* v : {&x, &ax, &a2x}) {
            const double nv = vector_norm(*v);
            if (nv == 0.0) return false;
            std::vector<Complex> unit = *v;
            for (auto& z : unit) z /= nv;
            if (!span.try_add(unit)) return false;
        }
        return true;
    };
    for (std::size_t j = 0; j < n; ++j)
        if (works(standard_basis_vector(n, j))) return standard_basis_vector(n, j);
    MatrixSampler rng(kWitnessSeed);
    for (int t = 0; t < 50; ++t) {
        auto x = rng.vector(n);
        if (works(x)) return x;
    }
    return std::nullopt;
}

inline CMatrix shift_pair(Complex alpha) {
    return CMatrix{{alpha, 1.0, 0.0}, {0.0, -alpha, -1.0}, {0.0, 0.0, 0.0}};
}

/// r = 0, rank >= 3, with a cyclic vector x: work in the basis (x, Ax, A^2x, ...).
inline BuiltWitness companion_witness(const CMatrix& a, const std::vector<Complex>& x, unsigned s) {
    const std::size_t n = a.rows();
    const auto ax = perispec::apply(a, x);
    const auto a2x = perispec::apply(a, ax);
    const auto a3x = perispec::apply(a, a2x);
    const CMatrix basis = complete_basis(n, {x, ax, a2x}, {}, 1e-6);
    const CMatrix basis_inv = inverse(basis, 1e-13);
    const auto coeff = perispec::apply(basis_inv, a3x);
    const Complex c1 = coeff[0], c2 = coeff[1], c3 = coeff[2];
    const double nu = frobenius_norm(a);
    const bool z1 = std::abs(c1) <= kCoefficientTol * nu * nu * nu;
    const bool z2 = std::abs(c2) <= kCoefficientTol * nu * nu;
    const bool z3 = std::abs(c3) <= kCoefficientTol * nu;

    CMatrix c;
    WitnessCase label;
    if (!z1 && z2) {
        c = CMatrix::diagonal({1.0, 2.0, 0.0});
        label = WitnessCase::kCompanion1;
    } else if (!z1 && !z2 && z3) {
        c = shift_pair(std::sqrt(-1.0 / c2));
        label = WitnessCase::kCompanion2;
    } else if (!z1 && !z2) {
        c = CMatrix{{1.0, 0.0, 0.0}, {-4.0 * c2 / (3.0 * c1), 2.0, 0.0}, {0.0, 0.0, 0.0}};
        label = WitnessCase::kCompanion3;
    } else if (!z2 && !z3) {
        const Complex disc = std::sqrt(c3 * c3 - 4.0 * c2);
        c = shift_pair((-c3 + disc) / (2.0 * c2));
        label = WitnessCase::kCompanion4;
    } else if (z2 && !z3) {
        c = shift_pair(-1.0 / c3);
        label = WitnessCase::kCompanion5;
    } else if (!z2) {
        c = shift_pair(std::sqrt(-1.0 / c2));
        label = WitnessCase::kCompanion6;
    } else {
        c = CMatrix{{-1.0, 1.0, -1.0}, {2.0, 1.0, -1.0}, {0.0, 0.0, 0.0}};
        label = WitnessCase::kCompanion7;
    }
    return {lift(basis, basis_inv, diagonalizable_root(c, s)), label};
}

/// r = 0, rank >= 3, A^2 != 0, minimal polynomial of degree <= 2.
inline BuiltWitness quadratic_witness(const CMatrix& a, const SandwichExponents& exp) {
    const std::size_t n = a.rows();
    const unsigned s = exp.s();
    const double nu = frobenius_norm(a);
    std::vector<Complex> distinct;
    for (const auto& z : eigenvalues(a)) {
        bool seen = false;
        for (const auto& w : distinct) seen = seen || std::abs(z - w) <= 1e-6 * nu;
        if (!seen) distinct.push_back(z);
    }
    const CMatrix eye = CMatrix::identity(n);
    if (distinct.size() == 1) {
        const Complex lam = distinct[0];
        if (max_abs_diff(a, lam * eye) <= 1e-8 * nu) return {embed(cube_root_probe(s), n), WitnessCase::kScalar};
        // A = aI + N with N^2 = 0: any triangularizing basis works with the same probe.
        const auto sd = schur(a);
        return {lift(sd.q, adjoint(sd.q), cube_root_probe(s)), WitnessCase::kTwoEigenvalues};
    }
    if (distinct.size() != 2) {
        throw Error(ErrorKind::kVerificationFailure, "no cyclic vector, yet more than two distinct eigenvalues");
    }
    Complex ea = distinct[0], eb = distinct[1];
    if (std::abs(ea) < std::abs(eb)) std::swap(ea, eb);
    const CMatrix residual = (a - ea * eye) * (a - eb * eye);
    if (max_norm(residual) > 1e-6 * nu * nu) {
        throw Error(ErrorKind::kVerificationFailure, "no cyclic vector, yet the minimal polynomial is not quadratic");
    }
    const auto space_a = kernel_basis(a - ea * eye, 1e-7);
    const auto space_b = kernel_basis(a - eb * eye, 1e-7);
    if (space_a.empty() || space_b.empty()) throw Error(ErrorKind::kVerificationFailure, "missing eigenvector");

    if (std::abs(eb) > 1e-8 * nu) {
        const bool extra_from_a = space_a.size() >= 2;
        const auto& y = extra_from_a ? space_a[1] : space_b.at(1);
        const Complex ey = extra_from_a ? ea : eb;
        const CMatrix basis = complete_basis(n, {space_a[0], space_b[0], y}, {}, 1e-6);
        const Complex omega = unit_root(1.0 / 3.0);
        const CMatrix d = CMatrix::diagonal(
            {1.0, principal_root(ea * omega / eb, s), principal_root(ea * omega * omega / ey, s)});
        return {lift(basis, inverse(basis, 1e-13), d), WitnessCase::kTwoEigenvalues};
    }
    // spectrum {a, 0}: the block diag(a, 0, a) is handled like a rank-two eigen pair
    const CMatrix basis = complete_basis(n, {space_a[0], space_b[0], space_a.at(1)}, {}, 1e-6);
    return {lift(basis, inverse(basis, 1e-13), eigen_pair_block(ea, ea, exp)), WitnessCase::kEigenvalueAndZero};
}

/// r = 0, A^2 = 0, rank >= 3: the basis (x1, x2, x3, Ax1, Ax2, Ax3, ...) with B = [D, D; 0, 0].
inline BuiltWitness square_zero_witness(const CMatrix& a, unsigned s, double tol) {
    const std::size_t n = a.rows();
    const auto piv = independent_columns(a, tol);
    std::vector<std::vector<Complex>> required;
    for (std::size_t k = 0; k < 3; ++k) required.push_back(standard_basis_vector(n, piv[k]));
    for (std::size_t k = 0; k < 3; ++k) required.push_back(column(a, piv[k]));
    const CMatrix basis = complete_basis(n, required, {}, 1e-6);
    const CMatrix d = cube_root_probe(s);
    CMatrix block(6, 6);
    for (std::size_t i = 0; i < 3; ++i) {
        block(i, i) = d(i, i);
        block(i, i + 3) = d(i, i);
    }
    return {lift(basis, inverse(basis, 1e-13), block), WitnessCase::kSquareZeroBlocks};
}

}  // namespace detail

/// Recomputes the sandwich for B and packages the report; throws unless it is a genuine witness.
inline WitnessReport certify_witness(const CMatrix& a, const SandwichExponents& exp, const CMatrix& b, WitnessCase label,
                                     double tol = kRankTol) {
    WitnessReport report{b, rank(b, tol), peripheral_spectrum(sandwich(exp, a, b)), label};
    if (report.rank_b > 3 || count_distinct(report.spectrum) < 3) {
        throw Error(ErrorKind::kVerificationFailure,
                    std::string("witness for case ") + std::string(case_label(label)) + " has rank " +
                        std::to_string(report.rank_b) + " and " + std::to_string(count_distinct(report.spectrum)) +
                        " peripheral points");
    }
    return report;
}

/**
 * Deterministic witness B of rank at most three whose sandwich with A has at least
 * three peripheral points. Requires that one exists, i.e. A is not rank one and,
 * for r = 0, not a rank-two square-zero operator.
 */
inline WitnessReport construct_witness(const CMatrix& a, const SandwichExponents& exp, double tol = kRankTol) {
    const InvariantClass cls = classify(a, exp, tol);
    if (cls != InvariantClass::kOther) {
        throw Error(ErrorKind::kPrecondition,
                    std::string("no witness exists for class ") + std::string(class_name(cls)));
    }
    if (a.rows() < 3) throw Error(ErrorKind::kPrecondition, "witness construction needs dimension at least 3");
    if (exp.r() > 0 && exp.r() == exp.s()) {
        throw Error(ErrorKind::kUnsupported, "witness construction for r = s > 0 is not supported");
    }
    const std::size_t rk = rank(a, tol);
    detail::BuiltWitness built;
    if (exp.r() > 0) {
        built = rk >= 3 ? detail::leading_block_witness(a, exp, tol) : detail::rank_two_witness(a, exp, tol);
    } else if (rk == 2) {
        built = detail::rank_two_witness(a, exp, tol);
    } else if (max_norm(a * a) <= tol * max_norm(a) * max_norm(a)) {
        built = detail::square_zero_witness(a, exp.s(), tol);
    } else if (const auto x = detail::cyclic_vector(a)) {
        built = detail::companion_witness(a, *x, exp.s());
    } else {
        built = detail::quadratic_witness(a, exp);
    }
    return certify_witness(a, exp, built.b, built.label, tol);
}

/**
 * Randomized search over B = U V with U n x k, V k x n Gaussian and k cycling
 * through 1, 2, 3. Returns the lowest-index success.
 */
inline std::optional<WitnessReport> witness_search(const CMatrix& a, const SandwichExponents& exp, std::size_t trials,
                                                   std::uint64_t seed, double tol = kRankTol) {
    require_square(a, "witness_search");
    const std::size_t n = a.rows();
    MatrixSampler rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t k = 1 + t % 3;
        const CMatrix u = rng.gaussian_matrix(n, k);
        const CMatrix b = u * rng.gaussian_matrix(k, n);
        auto spectrum = peripheral_spectrum(sandwich(exp, a, b));
        if (count_distinct(spectrum) >= 3) return WitnessReport{b, rank(b, tol), std::move(spectrum), WitnessCase::kSearch};
    }
    return std::nullopt;
}

}  // namespace perispec
