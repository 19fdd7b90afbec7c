#pragma once

#include <cmath>
#include <complex>

#include "perispec/elimination.hpp"
#include "perispec/matrix.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

enum class RankOneBranch {
    kDegenerate,  // f(x) f(B^2 x) = 0: single point f(Bx)
    kOpposite,    // f(Bx) = 0: the pair ±sqrt(f(x) f(B^2 x))
    kGeneric,     // larger-modulus root of f(Bx) ± sqrt(f(x) f(B^2 x))
};

struct RankOneSandwichResult {
    RankOneBranch branch;
    Complex fx, fbx, fb2x;
    PeripheralSpectrum spectrum;
};

/**
 * Peripheral spectrum of Bx ⊗ f + x ⊗ fB without an eigensolver.
 *
 * The operator factors as [Bx, x] [f; fB], so its nonzero eigenvalues are those of
 * the 2x2 matrix [[f(Bx), f(x)], [f(B^2x), f(Bx)]], i.e. f(Bx) ± sqrt(f(x) f(B^2x)).
 */
inline RankOneSandwichResult rank_one_sandwich(const CMatrix& b, const CVector& x, const CCovector& f,
                                               double tol = 1e-12, double tie_tol = 1e-7) {
    require_square(b, "rank_one_sandwich");
    if (x.dim() != b.rows() || f.dim() != b.rows()) {
        throw Error(ErrorKind::kDimensionMismatch, "rank_one_sandwich: vector and matrix sizes differ");
    }
    const CVector bx = b * x;
    const CVector b2x = b * bx;
    RankOneSandwichResult out{RankOneBranch::kGeneric, pairing(x, f), pairing(bx, f), pairing(b2x, f), {}};

    const double xf = detail::vector_norm(x.entries) * detail::vector_norm(f.entries);
    const double nb = std::max(frobenius_norm(b), 1e-300);
    const bool fx_zero = std::abs(out.fx) <= tol * xf;
    const bool fb2x_zero = std::abs(out.fb2x) <= tol * xf * nb * nb;
    const bool fbx_zero = std::abs(out.fbx) <= tol * xf * nb;

    const Complex root = std::sqrt(out.fx * out.fb2x);
    if (fx_zero || fb2x_zero) {
        out.branch = RankOneBranch::kDegenerate;
        out.spectrum = make_spectrum({fbx_zero ? Complex{} : out.fbx});
    } else if (fbx_zero) {
        out.branch = RankOneBranch::kOpposite;
        out.spectrum = make_spectrum({root, -root});
    } else {
        const Complex plus = out.fbx + root;
        const Complex minus = out.fbx - root;
        const double mp = std::abs(plus), mm = std::abs(minus);
        if (std::abs(mp - mm) <= tie_tol * std::max(mp, mm)) {
            out.spectrum = make_spectrum({plus, minus});
        } else {
            out.spectrum = make_spectrum({mp > mm ? plus : minus});
        }
    }
    return out;
}

inline PeripheralSpectrum rank_one_sandwich_spectrum(const CMatrix& b, const CVector& x, const CCovector& f) {
    return rank_one_sandwich(b, x, f).spectrum;
}

/// Bx ⊗ f + x ⊗ fB as a dense matrix.
inline CMatrix rank_one_sandwich_matrix(const CMatrix& b, const CVector& x, const CCovector& f) {
    return RankOneOperator{b * x, f}.materialize() + RankOneOperator{x, f * b}.materialize();
}

}  // namespace perispec
