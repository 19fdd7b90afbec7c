#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "perispec/elimination.hpp"
#include "perispec/matrix.hpp"
#include "perispec/schur.hpp"

namespace perispec {

/**
 * The four normal forms of a rank-two operator used by the witness constructions.
 * Each is a small block Â with A = S (Â ⊕ 0) S^{-1}:
 *
 *   kEigenPair      [a,0,b; 0,0,0; 0,0,c]   a, c nonzero
 *   kEigenAndShift  [a,0,0; 0,0,1; 0,0,0]   a nonzero
 *   kChain          [0,1,0; 0,0,1; 0,0,0]   A^3 = 0, A^2 != 0
 *   kSquareZero     [0_2, I_2; 0_2, 0_2]    A^2 = 0
 */
enum class CanonicalForm { kEigenPair, kEigenAndShift, kChain, kSquareZero };

inline std::string_view form_tag(CanonicalForm f) {
    switch (f) {
        case CanonicalForm::kEigenPair: return "(i)";
        case CanonicalForm::kEigenAndShift: return "(ii)";
        case CanonicalForm::kChain: return "(iii)";
        case CanonicalForm::kSquareZero: return "(iv)";
    }
    return "?";
}

struct CanonicalDecomposition {
    CanonicalForm form = CanonicalForm::kEigenPair;
    CMatrix s;
    CMatrix s_inv;
    Complex a{};
    Complex b{};
    Complex c{};

    /// The block Â (3x3, or 4x4 for kSquareZero).
    CMatrix block() const {
        switch (form) {
            case CanonicalForm::kEigenPair: return CMatrix{{a, 0.0, b}, {0.0, 0.0, 0.0}, {0.0, 0.0, c}};
            case CanonicalForm::kEigenAndShift: return CMatrix{{a, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
            case CanonicalForm::kChain: return CMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
            case CanonicalForm::kSquareZero: {
                CMatrix m(4, 4);
                m(0, 2) = 1.0;
                m(1, 3) = 1.0;
                return m;
            }
        }
        return {};
    }

    /// Â ⊕ 0 at full dimension.
    CMatrix canonical() const { return embed(block(), s.rows()); }

    /// S (Â ⊕ 0) S^{-1}.
    CMatrix reassemble() const { return s * canonical() * s_inv; }
};

namespace detail {

/// Eigenvector of a 2x2 matrix for eigenvalue mu.
inline std::array<Complex, 2> eigvec2(const CMatrix& m, Complex mu) {
    const std::array<Complex, 2> u{m(0, 1), mu - m(0, 0)};
    const std::array<Complex, 2> w{mu - m(1, 1), m(1, 0)};
    const double nu = std::hypot(std::abs(u[0]), std::abs(u[1]));
    const double nw = std::hypot(std::abs(w[0]), std::abs(w[1]));
    if (nu == 0.0 && nw == 0.0) return {1.0, 0.0};
    std::array<Complex, 2> v = nu >= nw ? u : w;
    // scale so the dominant component is real and positive
    const Complex lead = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
    const Complex scale = std::abs(lead) / lead / std::max(nu, nw);
    return {v[0] * scale, v[1] * scale};
}

inline std::vector<Complex> combine(const std::vector<Complex>& x, const std::vector<Complex>& y,
                                    std::array<Complex, 2> coeff) {
    std::vector<Complex> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = coeff[0] * x[i] + coeff[1] * y[i];
    return v;
}

/// Appends vectors from `pool` that keep `cols` independent until `target` columns are present.
inline void extend_from(std::vector<std::vector<Complex>>& cols, const std::vector<std::vector<Complex>>& pool,
                        std::size_t target) {
    const std::size_t n = cols.front().size();
    SpanBuilder span(n);
    for (const auto& v : cols) {
        if (!span.try_add(v)) throw Error(ErrorKind::kVerificationFailure, "canonical form: dependent basis vectors");
    }
    for (const auto& v : pool) {
        if (cols.size() == target) break;
        if (span.try_add(v)) cols.push_back(v);
    }
    if (cols.size() != target) throw Error(ErrorKind::kVerificationFailure, "canonical form: kernel too small");
}

}  // namespace detail

/**
 * Brings a rank-two A to one of the normal forms above.
 *
 * The form is decided from nilpotency of A^2, A^3 and from the restriction M of A
 * to its (invariant) image: M invertible gives kEigenPair, M singular but not
 * nilpotent gives kEigenAndShift. The returned S is verified by reassembly.
 */
inline CanonicalDecomposition rank2_canonical_form(const CMatrix& a, double tol = kRankTol) {
    require_square(a, "rank2_canonical_form");
    const std::size_t n = a.rows();
    if (n < 3) throw Error(ErrorKind::kPrecondition, "rank2_canonical_form: dimension must be at least 3");
    const std::size_t rk = rank(a, tol);
    if (rk != 2) {
        throw Error(ErrorKind::kPrecondition, "rank2_canonical_form: matrix has rank " + std::to_string(rk));
    }
    const double nu = max_norm(a);
    const double nil_tol = tol * static_cast<double>(n);
    const CMatrix a2 = a * a;
    const CMatrix a3 = a2 * a;
    const auto kernel = kernel_basis(a, tol);
    const auto piv = independent_columns(a, tol);

    CanonicalDecomposition out;
    std::vector<std::vector<Complex>> cols;

    if (max_norm(a2) <= nil_tol * nu * nu) {
        out.form = CanonicalForm::kSquareZero;
        cols = {column(a, piv[0]), column(a, piv[1]), standard_basis_vector(n, piv[0]),
                standard_basis_vector(n, piv[1])};
        detail::extend_from(cols, kernel, n);
    } else if (max_norm(a3) <= nil_tol * nu * nu * nu) {
        out.form = CanonicalForm::kChain;
        std::size_t j = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double m = detail::vector_norm(column(a2, k));
            if (m > best) {
                best = m;
                j = k;
            }
        }
        cols = {column(a2, j), column(a, j), standard_basis_vector(n, j)};
        detail::extend_from(cols, kernel, n);
    } else {
        const auto w1 = column(a, piv[0]);
        const auto w2 = column(a, piv[1]);
        const CMatrix w = from_columns({w1, w2});
        const CMatrix wh = adjoint(w);
        const CMatrix m = inverse(wh * w) * wh * a * w;
        const auto mu = eigenvalues(m);
        const bool first_larger = std::abs(mu[0]) >= std::abs(mu[1]);
        const Complex big = first_larger ? mu[0] : mu[1];
        const Complex small = first_larger ? mu[1] : mu[0];
        if (std::abs(small) <= nil_tol * std::abs(big)) {
            out.form = CanonicalForm::kEigenAndShift;
            const auto va = detail::eigvec2(m, big);
            const auto v0 = detail::eigvec2(m, 0.0);
            const auto z = detail::combine(w1, w2, v0);
            const auto u3 = detail::combine(standard_basis_vector(n, piv[0]), standard_basis_vector(n, piv[1]), v0);
            cols = {detail::combine(w1, w2, va), z, u3};
            detail::extend_from(cols, kernel, n);
        } else {
            out.form = CanonicalForm::kEigenPair;
            const auto v1 = detail::eigvec2(m, big);
            const std::array<Complex, 2> v2{-std::conj(v1[1]), std::conj(v1[0])};
            cols = {detail::combine(w1, w2, v1)};
            detail::extend_from(cols, kernel, 2);
            cols.insert(cols.begin() + 2, detail::combine(w1, w2, v2));
            detail::extend_from(cols, kernel, n);
        }
    }

    out.s = from_columns(cols);
    out.s_inv = inverse(out.s, 1e-13);
    const CMatrix hat = out.s_inv * a * out.s;
    if (out.form == CanonicalForm::kEigenPair) {
        out.a = hat(0, 0);
        out.b = hat(0, 2);
        out.c = hat(2, 2);
    } else if (out.form == CanonicalForm::kEigenAndShift) {
        out.a = hat(0, 0);
    }
    if (max_abs_diff(out.reassemble(), a) > 1e-8 * std::max(1.0, nu)) {
        throw Error(ErrorKind::kVerificationFailure,
                    std::string("rank2_canonical_form: reassembly mismatch for form ") +
                        std::string(form_tag(out.form)));
    }
    return out;
}

}  // namespace perispec
