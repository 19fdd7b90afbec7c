#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "perispec/elimination.hpp"
#include "perispec/matrix.hpp"

namespace perispec {

struct EigenOptions {
    /// Subdiagonal entry h_{k+1,k} is dropped when |h| <= deflation * (|h_kk| + |h_{k+1,k+1}|).
    double deflation = 1e-13;
    /// Total QR-step budget is iteration_factor * n^2.
    std::size_t iteration_factor = 100;
    std::size_t max_dim = 64;
};

/// A = Q T Q^H with Q unitary and T upper triangular.
struct SchurDecomposition {
    CMatrix q;
    CMatrix t;
};

namespace detail {

struct Givens {
    double c = 1.0;
    Complex s{};
    Complex r{};
};

/// Rotation G = [[c, s], [-conj(s), c]] with G [f; g] = [r; 0].
inline Givens make_givens(Complex f, Complex g) {
    Givens rot;
    if (g == Complex{}) {
        rot.r = f;
        return rot;
    }
    if (f == Complex{}) {
        rot.c = 0.0;
        rot.s = std::conj(g) / std::abs(g);
        rot.r = std::abs(g);
        return rot;
    }
    const double af = std::abs(f);
    const double norm = std::hypot(af, std::abs(g));
    const Complex phase = f / af;
    rot.c = af / norm;
    rot.s = phase * std::conj(g) / norm;
    rot.r = phase * norm;
    return rot;
}

/// Rows i, i+1 of m, columns [c0, c1): rows <- G rows.
inline void rotate_rows(CMatrix& m, std::size_t i, const Givens& g, std::size_t c0, std::size_t c1) {
    for (std::size_t k = c0; k < c1; ++k) {
        const Complex x = m(i, k);
        const Complex y = m(i + 1, k);
        m(i, k) = g.c * x + g.s * y;
        m(i + 1, k) = -std::conj(g.s) * x + g.c * y;
    }
}

/// Columns i, i+1 of m, rows [r0, r1): cols <- cols G^H.
inline void rotate_cols(CMatrix& m, std::size_t i, const Givens& g, std::size_t r0, std::size_t r1) {
    for (std::size_t k = r0; k < r1; ++k) {
        const Complex x = m(k, i);
        const Complex y = m(k, i + 1);
        m(k, i) = x * g.c + y * std::conj(g.s);
        m(k, i + 1) = -x * g.s + y * g.c;
    }
}

/// Householder reduction to upper Hessenberg form; H = Q^H A Q.
inline void hessenberg(CMatrix& h, CMatrix* q) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        std::vector<Complex> v(n - k - 1);
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i - k - 1] = h(i, k);
            xnorm2 += std::norm(h(i, k));
        }
        const double xnorm = std::sqrt(xnorm2);
        double tail = xnorm2 - std::norm(v[0]);
        if (xnorm == 0.0 || tail <= 0.0) continue;
        const Complex phase = v[0] == Complex{} ? Complex(1.0) : v[0] / std::abs(v[0]);
        v[0] += phase * xnorm;  // v = x + e^{i arg x0} |x| e1
        double vnorm2 = 0.0;
        for (const auto& z : v) vnorm2 += std::norm(z);
        if (vnorm2 == 0.0) continue;
        // P = I - 2 v v^H / (v^H v), Hermitian and unitary.
        const double beta = 2.0 / vnorm2;
        for (std::size_t j = 0; j < n; ++j) {  // H <- P H
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i - k - 1]) * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i - k - 1] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {  // H <- H P
            Complex s{};
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j - k - 1];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j - k - 1]);
        }
        if (q != nullptr) {
            for (std::size_t i = 0; i < n; ++i) {  // Q <- Q P
                Complex s{};
                for (std::size_t j = k + 1; j < n; ++j) s += (*q)(i, j) * v[j - k - 1];
                s *= beta;
                for (std::size_t j = k + 1; j < n; ++j) (*q)(i, j) -= s * std::conj(v[j - k - 1]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

inline Complex wilkinson_shift(const CMatrix& h, std::size_t iu, std::size_t iter) {
    const Complex a = h(iu - 1, iu - 1);
    const Complex b = h(iu - 1, iu);
    const Complex c = h(iu, iu - 1);
    const Complex d = h(iu, iu);
    if (iter > 0 && iter % 10 == 0) {
        // exceptional shift to break cycles
        double ex = std::abs(c.real());
        if (iu >= 2) ex += std::abs(h(iu - 1, iu - 2).real());
        return d + Complex(ex, 0.5 * ex);
    }
    const Complex half_diff = 0.5 * (a - d);
    const Complex disc = std::sqrt(half_diff * half_diff + b * c);
    // eigenvalue of the trailing 2x2 closer to d
    const Complex mu1 = d - (b * c) / (half_diff + disc);
    const Complex mu2 = d - (b * c) / (half_diff - disc);
    const Complex den1 = half_diff + disc;
    const Complex den2 = half_diff - disc;
    if (den1 == Complex{} && den2 == Complex{}) return d;
    if (den1 == Complex{}) return mu2;
    if (den2 == Complex{}) return mu1;
    return std::abs(den1) >= std::abs(den2) ? mu1 : mu2;
}

/// Shifted QR on a Hessenberg matrix. With `full`, rotations act on the whole matrix
/// (yielding a triangular Schur factor) and accumulate into q when non-null.
inline void hessenberg_qr(CMatrix& h, CMatrix* q, bool full, const EigenOptions& options) {
    const std::size_t n = h.rows();
    if (n <= 1) return;
    const double hnorm = frobenius_norm(h);
    if (hnorm == 0.0) return;
    const double tiny = std::numeric_limits<double>::epsilon() * hnorm;
    auto negligible = [&](std::size_t k) {  // subdiagonal h(k, k-1)
        const double sub = std::abs(h(k, k - 1));
        const double diag = std::abs(h(k - 1, k - 1)) + std::abs(h(k, k));
        return sub <= options.deflation * diag || sub <= tiny;
    };
    const std::size_t budget = options.iteration_factor * n * n;
    std::size_t total = 0;
    std::size_t iter = 0;
    std::size_t iu = n - 1;
    while (true) {
        while (iu > 0 && negligible(iu)) {
            h(iu, iu - 1) = 0.0;
            --iu;
            iter = 0;
        }
        if (iu == 0) break;
        ++iter;
        if (++total > budget) {
            throw Error(ErrorKind::kNoConvergence,
                        "QR iteration did not converge within " + std::to_string(budget) + " steps");
        }
        std::size_t il = iu - 1;
        while (il > 0 && !negligible(il)) --il;
        if (il > 0) h(il, il - 1) = 0.0;

        const Complex shift = wilkinson_shift(h, iu, iter);
        const std::size_t col_end = full ? n : iu + 1;
        const std::size_t row_begin = full ? 0 : il;

        Givens g = make_givens(h(il, il) - shift, h(il + 1, il));
        rotate_rows(h, il, g, il, col_end);
        rotate_cols(h, il, g, row_begin, std::min(il + 3, iu + 1));
        if (q != nullptr) rotate_cols(*q, il, g, 0, n);
        for (std::size_t i = il + 1; i < iu; ++i) {
            g = make_givens(h(i, i - 1), h(i + 1, i - 1));
            h(i, i - 1) = g.r;
            h(i + 1, i - 1) = 0.0;
            rotate_rows(h, i, g, i, col_end);
            rotate_cols(h, i, g, row_begin, std::min(i + 3, iu + 1));
            if (q != nullptr) rotate_cols(*q, i, g, 0, n);
        }
    }
}

inline void check_input(const CMatrix& a, const EigenOptions& options, const char* what) {
    require_square(a, what);
    if (a.rows() > options.max_dim) {
        throw Error(ErrorKind::kInvalidArgument, std::string(what) + ": dimension exceeds configured maximum " +
                                                     std::to_string(options.max_dim));
    }
}

}  // namespace detail

/// Complex Schur form by Householder-Hessenberg reduction and Wilkinson-shifted QR.
inline SchurDecomposition schur(const CMatrix& a, const EigenOptions& options = {}) {
    detail::check_input(a, options, "schur");
    SchurDecomposition out{CMatrix::identity(a.rows()), a};
    detail::hessenberg(out.t, &out.q);
    detail::hessenberg_qr(out.t, &out.q, true, options);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) out.t(i, j) = 0.0;
    return out;
}

/// All n eigenvalues, repeated according to algebraic multiplicity.
inline std::vector<Complex> eigenvalues(const CMatrix& a, const EigenOptions& options = {}) {
    detail::check_input(a, options, "eigenvalues");
    CMatrix h = a;
    detail::hessenberg(h, nullptr);
    detail::hessenberg_qr(h, nullptr, false, options);
    std::vector<Complex> values(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) values[i] = h(i, i);
    return values;
}

/**
 * Principal k-th root R of a diagonalizable C with pairwise distinct eigenvalues:
 * R = V diag(mu_i^{1/k}) V^{-1}, zero eigenvalues mapped to zero.
 */
inline CMatrix diagonalizable_root(const CMatrix& c, unsigned k, double check_tol = 1e-9) {
    require_square(c, "diagonalizable_root");
    if (k == 0) throw Error(ErrorKind::kInvalidArgument, "root order must be positive");
    if (k == 1) return c;
    const std::size_t n = c.rows();
    const auto mu = eigenvalues(c);
    const double scale = std::max(1.0, max_norm(c));
    std::vector<std::vector<Complex>> vecs;
    std::vector<Complex> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        vecs.push_back(eigenvector(c, mu[i]));
        roots[i] = std::abs(mu[i]) <= 1e-13 * scale ? Complex{} : std::pow(mu[i], 1.0 / static_cast<double>(k));
    }
    const CMatrix v = from_columns(vecs);
    const CMatrix r = v * CMatrix::diagonal(roots) * inverse(v, 1e-12);
    if (max_abs_diff(power(r, k), c) > check_tol * scale) {
        throw Error(ErrorKind::kVerificationFailure, "diagonalizable_root: root does not reproduce the matrix");
    }
    return r;
}

}  // namespace perispec
