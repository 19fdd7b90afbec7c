#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "perispec/matrix.hpp"

namespace perispec {

/// Default relative tolerance for numerical rank decisions.
inline constexpr double kRankTol = 1e-9;

namespace detail {

inline double vector_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
    // <u, v> = u^H v
    Complex s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

/// Full-pivoting elimination; returns the original column indices of accepted pivots in order.
inline std::vector<std::size_t> full_pivot_columns(const CMatrix& a, double threshold) {
    CMatrix m = a;
    std::vector<std::size_t> col_index(a.cols());
    std::iota(col_index.begin(), col_index.end(), 0);
    std::vector<std::size_t> pivots;
    const std::size_t steps = std::min(a.rows(), a.cols());
    for (std::size_t r = 0; r < steps; ++r) {
        std::size_t pi = r, pj = r;
        double best = -1.0;
        for (std::size_t i = r; i < m.rows(); ++i)
            for (std::size_t j = r; j < m.cols(); ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    pi = i;
                    pj = j;
                }
        if (best <= threshold) break;
        if (pi != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(pi, j));
        if (pj != r) {
            for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, r), m(i, pj));
            std::swap(col_index[r], col_index[pj]);
        }
        pivots.push_back(col_index[r]);
        const Complex piv = m(r, r);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            const Complex factor = m(i, r) / piv;
            if (factor == Complex{}) continue;
            for (std::size_t j = r; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
        }
    }
    return pivots;
}

}  // namespace detail

/**
 * Numerical rank by Gaussian elimination with full pivoting. A pivot is accepted
 * iff |pivot| > tol * max(1, largest initial |entry|).
 */
inline std::size_t rank(const CMatrix& a, double tol = kRankTol) {
    const double threshold = tol * std::max(1.0, max_norm(a));
    return detail::full_pivot_columns(a, threshold).size();
}

/// Scale-invariant variant: pivots compared against tol * max |entry|.
inline std::size_t relative_rank(const CMatrix& a, double tol = kRankTol) {
    const double scale = max_norm(a);
    if (scale == 0.0) return 0;
    return detail::full_pivot_columns(a, tol * scale).size();
}

/// Indices of a maximal set of linearly independent columns (full-pivoting order).
inline std::vector<std::size_t> independent_columns(const CMatrix& a, double tol = kRankTol) {
    const double scale = max_norm(a);
    if (scale == 0.0) return {};
    return detail::full_pivot_columns(a, tol * scale);
}

/// Basis of the null space {x : Ax = 0} from the reduced row echelon form.
inline std::vector<std::vector<Complex>> kernel_basis(const CMatrix& a, double tol = kRankTol) {
    const std::size_t n = a.cols();
    const double scale = max_norm(a);
    std::vector<std::vector<Complex>> basis;
    if (scale == 0.0) {
        for (std::size_t j = 0; j < n; ++j) basis.push_back(standard_basis_vector(n, j));
        return basis;
    }
    const double threshold = tol * scale;
    CMatrix m = a;
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m.rows(); ++col) {
        std::size_t best_row = row;
        double best = 0.0;
        for (std::size_t i = row; i < m.rows(); ++i)
            if (std::abs(m(i, col)) > best) {
                best = std::abs(m(i, col));
                best_row = i;
            }
        if (best <= threshold) {
            for (std::size_t i = row; i < m.rows(); ++i) m(i, col) = 0.0;
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) std::swap(m(row, j), m(best_row, j));
        const Complex piv = m(row, col);
        for (std::size_t j = col; j < n; ++j) m(row, j) /= piv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            const Complex factor = m(i, col);
            if (factor == Complex{}) continue;
            for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(row, j);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Complex> v(n);
        v[free] = 1.0;
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -m(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/**
 * Incrementally grows a linearly independent family, accepting a candidate only
 * when its component orthogonal to the current span is a non-negligible fraction
 * of its length.
 */
class SpanBuilder {
public:
    explicit SpanBuilder(std::size_t dim, double tol = 1e-8) : dim_(dim), tol_(tol) {}

    bool try_add(std::span<const Complex> v) {
        if (v.size() != dim_) throw Error(ErrorKind::kDimensionMismatch, "SpanBuilder: wrong vector length");
        const double norm = detail::vector_norm(v);
        if (norm == 0.0 || orthonormal_.size() == dim_) return false;
        std::vector<Complex> r(v.begin(), v.end());
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : orthonormal_) {
                const Complex c = detail::inner(q, r);
                for (std::size_t i = 0; i < dim_; ++i) r[i] -= c * q[i];
            }
        }
        const double rn = detail::vector_norm(r);
        if (rn <= tol_ * norm) return false;
        for (auto& z : r) z /= rn;
        orthonormal_.push_back(std::move(r));
        members_.emplace_back(v.begin(), v.end());
        return true;
    }

    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<std::vector<Complex>>& members() const noexcept { return members_; }

private:
    std::size_t dim_;
    double tol_;
    std::vector<std::vector<Complex>> orthonormal_;
    std::vector<std::vector<Complex>> members_;
};

/**
 * Extends `required` (assumed independent) by vectors drawn from `candidates`,
 * then from the standard basis, until a basis of C^n is reached. Returns the
 * basis as matrix columns, required vectors first.
 */
inline CMatrix complete_basis(std::size_t n, const std::vector<std::vector<Complex>>& required,
                              const std::vector<std::vector<Complex>>& candidates = {}, double tol = 1e-8,
                              bool fill_with_standard_basis = true) {
    SpanBuilder span(n, tol);
    for (const auto& v : required) {
        if (!span.try_add(v)) throw Error(ErrorKind::kPrecondition, "complete_basis: required vectors are dependent");
    }
    for (const auto& v : candidates) {
        if (span.size() == n) break;
        span.try_add(v);
    }
    if (fill_with_standard_basis) {
        for (std::size_t j = 0; j < n && span.size() < n; ++j) span.try_add(standard_basis_vector(n, j));
    }
    if (span.size() != n) throw Error(ErrorKind::kVerificationFailure, "complete_basis: could not reach full rank");
    return from_columns(span.members());
}

/// LU factorization with partial pivoting, P A = L U.
class LUDecomposition {
public:
    explicit LUDecomposition(const CMatrix& a) : lu_(a), perm_(a.rows()) {
        require_square(a, "LU decomposition");
        const std::size_t n = a.rows();
        std::iota(perm_.begin(), perm_.end(), 0);
        const double scale = max_norm(a);
        min_pivot_ratio_ = scale == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > best) {
                    best = std::abs(lu_(i, k));
                    p = i;
                }
            if (scale > 0.0) min_pivot_ratio_ = std::min(min_pivot_ratio_, best / scale);
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
            }
            if (best == 0.0) continue;
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const Complex f = lu_(i, k);
                if (f == Complex{}) continue;
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    /// Smallest |pivot| relative to the largest input entry; 0 for singular input.
    double min_pivot_ratio() const noexcept { return min_pivot_ratio_; }

    bool singular(double tol = 1e-14) const noexcept { return !(min_pivot_ratio_ > tol); }

    std::vector<Complex> solve(std::span<const Complex> b) const {
        const std::size_t n = lu_.rows();
        if (b.size() != n) throw Error(ErrorKind::kDimensionMismatch, "LU solve: rhs size mismatch");
        std::vector<Complex> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * y[j];
            y[ii] = s / lu_(ii, ii);
        }
        return y;
    }

    Complex determinant() const {
        Complex det = 1.0;
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i) det *= lu_(i, i);
        std::vector<std::size_t> p = perm_;
        for (std::size_t i = 0; i < n; ++i) {
            while (p[i] != i) {
                std::swap(p[i], p[p[i]]);
                det = -det;
            }
        }
        return det;
    }

private:
    CMatrix lu_;
    std::vector<std::size_t> perm_;
    double min_pivot_ratio_ = 0.0;
};

inline Complex determinant(const CMatrix& a) { return LUDecomposition(a).determinant(); }

/// Inverse via LU; throws kPrecondition when the matrix is singular at tolerance `tol`.
inline CMatrix inverse(const CMatrix& a, double tol = 1e-14) {
    LUDecomposition lu(a);
    if (lu.singular(tol)) throw Error(ErrorKind::kPrecondition, "inverse: matrix is singular");
    const std::size_t n = a.rows();
    CMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto e = standard_basis_vector(n, j);
        const auto x = lu.solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

inline std::vector<Complex> solve(const CMatrix& a, std::span<const Complex> b) {
    LUDecomposition lu(a);
    if (lu.singular()) throw Error(ErrorKind::kPrecondition, "solve: matrix is singular");
    return lu.solve(b);
}

/**
 * Eigenvector for a (numerically computed) eigenvalue by inverse iteration.
 * Zero pivots of A - mu I are nudged to a tiny multiple of ||A||.
 */
inline std::vector<Complex> eigenvector(const CMatrix& a, Complex mu, int iterations = 3) {
    require_square(a, "eigenvector");
    const std::size_t n = a.rows();
    const double scale = std::max(max_norm(a), std::abs(mu));
    const double nudge = 1e-13 * std::max(scale, 1e-300);
    CMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
    // perturb the shift slightly so the factorization is never exactly singular
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= Complex(nudge, 0.5 * nudge);
    LUDecomposition lu(shifted);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.05 * static_cast<double>(i % 3));
    for (int it = 0; it < iterations; ++it) {
        auto w = lu.solve(v);
        double norm = detail::vector_norm(w);
        if (!(norm > 0.0) || !std::isfinite(norm)) break;
        for (auto& z : w) z /= norm;
        v = std::move(w);
    }
    const double norm = detail::vector_norm(v);
    for (auto& z : v) z /= norm;
    return v;
}

}  // namespace perispec
