#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perispec/error.hpp"

namespace perispec {

using Complex = std::complex<double>;

/**
 * Dense row-major complex matrix. Stands in for a bounded operator on a
 * finite-dimensional space; all library operations treat it as a value.
 */
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw Error(ErrorKind::kDimensionMismatch, "entry count does not match rows*cols");
        }
        for (const auto& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw Error(ErrorKind::kInvalidArgument, "matrix entries must be finite");
            }
        }
    }

    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) throw Error(ErrorKind::kDimensionMismatch, "ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

    static CMatrix diagonal(std::span<const Complex> d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static CMatrix diagonal(std::initializer_list<Complex> d) {
        return diagonal(std::span<const Complex>(d.begin(), d.size()));
    }

    /// Matrix unit E_ij (zero-based indices).
    static CMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
        CMatrix m(n, n);
        m(i, j) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Complex> data() const noexcept { return data_; }
    std::span<Complex> data() noexcept { return data_; }

    CMatrix& operator+=(const CMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
        return *this;
    }

    CMatrix& operator-=(const CMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
        return *this;
    }

    CMatrix& operator*=(Complex scalar) {
        for (auto& z : data_) z *= scalar;
        return *this;
    }

    bool operator==(const CMatrix& other) const = default;

private:
    void require_same_shape(const CMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw Error(ErrorKind::kDimensionMismatch, "shape mismatch in elementwise operation");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline void require_square(const CMatrix& a, const char* what) {
    if (!a.is_square()) {
        throw Error(ErrorKind::kNonSquare, std::string(what) + " requires a square matrix");
    }
}

inline CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
inline CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
inline CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
inline CMatrix operator-(CMatrix a) { return a *= -1.0; }

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

/// A^k by repeated squaring; A^0 = I.
inline CMatrix power(const CMatrix& a, unsigned k) {
    require_square(a, "power");
    CMatrix result = CMatrix::identity(a.rows());
    CMatrix base = a;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

inline CMatrix transpose(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline CMatrix adjoint(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

inline CMatrix conjugate(const CMatrix& a) {
    CMatrix c = a;
    for (auto& z : c.data()) z = std::conj(z);
    return c;
}

inline double max_norm(const CMatrix& a) {
    double m = 0.0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

inline double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

inline Complex trace(const CMatrix& a) {
    require_square(a, "trace");
    Complex t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return max_norm(a - b); }

/// Places `block` in the top-left corner of an n x n zero matrix (block ⊕ 0).
inline CMatrix embed(const CMatrix& block, std::size_t n) {
    if (block.rows() > n || block.cols() > n) {
        throw Error(ErrorKind::kDimensionMismatch, "embed: block larger than target dimension");
    }
    CMatrix m(n, n);
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) m(i, j) = block(i, j);
    return m;
}

inline CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
    CMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

inline CMatrix extract(const CMatrix& a, std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) {
    if (row0 + rows > a.rows() || col0 + cols > a.cols()) {
        throw Error(ErrorKind::kDimensionMismatch, "extract: block out of range");
    }
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = a(row0 + i, col0 + j);
    return m;
}

inline std::vector<Complex> column(const CMatrix& a, std::size_t j) {
    std::vector<Complex> v(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) v[i] = a(i, j);
    return v;
}

/// Builds a matrix whose columns are the given vectors (all of equal length).
inline CMatrix from_columns(const std::vector<std::vector<Complex>>& cols) {
    if (cols.empty()) return {};
    const std::size_t n = cols.front().size();
    CMatrix m(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != n) throw Error(ErrorKind::kDimensionMismatch, "from_columns: ragged columns");
        for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

inline std::vector<Complex> apply(const CMatrix& a, std::span<const Complex> x) {
    if (a.cols() != x.size()) throw Error(ErrorKind::kDimensionMismatch, "matrix-vector size mismatch");
    std::vector<Complex> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline std::vector<Complex> standard_basis_vector(std::size_t n, std::size_t i) {
    std::vector<Complex> e(n);
    e[i] = 1.0;
    return e;
}

// --- vectors, covectors and rank-one operators --------------------------------

/// Column vector x in C^n.
struct CVector {
    std::vector<Complex> entries;

    std::size_t dim() const noexcept { return entries.size(); }
};

/// Linear functional f on C^n; acts through the bilinear pairing <x, f> = sum_j x_j f_j.
struct CCovector {
    std::vector<Complex> entries;

    std::size_t dim() const noexcept { return entries.size(); }
};

inline Complex pairing(const CVector& x, const CCovector& f) {
    if (x.dim() != f.dim()) throw Error(ErrorKind::kDimensionMismatch, "pairing: dimension mismatch");
    Complex s{};
    for (std::size_t j = 0; j < x.dim(); ++j) s += x.entries[j] * f.entries[j];
    return s;
}

inline CVector operator*(const CMatrix& a, const CVector& x) { return CVector{perispec::apply(a, x.entries)}; }

/// f B, the functional y -> f(By).
inline CCovector operator*(const CCovector& f, const CMatrix& b) {
    if (b.rows() != f.dim()) throw Error(ErrorKind::kDimensionMismatch, "covector-matrix size mismatch");
    std::vector<Complex> g(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        Complex s{};
        for (std::size_t i = 0; i < b.rows(); ++i) s += f.entries[i] * b(i, j);
        g[j] = s;
    }
    return CCovector{std::move(g)};
}

/// x ⊗ f : y -> <y, f> x.
struct RankOneOperator {
    CVector x;
    CCovector f;

    CMatrix materialize() const {
        if (x.dim() != f.dim()) throw Error(ErrorKind::kDimensionMismatch, "rank-one operator: dimension mismatch");
        CMatrix m(x.dim(), f.dim());
        for (std::size_t i = 0; i < x.dim(); ++i)
            for (std::size_t j = 0; j < f.dim(); ++j) m(i, j) = x.entries[i] * f.entries[j];
        return m;
    }

    bool is_idempotent(double tol = 1e-12) const { return std::abs(pairing(x, f) - 1.0) <= tol; }
};

}  // namespace perispec
