#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "perispec/elimination.hpp"
#include "perispec/matrix.hpp"

namespace perispec {

/// Seeded source of random complex matrices with standard complex Gaussian entries.
class MatrixSampler {
public:
    explicit MatrixSampler(std::uint64_t seed) : engine_(seed) {}

    Complex gaussian() {
        const double x = normal_(engine_);
        const double y = normal_(engine_);
        return {x * std::sqrt(0.5), y * std::sqrt(0.5)};
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::size_t index(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_); }

    std::vector<Complex> vector(std::size_t n) {
        std::vector<Complex> v(n);
        for (auto& z : v) z = gaussian();
        return v;
    }

    CMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        CMatrix m(rows, cols);
        for (auto& z : m.data()) z = gaussian();
        return m;
    }

    CMatrix gaussian_matrix(std::size_t n) { return gaussian_matrix(n, n); }

    /// U V with U n x k and V k x n Gaussian: rank k almost surely.
    CMatrix rank_k(std::size_t n, std::size_t k) { return gaussian_matrix(n, k) * gaussian_matrix(k, n); }

    RankOneOperator rank_one(std::size_t n) { return {CVector{vector(n)}, CCovector{vector(n)}}; }

    /// x ⊗ f with <x, f> = 1.
    RankOneOperator rank_one_idempotent(std::size_t n) {
        while (true) {
            RankOneOperator op = rank_one(n);
            const Complex p = pairing(op.x, op.f);
            if (std::abs(p) < 0.1) continue;
            for (auto& z : op.f.entries) z /= p;
            return op;
        }
    }

    /// Gaussian matrix with condition controlled by rejection on the LU pivot ratio.
    CMatrix invertible(std::size_t n, double min_pivot_ratio = 1e-3) {
        while (true) {
            CMatrix m = gaussian_matrix(n);
            if (LUDecomposition(m).min_pivot_ratio() > min_pivot_ratio) return m;
        }
    }

    /// S N S^{-1} with N strictly upper triangular Gaussian.
    CMatrix nilpotent(std::size_t n) {
        CMatrix nil(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) nil(i, j) = gaussian();
        const CMatrix s = invertible(n, 0.05);
        return s * nil * inverse(s);
    }

    /// Projection S (I_k ⊕ 0) S^{-1} of random rank k in 1..n-1.
    CMatrix idempotent(std::size_t n) {
        const std::size_t k = n > 1 ? 1 + index(n - 1) : 1;
        CMatrix d(n, n);
        for (std::size_t i = 0; i < k; ++i) d(i, i) = 1.0;
        const CMatrix s = invertible(n, 0.05);
        return s * d * inverse(s);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace perispec
