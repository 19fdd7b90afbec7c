#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <vector>

#include "perispec/matrix.hpp"
#include "perispec/schur.hpp"

namespace perispec {

struct SpectrumOptions {
    /// Points with |z| >= radius * (1 - tol_radius) are peripheral.
    double tol_radius = 1e-7;
    /// Eigenvalues within tol_cluster * max(1, radius) of each other are merged.
    double tol_cluster = 1e-7;
    /// Eigenvalues with |z| <= zero_floor * ||A||_F are treated as exactly zero.
    double zero_floor = 1e-5;
    /// Additional merge radius defect_merge * ||A||_F, absorbing the split of defective eigenvalues.
    double defect_merge = 1e-5;
    EigenOptions eigen{};
};

struct PeripheralSpectrum {
    double radius = 0.0;
    std::vector<Complex> points{Complex{}};
};

namespace detail {

inline double phase_key(Complex z) {
    double t = std::arg(z);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    if (t > 2.0 * std::numbers::pi - 1e-9) t = 0.0;
    return t;
}

/// Sorts points by argument in [0, 2π), then by modulus.
inline void canonical_order(std::vector<Complex>& pts) {
    std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) {
        const double kx = phase_key(x), ky = phase_key(y);
        if (std::abs(kx - ky) > 1e-12) return kx < ky;
        return std::abs(x) < std::abs(y);
    });
}

/// Single-linkage clustering; returns cluster centroids.
inline std::vector<Complex> cluster(const std::vector<Complex>& values, double radius) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);
    std::vector<Complex> sum(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += values[i];
        ++count[find(i)];
    }
    std::vector<Complex> centroids;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] > 0) centroids.push_back(sum[i] / static_cast<double>(count[i]));
    return centroids;
}

}  // namespace detail

/**
 * Peripheral part of a list of eigenvalues. `scale` sets the absolute level for
 * the zero floor and the defect merge radius (normally ||A||_F).
 */
inline PeripheralSpectrum peripheral_from_values(std::vector<Complex> values, double scale,
                                                 const SpectrumOptions& opts = {}) {
    for (auto& z : values)
        if (std::abs(z) <= opts.zero_floor * scale) z = 0.0;
    double rough = 0.0;
    for (const auto& z : values) rough = std::max(rough, std::abs(z));
    const double merge = std::max(opts.tol_cluster * std::max(1.0, rough), opts.defect_merge * scale);
    const auto centroids = detail::cluster(values, merge);

    PeripheralSpectrum out;
    for (const auto& z : centroids) out.radius = std::max(out.radius, std::abs(z));
    if (out.radius == 0.0) return out;
    out.points.clear();
    for (const auto& z : centroids)
        if (std::abs(z) >= out.radius * (1.0 - opts.tol_radius)) out.points.push_back(z);
    detail::canonical_order(out.points);
    return out;
}

inline PeripheralSpectrum peripheral_spectrum(const CMatrix& a, const SpectrumOptions& opts = {}) {
    return peripheral_from_values(eigenvalues(a, opts.eigen), frobenius_norm(a), opts);
}

inline std::size_t count_distinct(const PeripheralSpectrum& s) { return s.points.size(); }

/// Order-free comparison by greedy nearest-neighbour matching.
inline bool spectra_equal(const PeripheralSpectrum& s1, const PeripheralSpectrum& s2, double tol = 1e-7) {
    if (s1.points.size() != s2.points.size()) return false;
    const double bound = tol * std::max({1.0, s1.radius, s2.radius});
    std::vector<bool> used(s2.points.size(), false);
    for (const auto& z : s1.points) {
        std::size_t best = s2.points.size();
        double best_d = 0.0;
        for (std::size_t j = 0; j < s2.points.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - s2.points[j]);
            if (best == s2.points.size() || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best_d > bound) return false;
        used[best] = true;
    }
    return true;
}

/// Builds a spectrum from an explicit point set (radius = max modulus).
inline PeripheralSpectrum make_spectrum(std::vector<Complex> points) {
    PeripheralSpectrum s;
    if (points.empty()) return s;
    s.radius = 0.0;
    for (const auto& z : points) s.radius = std::max(s.radius, std::abs(z));
    s.points = std::move(points);
    if (s.radius == 0.0) s.points = {Complex{}};
    detail::canonical_order(s.points);
    return s;
}

}  // namespace perispec
