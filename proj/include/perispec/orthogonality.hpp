#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "perispec/elimination.hpp"
#include "perispec/error.hpp"
#include "perispec/matrix.hpp"
#include "perispec/random.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

/// Splits a rank-one idempotent P into x ⊗ f with f(x) = 1.
inline RankOneOperator split_rank_one_idempotent(const CMatrix& p, double tol = 1e-9) {
    require_square(p, "rank-one idempotent");
    const double scale = std::max(1.0, max_norm(p));
    if (relative_rank(p, 1e-9) != 1 || max_abs_diff(p * p, p) > tol * scale * scale) {
        throw Error(ErrorKind::kInvalidArgument, "expected a rank-one idempotent");
    }
    std::size_t row = 0, col = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            if (std::abs(p(i, j)) > std::abs(p(row, col))) {
                row = i;
                col = j;
            }
    RankOneOperator out{CVector{column(p, col)}, CCovector{std::vector<Complex>(p.cols())}};
    for (std::size_t j = 0; j < p.cols(); ++j) out.f.entries[j] = p(row, j) / p(row, col);
    return out;
}

/// True when σ_π(X) = {0}, i.e. every eigenvalue falls under the spectrum zero floor.
inline bool peripherally_zero(const CMatrix& x) { return peripheral_spectrum(x).radius == 0.0; }

inline bool jordan_null(const CMatrix& p, const CMatrix& r) { return peripherally_zero(p * r + r * p); }

/**
 * For PQ = QP = 0 returns B = P - Q, which has rank two and satisfies
 * σ_π(PB + BP) = {2} and σ_π(QB + BQ) = {-2}. Returns nothing otherwise.
 */
inline std::optional<CMatrix> orthogonality_witness(const CMatrix& p, const CMatrix& q, double tol = 1e-9) {
    split_rank_one_idempotent(p);
    split_rank_one_idempotent(q);
    if (p.rows() != q.rows()) throw Error(ErrorKind::kDimensionMismatch, "P and Q differ in dimension");
    const double scale = max_norm(p) * max_norm(q);
    if (max_norm(p * q) > tol * scale || max_norm(q * p) > tol * scale) return std::nullopt;

    CMatrix b = p - q;
    const bool ok = spectra_equal(peripheral_spectrum(p * b + b * p), make_spectrum({2.0})) &&
                    spectra_equal(peripheral_spectrum(q * b + b * q), make_spectrum({-2.0})) &&
                    relative_rank(b) == 2;
    if (!ok) throw Error(ErrorKind::kVerificationFailure, "orthogonality witness failed its own check");
    return b;
}

namespace detail {

/**
 * Basis (x_P, y_Q, w_3, ..., w_n) with the w's spanning ker f_P ∩ ker f_Q, rescaled so
 * that f_Q(x_P) = 1 whenever that pairing is nonzero. In this basis P = E11, and Q is
 * E22 when PQ = QP = 0 and E21 + E22 when only QP is nonzero.
 */
struct AdaptedBasis {
    CMatrix s;
    CMatrix s_inv;
};

inline std::optional<AdaptedBasis> adapted_basis(const RankOneOperator& p, const RankOneOperator& q) {
    const std::size_t n = p.x.dim();
    CVector y = q.x;
    const Complex gx = pairing(p.x, q.f);
    if (std::abs(gx) > 1e-9) for (auto& z : y.entries) z *= gx;
    CMatrix duals(2, n);
    for (std::size_t j = 0; j < n; ++j) {
        duals(0, j) = p.f.entries[j];
        duals(1, j) = q.f.entries[j];
    }
    std::vector<std::vector<Complex>> cols{p.x.entries, y.entries};
    for (auto& w : kernel_basis(duals)) cols.push_back(std::move(w));
    if (cols.size() != n) return std::nullopt;
    CMatrix s = from_columns(cols);
    if (relative_rank(s) < n) return std::nullopt;
    return AdaptedBasis{s, inverse(s)};
}

inline std::vector<Complex> row_of(const CMatrix& m, std::size_t i) {
    std::vector<Complex> r(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] = m(i, j);
    return r;
}

inline std::vector<Complex> combine(const std::vector<std::pair<Complex, std::vector<Complex>>>& terms) {
    std::vector<Complex> out(terms.front().second.size());
    for (const auto& [c, v] : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * v[i];
    return out;
}

inline std::optional<CMatrix> normalized_rank_one(std::vector<Complex> x, std::vector<Complex> f) {
    RankOneOperator r{CVector{std::move(x)}, CCovector{std::move(f)}};
    const Complex p = pairing(r.x, r.f);
    const double size = vector_norm(r.x.entries) * vector_norm(r.f.entries);
    if (std::abs(p) <= 1e-6 * size) return std::nullopt;
    for (auto& z : r.f.entries) z /= p;
    return r.materialize();
}

/**
 * Structured rank-one idempotents expressed in the adapted basis. With P = E11 and
 * Q = E22 these are R̂ ⊕ 0 for R̂ of the shapes [[0,0,*],[0,0,*],[0,0,1]] and
 * [[0,a,b],[0,0,0],[0,c,1]] with a = bc, together with their transposes. With
 * Q = E21 + E22 they are the probes that force B to vanish off the leading 2x2 block
 * and pin down that block.
 */
inline std::vector<CMatrix> targeted_probes(const AdaptedBasis& basis, bool orthogonal, MatrixSampler& rng) {
    const std::size_t n = basis.s.rows();
    std::vector<std::vector<Complex>> s, sigma;
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back(column(basis.s, i));
        sigma.push_back(row_of(basis.s_inv, i));
    }
    std::vector<CMatrix> out;
    auto push = [&](std::vector<Complex> x, std::vector<Complex> f) {
        if (auto r = normalized_rank_one(std::move(x), std::move(f))) out.push_back(*r);
    };

    // vectors u in the complement together with covectors φ that vanish on x_P and y_Q and satisfy φ(u) = 1
    std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>> tail;
    for (std::size_t k = 2; k < n; ++k) tail.emplace_back(s[k], sigma[k]);
    for (int extra = 0; extra < 3 && n > 2; ++extra) {
        std::vector<std::pair<Complex, std::vector<Complex>>> u_terms, phi_terms;
        for (std::size_t k = 2; k < n; ++k) {
            u_terms.emplace_back(rng.gaussian(), s[k]);
            phi_terms.emplace_back(rng.gaussian(), sigma[k]);
        }
        tail.emplace_back(combine(u_terms), combine(phi_terms));
    }

    if (orthogonal) {
        for (const auto& [u, phi] : tail) {
            const Complex a1 = rng.gaussian(), a2 = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian();
            push(combine({{a1, s[0]}, {a2, s[1]}, {1.0, u}}), phi);
            push(u, combine({{a1, sigma[0]}, {a2, sigma[1]}, {1.0, phi}}));
            push(combine({{b, s[0]}, {1.0, u}}), combine({{c, sigma[1]}, {1.0, phi}}));
            push(combine({{c, s[1]}, {1.0, u}}), combine({{b, sigma[0]}, {1.0, phi}}));
            push(combine({{b, s[1]}, {1.0, u}}), combine({{c, sigma[0]}, {1.0, phi}}));
            push(combine({{c, s[0]}, {1.0, u}}), combine({{b, sigma[1]}, {1.0, phi}}));
        }
        return out;
    }
    push(combine({{-1.0, s[0]}, {1.0, s[1]}}), sigma[1]);
    for (const auto& [u, phi] : tail) {
        push(u, phi);
        push(u, combine({{1.0, sigma[0]}, {1.0, phi}}));
        push(combine({{1.0, s[0]}, {1.0, u}}), phi);
        push(combine({{1.0, s[1]}, {1.0, u}}), combine({{1.0, sigma[0]}, {1.0, phi}}));
    }
    return out;
}

/**
 * Random rank-one idempotent R = y ⊗ g that is Jordan-null against P and Q: for each
 * of them either its covector kills y or g kills its vector.
 */
inline std::optional<CMatrix> random_qualifying(const RankOneOperator& p, const RankOneOperator& q,
                                                MatrixSampler& rng) {
    const std::size_t n = p.x.dim();
    std::vector<std::vector<Complex>> y_constraints, g_constraints;
    for (const auto* op : {&p, &q}) {
        if (rng.index(2) == 0) {
            y_constraints.push_back(op->f.entries);
        } else {
            g_constraints.push_back(op->x.entries);
        }
    }
    auto draw = [&](const std::vector<std::vector<Complex>>& constraints) -> std::vector<Complex> {
        if (constraints.empty()) return rng.vector(n);
        CMatrix c(constraints.size(), n);
        for (std::size_t i = 0; i < constraints.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) c(i, j) = constraints[i][j];
        const auto kernel = kernel_basis(c);
        std::vector<Complex> v(n);
        for (const auto& w : kernel) {
            const Complex coeff = rng.gaussian();
            for (std::size_t j = 0; j < n; ++j) v[j] += coeff * w[j];
        }
        return v;
    };
    return normalized_rank_one(draw(y_constraints), draw(g_constraints));
}

}  // namespace detail

/**
 * Checks σ_π(BR + RB) = {0} over rank-one idempotents R with
 * σ_π(PR + RP) = σ_π(QR + RQ) = {0}: structured probes in a basis adapted to P and Q,
 * then `trials` qualifying random draws.
 */
inline bool orthogonality_R_property(const CMatrix& p, const CMatrix& q, const CMatrix& b, std::size_t trials,
                                     std::uint64_t seed) {
    const RankOneOperator ps = split_rank_one_idempotent(p);
    const RankOneOperator qs = split_rank_one_idempotent(q);
    if (p.rows() != q.rows() || b.rows() != p.rows() || !b.is_square()) {
        throw Error(ErrorKind::kDimensionMismatch, "P, Q and B must share one dimension");
    }
    MatrixSampler rng(seed);
    auto violates = [&](const CMatrix& r) { return jordan_null(p, r) && jordan_null(q, r) && !jordan_null(b, r); };

    const double scale = max_norm(p) * max_norm(q);
    const bool pq_zero = max_norm(p * q) <= 1e-9 * scale;
    const bool qp_zero = max_norm(q * p) <= 1e-9 * scale;
    if (pq_zero || qp_zero) {
        // with only PQ nonzero, transposing swaps the roles and leaves every σ_π unchanged
        const bool flip = !pq_zero;
        const RankOneOperator pt = flip ? split_rank_one_idempotent(transpose(p)) : ps;
        const RankOneOperator qt = flip ? split_rank_one_idempotent(transpose(q)) : qs;
        if (auto basis = detail::adapted_basis(pt, qt)) {
            for (const auto& r : detail::targeted_probes(*basis, pq_zero && qp_zero, rng)) {
                if (violates(flip ? transpose(r) : r)) return false;
            }
        }
    }

    std::size_t qualifying = 0;
    for (std::size_t attempt = 0; qualifying < trials && attempt < 20 * trials; ++attempt) {
        const auto r = detail::random_qualifying(ps, qs, rng);
        if (!r || !jordan_null(p, *r) || !jordan_null(q, *r)) continue;
        ++qualifying;
        if (!jordan_null(b, *r)) return false;
    }
    return true;
}

/// The full characterization: the {2} and {-2} conditions together with the R-property.
inline bool orthogonality_certificate(const CMatrix& p, const CMatrix& q, const CMatrix& b, std::size_t trials,
                                      std::uint64_t seed) {
    return spectra_equal(peripheral_spectrum(p * b + b * p), make_spectrum({2.0})) &&
           spectra_equal(peripheral_spectrum(q * b + b * q), make_spectrum({-2.0})) &&
           orthogonality_R_property(p, q, b, trials, seed);
}

}  // namespace perispec
