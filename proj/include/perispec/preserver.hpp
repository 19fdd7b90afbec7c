#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perispec/elimination.hpp"
#include "perispec/error.hpp"
#include "perispec/jordan.hpp"
#include "perispec/matrix.hpp"
#include "perispec/random.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

/// A dimension-preserving map on n x n matrices, treated as opaque.
struct BlackBoxMap {
    std::size_t dim = 0;
    std::function<CMatrix(const CMatrix&)> fn;

    CMatrix operator()(const CMatrix& a) const {
        if (a.rows() != dim || a.cols() != dim) {
            throw Error(ErrorKind::kDimensionMismatch, "map defined on " + std::to_string(dim) + "x" +
                                                           std::to_string(dim) + " matrices");
        }
        CMatrix out = fn(a);
        if (out.rows() != dim || out.cols() != dim) {
            throw Error(ErrorKind::kDimensionMismatch, "map returned a matrix of the wrong shape");
        }
        return out;
    }
};

enum class PreserverVariant { kSimilarity, kTransposeSimilarity };

inline std::string_view variant_name(PreserverVariant v) {
    return v == PreserverVariant::kSimilarity ? "similarity" : "transpose-similarity";
}

inline PreserverVariant parse_variant(std::string_view name) {
    if (name == "similarity" || name == "sim") return PreserverVariant::kSimilarity;
    if (name == "transpose-similarity" || name == "transpose") return PreserverVariant::kTransposeSimilarity;
    throw Error(ErrorKind::kMalformedInput, "unknown preserver variant '" + std::string(name) + "'");
}

/// A ↦ λ T A T⁻¹ or A ↦ λ T Aᵀ T⁻¹, optionally preceded by entrywise conjugation.
struct PreserverForm {
    Complex lambda{1.0};
    CMatrix t;
    CMatrix t_inv;
    PreserverVariant variant = PreserverVariant::kSimilarity;
    bool conjugating = false;

    CMatrix apply(const CMatrix& a) const {
        CMatrix x = variant == PreserverVariant::kSimilarity ? a : transpose(a);
        if (conjugating) x = conjugate(x);
        return lambda * (t * x * t_inv);
    }

    BlackBoxMap as_map() const {
        return {t.rows(), [form = *this](const CMatrix& a) { return form.apply(a); }};
    }
};

inline PreserverForm make_form(Complex lambda, const CMatrix& t, PreserverVariant variant, bool conjugating = false) {
    require_square(t, "preserver form");
    if (lambda == Complex{}) throw Error(ErrorKind::kInvalidArgument, "lambda must be nonzero");
    if (rank(t) < t.rows()) throw Error(ErrorKind::kInvalidArgument, "T is singular");
    PreserverForm form{lambda, t, inverse(t), variant, conjugating};
    const double residual = max_abs_diff(t * form.t_inv, CMatrix::identity(t.rows()));
    if (residual > 1e-10) {
        throw Error(ErrorKind::kInvalidArgument, "T is too ill-conditioned to invert reliably");
    }
    return form;
}

inline BlackBoxMap make_similarity(Complex lambda, const CMatrix& t) {
    return make_form(lambda, t, PreserverVariant::kSimilarity).as_map();
}

inline BlackBoxMap make_transpose(Complex lambda, const CMatrix& t) {
    return make_form(lambda, t, PreserverVariant::kTransposeSimilarity).as_map();
}

struct Counterexample {
    std::vector<CMatrix> inputs;
    std::vector<CMatrix> images;
    PeripheralSpectrum before;
    PeripheralSpectrum after;
};

struct VerificationReport {
    bool passed = true;
    std::size_t tuples_checked = 0;
    std::optional<Counterexample> counterexample;
};

/// Thrown when a map is shown not to preserve peripheral spectra; carries the offending tuple when there is one.
class NotAPreserver : public Error {
public:
    NotAPreserver(const std::string& message, std::optional<Counterexample> cx = std::nullopt)
        : Error(ErrorKind::kNotAPreserver, message), counterexample_(std::move(cx)) {}

    const std::optional<Counterexample>& counterexample() const noexcept { return counterexample_; }

private:
    std::optional<Counterexample> counterexample_;
};

/// One random operand: dense Gaussian half the time, otherwise rank-one, idempotent or nilpotent.
inline CMatrix draw_operand(MatrixSampler& rng, std::size_t n) {
    switch (rng.index(6)) {
        case 3: return rng.rank_one(n).materialize();
        case 4: return rng.idempotent(n);
        case 5: return rng.nilpotent(n);
        default: return rng.gaussian_matrix(n);
    }
}

inline std::vector<std::vector<CMatrix>> draw_tuples(std::size_t k, std::size_t n, std::size_t samples,
                                                     std::uint64_t seed) {
    MatrixSampler rng(seed);
    std::vector<std::vector<CMatrix>> tuples(samples);
    for (auto& tuple : tuples)
        for (std::size_t i = 0; i < k; ++i) tuple.push_back(draw_operand(rng, n));
    return tuples;
}

namespace detail {

inline double operand_scale(const ProductSignature& sig, const std::vector<CMatrix>& operands) {
    double scale = 1.0;
    for (std::size_t i : sig.sequence()) scale *= frobenius_norm(operands[i - 1]);
    return scale;
}

}  // namespace detail

inline VerificationReport verify_on(const BlackBoxMap& phi, const ProductSignature& sig,
                                    const std::vector<std::vector<CMatrix>>& tuples, double tol) {
    VerificationReport report;
    for (const auto& tuple : tuples) {
        std::vector<CMatrix> images;
        images.reserve(tuple.size());
        for (const auto& a : tuple) images.push_back(phi(a));
        const CMatrix p_before = generalized_jordan_product(sig, tuple);
        const CMatrix p_after = generalized_jordan_product(sig, images);
        const auto before = peripheral_spectrum(p_before);
        const auto after = peripheral_spectrum(p_after);
        // rounding in the product scales with the operand norms, which can far exceed the peripheral radius
        const double work = std::max({1.0, max_norm(p_before), max_norm(p_after), detail::operand_scale(sig, tuple),
                                      detail::operand_scale(sig, images)});
        const double conditioning = work / std::max({1.0, before.radius, after.radius});
        ++report.tuples_checked;
        if (!spectra_equal(before, after, tol * conditioning)) {
            report.passed = false;
            report.counterexample = Counterexample{tuple, std::move(images), before, after};
            return report;
        }
    }
    return report;
}

/// Compares σ_π of the generalized Jordan product before and after Φ on random tuples; stops at the first failure.
inline VerificationReport verify_preserver(const BlackBoxMap& phi, const ProductSignature& sig, std::size_t samples,
                                           std::uint64_t seed, double tol = 1e-7) {
    return verify_on(phi, sig, draw_tuples(sig.k(), phi.dim, samples, seed), tol);
}

struct ReconstructOptions {
    std::size_t pilot_samples = 200;
    std::size_t fresh_samples = 100;
    std::uint64_t seed = 0;
    double tol = 1e-7;
    /// Relative tolerance for functional agreement of the recovered form with Φ.
    double agreement_tol = 1e-8;
};

namespace detail {

inline std::uint64_t fresh_seed(std::uint64_t seed) { return seed ^ 0x5851f42d4c957f2dULL; }

inline std::vector<CMatrix> fresh_inputs(std::size_t n, const ReconstructOptions& opts) {
    MatrixSampler rng(fresh_seed(opts.seed));
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < opts.fresh_samples; ++i) out.push_back(rng.gaussian_matrix(n));
    return out;
}

inline double relative_gap(const CMatrix& x, const CMatrix& y) {
    return max_abs_diff(x, y) / std::max(1.0, max_norm(y));
}

inline std::size_t dominant_column(const CMatrix& m) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.cols(); ++j)
        if (detail::vector_norm(column(m, j)) > detail::vector_norm(column(m, best))) best = j;
    return best;
}

inline bool common_column_space(const std::vector<CMatrix>& images, double tol) {
    std::vector<std::vector<Complex>> cols;
    for (const auto& m : images)
        for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(column(m, j));
    return relative_rank(from_columns(cols), tol) == 1;
}

}  // namespace detail

/// Every matrix the reconstruction will feed to Φ, in order, for a given configuration.
inline std::vector<CMatrix> reconstruction_queries(std::size_t n, const ReconstructOptions& opts = {}) {
    std::vector<CMatrix> out{CMatrix(n, n)};
    for (const auto& tuple : draw_tuples(2, n, opts.pilot_samples, opts.seed))
        for (const auto& a : tuple) out.push_back(a);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.push_back(CMatrix::unit(n, i, j));
    for (auto& a : detail::fresh_inputs(n, opts)) out.push_back(std::move(a));
    return out;
}

/**
 * Recovers (λ, T, variant) from a black-box preserver of σ_π(B^r A B^s + B^s A B^r).
 *
 * After a pilot verification, the images of the matrix units E_ij must be rank one.
 * The images in a fixed row i share one column space for a similarity and one row
 * space for a transpose-similarity. T is read off the images of E_i1 (resp. E_1i),
 * which all share the same covector, so their columns give T up to one common
 * scalar. The result is normalised so that the first column of T has unit norm and
 * a positive leading coordinate, then certified against fresh inputs.
 */
inline PreserverForm reconstruct(const BlackBoxMap& phi, const SandwichExponents& exp,
                                 const ReconstructOptions& opts = {}) {
    const std::size_t n = phi.dim;
    if (exp.r() == exp.s()) throw Error(ErrorKind::kUnsupported, "reconstruction for r = s is not supported");
    if (n < 3) throw Error(ErrorKind::kPrecondition, "reconstruction needs dimension at least 3");

    const auto sig = sandwich_signature(exp);
    const auto pilot = verify_on(phi, sig, draw_tuples(2, n, opts.pilot_samples, opts.seed), opts.tol);
    if (!pilot.passed) throw NotAPreserver("pilot verification found a counterexample", pilot.counterexample);
    if (max_norm(phi(CMatrix(n, n))) > opts.agreement_tol) throw NotAPreserver("the map does not send 0 to 0");

    std::vector<std::vector<CMatrix>> units(n, std::vector<CMatrix>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            units[i][j] = phi(CMatrix::unit(n, i, j));
            const std::size_t rk = relative_rank(units[i][j], 1e-8);
            if (rk != 1) {
                throw NotAPreserver("image of E_" + std::to_string(i + 1) + std::to_string(j + 1) + " has rank " +
                                    std::to_string(rk));
            }
        }

    const bool columns_shared = detail::common_column_space(units[0], 1e-8);
    std::vector<CMatrix> row_images;
    for (const auto& m : units[0]) row_images.push_back(transpose(m));
    const bool rows_shared = detail::common_column_space(row_images, 1e-8);
    if (columns_shared == rows_shared) {
        throw NotAPreserver("images of matrix units fit neither a similarity nor a transpose-similarity");
    }
    const PreserverVariant variant = columns_shared ? PreserverVariant::kSimilarity : PreserverVariant::kTransposeSimilarity;

    // The images of E_i1 (similarity) or E_1i (transpose) are t_i ⊗ g for a single covector g.
    auto generator = [&](std::size_t i) -> const CMatrix& {
        return variant == PreserverVariant::kSimilarity ? units[i][0] : units[0][i];
    };
    const std::size_t k = detail::dominant_column(generator(0));
    std::vector<std::vector<Complex>> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back(column(generator(i), k));
    CMatrix t = from_columns(cols);

    std::size_t pivot = 0;
    while (pivot < n && std::abs(t(pivot, 0)) <= 1e-12 * detail::vector_norm(column(t, 0))) ++pivot;
    const Complex phase = std::abs(t(pivot, 0)) / t(pivot, 0);
    t *= phase / detail::vector_norm(column(t, 0));
    if (rank(t) < n) throw NotAPreserver("recovered T is singular");

    const CMatrix t_inv = inverse(t);
    const Complex lambda = (t_inv * units[0][0] * t)(0, 0);
    PreserverForm form = make_form(lambda, t, variant);

    const Complex lm = std::pow(lambda, static_cast<int>(exp.m()));
    if (std::abs(lm - 1.0) > 1e-8) {
        throw NotAPreserver("recovered lambda does not satisfy lambda^m = 1 (|lambda^m - 1| = " +
                            std::to_string(std::abs(lm - 1.0)) + ")");
    }
    for (const auto& a : detail::fresh_inputs(n, opts)) {
        if (detail::relative_gap(form.apply(a), phi(a)) > opts.agreement_tol) {
            throw NotAPreserver("the map disagrees with its recovered canonical form");
        }
    }
    const auto self_check = verify_preserver(form.as_map(), sig, opts.fresh_samples, detail::fresh_seed(opts.seed), opts.tol);
    if (!self_check.passed) {
        throw Error(ErrorKind::kVerificationFailure, "recovered canonical form fails its own verification");
    }
    return form;
}

}  // namespace perispec
