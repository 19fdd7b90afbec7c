#pragma once

#include <complex>
#include <string>
#include <vector>

#include "perispec/jordan.hpp"
#include "perispec/preserver.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

inline const std::vector<Complex>& default_probe_alphas() {
    static const std::vector<Complex> alphas{Complex(-1.0, 0.0), Complex(0.0, 1.0), Complex(2.0, 1.0)};
    return alphas;
}

/// A = [[1, α-1], [0, 0]] ⊕ 0 and B = [[1, 0], [1, 0]] ⊕ 0; AB^s + B^sA has eigenvalues α ± √α.
inline std::pair<CMatrix, CMatrix> probe_pair(Complex alpha, std::size_t n) {
    return {embed(CMatrix{{1.0, alpha - 1.0}, {0.0, 0.0}}, n), embed(CMatrix{{1.0, 0.0}, {1.0, 0.0}}, n)};
}

inline PeripheralSpectrum conjugate_spectrum(PeripheralSpectrum s) {
    for (auto& z : s.points) z = std::conj(z);
    return make_spectrum(std::move(s.points));
}

/**
 * Decides whether Φ acts on scalars as the identity or as complex conjugation,
 * comparing σ_π(Φ(A)Φ(B)^s + Φ(B)^sΦ(A)) with the probe spectrum and its conjugate.
 * Returns true when every probe agrees with the identity.
 */
inline bool conjugation_probe(const BlackBoxMap& phi, const SandwichExponents& exp,
                              const std::vector<Complex>& alphas = default_probe_alphas(), double tol = 1e-7) {
    if (exp.r() != 0) throw Error(ErrorKind::kPrecondition, "the conjugation probe needs r = 0");
    if (phi.dim < 3) throw Error(ErrorKind::kPrecondition, "the conjugation probe needs dimension at least 3");
    bool identity = true;
    for (const Complex alpha : alphas) {
        const auto [a, b] = probe_pair(alpha, phi.dim);
        const auto expected = peripheral_spectrum(sandwich(exp, a, b));
        const auto observed = peripheral_spectrum(sandwich(exp, phi(a), phi(b)));
        if (spectra_equal(observed, expected, tol)) continue;
        if (spectra_equal(observed, conjugate_spectrum(expected), tol)) {
            identity = false;
            continue;
        }
        throw NotAPreserver("probe with alpha = (" + std::to_string(alpha.real()) + ", " +
                            std::to_string(alpha.imag()) + ") matches neither the identity nor conjugation");
    }
    return identity;
}

}  // namespace perispec
