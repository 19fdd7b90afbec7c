#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "perispec/jordan.hpp"
#include "perispec/matrix.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

/// B ↦ σ_π(B^r A B^s + B^s A B^r) for some hidden A, queried at rank-one idempotents.
using SandwichOracle = std::function<PeripheralSpectrum(const RankOneOperator&)>;

inline SandwichOracle make_sandwich_oracle(const CMatrix& a, const SandwichExponents& exp) {
    return [a, exp](const RankOneOperator& p) { return peripheral_spectrum(sandwich(exp, a, p.materialize())); };
}

/**
 * Reads A off n^2 oracle queries. At P = e_j ⊗ e_j the sandwich is 2 A_jj P; at
 * P = (e_j + e_i) ⊗ e_j it is 2 (A_jj + A_ji) P, which yields the entry in row j,
 * column i.
 */
inline CMatrix recover_operator(const SandwichOracle& oracle, const SandwichExponents& exp, std::size_t n,
                                double tol = 1e-7) {
    if (exp.r() == 0) throw Error(ErrorKind::kPrecondition, "recover_operator needs r >= 1");
    if (n == 0) throw Error(ErrorKind::kInvalidArgument, "recover_operator: dimension must be positive");

    auto query = [&](const RankOneOperator& p) {
        const PeripheralSpectrum sp = oracle(p);
        if (sp.points.size() != 1) {
            throw Error(ErrorKind::kPrecondition, "oracle returned " + std::to_string(sp.points.size()) +
                                                      " peripheral points at a rank-one idempotent");
        }
        return sp.points.front() / 2.0;
    };
    auto probe = [n](std::size_t j, std::size_t i) {
        RankOneOperator p{CVector{standard_basis_vector(n, j)}, CCovector{standard_basis_vector(n, j)}};
        if (i != j) p.x.entries[i] = 1.0;
        return p;
    };

    CMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) a(j, j) = query(probe(j, j));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) a(j, i) = query(probe(j, i)) - a(j, j);

    const SandwichOracle replay = make_sandwich_oracle(a, exp);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = probe(j, i);
            if (!spectra_equal(replay(p), oracle(p), tol)) {
                throw Error(ErrorKind::kVerificationFailure, "recovered operator does not reproduce the oracle");
            }
        }
    return a;
}

}  // namespace perispec
