#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "perispec/error.hpp"
#include "perispec/matrix.hpp"

namespace perispec {

/// A sequence (i_1, ..., i_m) over {1..k} in which every index occurs and some index occurs exactly once.
class ProductSignature {
public:
    std::size_t k() const noexcept { return k_; }
    std::size_t m() const noexcept { return seq_.size(); }
    const std::vector<std::size_t>& sequence() const noexcept { return seq_; }

    /// Number of occurrences of index i (1-based).
    std::size_t occurrences(std::size_t i) const {
        return static_cast<std::size_t>(std::count(seq_.begin(), seq_.end(), i));
    }

    std::string str() const {
        std::string s;
        for (std::size_t j = 0; j < seq_.size(); ++j) {
            if (j > 0) s += ',';
            s += std::to_string(seq_[j]);
        }
        return s;
    }

private:
    ProductSignature(std::size_t k, std::vector<std::size_t> seq) : k_(k), seq_(std::move(seq)) {}
    friend ProductSignature validate_signature(const std::vector<long long>& raw, std::size_t k);

    std::size_t k_;
    std::vector<std::size_t> seq_;
};

inline ProductSignature validate_signature(const std::vector<long long>& raw, std::size_t k) {
    if (k < 2) throw Error(ErrorKind::kInvalidArgument, "signature: k must be at least 2");
    std::vector<std::size_t> counts(k + 1, 0);
    std::vector<std::size_t> seq;
    seq.reserve(raw.size());
    for (long long t : raw) {
        if (t < 1 || static_cast<unsigned long long>(t) > k) {
            throw Error(ErrorKind::kInvalidArgument, "signature: term " + std::to_string(t) + " outside 1.." +
                                                         std::to_string(k));
        }
        seq.push_back(static_cast<std::size_t>(t));
        ++counts[static_cast<std::size_t>(t)];
    }
    bool some_unique = false;
    for (std::size_t i = 1; i <= k; ++i) {
        if (counts[i] == 0) throw Error(ErrorKind::kInvalidArgument, "signature: index " + std::to_string(i) + " missing");
        if (counts[i] == 1) some_unique = true;
    }
    if (!some_unique) throw Error(ErrorKind::kInvalidArgument, "signature: no index occurs exactly once");
    return ProductSignature(k, std::move(seq));
}

/// Parses "2,1,2"; k is the largest term.
inline ProductSignature parse_signature(std::string_view text) {
    std::vector<long long> raw;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view tok = text.substr(pos, comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw Error(ErrorKind::kMalformedInput, "signature: cannot parse term '" + std::string(tok) + "'");
        }
        raw.push_back(v);
        pos = comma + 1;
    }
    long long k = 0;
    for (long long t : raw) k = std::max(k, t);
    return validate_signature(raw, static_cast<std::size_t>(std::max(k, 0LL)));
}

/// Exponents of B^r A B^s + B^s A B^r, normalized so that r <= s.
class SandwichExponents {
public:
    SandwichExponents(unsigned r, unsigned s) : r_(std::min(r, s)), s_(std::max(r, s)) {
        if (s_ == 0) throw Error(ErrorKind::kInvalidArgument, "sandwich exponents: r = s = 0");
    }

    unsigned r() const noexcept { return r_; }
    unsigned s() const noexcept { return s_; }
    unsigned m() const noexcept { return r_ + s_ + 1; }

    bool operator==(const SandwichExponents&) const = default;

private:
    unsigned r_;
    unsigned s_;
};

namespace detail {

inline void check_operands(const ProductSignature& sig, const std::vector<CMatrix>& ops) {
    if (ops.size() != sig.k()) {
        throw Error(ErrorKind::kInvalidArgument, "expected " + std::to_string(sig.k()) + " operands, got " +
                                                     std::to_string(ops.size()));
    }
    for (const auto& op : ops) {
        require_square(op, "generalized product");
        if (op.rows() != ops.front().rows()) throw Error(ErrorKind::kDimensionMismatch, "operands differ in dimension");
    }
}

}  // namespace detail

/// T_{i_1} T_{i_2} ... T_{i_m}.
inline CMatrix generalized_product(const ProductSignature& sig, const std::vector<CMatrix>& ops) {
    detail::check_operands(sig, ops);
    CMatrix p = ops[sig.sequence().front() - 1];
    for (std::size_t j = 1; j < sig.m(); ++j) p = p * ops[sig.sequence()[j] - 1];
    return p;
}

/// T_{i_1} ... T_{i_m} + T_{i_m} ... T_{i_1}.
inline CMatrix generalized_jordan_product(const ProductSignature& sig, const std::vector<CMatrix>& ops) {
    detail::check_operands(sig, ops);
    const auto& seq = sig.sequence();
    CMatrix fwd = ops[seq.front() - 1];
    CMatrix bwd = ops[seq.back() - 1];
    for (std::size_t j = 1; j < seq.size(); ++j) {
        fwd = fwd * ops[seq[j] - 1];
        bwd = bwd * ops[seq[seq.size() - 1 - j] - 1];
    }
    return fwd + bwd;
}

/// B^r A B^s + B^s A B^r.
inline CMatrix sandwich(const SandwichExponents& exp, const CMatrix& a, const CMatrix& b) {
    require_square(a, "sandwich");
    require_square(b, "sandwich");
    if (a.rows() != b.rows()) throw Error(ErrorKind::kDimensionMismatch, "sandwich: A and B differ in dimension");
    const CMatrix br = power(b, exp.r());
    const CMatrix bs = exp.r() == exp.s() ? br : power(b, exp.s());
    return br * a * bs + bs * a * br;
}

struct SignatureReduction {
    SandwichExponents exponents;
    /// 1-based position of the operand that plays the role of A.
    std::size_t position;
    /// Index i_position of that operand.
    std::size_t index;
};

/**
 * Places A at a position whose index occurs exactly once and B everywhere else.
 * Positions yielding s > r are preferred, then the smallest position.
 */
inline SignatureReduction reduce_signature(const ProductSignature& sig) {
    const std::size_t m = sig.m();
    std::size_t chosen = 0;
    bool chosen_unbalanced = false;
    for (std::size_t p = 1; p <= m; ++p) {
        if (sig.occurrences(sig.sequence()[p - 1]) != 1) continue;
        const bool unbalanced = (p - 1) != (m - p);
        if (chosen == 0 || (unbalanced && !chosen_unbalanced)) {
            chosen = p;
            chosen_unbalanced = unbalanced;
        }
    }
    return {SandwichExponents(static_cast<unsigned>(chosen - 1), static_cast<unsigned>(m - chosen)), chosen,
            sig.sequence()[chosen - 1]};
}

/// Operand list with A at the reduced index and B at every other index.
inline std::vector<CMatrix> reduction_operands(const ProductSignature& sig, const SignatureReduction& red,
                                               const CMatrix& a, const CMatrix& b) {
    std::vector<CMatrix> ops(sig.k(), b);
    ops[red.index - 1] = a;
    return ops;
}

/// The signature (2,...,2,1,2,...,2) with r leading and s trailing copies of index 2.
inline ProductSignature sandwich_signature(const SandwichExponents& exp) {
    std::vector<long long> raw(exp.r(), 2);
    raw.push_back(1);
    raw.insert(raw.end(), exp.s(), 2);
    return validate_signature(raw, 2);
}

}  // namespace perispec
