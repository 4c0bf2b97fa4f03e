#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hiermat/encoding.hpp"
#include "hiermat/params.hpp"

namespace hiermat {

using cplx = std::complex<double>;

enum class OperatorKind { S_gamma, Q, T, Qrect, Power, Custom };

inline const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::S_gamma: return "S_gamma";
        case OperatorKind::Q: return "Q";
        case OperatorKind::T: return "T";
        case OperatorKind::Qrect: return "Qrect";
        case OperatorKind::Power: return "Power";
        case OperatorKind::Custom: return "Custom";
    }
    return "?";
}

namespace detail {

inline void check_vector_size(std::size_t n, std::size_t expected) {
    if (n != expected)
        throw InvalidArgument("vector length " + std::to_string(n) +
                              " does not match operator dimension " +
                              std::to_string(expected));
}

} // namespace detail

/// Averaging operator on the trailing `gamma` tensor slots: every aligned
/// block of p^gamma consecutive entries is replaced by its block mean.
/// O(p^r) per call; never materializes a matrix.
template <typename Scalar>
std::vector<Scalar> apply_S(const std::vector<Scalar>& v, int p, int r, int gamma) {
    if (gamma < 0 || gamma > r) throw InvalidArgument("gamma must lie in [0, r]");
    std::size_t dim = 1;
    for (int i = 0; i < r; ++i) dim *= static_cast<std::size_t>(p);
    detail::check_vector_size(v.size(), dim);
    if (gamma == 0) return v;

    std::size_t block = 1;
    for (int i = 0; i < gamma; ++i) block *= static_cast<std::size_t>(p);

    std::vector<Scalar> out(dim);
    for (std::size_t start = 0; start < dim; start += block) {
        Scalar sum{};
        for (std::size_t k = 0; k < block; ++k) sum += v[start + k];
        const Scalar mean = sum / static_cast<double>(block);
        for (std::size_t k = 0; k < block; ++k) out[start + k] = mean;
    }
    return out;
}

/// Sum_gamma a_gamma S_gamma applied to v in O(p^r r): level block means are
/// built incrementally (each level's means from the previous level's).
template <typename Scalar>
std::vector<Scalar> apply_Q(const HierParams& params, const std::vector<Scalar>& v) {
    const HierParams ap = convert_coeffs(params, Form::A);
    const int p = ap.p;
    const int r = ap.r;
    const std::size_t dim = ap.dimension();
    detail::check_vector_size(v.size(), dim);

    std::vector<Scalar> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = ap.coeffs[0] * v[i];

    // means[b] = mean of block b at the current level
    std::vector<Scalar> means(v);
    std::size_t nblocks = dim;
    for (int gamma = 1; gamma <= r; ++gamma) {
        nblocks /= static_cast<std::size_t>(p);
        std::vector<Scalar> next(nblocks);
        for (std::size_t b = 0; b < nblocks; ++b) {
            Scalar sum{};
            for (int k = 0; k < p; ++k)
                sum += means[b * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)];
            next[b] = sum / static_cast<double>(p);
        }
        means = std::move(next);
        if (ap.coeffs[gamma] == 0.0) continue;
        const std::size_t block = dim / nblocks;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const Scalar term = ap.coeffs[gamma] * means[b];
            for (std::size_t k = 0; k < block; ++k) out[b * block + k] += term;
        }
    }
    return out;
}

/// Translation as an index permutation: entry at word w moves to the word
/// rotated right by one slot.
template <typename Scalar>
std::vector<Scalar> apply_T(const std::vector<Scalar>& v, int p, int r) {
    std::size_t dim = 1;
    for (int i = 0; i < r; ++i) dim *= static_cast<std::size_t>(p);
    detail::check_vector_size(v.size(), dim);
    const std::size_t stride = dim / static_cast<std::size_t>(p);

    std::vector<Scalar> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t last = i % static_cast<std::size_t>(p);
        out[last * stride + i / static_cast<std::size_t>(p)] = v[i];
    }
    return out;
}

template <typename Scalar>
std::vector<Scalar> apply_T_inverse(const std::vector<Scalar>& v, int p, int r) {
    std::size_t dim = 1;
    for (int i = 0; i < r; ++i) dim *= static_cast<std::size_t>(p);
    detail::check_vector_size(v.size(), dim);
    const std::size_t stride = dim / static_cast<std::size_t>(p);

    std::vector<Scalar> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t first = i / stride;
        out[(i % stride) * static_cast<std::size_t>(p) + first] = v[i];
    }
    return out;
}

/// T * Q: randomize-then-rotate, one evolution step of the shifted dynamics.
template <typename Scalar>
std::vector<Scalar> apply_Qrect(const HierParams& params, const std::vector<Scalar>& v) {
    return apply_T(apply_Q(params, v), params.p, params.r);
}

/// Matrix-free application of a named operator; `gamma` is consumed only by
/// S_gamma, `Power` applies (T Q)^r.
template <typename Scalar>
std::vector<Scalar> apply_fast(const HierParams& params, OperatorKind kind,
                               const std::vector<Scalar>& v, int gamma = 0) {
    switch (kind) {
        case OperatorKind::S_gamma: return apply_S(v, params.p, params.r, gamma);
        case OperatorKind::Q: return apply_Q(params, v);
        case OperatorKind::T: return apply_T(v, params.p, params.r);
        case OperatorKind::Qrect: return apply_Qrect(params, v);
        case OperatorKind::Power: {
            std::vector<Scalar> w = v;
            for (int i = 0; i < params.r; ++i) w = apply_Qrect(params, w);
            return w;
        }
        case OperatorKind::Custom:
            throw InvalidArgument("apply_fast has no kernel for Custom operators");
    }
    throw InvalidArgument("unknown operator kind");
}

/// Apply one p x p matrix (row-major) to a single tensor slot (1-based).
/// Used by the moment-generator machinery.
template <typename Scalar>
std::vector<Scalar> apply_slot_matrix(const std::vector<Scalar>& v, int p, int r,
                                      int slot, const std::vector<Scalar>& m) {
    if (slot < 1 || slot > r) throw InvalidArgument("slot must lie in [1, r]");
    if (m.size() != static_cast<std::size_t>(p) * static_cast<std::size_t>(p))
        throw InvalidArgument("slot matrix must be p x p");
    std::size_t dim = 1;
    for (int i = 0; i < r; ++i) dim *= static_cast<std::size_t>(p);
    detail::check_vector_size(v.size(), dim);

    // index = hi * (p * lo_size) + digit * lo_size + lo, digit = slot's value
    std::size_t lo_size = 1;
    for (int i = 0; i < r - slot; ++i) lo_size *= static_cast<std::size_t>(p);

    std::vector<Scalar> out(dim, Scalar{});
    const std::size_t chunk = lo_size * static_cast<std::size_t>(p);
    for (std::size_t hi = 0; hi < dim / chunk; ++hi) {
        for (std::size_t lo = 0; lo < lo_size; ++lo) {
            const std::size_t base = hi * chunk + lo;
            for (int a = 0; a < p; ++a) {
                Scalar acc{};
                for (int b = 0; b < p; ++b)
                    acc += m[static_cast<std::size_t>(a * p + b)] *
                           v[base + static_cast<std::size_t>(b) * lo_size];
                out[base + static_cast<std::size_t>(a) * lo_size] = acc;
            }
        }
    }
    return out;
}

} // namespace hiermat
