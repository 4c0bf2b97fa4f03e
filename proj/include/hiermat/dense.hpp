#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "hiermat/encoding.hpp"
#include "hiermat/params.hpp"
#include "hiermat/tensor_ops.hpp"

namespace hiermat {

/// Refuse to materialize matrices above this dimension unless the caller
/// raises the cap explicitly; larger work goes through the matrix-free path.
inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Dense complex matrix tagged with the operator it represents. Entries are
/// row-major. Real operators are stored with zero imaginary parts so that
/// spectra and eigenvectors share one numeric type.
class DenseOperator {
public:
    DenseOperator() = default;

    DenseOperator(std::size_t dim, OperatorKind kind)
        : dim_(dim), kind_(kind), entries_(dim * dim, cplx{}) {}

    std::size_t dim() const { return dim_; }
    OperatorKind kind() const { return kind_; }
    void set_kind(OperatorKind k) { kind_ = k; }

    cplx& at(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    const std::vector<cplx>& entries() const { return entries_; }

    cplx trace() const {
        cplx t{};
        for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
        return t;
    }

    std::vector<cplx> matvec(const std::vector<cplx>& v) const {
        detail::check_vector_size(v.size(), dim_);
        std::vector<cplx> out(dim_, cplx{});
        for (std::size_t i = 0; i < dim_; ++i) {
            cplx acc{};
            const cplx* row = entries_.data() + i * dim_;
            for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * v[j];
            out[i] = acc;
        }
        return out;
    }

    DenseOperator multiply(const DenseOperator& rhs) const {
        if (dim_ != rhs.dim_) throw InvalidArgument("dimension mismatch in matrix product");
        DenseOperator out(dim_, OperatorKind::Custom);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t k = 0; k < dim_; ++k) {
                const cplx aik = at(i, k);
                if (aik == cplx{}) continue;
                const cplx* rrow = rhs.entries_.data() + k * dim_;
                cplx* orow = out.entries_.data() + i * dim_;
                for (std::size_t j = 0; j < dim_; ++j) orow[j] += aik * rrow[j];
            }
        }
        return out;
    }

    DenseOperator power(int n) const {
        DenseOperator result(dim_, OperatorKind::Power);
        for (std::size_t i = 0; i < dim_; ++i) result.at(i, i) = 1.0;
        DenseOperator base = *this;
        // small n only; plain repeated multiply keeps rounding predictable
        for (int k = 0; k < n; ++k) result = result.multiply(base);
        result.set_kind(OperatorKind::Power);
        return result;
    }

    /// this - z * I, used for rank-deficiency multiplicity checks.
    DenseOperator shifted(cplx z) const {
        DenseOperator out = *this;
        out.set_kind(OperatorKind::Custom);
        for (std::size_t i = 0; i < dim_; ++i) out.at(i, i) -= z;
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

private:
    std::size_t dim_ = 0;
    OperatorKind kind_ = OperatorKind::Custom;
    std::vector<cplx> entries_;
};

namespace detail {

inline std::size_t checked_dimension(const HierParams& params, std::size_t cap) {
    const std::size_t dim = params.dimension();
    if (dim > cap)
        throw DimensionLimitExceeded("p^r = " + std::to_string(dim) +
                                     " exceeds the dense cap " + std::to_string(cap));
    return dim;
}

} // namespace detail

/// Tensor product of (r - gamma) identities with gamma averaging factors:
/// block-diagonal, p^{r-gamma} identical blocks of p^gamma with constant
/// entries p^{-gamma}.
inline DenseOperator build_S(const HierParams& params, int gamma,
                             std::size_t dense_cap = kDefaultDenseCap) {
    params.validate();
    if (gamma < 0 || gamma > params.r) throw InvalidArgument("gamma must lie in [0, r]");
    const std::size_t dim = detail::checked_dimension(params, dense_cap);

    DenseOperator op(dim, OperatorKind::S_gamma);
    std::size_t block = 1;
    for (int i = 0; i < gamma; ++i) block *= static_cast<std::size_t>(params.p);
    const double value = 1.0 / static_cast<double>(block);
    for (std::size_t start = 0; start < dim; start += block)
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t j = 0; j < block; ++j) op.at(start + i, start + j) = value;
    return op;
}

/// sum_gamma a_gamma S_gamma, materialized. The off-diagonal entry at
/// ultrametric level gamma equals the q-form coefficient q_gamma.
inline DenseOperator build_Q(const HierParams& params,
                             std::size_t dense_cap = kDefaultDenseCap) {
    const HierParams ap = convert_coeffs(params, Form::A);
    const std::size_t dim = detail::checked_dimension(ap, dense_cap);

    DenseOperator op(dim, OperatorKind::Q);
    for (int gamma = 0; gamma <= ap.r; ++gamma) {
        if (ap.coeffs[static_cast<std::size_t>(gamma)] == 0.0) continue;
        std::size_t block = 1;
        for (int i = 0; i < gamma; ++i) block *= static_cast<std::size_t>(ap.p);
        const double value =
            ap.coeffs[static_cast<std::size_t>(gamma)] / static_cast<double>(block);
        for (std::size_t start = 0; start < dim; start += block)
            for (std::size_t i = 0; i < block; ++i)
                for (std::size_t j = 0; j < block; ++j) op.at(start + i, start + j) += value;
    }
    return op;
}

/// Permutation matrix of the cyclic slot rotation: basis word w maps to
/// rotate_right(w). T^r = identity.
inline DenseOperator build_T(const HierParams& params,
                             std::size_t dense_cap = kDefaultDenseCap) {
    params.validate();
    const std::size_t dim = detail::checked_dimension(params, dense_cap);
    const std::size_t stride = dim / static_cast<std::size_t>(params.p);

    DenseOperator op(dim, OperatorKind::T);
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t last = j % static_cast<std::size_t>(params.p);
        op.at(last * stride + j / static_cast<std::size_t>(params.p), j) = 1.0;
    }
    return op;
}

/// The block-rectangular operator T * Q.
inline DenseOperator build_Qrect(const HierParams& params,
                                 std::size_t dense_cap = kDefaultDenseCap) {
    DenseOperator out = build_T(params, dense_cap).multiply(build_Q(params, dense_cap));
    out.set_kind(OperatorKind::Qrect);
    return out;
}

/// Numeric rank by Gaussian elimination with full pivoting; pivots with
/// modulus <= tol count as zero. Calibrated for coefficient magnitudes
/// around [0.1, 1] at desk scale.
inline std::size_t rank_by_elimination(DenseOperator m, double tol = 1e-8) {
    const std::size_t n = m.dim();
    std::size_t rank = 0;
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;

    for (std::size_t step = 0; step < n; ++step) {
        // full pivot search over the active submatrix
        double best = 0.0;
        std::size_t pi = step, pj = step;
        for (std::size_t i = step; i < n; ++i)
            for (std::size_t j = step; j < n; ++j) {
                const double a = std::abs(m.at(i, cols[j]));
                if (a > best) { best = a; pi = i; pj = j; }
            }
        if (best <= tol) break;
        ++rank;
        std::swap(cols[step], cols[pj]);
        if (pi != step)
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(step, j), m.at(pi, j));
        const cplx pivot = m.at(step, cols[step]);
        for (std::size_t i = step + 1; i < n; ++i) {
            const cplx factor = m.at(i, cols[step]) / pivot;
            if (factor == cplx{}) continue;
            for (std::size_t j = step; j < n; ++j)
                m.at(i, cols[j]) -= factor * m.at(step, cols[j]);
        }
    }
    return rank;
}

} // namespace hiermat
