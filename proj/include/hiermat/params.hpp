#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hiermat/errors.hpp"

namespace hiermat {

/// The four equivalent coefficient parameterizations of one operator family
/// member: A (linear combination of the averaging operators), Q (raw block
/// entries), B (product form) and C (exponential form).
enum class Form { A, Q, B, C };

inline const char* to_string(Form f) {
    switch (f) {
        case Form::A: return "A";
        case Form::Q: return "Q";
        case Form::B: return "B";
        case Form::C: return "C";
    }
    return "?";
}

inline Form form_from_string(const std::string& s) {
    if (s == "A") return Form::A;
    if (s == "Q") return Form::Q;
    if (s == "B") return Form::B;
    if (s == "C") return Form::C;
    throw InvalidArgument("unknown coefficient form '" + s + "'");
}

/// Defining data of a block-hierarchical operator: branching factor p,
/// depth r, and a coefficient vector of length r+1 in one of the four forms.
struct HierParams {
    int p = 2;
    int r = 1;
    Form form = Form::A;
    std::vector<double> coeffs;  // indexed gamma = 0..r

    HierParams() = default;

    HierParams(int p_, int r_, Form form_, std::vector<double> coeffs_)
        : p(p_), r(r_), form(form_), coeffs(std::move(coeffs_)) {
        validate();
    }

    void validate() const {
        if (p < 2) throw InvalidParams("branching factor p must be >= 2");
        if (r < 1) throw InvalidParams("depth r must be >= 1");
        if (coeffs.size() != static_cast<std::size_t>(r) + 1)
            throw InvalidParams("coefficient vector must have r+1 = " +
                                std::to_string(r + 1) + " entries, got " +
                                std::to_string(coeffs.size()));
        for (double c : coeffs)
            if (!std::isfinite(c)) throw InvalidParams("coefficients must be finite");
    }

    /// dim = p^r of the operators this parameter set generates; saturates at
    /// SIZE_MAX so cap comparisons stay meaningful for large r.
    std::size_t dimension() const {
        std::size_t d = 1;
        for (int i = 0; i < r; ++i) {
            if (d > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(p))
                return std::numeric_limits<std::size_t>::max();
            d *= static_cast<std::size_t>(p);
        }
        return d;
    }
};

namespace detail {

inline std::vector<double> a_to_q(int p, int r, const std::vector<double>& a) {
    // q_gamma = sum_{mu=gamma}^{r} a_mu p^{-mu}; accumulate from the tail.
    std::vector<double> q(r + 1);
    double acc = 0.0;
    for (int gamma = r; gamma >= 0; --gamma) {
        acc += a[gamma] * std::pow(static_cast<double>(p), -gamma);
        q[gamma] = acc;
    }
    return q;
}

inline std::vector<double> q_to_a(int p, int r, const std::vector<double>& q) {
    // a_gamma = p^gamma (q_gamma - q_{gamma+1}), with q_{r+1} = 0.
    std::vector<double> a(r + 1);
    for (int gamma = 0; gamma <= r; ++gamma) {
        const double next = (gamma == r) ? 0.0 : q[gamma + 1];
        a[gamma] = std::pow(static_cast<double>(p), gamma) * (q[gamma] - next);
    }
    return a;
}

inline std::vector<double> a_to_b(int r, const std::vector<double>& a) {
    // b_0 = a_0 - 1, b_gamma = a_gamma / sum_{mu<gamma} a_mu. Undefined when a
    // partial sum vanishes.
    std::vector<double> b(r + 1);
    b[0] = a[0] - 1.0;
    double partial = 0.0;
    for (int gamma = 1; gamma <= r; ++gamma) {
        partial += a[gamma - 1];
        if (partial == 0.0)
            throw DegenerateConversion("partial sum of a-coefficients up to gamma=" +
                                       std::to_string(gamma - 1) +
                                       " is zero; b-form undefined");
        b[gamma] = a[gamma] / partial;
    }
    return b;
}

inline std::vector<double> b_to_a(int r, const std::vector<double>& b) {
    // a_0 = 1 + b_0, a_gamma = b_gamma prod_{mu<gamma} (1 + b_mu).
    std::vector<double> a(r + 1);
    a[0] = 1.0 + b[0];
    double prod = 1.0;
    for (int gamma = 1; gamma <= r; ++gamma) {
        prod *= 1.0 + b[gamma - 1];
        a[gamma] = b[gamma] * prod;
    }
    return a;
}

inline std::vector<double> b_to_c(int r, const std::vector<double>& b) {
    std::vector<double> c(r + 1);
    for (int gamma = 0; gamma <= r; ++gamma) {
        if (b[gamma] <= -1.0)
            throw DegenerateConversion("b_" + std::to_string(gamma) +
                                       " <= -1; c-form undefined");
        c[gamma] = std::log1p(b[gamma]);
    }
    return c;
}

inline std::vector<double> c_to_b(int r, const std::vector<double>& c) {
    std::vector<double> b(r + 1);
    for (int gamma = 0; gamma <= r; ++gamma) b[gamma] = std::expm1(c[gamma]);
    return b;
}

} // namespace detail

/// Re-express the same operator in another coefficient form. All conversions
/// route through the A form. Throws DegenerateConversion where the target
/// form does not exist (zero partial sums for B, b_gamma <= -1 for C).
inline HierParams convert_coeffs(const HierParams& params, Form target) {
    params.validate();
    if (params.form == target) return params;

    // to A
    std::vector<double> a;
    switch (params.form) {
        case Form::A: a = params.coeffs; break;
        case Form::Q: a = detail::q_to_a(params.p, params.r, params.coeffs); break;
        case Form::B: a = detail::b_to_a(params.r, params.coeffs); break;
        case Form::C:
            a = detail::b_to_a(params.r, detail::c_to_b(params.r, params.coeffs));
            break;
    }

    // from A
    std::vector<double> out;
    switch (target) {
        case Form::A: out = std::move(a); break;
        case Form::Q: out = detail::a_to_q(params.p, params.r, a); break;
        case Form::B: out = detail::a_to_b(params.r, a); break;
        case Form::C: out = detail::b_to_c(params.r, detail::a_to_b(params.r, a)); break;
    }
    return HierParams(params.p, params.r, target, std::move(out));
}

/// Cumulative coefficient sums lambda^(mu) = sum_{gamma<=mu} a_gamma for
/// mu = 0..r; these are the level eigenvalues of the block-hierarchical
/// operator. Input may be in any form.
inline std::vector<double> level_values(const HierParams& params) {
    const HierParams ap = convert_coeffs(params, Form::A);
    std::vector<double> lambda(ap.coeffs.size());
    double acc = 0.0;
    for (std::size_t mu = 0; mu < ap.coeffs.size(); ++mu) {
        acc += ap.coeffs[mu];
        lambda[mu] = acc;
    }
    return lambda;
}

} // namespace hiermat
