#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hiermat/encoding.hpp"
#include "hiermat/params.hpp"
#include "hiermat/partitions.hpp"
#include "hiermat/tensor_ops.hpp"

namespace hiermat {

/// One entry of a spectrum report: eigenvalue, multiplicity and a class
/// label ("P1:mu=2", "P2:m=2,nu=[0,1]", "P3:j=1,m=2,nu=[0,1]").
struct SpectralLine {
    cplx value{};
    std::uint64_t multiplicity = 0;
    std::string label;
};

inline std::uint64_t total_multiplicity(const std::vector<SpectralLine>& lines) {
    std::uint64_t total = 0;
    for (const auto& line : lines) total += line.multiplicity;
    return total;
}

/// Collapse per-class lines into a value-keyed multiset: lines whose values
/// coincide within `tol` merge, multiplicities add, labels join with '+'.
/// Class bookkeeping stays in the original report; this view is for
/// comparisons against dense spectra.
inline std::vector<SpectralLine> collapse_spectrum(std::vector<SpectralLine> lines,
                                                   double tol = 1e-10) {
    std::vector<SpectralLine> out;
    for (auto& line : lines) {
        bool merged = false;
        for (auto& acc : out) {
            if (std::abs(acc.value - line.value) <= tol) {
                acc.multiplicity += line.multiplicity;
                acc.label += "+" + line.label;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(line));
    }
    std::sort(out.begin(), out.end(), [](const SpectralLine& a, const SpectralLine& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

/// Complete spectrum of the block-hierarchical operator: lambda^(mu) =
/// sum_{gamma<=mu} a_gamma. mu = r is nondegenerate; mu < r has multiplicity
/// (p-1) p^{r-mu-1}. Lines are emitted with mu descending.
inline std::vector<SpectralLine> spectrum_Q(const HierParams& params) {
    const std::vector<double> lambda = level_values(params);
    const int p = params.p;
    const int r = params.r;

    std::vector<SpectralLine> lines;
    lines.reserve(static_cast<std::size_t>(r) + 1);
    lines.push_back({cplx(lambda[static_cast<std::size_t>(r)], 0.0), 1,
                     "P1:mu=" + std::to_string(r)});
    for (int mu = r - 1; mu >= 0; --mu) {
        std::uint64_t mult = static_cast<std::uint64_t>(p - 1);
        for (int i = 0; i < r - mu - 1; ++i) mult *= static_cast<std::uint64_t>(p);
        lines.push_back({cplx(lambda[static_cast<std::size_t>(mu)], 0.0), mult,
                         "P1:mu=" + std::to_string(mu)});
    }
    return lines;
}

/// Same spectrum evaluated directly from the q-form coefficients:
///   lambda^(r)  = q_0 + (1 - 1/p) sum_{gamma=1}^{r} p^gamma q_gamma
///   lambda^(mu) = q_0 + (1 - 1/p) sum_{gamma=1}^{mu} p^gamma q_gamma
///                 - p^mu q_{mu+1}
/// Agrees with spectrum_Q on the converted parameters to 1e-12.
inline std::vector<SpectralLine> spectrum_Q_qform(const HierParams& params) {
    if (params.form != Form::Q)
        throw InvalidArgument("spectrum_Q_qform expects parameters in Q form");
    params.validate();
    const int p = params.p;
    const int r = params.r;
    const std::vector<double>& q = params.coeffs;
    const double one_minus = 1.0 - 1.0 / static_cast<double>(p);

    std::vector<double> lambda(static_cast<std::size_t>(r) + 1);
    double weighted = 0.0;  // sum_{gamma=1}^{mu} p^gamma q_gamma
    double pg = 1.0;
    for (int mu = 0; mu <= r; ++mu) {
        if (mu >= 1) {
            pg *= static_cast<double>(p);
            weighted += pg * q[static_cast<std::size_t>(mu)];
        }
        if (mu < r)
            lambda[static_cast<std::size_t>(mu)] =
                q[0] + one_minus * weighted - pg * q[static_cast<std::size_t>(mu) + 1];
        else
            lambda[static_cast<std::size_t>(mu)] = q[0] + one_minus * weighted;
    }

    std::vector<SpectralLine> lines;
    lines.push_back({cplx(lambda[static_cast<std::size_t>(r)], 0.0), 1,
                     "P1:mu=" + std::to_string(r)});
    for (int mu = r - 1; mu >= 0; --mu) {
        std::uint64_t mult = static_cast<std::uint64_t>(p - 1);
        for (int i = 0; i < r - mu - 1; ++i) mult *= static_cast<std::uint64_t>(p);
        lines.push_back({cplx(lambda[static_cast<std::size_t>(mu)], 0.0), mult,
                         "P1:mu=" + std::to_string(mu)});
    }
    return lines;
}

/// Character-basis vector of an encoding word, expanded in the computational
/// basis: entry at basis word k is prod_gamma exp(2 pi i k_gamma j_gamma / p)
/// / sqrt(p^r). Distinct words give orthonormal common eigenvectors of every
/// operator in the family; the eigenvalue class is the trailing-zero count.
inline std::vector<cplx> character_vector(const Word& word, int p) {
    check_word(word, p);
    const int r = static_cast<int>(word.size());
    std::size_t dim = 1;
    for (int i = 0; i < r; ++i) dim *= static_cast<std::size_t>(p);

    // per-slot character table row c_k^{(j)} = exp(2 pi i k j / p)
    std::vector<cplx> slot_chars(static_cast<std::size_t>(p) * word.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(p));
    for (std::size_t s = 0; s < word.size(); ++s)
        for (int k = 0; k < p; ++k) {
            const double phase =
                2.0 * std::numbers::pi * static_cast<double>(k) *
                static_cast<double>(word[s]) / static_cast<double>(p);
            slot_chars[s * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)] =
                norm * cplx(std::cos(phase), std::sin(phase));
        }

    std::vector<cplx> v(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        cplx prod = 1.0;
        std::size_t rest = idx;
        for (int s = r - 1; s >= 0; --s) {
            const int k = static_cast<int>(rest % static_cast<std::size_t>(p));
            rest /= static_cast<std::size_t>(p);
            prod *= slot_chars[static_cast<std::size_t>(s) * static_cast<std::size_t>(p) +
                               static_cast<std::size_t>(k)];
        }
        v[idx] = prod;
    }
    return v;
}

/// Eigenvector of the block-hierarchical operator for the given word;
/// eigenvalue lambda^(trailing zero count).
inline std::vector<cplx> eigenvector_Q(const HierParams& params, const Word& word) {
    params.validate();
    if (static_cast<int>(word.size()) != params.r)
        throw InvalidArgument("word length must equal r");
    return character_vector(word, params.p);
}

namespace detail {

inline cplx root_of_unity(int j, int r) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(r);
    return cplx(std::cos(phase), std::sin(phase));
}

inline cplx class_eigenvalue(const std::vector<double>& lambda, int r,
                             const ClusterPartition& part) {
    if (part.m == 0) return std::pow(cplx(lambda[0], 0.0), r);
    if (part.m == r) return std::pow(cplx(lambda[static_cast<std::size_t>(r)], 0.0), r);
    cplx v = std::pow(cplx(lambda[0], 0.0), r - part.m);
    for (std::size_t i = 0; i < part.nu.size(); ++i) {
        if (part.nu[i] == 0) continue;
        cplx run = 1.0;
        for (std::size_t k = 1; k <= i + 1; ++k) run *= lambda[k];
        for (int c = 0; c < part.nu[i]; ++c) v *= run;
    }
    return v;
}

/// Principal r-th root: argument in (-pi/r, pi/r]. The phase family
/// j = 0..r-1 makes the branch choice a relabeling of j.
inline cplx principal_root(cplx z, int r) {
    if (z == cplx{}) return cplx{};
    const double mag = std::pow(std::abs(z), 1.0 / static_cast<double>(r));
    const double arg = std::arg(z) / static_cast<double>(r);
    return cplx(mag * std::cos(arg), mag * std::sin(arg));
}

} // namespace detail

/// Spectrum of (T Q)^r. Every character word is an eigenvector; the
/// eigenvalue depends on the word's zero-cluster class:
///   m = 0 or r: (lambda^(m))^r, multiplicities (p-1)^r and 1
///   0 < m < r : (lambda^(0))^{r-m} prod_i (lambda^(i)...lambda^(1))^{nu_i}
/// with the menage-style class count. Works for any r >= 1.
inline std::vector<SpectralLine> spectrum_Qrect_power(const HierParams& params) {
    const std::vector<double> lambda = level_values(params);
    const int p = params.p;
    const int r = params.r;

    std::vector<SpectralLine> lines;
    {
        ClusterPartition all_zero{r, {}};
        lines.push_back({detail::class_eigenvalue(lambda, r, all_zero), 1,
                         "P2:m=" + std::to_string(r) + ",nu=[]"});
    }
    {
        ClusterPartition zero_free{0, {}};
        lines.push_back({detail::class_eigenvalue(lambda, r, zero_free),
                         class_multiplicity(p, r, zero_free), "P2:m=0,nu=[]"});
    }
    for (int m = 1; m <= r - 1; ++m) {
        for (const ClusterPartition& part : enumerate_partitions(r, m)) {
            lines.push_back({detail::class_eigenvalue(lambda, r, part),
                             class_multiplicity(p, r, part),
                             "P2:m=" + std::to_string(m) +
                                 ",nu=" + partition_to_string(part)});
        }
    }
    return lines;
}

/// Complete spectrum of T Q for prime r.
///
/// Each zero-cluster class with 0 < m < r splits into the r distinct r-th
/// roots of its power-operator eigenvalue, multiplicity divided by r. The
/// all-zero word keeps the nondegenerate lambda^(r). Zero-free words split
/// by rotation orbit: each of the ((p-1)^r - (p-1))/r free orbits carries
/// all r phases lambda^(0) e^{2 pi i j / r}, while the p-1 constant words
/// contribute to the j = 0 value only, so that value gains an extra p-1.
inline std::vector<SpectralLine> spectrum_Qrect(const HierParams& params) {
    const std::vector<double> lambda = level_values(params);
    const int p = params.p;
    const int r = params.r;
    if (!is_prime(r))
        throw NonPrimeR("the phase-split spectrum requires prime r, got r=" +
                        std::to_string(r));

    std::vector<SpectralLine> lines;
    lines.push_back({cplx(lambda[static_cast<std::size_t>(r)], 0.0), 1,
                     "P3:j=0,m=" + std::to_string(r) + ",nu=[]"});

    std::uint64_t free_orbits = 1;
    for (int i = 0; i < r; ++i) free_orbits *= static_cast<std::uint64_t>(p - 1);
    free_orbits = (free_orbits - static_cast<std::uint64_t>(p - 1)) /
                  static_cast<std::uint64_t>(r);
    for (int j = 0; j < r; ++j) {
        const std::uint64_t mult =
            free_orbits + (j == 0 ? static_cast<std::uint64_t>(p - 1) : 0);
        if (mult == 0) continue;
        lines.push_back({lambda[0] * detail::root_of_unity(j, r), mult,
                         "P3:j=" + std::to_string(j) + ",m=0,nu=[]"});
    }

    for (int m = 1; m <= r - 1; ++m) {
        for (const ClusterPartition& part : enumerate_partitions(r, m)) {
            const cplx big = detail::class_eigenvalue(lambda, r, part);
            const cplx root = detail::principal_root(big, r);
            const std::uint64_t mult =
                class_multiplicity(p, r, part) / static_cast<std::uint64_t>(r);
            for (int j = 0; j < r; ++j) {
                lines.push_back({root * detail::root_of_unity(j, r), mult,
                                 "P3:j=" + std::to_string(j) + ",m=" +
                                     std::to_string(m) +
                                     ",nu=" + partition_to_string(part)});
            }
        }
    }
    return lines;
}

/// Eigenvector of T Q built from a character word chi and a phase index:
///   psi = C^{-1/2} sum_k e^{-2 pi i j (k-1) / r} Lambda^{-(k-1)/r} (TQ)^k chi
/// normalized to unit norm; the eigenvalue is Lambda^{1/r} e^{2 pi i j / r}
/// (principal branch). The all-zero word returns the uniform vector with
/// eigenvalue lambda^(r) for any phase. Refuses zero-eigenvalue classes
/// (the prefactor divides by a root of Lambda) and constant words with a
/// nonzero phase (the sum collapses to zero).
inline std::vector<cplx> eigenvector_Qrect(const HierParams& params, const Word& word,
                                           int j_phase) {
    params.validate();
    const int p = params.p;
    const int r = params.r;
    if (!is_prime(r))
        throw NonPrimeR("phase-split eigenvectors require prime r");
    if (static_cast<int>(word.size()) != r)
        throw InvalidArgument("word length must equal r");
    check_word(word, p);
    if (j_phase < 0 || j_phase >= r)
        throw InvalidArgument("phase index must lie in [0, r)");

    const int m = zero_count(word);
    if (m == r) return character_vector(word, p);  // uniform fixed point

    if (word_period(word) == 1) {
        if (0 < m && m < r)
            throw DegenerateWord("period-1 word with 0 < m < r cannot occur for prime r");
        if (j_phase != 0)
            throw DegenerateWord(
                "constant word generates only the j=0 eigenvector; the phase sum "
                "vanishes otherwise");
    }

    const std::vector<double> lambda = level_values(params);
    cplx root;
    if (m == 0) {
        // anchor at lambda^(0) itself so j = 0 is the phase carried by the
        // constant words; the principal branch would relabel j when
        // lambda^(0) < 0 and break the constant-word construction
        root = cplx(lambda[0], 0.0);
    } else {
        root = detail::principal_root(detail::class_eigenvalue(lambda, r, classify_word(word)), r);
    }
    if (std::abs(root) == 0.0)
        throw ZeroEigenvalueClass(
            "class eigenvalue is zero; the phase construction is singular");
    std::vector<cplx> chi = character_vector(word, p);
    std::vector<cplx> psi(chi.size(), cplx{});
    std::vector<cplx> term = chi;  // (TQ)^k chi
    for (int k = 0; k < r; ++k) {
        if (k > 0) term = apply_Qrect(params, term);
        const cplx coeff =
            std::conj(detail::root_of_unity(j_phase * (k - 1), r)) /
            std::pow(root, k - 1);
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += coeff * term[i];
    }

    double norm2 = 0.0;
    for (const cplx& x : psi) norm2 += std::norm(x);
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DegenerateWord("phase construction produced a vanishing vector");
    for (cplx& x : psi) x /= norm;
    return psi;
}

} // namespace hiermat
