#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hiermat/encoding.hpp"
#include "hiermat/parallel.hpp"
#include "hiermat/params.hpp"
#include "hiermat/rng.hpp"

namespace hiermat {

/// Symbol content of the rotating disc; one digit per cell.
using DiscState = Word;

/// Probability weights a_0..a_r of affecting gamma consecutive cells per
/// step. `beta` is set when the model came from the Boltzmann constructor;
/// the asymptotic formulas and the gap bounds need it.
struct NoiseModel {
    int p = 2;
    int r = 1;
    std::vector<double> weights;
    std::optional<double> beta;

    NoiseModel() = default;

    NoiseModel(int p_, int r_, std::vector<double> weights_,
               std::optional<double> beta_ = std::nullopt)
        : p(p_), r(r_), weights(std::move(weights_)), beta(beta_) {
        validate();
    }

    void validate() const {
        if (p < 2) throw InvalidParams("branching factor p must be >= 2");
        if (r < 1) throw InvalidParams("depth r must be >= 1");
        if (weights.size() != static_cast<std::size_t>(r) + 1)
            throw InvalidParams("weight vector must have r+1 entries");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw NotNormalized("weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw NotNormalized("weights must sum to 1 (got " + std::to_string(sum) + ")");
    }

    HierParams params() const { return HierParams(p, r, Form::A, weights); }
};

/// Weights proportional to e^{-beta gamma}, normalized numerically so they
/// sum to 1 exactly up to rounding.
inline NoiseModel boltzmann_model(int p, int r, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("Boltzmann noise requires beta > 0");
    std::vector<double> w(static_cast<std::size_t>(r) + 1);
    double sum = 0.0;
    for (int gamma = 0; gamma <= r; ++gamma) {
        w[static_cast<std::size_t>(gamma)] = std::exp(-beta * gamma);
        sum += w[static_cast<std::size_t>(gamma)];
    }
    for (double& x : w) x /= sum;
    return NoiseModel(p, r, std::move(w), beta);
}

enum class MomentSource { MonteCarlo, Analytic, Asymptotic };

inline const char* to_string(MomentSource s) {
    switch (s) {
        case MomentSource::MonteCarlo: return "MonteCarlo";
        case MomentSource::Analytic: return "Analytic";
        case MomentSource::Asymptotic: return "Asymptotic";
    }
    return "?";
}

/// Mean and variance of the accumulated error count, plus sampling metadata
/// (n_trials = 0 for closed-form sources).
struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t n_trials = 0;
    double std_error_mean = 0.0;
    MomentSource source = MomentSource::Analytic;
};

namespace detail {

/// Running products g(l) = prod_{i=0}^{l} lambda^(i) for l = 0..r-1.
inline std::vector<double> g_products(const std::vector<double>& lambda, int r) {
    std::vector<double> g(static_cast<std::size_t>(r));
    double acc = 1.0;
    for (int l = 0; l < r; ++l) {
        acc *= lambda[static_cast<std::size_t>(l)];
        g[static_cast<std::size_t>(l)] = acc;
    }
    return g;
}

} // namespace detail

/// Exact histogram of the error count k over `n_trials` full cycles.
/// Per step: draw gamma, resample the trailing gamma cells uniformly
/// (a cell may keep its value), rotate. Trials use substreams keyed by
/// (seed, trial index); the integer histogram merge makes the result
/// independent of execution order and thread count.
inline std::vector<std::uint64_t> simulate_k_histogram(const NoiseModel& model,
                                                       const DiscState& initial,
                                                       std::uint64_t seed,
                                                       std::uint64_t n_trials) {
    model.validate();
    if (static_cast<int>(initial.size()) != model.r)
        throw InvalidArgument("initial state must have r cells");
    check_word(initial, model.p);
    if (n_trials < 1) throw InvalidArgument("n_trials must be >= 1");

    const int r = model.r;
    const int p = model.p;
    std::vector<double> cumulative(model.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        acc += model.weights[i];
        cumulative[i] = acc;
    }

    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t n_blocks = (n_trials + kBlock - 1) / kBlock;
    std::vector<std::vector<std::uint64_t>> block_hist(
        n_blocks, std::vector<std::uint64_t>(static_cast<std::size_t>(r) + 1, 0));

    for_each_block(n_trials, kBlock, [&](std::uint64_t block, std::uint64_t begin,
                                         std::uint64_t end) {
        auto& hist = block_hist[block];
        std::vector<int> cells(static_cast<std::size_t>(r));
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            Xoshiro256 rng(seed, trial);
            for (int s = 0; s < r; ++s) cells[static_cast<std::size_t>(s)] = initial[static_cast<std::size_t>(s)];
            // circular buffer: slot s of the word lives at (s - 1 + offset) mod r
            int offset = 0;
            for (int step = 0; step < r; ++step) {
                const int gamma = rng.categorical(cumulative);
                for (int s = r - gamma; s < r; ++s)
                    cells[static_cast<std::size_t>((s + offset) % r)] = rng.uniform_below(p);
                offset = (offset - 1 + r) % r;  // rotate right
            }
            int k = 0;  // offset is back to 0 after r steps
            for (int s = 0; s < r; ++s)
                k += (cells[static_cast<std::size_t>(s)] != initial[static_cast<std::size_t>(s)]);
            ++hist[static_cast<std::size_t>(k)];
        }
    });

    std::vector<std::uint64_t> hist(static_cast<std::size_t>(r) + 1, 0);
    for (const auto& h : block_hist)
        for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += h[k];
    return hist;
}

/// Sample mean / unbiased variance / standard error from a k histogram.
inline MomentReport moments_from_histogram(const std::vector<std::uint64_t>& hist) {
    std::uint64_t n = 0;
    for (std::uint64_t c : hist) n += c;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        sum += static_cast<double>(hist[k]) * static_cast<double>(k);
        sumsq += static_cast<double>(hist[k]) * static_cast<double>(k) * static_cast<double>(k);
    }
    const double mean = sum / static_cast<double>(n);
    const double var =
        n > 1 ? std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                                  static_cast<double>(n - 1))
              : 0.0;
    MomentReport report;
    report.mean = mean;
    report.variance = var;
    report.n_trials = n;
    report.std_error_mean = n > 0 ? std::sqrt(std::max(var, 0.0) / static_cast<double>(n)) : 0.0;
    report.source = MomentSource::MonteCarlo;
    return report;
}

/// Monte Carlo moments of the error count after one full cycle.
inline MomentReport simulate_full_cycle(const NoiseModel& model, const DiscState& initial,
                                        std::uint64_t seed, std::uint64_t n_trials) {
    return moments_from_histogram(simulate_k_histogram(model, initial, seed, n_trials));
}

/// Closed-form full-cycle moments (p = 2):
///   mean = (r/2) (1 - g(r-1))
///   var  = (r/4) (1 - r g(r-1)^2 + sum_{j=0}^{r-2} g(r-2-j) g(j))
inline MomentReport analytic_moments(const NoiseModel& model) {
    model.validate();
    if (model.p != 2)
        throw UnsupportedP("closed-form moments are available for p = 2 only");
    const int r = model.r;
    const std::vector<double> lambda = level_values(model.params());
    if (std::abs(lambda[static_cast<std::size_t>(r)] - 1.0) > 1e-12)
        throw NotNormalized("top-level eigenvalue must equal 1");
    const std::vector<double> g = detail::g_products(lambda, r);

    MomentReport report;
    report.source = MomentSource::Analytic;
    report.mean = 0.5 * r * (1.0 - g[static_cast<std::size_t>(r - 1)]);
    double cross = 0.0;
    for (int j = 0; j <= r - 2; ++j)
        cross += g[static_cast<std::size_t>(r - 2 - j)] * g[static_cast<std::size_t>(j)];
    report.variance =
        0.25 * r *
        (1.0 - r * g[static_cast<std::size_t>(r - 1)] * g[static_cast<std::size_t>(r - 1)] +
         cross);
    return report;
}

namespace detail {

/// Infinite-depth product g_inf = prod_{gamma>=1} (1 - e^{-gamma beta}),
/// truncated once the tail factor is within 1e-15 of 1.
inline double g_infinity(double beta) {
    double prod = 1.0;
    for (int gamma = 1; gamma <= 1000000; ++gamma) {
        const double tail = std::exp(-beta * gamma);
        prod *= 1.0 - tail;
        if (tail < 1e-15) return prod;
    }
    throw NonConvergent("g_infinity did not converge within 1e6 factors");
}

} // namespace detail

/// Large-r moments (p = 2, Boltzmann):
///   mean = (r/2) (1 - g_inf)
///   var  = (r/4) (1 - g_inf^2 + 2 g_inf G),  G = sum_{j>=0} (g(j) - g_inf)
/// with g(j) the infinite-depth partial products. The deviation series is
/// summed with the g(j) - g_inf >= 0 orientation, which is the one that
/// reproduces the finite-r variance in the large-r limit.
inline MomentReport asymptotic_moments(const NoiseModel& model) {
    model.validate();
    if (model.p != 2)
        throw UnsupportedP("asymptotic moments are available for p = 2 only");
    if (!model.beta)
        throw NotBoltzmann("asymptotic moments require a Boltzmann model (known beta)");
    const double beta = *model.beta;
    const double g_inf = detail::g_infinity(beta);

    double G = 0.0;
    double g = 1.0;
    bool converged = false;
    for (int j = 0; j < 1000000; ++j) {
        g *= 1.0 - std::exp(-beta * (j + 1));
        const double term = g - g_inf;
        G += term;
        if (term < 1e-15 * std::max(1.0, G)) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NonConvergent("deviation series did not converge within 1e6 terms");

    MomentReport report;
    report.source = MomentSource::Asymptotic;
    report.mean = 0.5 * model.r * (1.0 - g_inf);
    report.variance = 0.25 * model.r * (1.0 - g_inf * g_inf + 2.0 * g_inf * G);
    return report;
}

/// Relaxation data of the two dynamics. tau_pure is the pure-diffusion
/// equilibration time -1/ln(lambda^(r-1)), evaluated through the trailing
/// weight (lambda^(r-1) = 1 - a_r for normalized weights) so it stays finite
/// for gaps far below double epsilon. gap_shifted = g(r-1)^{1/r} is the
/// subleading eigenvalue modulus of the shifted dynamics. For Boltzmann
/// models the bracket e^{-pi^2/(6 r beta)} <= gap <= (1-e^{-beta})^{1/r} is
/// evaluated with 1e-12 slack.
struct EquilibrationReport {
    double tau_pure = 0.0;
    double gap_shifted = 0.0;
    double bound_lo = std::numeric_limits<double>::quiet_NaN();
    double bound_hi = std::numeric_limits<double>::quiet_NaN();
    bool has_bounds = false;
    bool bounds_hold = false;
    bool degenerate_gap = false;  // lambda^(r-1) = 1: tau reported as +inf
};

inline EquilibrationReport equilibration_report(const NoiseModel& model) {
    model.validate();
    const int r = model.r;
    const std::vector<double> lambda = level_values(model.params());
    const double trailing = model.weights[static_cast<std::size_t>(r)];

    EquilibrationReport report;
    if (trailing <= 0.0) {
        report.degenerate_gap = true;
        report.tau_pure = std::numeric_limits<double>::infinity();
    } else {
        report.tau_pure = -1.0 / std::log1p(-trailing);
    }

    double g = 1.0;
    for (int i = 0; i < r; ++i) g *= lambda[static_cast<std::size_t>(i)];
    report.gap_shifted = g > 0.0 ? std::pow(g, 1.0 / static_cast<double>(r)) : 0.0;

    if (model.beta) {
        const double beta = *model.beta;
        report.has_bounds = true;
        report.bound_lo = std::exp(-std::numbers::pi * std::numbers::pi /
                                   (6.0 * static_cast<double>(r) * beta));
        report.bound_hi = std::pow(1.0 - std::exp(-beta), 1.0 / static_cast<double>(r));
        report.bounds_hold = (report.bound_lo <= report.gap_shifted + 1e-12) &&
                             (report.gap_shifted <= report.bound_hi + 1e-12);
    }
    return report;
}

} // namespace hiermat
