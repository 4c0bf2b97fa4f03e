#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hiermat/encoding.hpp"
#include "hiermat/errors.hpp"

namespace hiermat {

/// Zero-cluster structure of an encoding word: m zeros total, arranged in
/// cyclic clusters where nu[i-1] counts clusters of length exactly i. The
/// constraint sum_i i*nu_i = m, sum_i nu_i <= r - m must hold. m = 0 and
/// m = r are dedicated classes with an empty nu.
struct ClusterPartition {
    int m = 0;
    std::vector<int> nu;  // length m (lengths 1..m); empty for m = 0 or m = r

    int cluster_count() const {
        int ell = 0;
        for (int c : nu) ell += c;
        return ell;
    }

    bool operator==(const ClusterPartition& o) const { return m == o.m && nu == o.nu; }
};

/// All nu with sum i*nu_i = m and sum nu_i <= r - m, emitted in descending
/// lexicographic order of (nu_1, nu_2, ...). Deterministic.
inline std::vector<ClusterPartition> enumerate_partitions(int r, int m) {
    if (m < 1 || m > r - 1)
        throw InvalidArgument("cluster partitions require 1 <= m <= r-1");

    std::vector<ClusterPartition> out;
    std::vector<int> nu(static_cast<std::size_t>(m), 0);
    const int max_clusters = r - m;

    // nu_i chosen high-to-low so the output is descending-lex
    auto recurse = [&](auto&& self, int length, int remaining, int clusters) -> void {
        if (remaining == 0) {
            out.push_back(ClusterPartition{m, nu});
            return;
        }
        if (length > remaining) return;
        for (int count = remaining / length; count >= 0; --count) {
            if (clusters + count > max_clusters) continue;
            nu[static_cast<std::size_t>(length - 1)] = count;
            self(self, length + 1, remaining - count * length, clusters + count);
            nu[static_cast<std::size_t>(length - 1)] = 0;
        }
    };
    recurse(recurse, 1, m, 0);
    return out;
}

/// Cyclic zero-cluster classification of a word that is neither all-zero nor
/// zero-free. Runs of zeros wrapping around the word boundary count as one
/// cluster.
inline ClusterPartition classify_word(const Word& w) {
    const int r = static_cast<int>(w.size());
    const int m = zero_count(w);
    if (m == 0 || m == r)
        throw InvalidArgument("classify_word expects a word with 0 < zeros < r");

    std::size_t start = 0;
    while (w[start] == 0) ++start;  // anchor at a nonzero digit

    ClusterPartition part;
    part.m = m;
    part.nu.assign(static_cast<std::size_t>(m), 0);
    int run = 0;
    for (int k = 0; k < r; ++k) {
        const int d = w[(start + static_cast<std::size_t>(k)) % static_cast<std::size_t>(r)];
        if (d == 0) {
            ++run;
        } else if (run > 0) {
            ++part.nu[static_cast<std::size_t>(run - 1)];
            run = 0;
        }
    }
    if (run > 0) ++part.nu[static_cast<std::size_t>(run - 1)];
    return part;
}

/// Number of length-r words over {0..p-1} realizing the class (m; nu):
///   m = 0: (p-1)^r
///   m = r: 1
///   else : r (p-1)^{r-m} (r-m-1)! / ((r-m-ell)! prod_i nu_i!)
/// Intermediates run in checked 128-bit arithmetic; the division is exact.
inline std::uint64_t class_multiplicity(int p, int r, const ClusterPartition& part) {
    using u128 = unsigned __int128;
    const auto mul = [](u128 a, u128 b) -> u128 {
        if (b != 0 && a > static_cast<u128>(-1) / b)
            throw InvalidArgument("class multiplicity overflows 128-bit arithmetic");
        return a * b;
    };
    if (part.m == 0) {
        u128 v = 1;
        for (int i = 0; i < r; ++i) v = mul(v, static_cast<u128>(p - 1));
        return static_cast<std::uint64_t>(v);
    }
    if (part.m == r) return 1;

    const int ell = part.cluster_count();
    u128 num = static_cast<u128>(r);
    for (int i = 0; i < r - part.m; ++i) num = mul(num, static_cast<u128>(p - 1));
    for (int k = r - part.m - ell + 1; k <= r - part.m - 1; ++k)
        num = mul(num, static_cast<u128>(k));
    u128 den = 1;
    for (int c : part.nu)
        for (int k = 2; k <= c; ++k) den = mul(den, static_cast<u128>(k));
    return static_cast<std::uint64_t>(num / den);
}

inline std::string partition_to_string(const ClusterPartition& part) {
    std::string s = "[";
    for (std::size_t i = 0; i < part.nu.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(part.nu[i]);
    }
    s += "]";
    return s;
}

} // namespace hiermat
