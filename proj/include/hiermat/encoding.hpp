#pragma once

#include <cstddef>
#include <vector>

#include "hiermat/errors.hpp"

namespace hiermat {

/// Encoding word (j_1, ..., j_r) over {0..p-1}. Slot 1 is the most
/// significant digit of the basis index: index(w) = sum_gamma j_gamma
/// p^{r-gamma} (0-based; the 1-based convention adds 1).
using Word = std::vector<int>;

inline void check_word(const Word& w, int p) {
    if (w.empty()) throw InvalidArgument("encoding word must be non-empty");
    for (int d : w)
        if (d < 0 || d >= p) throw InvalidArgument("word digit out of range [0, p)");
}

inline std::size_t word_to_index(const Word& w, int p) {
    std::size_t idx = 0;
    for (int d : w) idx = idx * static_cast<std::size_t>(p) + static_cast<std::size_t>(d);
    return idx;
}

inline Word index_to_word(std::size_t idx, int p, int r) {
    Word w(static_cast<std::size_t>(r));
    for (int k = r - 1; k >= 0; --k) {
        w[static_cast<std::size_t>(k)] = static_cast<int>(idx % static_cast<std::size_t>(p));
        idx /= static_cast<std::size_t>(p);
    }
    return w;
}

/// One step of the translation: (j_1,...,j_r) -> (j_r, j_1, ..., j_{r-1}).
inline Word rotate_right(const Word& w) {
    Word out(w.size());
    out[0] = w.back();
    for (std::size_t k = 1; k < w.size(); ++k) out[k] = w[k - 1];
    return out;
}

inline Word rotate_left(const Word& w) {
    Word out(w.size());
    out[w.size() - 1] = w.front();
    for (std::size_t k = 0; k + 1 < w.size(); ++k) out[k] = w[k + 1];
    return out;
}

inline Word rotate_right_by(Word w, int steps) {
    const int r = static_cast<int>(w.size());
    steps = ((steps % r) + r) % r;
    for (int i = 0; i < steps; ++i) w = rotate_right(w);
    return w;
}

inline int trailing_zero_count(const Word& w) {
    int mu = 0;
    for (auto it = w.rbegin(); it != w.rend() && *it == 0; ++it) ++mu;
    return mu;
}

inline int zero_count(const Word& w) {
    int m = 0;
    for (int d : w) m += (d == 0);
    return m;
}

/// Smallest d >= 1 with rotate^d(w) == w; divides r. Period 1 means the
/// word is constant.
inline int word_period(const Word& w) {
    const int r = static_cast<int>(w.size());
    for (int d = 1; d <= r; ++d) {
        if (r % d != 0) continue;
        bool ok = true;
        for (int k = 0; k < r && ok; ++k)
            ok = (w[static_cast<std::size_t>(k)] == w[static_cast<std::size_t>((k + d) % r)]);
        if (ok) return d;
    }
    return r;
}

inline int hamming_distance(const Word& a, const Word& b) {
    if (a.size() != b.size())
        throw InvalidArgument("hamming distance requires equal-length words");
    int k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) k += (a[i] != b[i]);
    return k;
}

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace hiermat
