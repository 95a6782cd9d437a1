#pragma once

// Reference computations written independently of the library code paths.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "munormal/word.hpp"

namespace oracle {

using munormal::Digit;
using munormal::Word;

inline std::uint64_t naive_count(const Word& text, const Word& pattern, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i + pattern.size() <= n; ++i) {
        bool ok = true;
        for (std::size_t t = 0; t < pattern.size() && ok; ++t) ok = text[i + t] == pattern[t];
        c += ok;
    }
    return c;
}

// Golden-mean language: binary words without the factor 11.
inline bool golden_admissible(const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 1) return false;
        if (i + 1 < w.size() && w[i] == 1 && w[i + 1] == 1) return false;
    }
    return true;
}

inline std::uint64_t fibonacci(unsigned n) {  // F_1 = F_2 = 1
    std::uint64_t a = 0, b = 1;
    for (unsigned i = 0; i < n; ++i) {
        const std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

inline std::vector<Word> all_words(Digit lo, Digit hi, std::size_t k) {
    std::vector<Word> out;
    Word w(k, lo);
    while (true) {
        out.push_back(w);
        std::size_t p = k;
        while (p > 0 && w[p - 1] == hi) w[--p] = lo;
        if (p == 0) break;
        ++w[p - 1];
    }
    return out;
}

// [0; b_1, ..., b_k, tail] evaluated from the innermost term.
inline mpq_class cf_eval(const Word& b, const mpq_class& tail) {
    mpq_class x = tail;  // value of the remaining continued fraction
    for (std::size_t i = b.size(); i-- > 0;) {
        mpq_class d = mpq_class(b[i]) + x;
        x = 1 / d;
    }
    return x;
}

// Gauss cylinder of b: the x in [0,1) whose expansion starts with b are
// [0; b_1, ..., b_k + t] with t in [0, 1].
inline std::pair<mpq_class, mpq_class> cf_interval(const Word& b) {
    if (b.empty()) return {0, 1};
    mpq_class a = cf_eval(b, 0), c = cf_eval(b, 1);
    // With the empty tail the last partial quotient is b_k + 0; with tail 1 it
    // is effectively b_k + 1.
    if (a > c) std::swap(a, c);
    return {a, c};
}

inline double mpq_to_double(const mpq_class& q) { return q.get_d(); }

// (1/log 2) * log((1 + hi)/(1 + lo)) computed as log1p of the exact ratio gap.
inline double gauss_measure(const Word& b) {
    auto [lo, hi] = cf_interval(b);
    mpq_class gap = (hi - lo) / (1 + lo);
    return std::log1p(gap.get_d()) / std::log(2.0);
}

// Composite Simpson rule for (1/log 2) * integral dx/(1+x) on [a, b].
inline double gauss_quadrature(double a, double b, int steps = 2000) {
    const double h = (b - a) / steps;
    double s = 0;
    for (int i = 0; i <= steps; ++i) {
        const double x = a + i * h;
        const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        s += w / (1 + x);
    }
    return s * h / 3 / std::log(2.0);
}

inline double lueroth_digit(Digit t) { return t < 2 ? 0.0 : 1.0 / (double(t) * (t - 1)); }

inline Word random_word(std::mt19937_64& rng, Digit lo, Digit hi, std::size_t n) {
    std::uniform_int_distribution<Digit> d(lo, hi);
    Word w(n);
    for (auto& x : w) x = d(rng);
    return w;
}

}  // namespace oracle
