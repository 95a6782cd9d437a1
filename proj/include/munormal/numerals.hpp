#pragma once

#include <string>

#include "munormal/bigfloat.hpp"
#include "munormal/languages.hpp"
#include "munormal/word.hpp"

namespace munormal {

// Value of a finite digit word with a certified enclosure.
struct RealValue {
    BigFloat value;  // nearest at `precision` bits
    BigFloat lo, hi;  // enclose the exact value of the finite word
    BigFloat tail;    // every infinite extension lies in [lo - tail, hi + tail]
    unsigned precision = 0;
    std::size_t digits_used = 0;  // digits read before the precision limit

    bool contains(const Rational& x) const;
    bool extension_contains(const Rational& x) const;
    BigFloat radius() const;  // max distance from value to the enclosure ends
    // "<value> +/- <radius>"
    std::string to_string(int digits = 0) const;
};

// sum d_h q^{-h}
RealValue qary_value(WordView digits, unsigned q, unsigned precision);
// 1/a_1 + sum_{n>=2} prod_{t<n} 1/(a_t(a_t - 1)) * 1/a_n
RealValue lueroth_value(WordView digits, unsigned precision);
// sum d_n beta^{-n}; beta is certified from the expansion of 1
RealValue beta_value(WordView digits, const ParryData& data, unsigned precision);
// 1/(b_1 + 1/(b_2 + ...)) from the convergent p_k/q_k
RealValue cf_value(WordView digits, unsigned precision);

}  // namespace munormal
