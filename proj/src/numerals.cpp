#include "munormal/numerals.hpp"

#include <cmath>
#include <stdexcept>

namespace munormal {

namespace {

// Guard bits: digits past 2^{-(precision + guard)} only widen the enclosure.
constexpr unsigned guard = 16;
// Enclosure ends carry a few more bits than the value so that outward
// rounding stays well below 2^{1 - precision}.
constexpr unsigned end_bits = 8;

void check_precision(unsigned precision) {
    if (precision < 8 || precision > (1u << 20)) throw std::invalid_argument("precision must lie in [8, 2^20] bits");
}

// value/lo/hi from an exact rational, widened by [below, above] >= 0.
RealValue from_rational(const Rational& exact, const Rational& below, const Rational& above, unsigned precision) {
    RealValue r;
    r.precision = precision;
    r.value = round_rational(exact, precision, MPFR_RNDN);
    Rational lo = exact - below, hi = exact + above;
    r.lo = round_rational(lo, precision + end_bits, MPFR_RNDD);
    r.hi = round_rational(hi, precision + end_bits, MPFR_RNDU);
    return r;
}

Rational pow2_neg(unsigned e) {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, e);
    return Rational(Integer(1), den);
}

}  // namespace

bool RealValue::contains(const Rational& x) const {
    return lo.to_rational() <= x && x <= hi.to_rational();
}

bool RealValue::extension_contains(const Rational& x) const {
    const Rational t = tail.to_rational();
    return lo.to_rational() - t <= x && x <= hi.to_rational() + t;
}

BigFloat RealValue::radius() const {
    WorkingPrecision wp(precision + end_bits + 2);
    BigFloat a = hi - value, b = value - lo;
    return a > b ? a : b;
}

std::string RealValue::to_string(int digits) const {
    return value.to_string(digits) + " +/- " + radius().to_string(6);
}

RealValue qary_value(WordView digits, unsigned q, unsigned precision) {
    check_precision(precision);
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    for (Digit d : digits)
        if (d >= q) throw std::invalid_argument("digit " + std::to_string(d) + " out of range for q = " + std::to_string(q));
    const double need = double(precision + guard) / std::log2(double(q));
    const std::size_t used = std::min<std::size_t>(digits.size(), std::size_t(std::ceil(need)) + 1);
    Integer num = 0, scale = 1;
    for (std::size_t n = 0; n < used; ++n) {
        num = num * q + digits[n];
        scale *= q;
    }
    const Rational exact(num, scale);
    // Unread digits add less than q^{-used}; any extension adds at most q^{-len}.
    const Rational cut = used < digits.size() ? Rational(Integer(1), scale) : Rational(0);
    RealValue r = from_rational(exact, 0, cut, precision);
    r.digits_used = used;
    Integer full;
    mpz_ui_pow_ui(full.get_mpz_t(), q, std::min<std::size_t>(digits.size(), used + 64));
    r.tail = round_rational(Rational(Integer(1), full), 64, MPFR_RNDU);
    return r;
}

RealValue lueroth_value(WordView digits, unsigned precision) {
    check_precision(precision);
    for (Digit d : digits)
        if (d < 2) throw std::invalid_argument("Lueroth digits must be >= 2");
    const Rational limit = pow2_neg(precision + guard);
    Rational sum = 0, factor = 1;
    std::size_t used = 0;
    while (used < digits.size() && factor >= limit) {
        const Integer a = digits[used];
        sum += factor / Rational(a);
        factor /= Rational(a * (a - 1));
        ++used;
    }
    // The remainder after `used` digits is factor * y with y in (0, 1].
    RealValue r = from_rational(sum, 0, used < digits.size() ? factor : Rational(0), precision);
    r.digits_used = used;
    r.tail = round_rational(factor, 64, MPFR_RNDU);
    return r;
}

RealValue beta_value(WordView digits, const ParryData& data, unsigned precision) {
    check_precision(precision);
    BetaShift language(data);
    if (!language.admissible(digits)) throw std::invalid_argument("digits are not admissible for beta = " + data.id());
    const unsigned bits = precision + 32;
    const auto [beta_lo, beta_hi] = data.beta_enclosure(bits);
    const double log2_beta = std::log2(beta_lo.to_double(MPFR_RNDD));
    const std::size_t used =
        std::min<std::size_t>(digits.size(), std::size_t(std::ceil(double(precision + guard) / log2_beta)) + 1);

    // The value is decreasing in beta: the lower end uses beta_hi, the upper beta_lo.
    BigFloat lo = BigFloat::zero(bits), hi = BigFloat::zero(bits);
    for (std::size_t n = used; n-- > 0;) {
        mpfr_add_ui(lo.get(), lo.get(), digits[n], MPFR_RNDD);
        mpfr_div(lo.get(), lo.get(), beta_hi.get(), MPFR_RNDD);
        mpfr_add_ui(hi.get(), hi.get(), digits[n], MPFR_RNDU);
        mpfr_div(hi.get(), hi.get(), beta_lo.get(), MPFR_RNDU);
    }
    auto inv_power = [&](std::size_t e) {
        BigFloat t = BigFloat::zero(bits);
        mpfr_ui_div(t.get(), 1, beta_lo.get(), MPFR_RNDU);
        mpfr_pow_ui(t.get(), t.get(), (unsigned long)e, MPFR_RNDU);
        return t;
    };
    // Admissible continuations of a prefix of length K add less than beta^{-K}.
    if (used < digits.size()) mpfr_add(hi.get(), hi.get(), inv_power(used).get(), MPFR_RNDU);

    RealValue r;
    r.precision = precision;
    r.digits_used = used;
    {
        WorkingPrecision wp(bits);
        BigFloat mid = (lo + hi) / BigFloat(2);
        r.value = BigFloat::zero(precision);
        mpfr_set(r.value.get(), mid.get(), MPFR_RNDN);
    }
    r.lo = BigFloat::zero(precision + end_bits);
    r.hi = BigFloat::zero(precision + end_bits);
    mpfr_set(r.lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set(r.hi.get(), hi.get(), MPFR_RNDU);
    r.tail = BigFloat::zero(64);
    mpfr_set(r.tail.get(), inv_power(std::min<std::size_t>(digits.size(), used + 64)).get(), MPFR_RNDU);
    return r;
}

RealValue cf_value(WordView digits, unsigned precision) {
    check_precision(precision);
    for (Digit d : digits)
        if (d < 1) throw std::invalid_argument("continued fraction digits must be >= 1");
    Integer limit;
    mpz_ui_pow_ui(limit.get_mpz_t(), 2, precision + guard);
    // p_{-1} = 1, q_{-1} = 0; p_0 = 0, q_0 = 1.
    Integer p_prev = 1, q_prev = 0, p = 0, q = 1;
    std::size_t used = 0;
    while (used < digits.size() && q * q <= limit) {
        const Integer a = digits[used];
        Integer pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        ++used;
    }
    const Rational exact(p, q);
    const Rational bound(Integer(1), q * q);  // |x - p_k/q_k| <= 1/q_k^2
    const Rational cut = used < digits.size() ? bound : Rational(0);
    RealValue r = from_rational(exact, cut, cut, precision);
    r.digits_used = used;
    r.tail = round_rational(bound, 64, MPFR_RNDU);
    return r;
}

}  // namespace munormal
