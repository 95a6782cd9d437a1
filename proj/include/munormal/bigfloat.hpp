#pragma once

// Thin value-semantics wrapper over MPFR plus GMP rationals. Working precision
// is thread-local so concurrent evaluation at different precisions is safe.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace munormal {

using Rational = mpq_class;
using Integer = mpz_class;

// Mantissa bits from MUNORMAL_PRECISION, default 128.
unsigned default_precision();

unsigned working_precision();

class WorkingPrecision {
public:
    explicit WorkingPrecision(unsigned bits);
    ~WorkingPrecision();
    WorkingPrecision(const WorkingPrecision&) = delete;
    WorkingPrecision& operator=(const WorkingPrecision&) = delete;

private:
    unsigned saved_;
};

class BigFloat {
public:
    BigFloat();
    BigFloat(double v);
    BigFloat(int v) : BigFloat(static_cast<long>(v)) {}
    BigFloat(long v);
    BigFloat(unsigned long v);
    BigFloat(unsigned long long v) : BigFloat(static_cast<unsigned long>(v)) {}
    explicit BigFloat(const Rational& q, mpfr_rnd_t rnd = MPFR_RNDN);
    explicit BigFloat(const Integer& z, mpfr_rnd_t rnd = MPFR_RNDN);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    static BigFloat zero(unsigned bits);

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    unsigned precision() const { return unsigned(mpfr_get_prec(value_)); }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
    Rational to_rational() const;
    // Decimal string with `digits` significant digits (0 = enough to round-trip).
    std::string to_string(int digits = 0) const;
    bool is_finite() const { return mpfr_number_p(value_) != 0; }

    BigFloat& operator+=(const BigFloat& o);
    BigFloat& operator-=(const BigFloat& o);
    BigFloat& operator*=(const BigFloat& o);
    BigFloat& operator/=(const BigFloat& o);
    BigFloat operator-() const;

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_); }

private:
    void grow_to(mpfr_srcptr other);
    mpfr_t value_;
};

BigFloat log(const BigFloat& x);
BigFloat log1p(const BigFloat& x);
BigFloat lgamma(const BigFloat& x);  // log|Gamma(x)|
BigFloat exp(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat abs(const BigFloat& x);
BigFloat pow(const BigFloat& x, long n);
Integer floor_integer(const BigFloat& x);
Integer ceil_integer(const BigFloat& x);

// Rational rounded in direction `rnd` at `bits` of mantissa.
BigFloat round_rational(const Rational& q, unsigned bits, mpfr_rnd_t rnd);

}  // namespace munormal
