#include "munormal/bigfloat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace munormal {

namespace {

unsigned read_default_precision() {
    if (const char* env = std::getenv("MUNORMAL_PRECISION")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && bits >= 53 && bits <= 1 << 20) return unsigned(bits);
    }
    return 128;
}

thread_local unsigned t_working = 0;

}  // namespace

unsigned default_precision() {
    static const unsigned bits = read_default_precision();
    return bits;
}

unsigned working_precision() { return t_working ? t_working : default_precision(); }

WorkingPrecision::WorkingPrecision(unsigned bits) : saved_(t_working) {
    if (bits < MPFR_PREC_MIN) throw std::invalid_argument("precision too small");
    t_working = bits;
}

WorkingPrecision::~WorkingPrecision() { t_working = saved_; }

BigFloat::BigFloat() {
    mpfr_init2(value_, working_precision());
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double v) {
    mpfr_init2(value_, std::max(working_precision(), 53u));
    mpfr_set_d(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(long v) {
    mpfr_init2(value_, std::max(working_precision(), 64u));
    mpfr_set_si(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(unsigned long v) {
    mpfr_init2(value_, std::max(working_precision(), 64u));
    mpfr_set_ui(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& q, mpfr_rnd_t rnd) {
    mpfr_init2(value_, working_precision());
    mpfr_set_q(value_, q.get_mpq_t(), rnd);
}

BigFloat::BigFloat(const Integer& z, mpfr_rnd_t rnd) {
    mpfr_init2(value_, working_precision());
    mpfr_set_z(value_, z.get_mpz_t(), rnd);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::zero(unsigned bits) {
    WorkingPrecision wp(bits);
    return BigFloat();
}

void BigFloat::grow_to(mpfr_srcptr other) {
    if (mpfr_get_prec(other) > mpfr_get_prec(value_)) mpfr_prec_round(value_, mpfr_get_prec(other), MPFR_RNDN);
}

Rational BigFloat::to_rational() const {
    if (!is_finite()) throw std::domain_error("non-finite value has no rational form");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
}

std::string BigFloat::to_string(int digits) const {
    if (digits <= 0) digits = int(precision() * 0.30103) + 2;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, value_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
    grow_to(o.value_);
    mpfr_add(value_, value_, o.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& o) {
    grow_to(o.value_);
    mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& o) {
    grow_to(o.value_);
    mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& o) {
    grow_to(o.value_);
    mpfr_div(value_, value_, o.value_, MPFR_RNDN);
    return *this;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(*this);
    mpfr_neg(r.value_, r.value_, MPFR_RNDN);
    return r;
}

namespace {

template <class Op>
BigFloat unary(const BigFloat& x, Op op) {
    BigFloat r(x);
    op(r.get(), x.get(), MPFR_RNDN);
    return r;
}

}  // namespace

BigFloat log(const BigFloat& x) { return unary(x, mpfr_log); }
BigFloat log1p(const BigFloat& x) { return unary(x, mpfr_log1p); }
BigFloat exp(const BigFloat& x) { return unary(x, mpfr_exp); }
BigFloat sqrt(const BigFloat& x) { return unary(x, mpfr_sqrt); }
BigFloat abs(const BigFloat& x) { return unary(x, mpfr_abs); }

BigFloat lgamma(const BigFloat& x) {
    BigFloat r(x);
    int sign = 0;
    mpfr_lgamma(r.get(), &sign, x.get(), MPFR_RNDN);
    return r;
}

BigFloat pow(const BigFloat& x, long n) {
    BigFloat r(x);
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

Integer floor_integer(const BigFloat& x) {
    Integer z;
    mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDD);
    return z;
}

Integer ceil_integer(const BigFloat& x) {
    Integer z;
    mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDU);
    return z;
}

BigFloat round_rational(const Rational& q, unsigned bits, mpfr_rnd_t rnd) {
    WorkingPrecision wp(bits);
    return BigFloat(q, rnd);
}

}  // namespace munormal
