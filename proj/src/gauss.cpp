// Gauss measure of continued-fraction cylinders and its stage-i truncation,
// where digits >= i are collapsed onto the symbol i.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "munormal/measures.hpp"

namespace munormal {

GaussCylinder gauss_cylinder(WordView b) {
    Integer p_prev = 1, q_prev = 0, p = 0, q = 1;
    for (Digit a : b) {
        if (a == 0) throw std::invalid_argument("continued-fraction digits must be >= 1");
        Integer pn = p * a + p_prev, qn = q * a + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    Rational x(p, q), y(p + p_prev, q + q_prev);
    x.canonicalize();
    y.canonicalize();
    if (x <= y) return {x, y, q, q_prev};
    return {y, x, q, q_prev};
}

namespace {

const double ln2 = std::numbers::ln2;

double gauss_double(WordView b) {
    double p_prev = 1, q_prev = 0, p = 0, q = 1;
    for (Digit a : b) {
        if (a == 0) throw std::invalid_argument("continued-fraction digits must be >= 1");
        double pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    if (b.empty()) return 1.0;
    const double width = 1.0 / (q * (q + q_prev));
    const double lo = std::min(p / q, (p + p_prev) / (q + q_prev));
    return std::log1p(width / (1.0 + lo)) / ln2;
}

// mu of the interval [lo, hi] in (0,1).
BigFloat gauss_interval(const Rational& lo, const Rational& hi) {
    Rational ratio = (hi - lo) / (1 + lo);
    return log1p(BigFloat(ratio)) / log(BigFloat(2L));
}

BigFloat gauss_big(WordView b) {
    if (b.empty()) return BigFloat(1L);
    auto c = gauss_cylinder(b);
    return gauss_interval(c.lo, c.hi);
}

// One position of a truncated pattern: an exact digit, or "any digit >= i".
struct Slot {
    Digit digit;
    bool at_least;
};
using Pattern = std::vector<Slot>;

struct Continuants {
    Integer p, q, p_prev, q_prev;
};

Continuants continuants(const Pattern& pat, std::size_t from, std::size_t to) {
    Continuants c{0, 1, 1, 0};
    for (std::size_t n = from; n < to; ++n) {
        Integer pn = c.p * pat[n].digit + c.p_prev, qn = c.q * pat[n].digit + c.q_prev;
        c.p_prev = c.p;
        c.q_prev = c.q;
        c.p = pn;
        c.q = qn;
    }
    return c;
}

// Endpoints of {z : z starts with the exact slots [from, to) and, if
// `tail_at_least`, continues with a digit >= i}. Both ends are Moebius
// images of y = 0 and y = 1 (or y = 1/i for the open tail).
std::pair<Rational, Rational> pattern_interval(const Pattern& pat, std::size_t from, std::size_t to,
                                               bool tail_at_least, std::size_t i) {
    Continuants c = continuants(pat, from, to);
    Rational a(c.p, c.q);
    Rational b = tail_at_least ? Rational(c.p * i + c.p_prev, c.q * i + c.q_prev)
                               : Rational(c.p + c.p_prev, c.q + c.q_prev);
    a.canonicalize();
    b.canonicalize();
    return a <= b ? std::pair{a, b} : std::pair{b, a};
}

class TruncatedGauss {
public:
    explicit TruncatedGauss(std::size_t i) : i_(i) {}

    BigFloat eval(const Pattern& pat) const {
        if (pat.empty()) return BigFloat(1L);
        if (pat.front().at_least) {
            // Shift invariance: sum over a >= i of mu(a.rest) = mu(rest) - sum over a < i.
            Pattern rest(pat.begin() + 1, pat.end());
            BigFloat v = eval(rest);
            Pattern with(pat);
            for (Digit a = 1; a < i_; ++a) {
                with.front() = {a, false};
                v -= eval(with);
            }
            return v;
        }
        std::size_t f = 0;
        while (f < pat.size() && !pat[f].at_least) ++f;
        if (f == pat.size()) {
            auto [lo, hi] = pattern_interval(pat, 0, pat.size(), false, i_);
            return gauss_interval(lo, hi);
        }
        if (f + 1 == pat.size()) {
            auto [lo, hi] = pattern_interval(pat, 0, f, true, i_);
            return gauss_interval(lo, hi);
        }
        bool interval_post = true;
        for (std::size_t n = f + 1; n + 1 < pat.size(); ++n) interval_post = interval_post && !pat[n].at_least;
        if (!interval_post) throw std::logic_error("nested collapsed slots need the transfer evaluator");
        return interior_closed_form(pat, f);
    }

private:
    // Exact prefix, one "digit >= i" slot at f, then a tail whose admissible
    // set is an interval J = [s, t] of the shifted point z. Summing the
    // Moebius images over a >= i telescopes into log-gamma differences.
    BigFloat interior_closed_form(const Pattern& pat, std::size_t f) const {
        Continuants c = continuants(pat, 0, f);
        const bool tail_open = pat.back().at_least;
        auto [s, t] = pattern_interval(pat, f + 1, tail_open ? pat.size() - 1 : pat.size(), tail_open, i_);
        Rational u(c.q_prev, c.q);
        Rational w(c.q_prev + c.p_prev, c.q + c.p);
        u.canonicalize();
        w.canonicalize();
        auto g = [&](const Rational& z, const Rational& shift) { return lgamma(BigFloat(Rational(z + shift + i_))); };
        BigFloat v = (g(t, u) - g(t, w)) - (g(s, u) - g(s, w));
        return abs(v) / log(BigFloat(2L));
    }

    std::size_t i_;
};

Pattern collapse(std::size_t i, WordView b) {
    Pattern pat;
    pat.reserve(b.size());
    for (Digit d : b) pat.push_back({d, d == i});
    return pat;
}

// Double-precision evaluation of a collapsed pattern through the transfer
// operator of the Gauss map: mu(P) = int_0^1 (L_{s_n} ... L_{s_1} rho)(y) dy
// with L_s f(y) = sum_{a in s} f(1/(a+y)) / (a+y)^2. Densities are kept as
// Chebyshev interpolants on [0, 1]; they extend analytically past y = -1,
// so degree 32 resolves them to rounding level.
class TransferEvaluator {
public:
    explicit TransferEvaluator(std::size_t i) : i_(double(i)) {
        for (std::size_t j = 0; j < kNodes; ++j) {
            const double th = std::numbers::pi * (double(j) + 0.5) / double(kNodes);
            nodes_[j] = 0.5 * (1 + std::cos(th));
            for (std::size_t k = 0; k < kNodes; ++k) cosines_[k][j] = std::cos(double(k) * th);
        }
    }

    double eval(const Pattern& pat) const {
        if (pat.empty()) return 1.0;
        Cheb f = fit([](double y) { return 1 / ((1 + y) * ln2); });
        for (const Slot& s : pat) {
            std::array<double, kNodes> v{};
            if (s.at_least) {
                const Taylor tail = taylor(f);
                for (std::size_t j = 0; j < kNodes; ++j) v[j] = sum_at_least(f, tail, nodes_[j]);
            } else {
                for (std::size_t j = 0; j < kNodes; ++j) {
                    const double z = 1 / (double(s.digit) + nodes_[j]);
                    v[j] = f(z) * z * z;
                }
            }
            f = from_values(v);
        }
        // int_0^1 T_k(2y - 1) dy = 1/(1 - k^2) for even k, 0 for odd k
        double total = 0;
        for (std::size_t k = 0; k < kNodes; k += 2) total += f.c[k] / (1 - double(k * k));
        return total;
    }

private:
    static constexpr std::size_t kNodes = 33;
    static constexpr std::size_t kExplicit = 64;  // a in [i, i + 64) summed directly
    static constexpr std::size_t kTaylor = 12;

    struct Cheb {
        std::array<double, kNodes> c{};
        double lo = 0, hi = 1;
        double operator()(double y) const {
            const double t = (2 * y - lo - hi) / (hi - lo);
            double b1 = 0, b2 = 0;
            for (std::size_t k = kNodes; k-- > 1;) {
                const double b0 = 2 * t * b1 - b2 + c[k];
                b2 = b1;
                b1 = b0;
            }
            return t * b1 - b2 + c[0];
        }
    };
    using Taylor = std::array<double, kTaylor>;

    Cheb from_values(const std::array<double, kNodes>& v, double lo = 0, double hi = 1) const {
        Cheb f;
        f.lo = lo;
        f.hi = hi;
        for (std::size_t k = 0; k < kNodes; ++k) {
            double acc = 0;
            for (std::size_t j = 0; j < kNodes; ++j) acc += v[j] * cosines_[k][j];
            f.c[k] = acc * 2 / double(kNodes);
        }
        f.c[0] /= 2;
        return f;
    }

    template <class F>
    Cheb fit(F&& g, double lo = 0, double hi = 1) const {
        std::array<double, kNodes> v{};
        for (std::size_t j = 0; j < kNodes; ++j) v[j] = g(lo + (hi - lo) * nodes_[j]);
        return from_values(v, lo, hi);
    }

    // Taylor coefficients of f at 0 from an interpolant on [0, h] with
    // h = 1/(i + kExplicit), the only range the tail sum visits.
    Taylor taylor(const Cheb& f) const {
        const double h = 1 / (i_ + double(kExplicit));
        // low-degree Chebyshev fit on [0, h], then T_k(2z/h - 1) expanded in z/h
        constexpr std::size_t n = kTaylor;
        std::array<double, n> c{};
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const double th = std::numbers::pi * (double(j) + 0.5) / double(n);
                acc += f(h * 0.5 * (1 + std::cos(th))) * std::cos(double(k) * th);
            }
            c[k] = acc * 2 / double(n);
        }
        c[0] /= 2;
        // monomial coefficients in t = 2z/h - 1, then in u = z/h
        std::array<std::array<double, n>, n> T{};
        T[0][0] = 1;
        if (n > 1) T[1][1] = 1;
        for (std::size_t k = 2; k < n; ++k)
            for (std::size_t m = 0; m < n; ++m)
                T[k][m] = (m ? 2 * T[k - 1][m - 1] : 0) - T[k - 2][m];
        std::array<double, n> in_t{};
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t m = 0; m < n; ++m) in_t[m] += c[k] * T[k][m];
        Taylor out{};
        // t^m = (2u - 1)^m
        for (std::size_t m = 0; m < n; ++m) {
            double binom = 1;
            for (std::size_t r = 0; r <= m; ++r) {
                const double sign = ((m - r) % 2) ? -1.0 : 1.0;
                out[r] += in_t[m] * binom * std::pow(2.0, double(r)) * sign / std::pow(h, double(r));
                binom = binom * double(m - r) / double(r + 1);
            }
        }
        return out;
    }

    // sum_{a >= i} f(1/(a+y)) / (a+y)^2
    double sum_at_least(const Cheb& f, const Taylor& t, double y) const {
        double acc = 0;
        for (std::size_t a = 0; a < kExplicit; ++a) {
            const double z = 1 / (i_ + double(a) + y);
            acc += f(z) * z * z;
        }
        const double q = i_ + double(kExplicit) + y;
        for (std::size_t k = 0; k < kTaylor; ++k) acc += t[k] * hurwitz_zeta(double(k + 2), q);
        return acc;
    }

    // sum_{n >= 0} (n + q)^{-s} for q well above s, by Euler-Maclaurin.
    static double hurwitz_zeta(double s, double q) {
        static constexpr std::array<double, 6> b2j_over_fact{1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600,
                                                              1.0 / 47900160, -691.0 / 1307674368000};
        const double qs = std::pow(q, -s);
        double acc = q * qs / (s - 1) + qs / 2;
        double rising = s, power = qs / q;  // (s)_{2j-1} and q^{-s-2j+1}
        for (std::size_t j = 0; j < b2j_over_fact.size(); ++j) {
            acc += b2j_over_fact[j] * rising * power;
            rising *= (s + double(2 * j + 1)) * (s + double(2 * j + 2));
            power /= q * q;
        }
        return acc;
    }

    double i_;
    std::array<double, kNodes> nodes_{};
    std::array<std::array<double, kNodes>, kNodes> cosines_{};
};

// Collapsed slots strictly inside the word. With at most one, the rational
// path stays in closed form.
std::size_t interior_collapses(const Pattern& pat) {
    std::size_t n = 0;
    for (std::size_t k = 1; k + 1 < pat.size(); ++k) n += pat[k].at_least;
    return n;
}

bool collapses(std::size_t i, WordView b) {
    if (i < gauss_collapse_threshold) return false;
    for (Digit d : b)
        if (d == i) return true;
    return false;
}

void check_digits(WordView b) {
    for (Digit d : b)
        if (d == 0) throw std::invalid_argument("continued-fraction digits must be >= 1");
}

class GaussMeasure final : public CylinderMeasure {
public:
    explicit GaussMeasure(std::optional<std::size_t> stage) : stage_(stage) {
        if (stage_ && *stage_ < 1) throw std::invalid_argument("Gauss stage index must be >= 1");
    }

    double operator()(WordView b) const override {
        check_digits(b);
        if (!stage_) return gauss_double(b);
        for (Digit d : b)
            if (d > *stage_) return 0.0;
        if (!collapses(*stage_, b)) return gauss_double(b);
        return TransferEvaluator(*stage_).eval(collapse(*stage_, b));
    }

    BigFloat precise(WordView b, unsigned bits) const override {
        check_digits(b);
        WorkingPrecision wp(bits + 32);
        BigFloat v;
        if (stage_) {
            for (Digit d : b)
                if (d > *stage_) return BigFloat::zero(bits);
        }
        // Words with two or more interior collapsed slots have no closed form;
        // they come from the transfer operator, good to about 1e-15 relative
        // whatever `bits` asks for.
        if (stage_ && collapses(*stage_, b)) {
            const Pattern pat = collapse(*stage_, b);
            if (interior_collapses(pat) <= 1)
                v = TruncatedGauss(*stage_).eval(pat);
            else
                v = BigFloat(TransferEvaluator(*stage_).eval(pat));
        } else {
            v = gauss_big(b);
        }
        mpfr_prec_round(v.get(), bits, MPFR_RNDN);
        return v;
    }

    Alphabet support() const override {
        if (stage_) return Alphabet::range(1, Digit(*stage_));
        return Alphabet::from(1);
    }
    NumerationSystem system() const override { return NumerationSystem::continued_fraction; }
    std::string id() const override { return stage_ ? "gauss:" + std::to_string(*stage_) : "gauss"; }

private:
    std::optional<std::size_t> stage_;
};

}  // namespace

MeasurePtr gauss_measure() { return std::make_shared<GaussMeasure>(std::nullopt); }
MeasurePtr gauss_truncated_measure(std::size_t i) { return std::make_shared<GaussMeasure>(i); }

double measure_gauss(WordView b) { return GaussMeasure(std::nullopt)(b); }
double measure_gauss_truncated(std::size_t i, WordView b) { return GaussMeasure(i)(b); }

}  // namespace munormal
