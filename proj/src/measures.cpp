#include "munormal/measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace munormal {

std::string to_string(NumerationSystem s) {
    switch (s) {
        case NumerationSystem::qary: return "qary";
        case NumerationSystem::lueroth: return "lueroth";
        case NumerationSystem::beta: return "beta";
        case NumerationSystem::continued_fraction: return "cf";
    }
    return "?";
}

NumerationSystem parse_system(std::string_view name) {
    if (name == "qary") return NumerationSystem::qary;
    if (name == "lueroth" || name == "luroth") return NumerationSystem::lueroth;
    if (name == "beta") return NumerationSystem::beta;
    if (name == "cf" || name == "continued-fraction" || name == "gauss") return NumerationSystem::continued_fraction;
    throw std::invalid_argument("unknown numeration system: " + std::string(name));
}

namespace {

// ------------------------------------------------------------------ q-ary

class QaryMeasure final : public CylinderMeasure {
public:
    explicit QaryMeasure(unsigned q) : q_(q) {
        if (q < 2) throw std::invalid_argument("q-ary measure needs q >= 2");
    }

    double operator()(WordView b) const override {
        for (Digit d : b)
            if (d >= q_) return 0.0;
        return std::pow(double(q_), -double(b.size()));
    }

    std::optional<Rational> exact(WordView b) const override {
        for (Digit d : b)
            if (d >= q_) return Rational(0);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), q_, b.size());
        return Rational(Integer(1), den);
    }

    BigFloat precise(WordView b, unsigned bits) const override {
        WorkingPrecision wp(bits);
        return BigFloat(*exact(b));
    }

    Alphabet support() const override { return Alphabet::range(0, q_ - 1); }
    NumerationSystem system() const override { return NumerationSystem::qary; }
    std::string id() const override { return "qary:" + std::to_string(q_); }

private:
    unsigned q_;
};

// ---------------------------------------------------------------- Lueroth

class LuerothMeasure final : public CylinderMeasure {
public:
    explicit LuerothMeasure(std::optional<std::size_t> stage) : stage_(stage) {
        if (stage_ && *stage_ < 1) throw std::invalid_argument("Lueroth stage index must be >= 1");
    }

    // Single-digit mass as numerator/denominator (numerator 0 or 1).
    std::pair<std::uint64_t, std::uint64_t> digit_mass(Digit t) const {
        if (t < 2) return {0, 1};
        if (!stage_) return {1, std::uint64_t(t) * (t - 1)};
        const std::size_t i = *stage_;
        if (t <= i + 1) return {1, std::uint64_t(t) * (t - 1)};
        if (t == i + 2) return {1, i + 1};
        return {0, 1};
    }

    double operator()(WordView b) const override {
        double v = 1.0;
        for (Digit d : b) {
            auto [num, den] = digit_mass(d);
            if (!num) return 0.0;
            v /= double(den);
        }
        return v;
    }

    std::optional<Rational> exact(WordView b) const override {
        Integer den = 1;
        for (Digit d : b) {
            auto [num, dd] = digit_mass(d);
            if (!num) return Rational(0);
            den *= static_cast<unsigned long>(dd);
        }
        return Rational(Integer(1), den);
    }

    BigFloat precise(WordView b, unsigned bits) const override {
        WorkingPrecision wp(bits);
        return BigFloat(*exact(b));
    }

    Alphabet support() const override {
        if (stage_) return Alphabet::range(2, Digit(*stage_ + 2));
        return Alphabet::from(2);
    }
    NumerationSystem system() const override { return NumerationSystem::lueroth; }
    std::string id() const override { return stage_ ? "lueroth:" + std::to_string(*stage_) : "lueroth"; }

private:
    std::optional<std::size_t> stage_;
};

// ------------------------------------------------------------------ Parry

// Orbit of 1 under the beta map and the weights of the Parry density
// h(x) = (1/F) sum_n w_n 1[x < T^n(1)].
template <class Real>
struct ParryTable {
    std::vector<Real> orbit;   // T^n(1) for n in [0, t+p)
    std::vector<Real> weight;  // w_n
    Real norm;                 // F
};

template <class Real>
ParryTable<Real> parry_table(const ParryData& d, const Real& beta) {
    const std::size_t t = d.t(), p = d.p(), n_states = t + p;
    const Real one(1.0);
    ParryTable<Real> tab;
    tab.orbit.assign(n_states, Real(0.0));
    tab.weight.assign(n_states, Real(0.0));
    Real inv = one / beta;
    Real tail(0.0);  // T^{t+p}(1) = T^t(1), or 0 for a finite expansion
    if (p > 0) {
        Real s(0.0), pw = one;
        for (std::size_t r = 0; r < p; ++r) {
            pw = pw * inv;
            s = s + Real(double(d.period()[r])) * pw;
        }
        tail = s / (one - pw);
    }
    Real next = tail;
    for (std::size_t n = n_states; n-- > 1;) {
        tab.orbit[n] = (Real(double(d.greedy_digit(n + 1))) + next) * inv;
        next = tab.orbit[n];
    }
    tab.orbit[0] = one;
    Real pw = one, cycle_factor = one;
    if (p > 0) {
        Real bp = one;
        for (std::size_t r = 0; r < p; ++r) bp = bp * inv;
        cycle_factor = one / (one - bp);
    }
    tab.norm = Real(0.0);
    for (std::size_t n = 0; n < n_states; ++n) {
        tab.weight[n] = n < t ? pw : pw * cycle_factor;
        tab.norm = tab.norm + tab.weight[n] * tab.orbit[n];
        pw = pw * inv;
    }
    return tab;
}

template <class Real>
Real parry_cylinder(const BetaShift& lang, const ParryTable<Real>& tab, const Real& beta, WordView b) {
    const std::size_t state = lang.run(lang.start_state(), b);
    if (state == ShiftLanguage::reject) return Real(0.0);
    const Real inv = Real(1.0) / beta;
    Real left(0.0), scale(1.0);
    for (Digit a : b) {
        scale = scale * inv;
        left = left + Real(double(a)) * scale;
    }
    const Real right = left + scale * tab.orbit[lang.orbit_index(state)];
    Real mass(0.0);
    for (std::size_t n = 0; n < tab.orbit.size(); ++n) {
        const Real& edge = tab.orbit[n];
        if (!(left < edge)) continue;
        mass = mass + tab.weight[n] * ((right < edge ? right : edge) - left);
    }
    return mass / tab.norm;
}

class ParryMeasure final : public CylinderMeasure {
public:
    explicit ParryMeasure(const ParryData& data)
        : lang_(data), beta_(data.beta()), table_(parry_table<double>(data, beta_)) {}

    double operator()(WordView b) const override { return parry_cylinder<double>(lang_, table_, beta_, b); }

    BigFloat precise(WordView b, unsigned bits) const override {
        WorkingPrecision wp(bits + 16);
        BigFloat beta = lang_.data().beta(bits + 16);
        auto tab = parry_table<BigFloat>(lang_.data(), beta);
        BigFloat v = parry_cylinder<BigFloat>(lang_, tab, beta, b);
        mpfr_prec_round(v.get(), bits, MPFR_RNDN);
        return v;
    }

    Alphabet support() const override { return lang_.alphabet(); }
    NumerationSystem system() const override { return NumerationSystem::beta; }
    std::string id() const override { return lang_.id(); }

private:
    BetaShift lang_;
    double beta_;
    ParryTable<double> table_;
};

}  // namespace

MeasurePtr qary_measure(unsigned q) { return std::make_shared<QaryMeasure>(q); }
MeasurePtr lueroth_measure() { return std::make_shared<LuerothMeasure>(std::nullopt); }
MeasurePtr lueroth_truncated_measure(std::size_t i) { return std::make_shared<LuerothMeasure>(i); }
MeasurePtr parry_measure(const ParryData& data) { return std::make_shared<ParryMeasure>(data); }

double measure_qary(unsigned q, WordView b) { return QaryMeasure(q)(b); }
double measure_lueroth(WordView b) { return LuerothMeasure(std::nullopt)(b); }
double measure_lueroth_truncated(std::size_t i, WordView b) { return LuerothMeasure(i)(b); }
double measure_beta(const ParryData& data, WordView b) { return ParryMeasure(data)(b); }

MeasureSequence constant_sequence(MeasurePtr mu) {
    return {[mu](std::size_t) { return mu; }, mu, 1};
}

MeasureSequence lueroth_sequence() {
    return {[](std::size_t i) { return lueroth_truncated_measure(i); }, lueroth_measure(), 1};
}

MeasureSequence gauss_sequence() {
    return {[](std::size_t i) { return gauss_truncated_measure(i); }, gauss_measure(), 1};
}

double min_cylinder_measure(const CylinderMeasure& nu, const ShiftLanguage& language, std::size_t k,
                            MinMeasureOptions options) {
    if (k < 1) throw std::invalid_argument("min_cylinder_measure needs k >= 1");
    Alphabet a = nu.support();
    const Alphabet l = language.alphabet();
    if (!a.bounded() && l.bounded()) a = Alphabet::range(std::max(a.first, l.first), *l.last);
    if (!a.bounded()) throw std::domain_error("min_cylinder_measure: unbounded support needs an analytic bound");
    if (l.bounded()) a = Alphabet::range(std::max(a.first, l.first), std::min(*a.last, *l.last));
    if (k > options.max_length || a.size() > options.max_alphabet)
        throw std::length_error("min_cylinder_measure: enumeration beyond configured bound");
    double best = std::numeric_limits<double>::infinity();
    for_each_word(a, k, [&](const Word& w) {
        double v = nu(w);
        if (v > 0 && v < best && language.admissible(w)) best = v;
    });
    if (!std::isfinite(best)) throw std::domain_error("no admissible word of positive measure");
    return best;
}

double cf_min_measure_bound(std::size_t i) {
    if (i < gauss_collapse_threshold) throw std::domain_error("the analytic bound holds for stage index >= 8");
    return 0.5 * std::exp(-2.0 * double(i) * std::log(double(i)));
}

}  // namespace munormal
