#include "munormal/languages.hpp"

#include <stdexcept>

namespace munormal {

// ---------------------------------------------------------------- ParryData

ParryData::ParryData(Word preperiod, Word period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    validate();
    beta_double_ = beta(64).to_double();
}

ParryData ParryData::parse(std::string_view text) {
    auto open = text.find('(');
    if (open == std::string_view::npos) return ParryData(parse_word(text), {});
    auto close = text.find(')', open);
    if (close == std::string_view::npos || close + 1 != text.size())
        throw std::invalid_argument("bad Parry data: " + std::string(text));
    return ParryData(parse_word(text.substr(0, open)), parse_word(text.substr(open + 1, close - open - 1)));
}

Digit ParryData::greedy_digit(std::size_t n) const {
    if (n == 0) throw std::out_of_range("digits are 1-based");
    if (n <= t()) return preperiod_[n - 1];
    if (p() == 0) return 0;
    return period_[(n - t() - 1) % p()];
}

std::pair<Word, Word> ParryData::quasi_greedy() const {
    if (p() > 0) return {preperiod_, period_};
    Word cycle = preperiod_;
    cycle.back() -= 1;
    return {{}, cycle};
}

Digit ParryData::quasi_greedy_digit(std::size_t n) const {
    if (n == 0) throw std::out_of_range("digits are 1-based");
    if (p() > 0) return greedy_digit(n);
    std::size_t r = (n - 1) % t();
    return r + 1 == t() ? preperiod_.back() - 1 : preperiod_[r];
}

Digit ParryData::alphabet_size() const {
    if (preperiod_.empty()) return 0;
    return (t() == 1 && p() == 0) ? preperiod_.front() : preperiod_.front() + 1;
}

std::string ParryData::id() const {
    std::string s = format_word(preperiod_);
    if (p() > 0) s += "(" + format_word(period_) + ")";
    return s;
}

void ParryData::validate() const {
    if (preperiod_.empty()) throw std::invalid_argument("Parry data needs a non-empty preperiod");
    const Digit b1 = preperiod_.front();
    if (b1 == 0) throw std::invalid_argument("Parry data must start with a non-zero digit");
    for (Digit d : preperiod_)
        if (d > b1) throw std::invalid_argument("Parry digits must not exceed the first digit");
    for (Digit d : period_)
        if (d > b1) throw std::invalid_argument("Parry digits must not exceed the first digit");
    if (p() == 0) {
        if (preperiod_.back() == 0) throw std::invalid_argument("finite expansion must end in a non-zero digit");
        if (t() == 1 && b1 == 1) throw std::invalid_argument("d(1) = 1 gives beta = 1");
    } else {
        bool nonzero = false;
        for (Digit d : period_) nonzero = nonzero || d != 0;
        if (!nonzero) throw std::invalid_argument("zero period: use the finite form instead");
    }
    // A sequence is the greedy expansion of 1 for some beta > 1 iff every
    // proper shift is strictly smaller. Both sides are periodic past t with
    // period p, so t + max(p, 1) digits decide the comparison.
    const std::size_t horizon = t() + std::max<std::size_t>(p(), 1);
    for (std::size_t shift = 1; shift < horizon; ++shift) {
        int cmp = 0;
        for (std::size_t n = 1; n <= horizon && cmp == 0; ++n) {
            Digit a = greedy_digit(n + shift), b = greedy_digit(n);
            cmp = a < b ? -1 : (a > b ? 1 : 0);
        }
        if (cmp >= 0) throw std::invalid_argument("not a greedy expansion of 1: " + id());
    }
}

namespace {

// Bound on sum_n b_n x^n with x in (0,1), rounded toward `rnd` throughout.
void expansion_value(mpfr_t out, mpfr_srcptr x, const ParryData& d, mpfr_rnd_t rnd) {
    const mpfr_rnd_t opposite = rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
    const mpfr_prec_t prec = mpfr_get_prec(x);
    mpfr_t term, power, head;
    mpfr_inits2(prec, term, power, head, (mpfr_ptr)nullptr);
    mpfr_set_zero(head, 1);
    for (std::size_t n = 1; n <= d.t(); ++n) {
        mpfr_pow_ui(power, x, n, rnd);
        mpfr_mul_ui(term, power, d.preperiod()[n - 1], rnd);
        mpfr_add(head, head, term, rnd);
    }
    if (d.p() > 0) {
        mpfr_t cycle, denom;
        mpfr_inits2(prec, cycle, denom, (mpfr_ptr)nullptr);
        mpfr_set_zero(cycle, 1);
        for (std::size_t r = 1; r <= d.p(); ++r) {
            mpfr_pow_ui(power, x, d.t() + r, rnd);
            mpfr_mul_ui(term, power, d.period()[r - 1], rnd);
            mpfr_add(cycle, cycle, term, rnd);
        }
        // cycle / (1 - x^p): the denominator is rounded the other way.
        mpfr_pow_ui(power, x, d.p(), rnd);
        mpfr_ui_sub(denom, 1, power, opposite);
        mpfr_div(cycle, cycle, denom, rnd);
        mpfr_add(head, head, cycle, rnd);
        mpfr_clears(cycle, denom, (mpfr_ptr)nullptr);
    }
    mpfr_set(out, head, rnd);
    mpfr_clears(term, power, head, (mpfr_ptr)nullptr);
}

}  // namespace

std::pair<BigFloat, BigFloat> ParryData::beta_enclosure(unsigned bits) const {
    // Solve sum b_n x^n = 1 for x = 1/beta by certified bisection; the
    // left side is increasing in x.
    const mpfr_prec_t prec = bits + 32;
    mpfr_t lo, hi, mid, val;
    mpfr_inits2(prec, lo, hi, mid, val, (mpfr_ptr)nullptr);
    const Digit b1 = preperiod_.front();
    mpfr_set_ui(lo, b1 + 1, MPFR_RNDN);
    mpfr_ui_div(lo, 1, lo, MPFR_RNDD);
    mpfr_set_ui(hi, b1, MPFR_RNDN);
    mpfr_ui_div(hi, 1, hi, MPFR_RNDU);
    for (unsigned it = 0; it < bits + 24; ++it) {
        mpfr_add(mid, lo, hi, MPFR_RNDN);
        mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
        expansion_value(val, mid, *this, MPFR_RNDD);
        if (mpfr_cmp_ui(val, 1) > 0) {
            mpfr_set(hi, mid, MPFR_RNDN);
            continue;
        }
        expansion_value(val, mid, *this, MPFR_RNDU);
        if (mpfr_cmp_ui(val, 1) < 0) {
            mpfr_set(lo, mid, MPFR_RNDN);
            continue;
        }
        break;  // rounding noise straddles 1: the enclosure is as tight as it gets
    }
    WorkingPrecision wp(bits);
    BigFloat beta_lo, beta_hi;
    mpfr_ui_div(beta_lo.get(), 1, hi, MPFR_RNDD);
    mpfr_ui_div(beta_hi.get(), 1, lo, MPFR_RNDU);
    mpfr_clears(lo, hi, mid, val, (mpfr_ptr)nullptr);
    return {beta_lo, beta_hi};
}

BigFloat ParryData::beta(unsigned bits) const {
    auto [lo, hi] = beta_enclosure(bits);
    WorkingPrecision wp(bits);
    BigFloat mid = lo + hi;
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    return mid;
}

// ---------------------------------------------------------------- FullShift

Word ShiftLanguage::padding(WordView a, WordView b) const {
    const State s = advance(initial_state(), a);
    if (s == reject) throw std::invalid_argument("padding: left word is not admissible");
    return padding_from(s, b);
}

ShiftLanguage::State FullShift::advance(State s, WordView w) const {
    if (s == reject) return reject;
    for (Digit d : w)
        if (!alphabet_.contains(d)) return reject;
    return 0;
}

std::string FullShift::id() const {
    if (alphabet_.bounded()) return "full[" + std::to_string(alphabet_.first) + ".." + std::to_string(*alphabet_.last) + "]";
    return "full[" + std::to_string(alphabet_.first) + "..]";
}

// ---------------------------------------------------------------- BetaShift

BetaShift::BetaShift(ParryData data) : data_(std::move(data)) {
    auto [pre, cycle] = data_.quasi_greedy();
    star_t_ = pre.size();
    star_ = pre;
    star_.insert(star_.end(), cycle.begin(), cycle.end());
}

std::size_t BetaShift::step(std::size_t state, Digit a) const {
    if (state == reject) return reject;
    const Digit c = star_[state];
    if (a < c) return 0;
    if (a > c) return reject;
    return state + 1 == star_.size() ? star_t_ : state + 1;
}

std::size_t BetaShift::run(std::size_t state, WordView w) const {
    for (Digit a : w) {
        state = step(state, a);
        if (state == reject) return reject;
    }
    return state;
}

std::size_t BetaShift::orbit_index(std::size_t state) const {
    if (state == reject) throw std::invalid_argument("inadmissible word has no cylinder");
    return state;
}

bool BetaShift::admissible_by_suffixes(WordView w) const {
    for (std::size_t s = 0; s < w.size(); ++s) {
        for (std::size_t i = 0; s + i < w.size(); ++i) {
            Digit c = data_.quasi_greedy_digit(i + 1);
            if (w[s + i] < c) break;
            if (w[s + i] > c) return false;
        }
    }
    return true;
}

Word BetaShift::padding_from(State after_a, WordView b) const {
    if (after_a == reject) throw std::invalid_argument("padding: left word is not admissible");
    const Alphabet alpha = alphabet();
    for (std::size_t r = 0; r <= spec_constant(); ++r) {
        Word found;
        bool ok = false;
        for_each_word(alpha, r, [&](const Word& u) {
            if (ok) return;
            if (run(run(after_a, u), b) != reject) {
                found = u;
                ok = true;
            }
        });
        if (ok) return found;
    }
    throw std::logic_error("no padding of length <= j between admissible words (Parry data " + data_.id() + ")");
}

std::string BetaShift::id() const { return "beta:" + data_.id(); }

// ---------------------------------------------------------------- factories

LanguagePtr full_shift(Alphabet alphabet) { return std::make_shared<FullShift>(alphabet); }

LanguagePtr beta_shift(const ParryData& data) { return std::make_shared<BetaShift>(data); }

std::uint64_t count_admissible(const ShiftLanguage& language, std::size_t n) {
    const Alphabet alpha = language.alphabet();
    if (!alpha.bounded()) throw std::domain_error("count_admissible needs a finite alphabet");
    if (auto beta = dynamic_cast<const BetaShift*>(&language)) {
        std::vector<std::uint64_t> ways(beta->state_count(), 0), next(ways.size());
        ways[beta->start_state()] = 1;
        for (std::size_t step = 0; step < n; ++step) {
            std::fill(next.begin(), next.end(), 0);
            for (std::size_t s = 0; s < ways.size(); ++s) {
                if (!ways[s]) continue;
                for (Digit a = alpha.first; a <= *alpha.last; ++a) {
                    std::size_t to = beta->step(s, a);
                    if (to != ShiftLanguage::reject) next[to] += ways[s];
                }
            }
            ways.swap(next);
        }
        std::uint64_t total = 0;
        for (auto w : ways) total += w;
        return total;
    }
    // Factor-closed languages: extend admissible prefixes only.
    if (n > 32) throw std::length_error("count_admissible: length beyond enumeration bound");
    std::uint64_t total = 0;
    Word w;
    auto dfs = [&](auto&& self) -> void {
        if (w.size() == n) {
            ++total;
            return;
        }
        for (Digit a = alpha.first; a <= *alpha.last; ++a) {
            w.push_back(a);
            if (language.admissible(w)) self(self);
            w.pop_back();
        }
    };
    dfs(dfs);
    return total;
}

}  // namespace munormal
