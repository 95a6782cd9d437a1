#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "munormal/bigfloat.hpp"
#include "munormal/word.hpp"

namespace munormal {

// Greedy beta-expansion of 1, d(1) = b_1..b_t (b_{t+1}..b_{t+p})^inf.
// p = 0 means the expansion is finite.
class ParryData {
public:
    ParryData() = default;
    ParryData(Word preperiod, Word period);

    static ParryData golden_ratio() { return {{1, 1}, {}}; }
    // "11" is d(1) = 11, "2(1)" is d(1) = 2 1 1 1 ...; digits may be comma separated.
    static ParryData parse(std::string_view text);

    const Word& preperiod() const { return preperiod_; }
    const Word& period() const { return period_; }
    std::size_t t() const { return preperiod_.size(); }
    std::size_t p() const { return period_.size(); }

    // n-th digit (1-based) of d(1); zero past the end of a finite expansion.
    Digit greedy_digit(std::size_t n) const;
    // n-th digit (1-based) of the quasi-greedy expansion d*(1).
    Digit quasi_greedy_digit(std::size_t n) const;
    // d*(1) as preperiod + period (the period is never empty).
    std::pair<Word, Word> quasi_greedy() const;

    // ceil(beta): b_1 + 1, except b_1 itself when beta is an integer.
    Digit alphabet_size() const;

    // Enclosure [lo, hi] of beta at `bits` of precision.
    std::pair<BigFloat, BigFloat> beta_enclosure(unsigned bits) const;
    BigFloat beta(unsigned bits) const;
    double beta() const { return beta_double_; }

    std::string id() const;

private:
    void validate() const;

    Word preperiod_;
    Word period_;
    double beta_double_ = 0.0;
};

class ShiftLanguage {
public:
    // Scanning state; languages without memory always report state 0.
    using State = std::size_t;
    static constexpr State reject = static_cast<State>(-1);

    virtual ~ShiftLanguage() = default;

    virtual bool admissible(WordView w) const { return advance(initial_state(), w) != reject; }
    virtual State initial_state() const { return 0; }
    virtual State advance(State s, WordView w) const = 0;
    // Shortest (then lexicographically smallest) u with |u| <= j such that
    // reading u.b from state s stays admissible.
    virtual Word padding_from(State s, WordView b) const = 0;
    virtual std::size_t spec_constant() const = 0;
    virtual Alphabet alphabet() const = 0;
    virtual std::string id() const = 0;

    // u_{a,b}: padding making a.u.b admissible.
    Word padding(WordView a, WordView b) const;
};

using LanguagePtr = std::shared_ptr<const ShiftLanguage>;

class FullShift final : public ShiftLanguage {
public:
    explicit FullShift(Alphabet alphabet) : alphabet_(alphabet) {}

    State advance(State s, WordView w) const override;
    Word padding_from(State, WordView) const override { return {}; }
    std::size_t spec_constant() const override { return 0; }
    Alphabet alphabet() const override { return alphabet_; }
    std::string id() const override;

private:
    Alphabet alphabet_;
};

class BetaShift final : public ShiftLanguage {
public:
    explicit BetaShift(ParryData data);

    State advance(State s, WordView w) const override { return run(s, w); }
    Word padding_from(State s, WordView b) const override;
    std::size_t spec_constant() const override { return data_.t() + data_.p(); }
    Alphabet alphabet() const override { return Alphabet::range(0, data_.alphabet_size() - 1); }
    std::string id() const override;

    const ParryData& data() const { return data_; }

    // Automaton over prefixes of d*(1): state m means the longest active
    // match has length m (folded into the periodic part).
    std::size_t start_state() const { return 0; }
    std::size_t step(std::size_t state, Digit a) const;
    std::size_t run(std::size_t state, WordView w) const;
    std::size_t state_count() const { return star_.size(); }
    // Index n such that T^{|b|}(cylinder of b) = [0, T^n(1)) for a word ending in `state`.
    std::size_t orbit_index(std::size_t state) const;

    // Direct check that every suffix is <= the same-length prefix of d*(1).
    bool admissible_by_suffixes(WordView w) const;

private:
    ParryData data_;
    Word star_;              // one full preperiod + period of d*(1)
    std::size_t star_t_ = 0;  // preperiod length of d*(1)
};

LanguagePtr full_shift(Alphabet alphabet);
LanguagePtr beta_shift(const ParryData& data);

// Number of admissible words of length n (finite alphabets only).
std::uint64_t count_admissible(const ShiftLanguage& language, std::size_t n);

}  // namespace munormal
