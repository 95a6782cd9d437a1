#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace munormal {

using Digit = std::uint32_t;
using Word = std::vector<Digit>;
using WordView = std::span<const Digit>;

// Contiguous digit range [first, last]; an absent `last` means unbounded.
struct Alphabet {
    Digit first = 0;
    std::optional<Digit> last;

    bool bounded() const { return last.has_value(); }
    bool contains(Digit d) const { return d >= first && (!last || d <= *last); }
    std::uint64_t size() const;  // throws for unbounded alphabets

    static Alphabet range(Digit first, Digit last) { return {first, last}; }
    static Alphabet from(Digit first) { return {first, std::nullopt}; }
};

// "0101" reads as single-digit symbols; anything with separators
// (spaces, commas) reads as a list of decimal integers.
Word parse_word(std::string_view text);
std::string format_word(WordView w);

Word concat(std::initializer_list<WordView> parts);

// Calls f(word) for every word of length k over `alphabet` in lexicographic order.
template <class F>
void for_each_word(const Alphabet& alphabet, std::size_t k, F&& f) {
    const Digit lo = alphabet.first;
    const Digit hi = *alphabet.last;
    Word w(k, lo);
    while (true) {
        f(static_cast<const Word&>(w));
        std::size_t pos = k;
        while (pos > 0 && w[pos - 1] == hi) {
            w[pos - 1] = lo;
            --pos;
        }
        if (pos == 0) return;
        ++w[pos - 1];
    }
}

}  // namespace munormal
