#include "munormal/word.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace munormal {

std::uint64_t Alphabet::size() const {
    if (!last) throw std::domain_error("unbounded alphabet has no finite size");
    return *last < first ? 0 : std::uint64_t(*last) - first + 1;
}

Word parse_word(std::string_view text) {
    Word w;
    const bool separated = text.find_first_of(" ,;\t") != std::string_view::npos;
    if (!separated) {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad digit in word: " + std::string(text));
            w.push_back(Digit(c - '0'));
        }
        return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (std::string_view(" ,;\t").find(text[i]) == std::string_view::npos)
                throw std::invalid_argument("bad character in word: " + std::string(text));
            ++i;
        }
        if (i >= text.size()) break;
        Digit d = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), d);
        if (ec != std::errc()) throw std::invalid_argument("bad digit in word: " + std::string(text));
        w.push_back(d);
        i = std::size_t(ptr - text.data());
    }
    return w;
}

std::string format_word(WordView w) {
    bool compact = true;
    for (Digit d : w) compact = compact && d < 10;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

Word concat(std::initializer_list<WordView> parts) {
    Word out;
    std::size_t n = 0;
    for (auto p : parts) n += p.size();
    out.reserve(n);
    for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace munormal
