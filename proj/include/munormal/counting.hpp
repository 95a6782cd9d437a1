#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "munormal/languages.hpp"
#include "munormal/measures.hpp"
#include "munormal/word.hpp"

namespace munormal {

// Multi-pattern overlapping occurrence counter (Aho-Corasick over digits).
// Only full occurrences are counted: a match starting at i needs i + k <= n.
class PatternCounter {
public:
    explicit PatternCounter(std::vector<Word> patterns);

    // Counts per pattern (in construction order). The text is split into
    // `chunks` pieces scanned in parallel; each occurrence is attributed to
    // the chunk holding its last digit, so results do not depend on `chunks`.
    std::vector<std::uint64_t> count(WordView text, unsigned chunks = 1) const;

    const std::vector<Word>& patterns() const { return patterns_; }
    std::size_t max_length() const { return max_length_; }

private:
    std::uint32_t symbol(Digit d) const;
    void scan(WordView text, std::size_t from, std::size_t begin, std::size_t end,
              std::vector<std::uint64_t>& hits) const;

    std::vector<Word> patterns_;
    std::size_t max_length_ = 0;
    std::vector<Digit> symbols_;               // sorted distinct pattern digits
    std::uint32_t sigma_ = 0;                  // symbols_.size() + 1 ("other")
    std::vector<std::uint32_t> next_;          // dense goto, states x sigma
    std::vector<std::uint32_t> fail_;
    std::vector<std::uint32_t> bfs_order_;
    std::vector<std::uint32_t> terminal_;      // state per pattern
};

struct BlockRecord {
    Word b;
    std::uint64_t count = 0;
    double freq = 0.0;
    double mu = 0.0;
    double rel_dev = 0.0;
};

struct FrequencyReport {
    std::uint64_t n = 0;
    std::vector<BlockRecord> blocks;
    double max_rel_dev = 0.0;  // over blocks with mu >= mu_floor and mu > 0
    double mu_floor = 0.0;

    std::string to_json(int indent = -1) const;
};

struct CountOptions {
    unsigned chunks = 1;
    const CylinderMeasure* mu = nullptr;
    double mu_floor = 0.0;
};

// N_n(b, w) for every target b, on the prefix of length n.
FrequencyReport count_blocks(WordView source, const std::vector<Word>& targets, std::uint64_t n,
                             CountOptions options = {});

// Occurring k-blocks with counts, sorted lexicographically.
std::vector<std::pair<Word, std::uint64_t>> census(WordView source, std::size_t k, std::uint64_t n,
                                                   unsigned chunks = 1);

// Every k-block occurring in the prefix, plus zero entries for admissible
// non-occurring words when `language` has a finite alphabet.
FrequencyReport count_all_of_length(WordView source, std::size_t k, std::uint64_t n, CountOptions options = {},
                                    const ShiftLanguage* language = nullptr);

// Fills freq/mu/rel_dev and the summary from counts.
void finalize_report(FrequencyReport& report, const CylinderMeasure* mu);

}  // namespace munormal
