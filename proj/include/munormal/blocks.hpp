#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "munormal/languages.hpp"
#include "munormal/measures.hpp"
#include "munormal/word.hpp"

namespace munormal {

struct BlockLimits {
    std::uint64_t pool_cap = std::uint64_t(1) << 22;
    std::uint64_t length_cap = std::uint64_t(1) << 26;
};

// All words of length `window` over {first, ..., first + base - 1} in
// lexicographic order. Inadmissible words are kept; they get no copies later.
std::vector<Word> enumerate_pool(const ShiftLanguage& language, Digit base, std::size_t window,
                                 Digit first_digit = 0, BlockLimits limits = {});

// Upper bound on eps for which the weighted block is (eps, k)-normal.
double epsilon_bound(Digit base, std::size_t window, double M, std::size_t j, std::size_t k, double m_k);

struct BlockCertificate {
    double epsilon = 1.0;
    std::size_t k = 1;
    double m_k = 0.0;
};

struct BlockOptions {
    Digit first_digit = 0;
    std::size_t certificate_k = 1;
    BlockLimits limits;
};

struct WeightedBlock {
    Word word;
    Digit base = 2;
    std::size_t window = 1;
    double M = 1.0;
    Digit first_digit = 0;
    std::size_t j = 0;
    BlockCertificate certificate;
    std::vector<std::uint64_t> copies;  // per pool word, in pool order
    std::string measure_id;
    std::string language_id;
};

// Weighted concatenation of every pool word p, ceil(M nu(p)) times, joined
// with the language's padding. Requires M >= 1 / m_window.
WeightedBlock build_block(const ShiftLanguage& language, const CylinderMeasure& nu, Digit base,
                          std::size_t window, double M, BlockOptions options = {});

// Number of copies ceil(M nu(p)), exact when nu has rational values.
std::uint64_t copy_count(const CylinderMeasure& nu, WordView p, double M);

struct NormalityViolation {
    Word b;
    std::uint64_t count = 0;
    double expected = 0.0;  // nu(b) |w|
    double lower = 0.0;
    double upper = 0.0;
    double rel_dev = 0.0;
};

struct NormalityReport {
    bool pass = true;
    std::size_t checked = 0;
    double max_rel_dev = 0.0;
    std::vector<NormalityViolation> violations;
};

// Checks nu(b)|w|(1-eps) <= N(b, w) <= nu(b)|w|(1+eps) for every admissible
// b with |b| <= k and nu(b) > 0. Finite supports are enumerated; otherwise the
// digits occurring in w (within the support) are used.
NormalityReport check_normal(WordView w, double epsilon, std::size_t k, const CylinderMeasure& nu,
                             const ShiftLanguage* language = nullptr);

}  // namespace munormal
