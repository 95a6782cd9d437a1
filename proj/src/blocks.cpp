#include "munormal/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "munormal/counting.hpp"

namespace munormal {

std::vector<Word> enumerate_pool(const ShiftLanguage& language, Digit base, std::size_t window,
                                 Digit first_digit, BlockLimits limits) {
    (void)language;  // inadmissible words stay in the pool on purpose
    if (base < 2) throw std::invalid_argument("pool base must be >= 2");
    if (window < 1) throw std::invalid_argument("pool window must be >= 1");
    if (double(window) * std::log2(double(base)) > std::log2(double(limits.pool_cap)))
        throw std::length_error("pool of " + std::to_string(base) + "^" + std::to_string(window) +
                                " words exceeds the pool cap");
    std::vector<Word> pool;
    pool.reserve(std::size_t(std::pow(double(base), double(window)) + 0.5));
    for_each_word(Alphabet::range(first_digit, first_digit + base - 1), window,
                  [&](const Word& w) { pool.push_back(w); });
    return pool;
}

double epsilon_bound(Digit base, std::size_t window, double M, std::size_t j, std::size_t k, double m_k) {
    if (k > window) throw std::invalid_argument("epsilon_bound needs k <= window");
    if (k < 1) throw std::invalid_argument("epsilon_bound needs k >= 1");
    if (!(m_k > 0)) throw std::invalid_argument("epsilon_bound needs m_k > 0");
    if (!(M > 0)) throw std::invalid_argument("epsilon_bound needs M > 0");
    const double b = base, w = double(window), jj = double(j), kk = double(k);
    const double b_w = std::pow(b, w);
    const double first = (jj + kk - 1.0) / (w + jj) + b_w / (M + b_w);
    const double second = jj / w + std::pow(b, 2.0 * w + jj - kk) / (m_k * M);
    return std::max(first, second);
}

std::uint64_t copy_count(const CylinderMeasure& nu, WordView p, double M) {
    Integer copies;
    if (auto q = nu.exact(p)) {
        Rational scaled = Rational(M) * *q;
        mpz_cdiv_q(copies.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    } else {
        const unsigned bits = default_precision();
        WorkingPrecision wp(bits);
        BigFloat scaled = nu.precise(p, bits) * BigFloat(M);
        copies = ceil_integer(scaled);
    }
    if (copies < 0 || !copies.fits_ulong_p()) throw std::overflow_error("copy count out of range");
    return copies.get_ui();
}

namespace {

// Minimum of nu over admissible words of length k with digits in `alphabet`.
double min_positive(const CylinderMeasure& nu, const ShiftLanguage& language, const Alphabet& alphabet,
                    std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    for_each_word(alphabet, k, [&](const Word& w) {
        double v = nu(w);
        if (v > 0 && v < best && language.admissible(w)) best = v;
    });
    return best;
}

}  // namespace

WeightedBlock build_block(const ShiftLanguage& language, const CylinderMeasure& nu, Digit base,
                          std::size_t window, double M, BlockOptions options) {
    auto pool = enumerate_pool(language, base, window, options.first_digit, options.limits);
    const Alphabet pool_alphabet = Alphabet::range(options.first_digit, options.first_digit + base - 1);
    const std::size_t j = language.spec_constant();

    WeightedBlock block;
    block.base = base;
    block.window = window;
    block.M = M;
    block.first_digit = options.first_digit;
    block.j = j;
    block.measure_id = nu.id();
    block.language_id = language.id();

    double m_window = std::numeric_limits<double>::infinity();
    std::vector<double> mass(pool.size(), 0.0);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!language.admissible(pool[i])) continue;
        mass[i] = nu(pool[i]);
        if (mass[i] > 0) m_window = std::min(m_window, mass[i]);
    }
    if (!std::isfinite(m_window)) throw std::domain_error("no pool word has positive measure");
    if (M * m_window < 1.0 - 1e-12)
        throw std::invalid_argument("block weight M = " + std::to_string(M) + " is below 1/m_window = " +
                                    std::to_string(1.0 / m_window));

    block.copies.assign(pool.size(), 0);
    double planned = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (mass[i] > 0) block.copies[i] = copy_count(nu, pool[i], M);
        planned += double(block.copies[i]) * double(window + j);
    }
    if (planned > double(options.limits.length_cap))
        throw std::length_error("block length " + std::to_string(std::uint64_t(planned)) + " exceeds the cap");

    Word& out = block.word;
    out.reserve(std::size_t(planned));
    auto state = language.initial_state();
    bool first = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::uint64_t c = 0; c < block.copies[i]; ++c) {
            if (!first) {
                Word u = language.padding_from(state, pool[i]);
                out.insert(out.end(), u.begin(), u.end());
                state = language.advance(state, u);
            }
            out.insert(out.end(), pool[i].begin(), pool[i].end());
            state = language.advance(state, pool[i]);
            if (state == ShiftLanguage::reject) throw std::logic_error("padding produced an inadmissible block");
            first = false;
        }
    }

    const std::size_t k = options.certificate_k;
    if (k < 1 || k > window) throw std::invalid_argument("certificate length must be in [1, window]");
    block.certificate.k = k;
    block.certificate.m_k = min_positive(nu, language, pool_alphabet, k);
    block.certificate.epsilon = epsilon_bound(base, window, M, j, k, block.certificate.m_k);
    return block;
}

NormalityReport check_normal(WordView w, double epsilon, std::size_t k, const CylinderMeasure& nu,
                             const ShiftLanguage* language) {
    if (!(epsilon > 0)) throw std::invalid_argument("check_normal needs epsilon > 0");
    if (k < 1) throw std::invalid_argument("check_normal needs k >= 1");
    NormalityReport report;
    const double n = double(w.size());

    Alphabet alphabet = nu.support();
    if (language && language->alphabet().bounded()) {
        const Alphabet l = language->alphabet();
        Digit hi = alphabet.bounded() ? std::min(*alphabet.last, *l.last) : *l.last;
        alphabet = Alphabet::range(std::max(alphabet.first, l.first), hi);
    }
    std::vector<Digit> digits;
    if (alphabet.bounded()) {
        for (Digit d = alphabet.first; d <= *alphabet.last; ++d) digits.push_back(d);
    } else {
        std::set<Digit> seen;
        for (Digit d : w)
            if (alphabet.contains(d)) seen.insert(d);
        digits.assign(seen.begin(), seen.end());
    }
    if (digits.empty()) return report;

    for (std::size_t t = 1; t <= k; ++t) {
        if (std::pow(double(digits.size()), double(t)) > 2e7)
            throw std::length_error("check_normal: too many candidate words");
        auto counts = census(w, t, w.size());
        std::map<Word, std::uint64_t> lookup(counts.begin(), counts.end());
        Word b(t, digits.front());
        std::vector<std::size_t> idx(t, 0);
        while (true) {
            for (std::size_t p = 0; p < t; ++p) b[p] = digits[idx[p]];
            const double mu = nu(b);
            if (mu > 0 && (!language || language->admissible(b))) {
                ++report.checked;
                auto it = lookup.find(b);
                const std::uint64_t count = it == lookup.end() ? 0 : it->second;
                const double expected = mu * n;
                const double lower = expected * (1.0 - epsilon), upper = expected * (1.0 + epsilon);
                const double dev = std::abs(double(count) - expected) / expected;
                report.max_rel_dev = std::max(report.max_rel_dev, dev);
                if (double(count) < lower || double(count) > upper) {
                    report.pass = false;
                    report.violations.push_back({b, count, expected, lower, upper, dev});
                }
            }
            std::size_t p = t;
            while (p > 0 && idx[p - 1] + 1 == digits.size()) idx[--p] = 0;
            if (p == 0) break;
            ++idx[p - 1];
        }
    }
    return report;
}

}  // namespace munormal
