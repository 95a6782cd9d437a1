#include "munormal/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace munormal {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Chunk c covers [bounds[c], bounds[c+1]).
std::vector<std::size_t> chunk_bounds(std::size_t total, unsigned chunks) {
    chunks = std::max(1u, chunks);
    std::vector<std::size_t> b(chunks + 1);
    for (unsigned c = 0; c <= chunks; ++c) b[c] = std::size_t((unsigned __int128)total * c / chunks);
    return b;
}

template <class F>
void parallel_for(unsigned n, F&& f) {
    if (n <= 1) {
        f(0u);
        return;
    }
    // Chunks are dealt round-robin to a bounded set of workers.
    const unsigned workers = std::min(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&f, w, workers, n] {
            for (unsigned c = w; c < n; c += workers) f(c);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

// ------------------------------------------------------------ PatternCounter

PatternCounter::PatternCounter(std::vector<Word> patterns) : patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw std::invalid_argument("PatternCounter needs at least one pattern");
    for (const auto& p : patterns_) {
        if (p.empty()) throw std::invalid_argument("empty pattern");
        max_length_ = std::max(max_length_, p.size());
        symbols_.insert(symbols_.end(), p.begin(), p.end());
    }
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    sigma_ = std::uint32_t(symbols_.size()) + 1;

    // Trie.
    next_.assign(sigma_, kNone);
    terminal_.reserve(patterns_.size());
    for (const auto& p : patterns_) {
        std::uint32_t s = 0;
        for (Digit d : p) {
            std::uint32_t a = symbol(d);
            std::uint32_t& slot = next_[std::size_t(s) * sigma_ + a];
            if (slot == kNone) {
                slot = std::uint32_t(next_.size() / sigma_);
                next_.resize(next_.size() + sigma_, kNone);
            }
            s = next_[std::size_t(s) * sigma_ + a];
        }
        terminal_.push_back(s);
    }

    // Failure links, turning the trie into a complete goto table.
    const std::size_t states = next_.size() / sigma_;
    fail_.assign(states, 0);
    std::queue<std::uint32_t> q;
    for (std::uint32_t a = 0; a < sigma_; ++a) {
        std::uint32_t& t = next_[a];
        if (t == kNone) {
            t = 0;
        } else {
            fail_[t] = 0;
            q.push(t);
        }
    }
    bfs_order_.push_back(0);
    while (!q.empty()) {
        std::uint32_t s = q.front();
        q.pop();
        bfs_order_.push_back(s);
        for (std::uint32_t a = 0; a < sigma_; ++a) {
            std::uint32_t& t = next_[std::size_t(s) * sigma_ + a];
            std::uint32_t via_fail = next_[std::size_t(fail_[s]) * sigma_ + a];
            if (t == kNone) {
                t = via_fail;
            } else {
                fail_[t] = via_fail;
                q.push(t);
            }
        }
    }
}

std::uint32_t PatternCounter::symbol(Digit d) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), d);
    if (it == symbols_.end() || *it != d) return sigma_ - 1;
    return std::uint32_t(it - symbols_.begin());
}

void PatternCounter::scan(WordView text, std::size_t from, std::size_t begin, std::size_t end,
                          std::vector<std::uint64_t>& hits) const {
    // Dense digit -> symbol table when the digits are small.
    const Digit top = symbols_.back();
    std::vector<std::uint32_t> direct;
    if (top < (1u << 16)) {
        direct.assign(std::size_t(top) + 1, sigma_ - 1);
        for (std::uint32_t a = 0; a + 1 < sigma_; ++a) direct[symbols_[a]] = a;
    }
    auto sym = [&](Digit d) { return d < direct.size() ? direct[d] : (direct.empty() ? symbol(d) : sigma_ - 1); };
    std::uint32_t s = 0;
    for (std::size_t e = from; e < end; ++e) {
        s = next_[std::size_t(s) * sigma_ + sym(text[e])];
        if (e >= begin) ++hits[s];
    }
}

std::vector<std::uint64_t> PatternCounter::count(WordView text, unsigned chunks) const {
    const std::size_t states = fail_.size();
    chunks = std::max(1u, std::min<unsigned>(chunks, unsigned(std::max<std::size_t>(1, text.size()))));
    auto bounds = chunk_bounds(text.size(), chunks);
    std::vector<std::vector<std::uint64_t>> per_chunk(chunks, std::vector<std::uint64_t>(states, 0));
    parallel_for(chunks, [&](unsigned c) {
        const std::size_t begin = bounds[c], end = bounds[c + 1];
        const std::size_t from = begin >= max_length_ - 1 ? begin - (max_length_ - 1) : 0;
        scan(text, from, begin, end, per_chunk[c]);
    });
    std::vector<std::uint64_t> hits(states, 0);
    for (const auto& h : per_chunk)
        for (std::size_t s = 0; s < states; ++s) hits[s] += h[s];
    // A visit to state s is also a visit to every state on its failure chain.
    for (std::size_t k = bfs_order_.size(); k-- > 1;) {
        std::uint32_t s = bfs_order_[k];
        hits[fail_[s]] += hits[s];
    }
    std::vector<std::uint64_t> out;
    out.reserve(patterns_.size());
    for (auto t : terminal_) out.push_back(hits[t]);
    return out;
}

// ------------------------------------------------------------------ reports

void finalize_report(FrequencyReport& report, const CylinderMeasure* mu) {
    report.max_rel_dev = 0.0;
    for (auto& r : report.blocks) {
        r.freq = report.n ? double(r.count) / double(report.n) : 0.0;
        if (!mu) continue;
        r.mu = (*mu)(r.b);
        if (r.mu > 0) {
            r.rel_dev = std::abs(r.freq - r.mu) / r.mu;
            if (r.mu >= report.mu_floor) report.max_rel_dev = std::max(report.max_rel_dev, r.rel_dev);
        } else {
            r.rel_dev = r.count ? std::numeric_limits<double>::infinity() : 0.0;
        }
    }
}

std::string FrequencyReport::to_json(int indent) const {
    nlohmann::json j;
    j["n"] = n;
    j["mu_floor"] = mu_floor;
    auto& arr = j["blocks"] = nlohmann::json::array();
    for (const auto& r : blocks) {
        nlohmann::json rec;
        rec["b"] = r.b;
        rec["count"] = r.count;
        rec["freq"] = r.freq;
        rec["mu"] = r.mu;
        if (std::isfinite(r.rel_dev))
            rec["rel_dev"] = r.rel_dev;
        else
            rec["rel_dev"] = nullptr;
        arr.push_back(std::move(rec));
    }
    j["max_rel_dev"] = max_rel_dev;
    return j.dump(indent);
}

FrequencyReport count_blocks(WordView source, const std::vector<Word>& targets, std::uint64_t n,
                             CountOptions options) {
    if (targets.empty()) throw std::invalid_argument("count_blocks needs at least one target");
    if (n > source.size()) throw std::out_of_range("prefix length exceeds the source");
    PatternCounter counter(targets);
    auto counts = counter.count(source.first(n), options.chunks);
    FrequencyReport report;
    report.n = n;
    report.mu_floor = options.mu_floor;
    for (std::size_t t = 0; t < targets.size(); ++t) report.blocks.push_back({targets[t], counts[t], 0, 0, 0});
    finalize_report(report, options.mu);
    return report;
}

std::vector<std::pair<Word, std::uint64_t>> census(WordView source, std::size_t k, std::uint64_t n,
                                                   unsigned chunks) {
    if (k < 1) throw std::invalid_argument("census needs k >= 1");
    if (n > source.size()) throw std::out_of_range("prefix length exceeds the source");
    std::vector<std::pair<Word, std::uint64_t>> out;
    if (n < k) return out;
    const WordView text = source.first(n);
    const std::size_t windows = n - k + 1;
    Digit top = 0;
    for (Digit d : text) top = std::max(top, d);
    const double radix = double(top) + 1.0;
    const double key_space = std::pow(radix, double(k));
    chunks = std::max(1u, std::min<unsigned>({chunks, unsigned(std::min<std::size_t>(windows, 64))}));
    auto bounds = chunk_bounds(windows, chunks);

    auto decode = [&](std::uint64_t key) {
        Word w(k);
        for (std::size_t pos = k; pos-- > 0;) {
            w[pos] = Digit(key % (std::uint64_t(top) + 1));
            key /= std::uint64_t(top) + 1;
        }
        return w;
    };
    auto encode_first = [&](std::size_t start) {
        std::uint64_t key = 0;
        for (std::size_t t = 0; t < k; ++t) key = key * (std::uint64_t(top) + 1) + text[start + t];
        return key;
    };

    if (key_space * double(chunks) <= double(1u << 25)) {
        // Flat table over all packed keys.
        const std::uint64_t space = std::uint64_t(key_space + 0.5);
        const std::uint64_t high = space / (std::uint64_t(top) + 1);
        std::vector<std::vector<std::uint64_t>> tables(chunks);
        parallel_for(chunks, [&](unsigned c) {
            auto& table = tables[c];
            table.assign(space, 0);
            std::size_t s = bounds[c], e = bounds[c + 1];
            if (s >= e) return;
            std::uint64_t key = encode_first(s);
            ++table[key];
            for (std::size_t i = s + 1; i < e; ++i) {
                key = (key % high) * (std::uint64_t(top) + 1) + text[i + k - 1];
                ++table[key];
            }
        });
        for (std::uint64_t key = 0; key < space; ++key) {
            std::uint64_t total = 0;
            for (auto& t : tables) total += t[key];
            if (total) out.emplace_back(decode(key), total);
        }
        return out;
    }
    if (key_space < 1.8e19) {
        const std::uint64_t high = std::uint64_t(std::pow(radix, double(k - 1)) + 0.5);
        std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> maps(chunks);
        parallel_for(chunks, [&](unsigned c) {
            std::size_t s = bounds[c], e = bounds[c + 1];
            if (s >= e) return;
            std::uint64_t key = encode_first(s);
            ++maps[c][key];
            for (std::size_t i = s + 1; i < e; ++i) {
                key = (key % high) * (std::uint64_t(top) + 1) + text[i + k - 1];
                ++maps[c][key];
            }
        });
        std::map<std::uint64_t, std::uint64_t> merged;
        for (auto& m : maps)
            for (auto& [key, v] : m) merged[key] += v;
        for (auto& [key, v] : merged) out.emplace_back(decode(key), v);
        return out;
    }
    std::vector<std::map<Word, std::uint64_t>> maps(chunks);
    parallel_for(chunks, [&](unsigned c) {
        for (std::size_t i = bounds[c]; i < bounds[c + 1]; ++i)
            ++maps[c][Word(text.begin() + i, text.begin() + i + k)];
    });
    std::map<Word, std::uint64_t> merged;
    for (auto& m : maps)
        for (auto& [w, v] : m) merged[w] += v;
    out.assign(merged.begin(), merged.end());
    return out;
}

FrequencyReport count_all_of_length(WordView source, std::size_t k, std::uint64_t n, CountOptions options,
                                    const ShiftLanguage* language) {
    FrequencyReport report;
    report.n = n;
    report.mu_floor = options.mu_floor;
    auto counts = census(source, k, n, options.chunks);
    if (language && language->alphabet().bounded()) {
        std::map<Word, std::uint64_t> all(counts.begin(), counts.end());
        const Alphabet a = language->alphabet();
        if (double(a.size()) > 0 && std::pow(double(a.size()), double(k)) > 1e7)
            throw std::length_error("admissible set too large to enumerate");
        for_each_word(a, k, [&](const Word& w) {
            if (language->admissible(w)) all.emplace(w, 0);
        });
        for (auto& [w, v] : all) report.blocks.push_back({w, v, 0, 0, 0});
    } else {
        // Unbounded alphabets: only occurring words can be listed.
        for (auto& [w, v] : counts) report.blocks.push_back({w, v, 0, 0, 0});
    }
    finalize_report(report, options.mu);
    return report;
}

}  // namespace munormal
