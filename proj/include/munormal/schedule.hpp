#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "munormal/blocks.hpp"
#include "munormal/languages.hpp"
#include "munormal/measures.hpp"

namespace munormal {

// One tuple (l_i, eps_i, k_i, nu_i) plus the pool parameters of omega_i.
struct StageSpec {
    std::uint64_t l = 1;
    double epsilon = 0.5;
    std::size_t k = 1;
    MeasurePtr nu;
    Digit base = 2;
    Digit first_digit = 0;
    std::size_t window = 1;
    double M = 1.0;
    // Use this word as omega_i instead of building one from the pool.
    std::optional<Word> fixed_block;
};

struct StageInfo {
    StageSpec spec;
    std::uint64_t block_length = 0;  // |omega_i|
    Word self_pad;                   // u_{omega_i, omega_i}
    Word next_pad;                   // u_{omega_i, omega_{i'}} to the next stage with l > 0
    std::uint64_t length = 0;        // M_i = l|omega| + (l-1)|u| + |u_next|
    std::uint64_t end = 0;           // L_i
    BlockCertificate certificate;
    double observed_rel_dev = 0.0;   // max relative deviation of omega_i up to k_i
};

// n = L_i + x (|omega_{i+1}| + |u|) + y with maximal x < l_{i+1}.
struct Position {
    std::uint64_t n = 0;
    std::size_t i = 0;  // completed stages: L_i < n <= L_{i+1}
    std::uint64_t m = 0;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
};

struct ScheduleOptions {
    bool verify_normality = true;  // check omega_i is (eps_i, k_i, nu_i)-normal
    bool enforce_monotone = true;  // l_i, k_i, |omega_i| non-decreasing; eps_i decreasing
    std::size_t cache_stages = 3;
    BlockLimits limits;
};

struct LemmaHypotheses {
    bool block_long = false;       // |omega_i| > 2(k+j) + 2 e~/nu_i(b)
    bool next_block_long = false;  // |omega_{i+1}| > (k+j) / (nu_{i+1}(b)(eps_i - eps_{i+1}))
    bool epsilon_small = false;    // eps_i < 1/2
    bool copies_positive = false;  // l_i > 0
    bool nu_non_increasing = false;  // nu_{i+1}(b) <= nu_i(b)
    bool nu_positive = false;      // nu_i(b) > 0 and nu_{i+1}(b) > 0

    bool all() const {
        return block_long && next_block_long && epsilon_small && copies_positive && nu_non_increasing && nu_positive;
    }
    std::vector<std::string> failed() const;
};

struct EnvelopeTerms {
    double C = 0, D = 0, E = 1, F = 0, G = 0, H = 0;
};

struct Envelope {
    double epsilon_prime = 0.0;
    double e_tilde = 0.0;
    std::size_t t_tilde = 0;
    LemmaHypotheses hypotheses;
};

// Finite materialized schedule. Blocks are rebuilt on demand and cached
// (at most `cache_stages` of them); everything else is immutable.
class Schedule {
public:
    Schedule(LanguagePtr language, MeasurePtr target, std::vector<StageSpec> stages, ScheduleOptions options = {});

    std::size_t stage_count() const { return stages_.size(); }
    const StageInfo& stage(std::size_t i) const;  // 1-based
    std::uint64_t L(std::size_t i) const;         // L_0 = 0
    std::uint64_t total_length() const { return stages_.empty() ? 0 : stages_.back().end; }
    const ShiftLanguage& language() const { return *language_; }
    const LanguagePtr& language_ptr() const { return language_; }
    const CylinderMeasure& target() const { return *target_; }
    const MeasurePtr& target_ptr() const { return target_; }

    std::shared_ptr<const WeightedBlock> block(std::size_t i) const;

    Position locate(std::uint64_t n) const;
    Digit digit_at(std::uint64_t n) const;  // 1-based

    // phi_n(b) = sum_{t <= i} M_t nu_t(b) + m nu_{i+1}(b).
    double phi(std::uint64_t n, WordView b) const;
    double phi_at_end(std::size_t i, WordView b) const;  // phi_{L_i}(b)
    double nu(std::size_t i, WordView b) const;          // nu_i(b), 1-based

    EnvelopeTerms g_terms(std::size_t i, WordView b, std::size_t k, std::size_t j) const;
    double g_envelope(std::size_t i, WordView b, double x, double y, std::size_t k, std::size_t j) const;
    double f_envelope(std::size_t i, WordView b, double x, double y, std::size_t k, std::size_t j) const;
    // e~ = max(0, L_t nu_{i+1}(b) - phi_{L_t}(b)) with t the last t <= i
    // having nu_{i+1}(b) >= nu_t(b) (0 if none).
    std::pair<double, std::size_t> excess(std::size_t i, WordView b) const;
    LemmaHypotheses hypotheses(std::size_t i, WordView b, std::size_t k, std::size_t j) const;
    // eps'_i = g_{i,b}(0, |omega_{i+1}| + j); throws if the hypotheses fail.
    Envelope error_envelope(std::size_t i, WordView b, std::size_t k, std::size_t j) const;

private:
    std::shared_ptr<const WeightedBlock> build(std::size_t i) const;
    void check_stage_index(std::size_t i) const;

    LanguagePtr language_;
    MeasurePtr target_;
    ScheduleOptions options_;
    std::vector<StageInfo> stages_;
    mutable std::mutex cache_mutex_;
    mutable std::deque<std::pair<std::size_t, std::shared_ptr<const WeightedBlock>>> cache_;
};

// ------------------------------------------------------------ trend reports

// A finite ratio sequence standing in for a little-o condition.
struct TrendSeries {
    std::string name;
    std::vector<std::size_t> index;
    std::vector<double> log_values;  // natural log of the ratio
    std::optional<std::size_t> decreasing_from;  // first index of the strictly decreasing tail
    bool pass = false;  // decreasing over at least the second half of the range

    std::vector<double> values() const;
};

TrendSeries make_trend(std::string name, std::vector<std::size_t> index, std::vector<double> log_values);

struct GoodReport {
    std::vector<TrendSeries> series;

    bool pass() const;
    std::vector<std::string> failing() const;
    std::string to_json(int indent = -1) const;
};

// (good1)-(good3) on a materialized schedule, 2 <= i <= horizon - 1.
GoodReport validate_good(const Schedule& schedule, std::size_t horizon);
// (good4): q_i^{2i} / M_i, given per-stage q_i and weights M_i.
TrendSeries validate_good4(const std::vector<double>& q, const std::vector<double>& M, std::size_t first_index,
                           std::size_t horizon);

// ---------------------------------------------------------- symbolic schedules

// One stage of a schedule too large to materialize, kept in log space.
struct SymbolicStage {
    double log_l = 0.0;  // -inf when l_i = 0
    double epsilon = 0.0;
    double log_q = 0.0;
    double log_M = 0.0;
    std::size_t window = 1;
    std::size_t j = 0;
    // M w <= |omega_i| <= (j + w)(M + q^w)
    double log_length_lo() const;
    double log_length_hi() const;
};

struct SymbolicSchedule {
    std::string name;
    std::size_t first_index = 1;  // first stage with l_i > 0
    std::function<SymbolicStage(std::size_t)> stage;
};

enum class EpsilonLaw { inv_sqrt, constant };

struct SymbolicParams {
    NumerationSystem system = NumerationSystem::qary;
    unsigned q = 2;
    std::optional<ParryData> parry;
    EpsilonLaw epsilon_law = EpsilonLaw::inv_sqrt;
    double epsilon_value = 0.25;
};

SymbolicSchedule symbolic_schedule(const SymbolicParams& params);
GoodReport validate_good_symbolic(const SymbolicSchedule& schedule, std::size_t horizon);

// phi_beta(w): 1 for w <= t, else 1 + ceil((w - t) / p); 1 when p = 0.
std::size_t beta_phi(const ParryData& data, std::size_t window);

}  // namespace munormal
