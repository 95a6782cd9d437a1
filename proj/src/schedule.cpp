#include "munormal/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace munormal {

std::vector<std::string> LemmaHypotheses::failed() const {
    std::vector<std::string> out;
    if (!block_long) out.push_back("|omega_i| > 2(k+j) + 2e/nu_i(b)");
    if (!next_block_long) out.push_back("|omega_{i+1}| > (k+j)/(nu_{i+1}(b)(eps_i - eps_{i+1}))");
    if (!epsilon_small) out.push_back("eps_i < 1/2");
    if (!copies_positive) out.push_back("l_i > 0");
    if (!nu_non_increasing) out.push_back("nu_{i+1}(b) <= nu_i(b)");
    if (!nu_positive) out.push_back("nu_i(b) > 0 and nu_{i+1}(b) > 0");
    return out;
}

// ------------------------------------------------------------------ Schedule

Schedule::Schedule(LanguagePtr language, MeasurePtr target, std::vector<StageSpec> specs, ScheduleOptions options)
    : language_(std::move(language)), target_(std::move(target)), options_(options) {
    if (!language_ || !target_) throw std::invalid_argument("schedule needs a language and a target measure");
    if (specs.empty()) throw std::invalid_argument("schedule needs at least one stage");
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& sp = specs[s];
        const std::string where = "stage " + std::to_string(s + 1) + ": ";
        if (!sp.nu) throw std::invalid_argument(where + "missing measure");
        if (!(sp.epsilon > 0)) throw std::invalid_argument(where + "epsilon must be positive");
        if (sp.k < 1 || sp.k > sp.window) throw std::invalid_argument(where + "k must lie in [1, window]");
        if (options_.enforce_monotone && s > 0) {
            const auto& prev = specs[s - 1];
            if (sp.l < prev.l) throw std::invalid_argument(where + "l_i must be non-decreasing");
            if (sp.k < prev.k) throw std::invalid_argument(where + "k_i must be non-decreasing");
            if (!(sp.epsilon < prev.epsilon)) throw std::invalid_argument(where + "eps_i must strictly decrease");
        }
        StageInfo info;
        info.spec = sp;
        stages_.push_back(std::move(info));
    }

    const auto reject = ShiftLanguage::reject;
    std::vector<ShiftLanguage::State> end_state(stages_.size(), reject);
    std::optional<std::size_t> last_active;
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        auto& info = stages_[s];
        auto blk = build(s + 1);
        info.block_length = blk->word.size();
        info.certificate = blk->certificate;
        if (options_.enforce_monotone && s > 0 && info.block_length < stages_[s - 1].block_length)
            throw std::invalid_argument("stage " + std::to_string(s + 1) + ": |omega_i| must be non-decreasing");
        if (options_.verify_normality) {
            auto rep = check_normal(blk->word, info.spec.epsilon, info.spec.k, *info.spec.nu, language_.get());
            info.observed_rel_dev = rep.max_rel_dev;
            if (!rep.pass)
                throw std::invalid_argument("stage " + std::to_string(s + 1) + ": block is not (" +
                                            std::to_string(info.spec.epsilon) + ", " + std::to_string(info.spec.k) +
                                            ")-normal (max deviation " + std::to_string(rep.max_rel_dev) + ")");
        }
        const WordView w = blk->word;
        const auto s_end = language_->advance(language_->initial_state(), w);
        if (s_end == reject) throw std::logic_error("stage block is not admissible");
        info.self_pad = language_->padding_from(s_end, w);
        if (language_->advance(language_->advance(s_end, info.self_pad), w) != s_end)
            throw std::logic_error("self padding does not return to the same scanner state");
        end_state[s] = s_end;
        if (info.spec.l > 0) {
            if (last_active) {
                auto& prev = stages_[*last_active];
                prev.next_pad = language_->padding_from(end_state[*last_active], w);
                if (language_->advance(language_->advance(end_state[*last_active], prev.next_pad), w) != s_end)
                    throw std::logic_error("stage padding does not reach the block's own scanner state");
            }
            last_active = s;
        }
        std::lock_guard lock(cache_mutex_);
        cache_.emplace_back(s + 1, blk);
        while (cache_.size() > std::max<std::size_t>(1, options_.cache_stages)) cache_.pop_front();
    }

    std::uint64_t total = 0;
    for (auto& info : stages_) {
        const std::uint64_t l = info.spec.l;
        info.length = l == 0 ? 0
                             : l * info.block_length + (l - 1) * info.self_pad.size() + info.next_pad.size();
        total += info.length;
        info.end = total;
    }
}

void Schedule::check_stage_index(std::size_t i) const {
    if (i < 1 || i > stages_.size())
        throw std::out_of_range("stage " + std::to_string(i) + " is not materialized (have " +
                                std::to_string(stages_.size()) + ")");
}

const StageInfo& Schedule::stage(std::size_t i) const {
    check_stage_index(i);
    return stages_[i - 1];
}

std::uint64_t Schedule::L(std::size_t i) const {
    if (i == 0) return 0;
    return stage(i).end;
}

std::shared_ptr<const WeightedBlock> Schedule::build(std::size_t i) const {
    const auto& sp = stages_[i - 1].spec;
    if (sp.fixed_block) {
        if (sp.fixed_block->empty()) throw std::invalid_argument("fixed block must be non-empty");
        WeightedBlock blk;
        blk.word = *sp.fixed_block;
        blk.base = sp.base;
        blk.window = sp.window;
        blk.M = sp.M;
        blk.first_digit = sp.first_digit;
        blk.j = language_->spec_constant();
        blk.certificate = BlockCertificate{std::numeric_limits<double>::infinity(), sp.k, 0.0};
        blk.measure_id = sp.nu->id();
        blk.language_id = language_->id();
        return std::make_shared<const WeightedBlock>(std::move(blk));
    }
    BlockOptions bo;
    bo.first_digit = sp.first_digit;
    bo.certificate_k = sp.k;
    bo.limits = options_.limits;
    return std::make_shared<const WeightedBlock>(build_block(*language_, *sp.nu, sp.base, sp.window, sp.M, bo));
}

std::shared_ptr<const WeightedBlock> Schedule::block(std::size_t i) const {
    check_stage_index(i);
    std::lock_guard lock(cache_mutex_);
    for (auto& [idx, blk] : cache_)
        if (idx == i) return blk;
    auto blk = build(i);
    cache_.emplace_back(i, blk);
    while (cache_.size() > std::max<std::size_t>(1, options_.cache_stages)) cache_.pop_front();
    return blk;
}

Position Schedule::locate(std::uint64_t n) const {
    if (n < 1 || n > total_length())
        throw std::out_of_range("position " + std::to_string(n) + " outside the materialized prefix of length " +
                                std::to_string(total_length()));
    auto it = std::lower_bound(stages_.begin(), stages_.end(), n,
                               [](const StageInfo& s, std::uint64_t v) { return s.end < v; });
    const std::size_t next = std::size_t(it - stages_.begin()) + 1;  // stage i+1
    Position p;
    p.n = n;
    p.i = next - 1;
    p.m = n - L(p.i);
    const auto& st = stages_[next - 1];
    const std::uint64_t per = st.block_length + st.self_pad.size();
    p.x = std::min<std::uint64_t>(p.m / per, st.spec.l - 1);
    p.y = p.m - p.x * per;
    return p;
}

Digit Schedule::digit_at(std::uint64_t n) const {
    const Position p = locate(n);
    const auto& st = stages_[p.i];
    const std::uint64_t per = st.block_length + st.self_pad.size();
    const std::uint64_t offset = p.m - 1;
    const std::uint64_t copy = std::min<std::uint64_t>(offset / per, st.spec.l - 1);
    const std::uint64_t r = offset - copy * per;
    if (r < st.block_length) return block(p.i + 1)->word[r];
    const std::uint64_t pad = r - st.block_length;
    return copy + 1 < st.spec.l ? st.self_pad.at(pad) : st.next_pad.at(pad);
}

double Schedule::nu(std::size_t i, WordView b) const { return (*stage(i).spec.nu)(b); }

double Schedule::phi_at_end(std::size_t i, WordView b) const {
    double total = 0.0;
    for (std::size_t t = 1; t <= i; ++t) total += double(stage(t).length) * nu(t, b);
    return total;
}

double Schedule::phi(std::uint64_t n, WordView b) const {
    if (n == 0) return 0.0;
    const Position p = locate(n);
    return phi_at_end(p.i, b) + double(p.m) * nu(p.i + 1, b);
}

EnvelopeTerms Schedule::g_terms(std::size_t i, WordView b, std::size_t k, std::size_t j) const {
    if (i < 1 || i + 1 > stages_.size()) throw std::out_of_range("envelope needs stages i and i+1");
    const auto& si = stage(i);
    const auto& sn = stage(i + 1);
    const double kj = double(k + j);
    const double nu_i = nu(i, b), nu_n = nu(i + 1, b);
    EnvelopeTerms g;
    g.C = double(L(i - 1)) + si.spec.epsilon * nu_i * double(si.spec.l) * double(si.block_length) +
          kj * double(si.spec.l);
    g.D = sn.spec.epsilon * nu_n * double(sn.block_length) + kj;
    g.E = 1.0;
    g.F = phi_at_end(i, b);
    g.G = nu_n * double(sn.block_length + sn.self_pad.size());
    g.H = nu_n;
    return g;
}

double Schedule::g_envelope(std::size_t i, WordView b, double x, double y, std::size_t k, std::size_t j) const {
    const auto g = g_terms(i, b, k, j);
    const double den = g.F + g.G * x + g.H * y;
    if (!(den > 0)) throw std::domain_error("g envelope: non-positive denominator");
    return (g.C + g.D * x + g.E * y) / den;
}

double Schedule::f_envelope(std::size_t i, WordView b, double x, double y, std::size_t k, std::size_t j) const {
    const auto g = g_terms(i, b, k, j);
    const double den = g.F + g.G * x + g.H * y;
    if (!(den > 0)) throw std::domain_error("f envelope: non-positive denominator");
    const auto& si = stage(i);
    const auto& sn = stage(i + 1);
    const double nu_n = nu(i + 1, b);
    const double num = phi_at_end(i - 1, b) + si.spec.epsilon * nu(i, b) * double(si.spec.l) * double(si.block_length) +
                       nu_n * (sn.spec.epsilon * double(sn.block_length) + double(sn.self_pad.size())) * x + nu_n * y;
    return num / den;
}

std::pair<double, std::size_t> Schedule::excess(std::size_t i, WordView b) const {
    const double nu_n = nu(i + 1, b);
    std::size_t t_tilde = 0;
    for (std::size_t t = i; t >= 1; --t) {
        if (nu_n >= nu(t, b)) {
            t_tilde = t;
            break;
        }
    }
    const double e = std::max(0.0, double(L(t_tilde)) * nu_n - phi_at_end(t_tilde, b));
    return {e, t_tilde};
}

LemmaHypotheses Schedule::hypotheses(std::size_t i, WordView b, std::size_t k, std::size_t j) const {
    if (i < 1 || i + 1 > stages_.size()) throw std::out_of_range("hypotheses need stages i and i+1");
    const auto& si = stage(i);
    const auto& sn = stage(i + 1);
    const double nu_i = nu(i, b), nu_n = nu(i + 1, b), kj = double(k + j);
    LemmaHypotheses h;
    h.nu_positive = nu_i > 0 && nu_n > 0;
    h.copies_positive = si.spec.l > 0;
    h.epsilon_small = si.spec.epsilon < 0.5;
    h.nu_non_increasing = nu_n <= nu_i;
    if (h.nu_positive) {
        const double e = excess(i, b).first;
        h.block_long = double(si.block_length) > 2.0 * kj + 2.0 * e / nu_i;
        const double gap = si.spec.epsilon - sn.spec.epsilon;
        h.next_block_long = gap > 0 && double(sn.block_length) > kj / (nu_n * gap);
    }
    return h;
}

Envelope Schedule::error_envelope(std::size_t i, WordView b, std::size_t k, std::size_t j) const {
    Envelope env;
    env.hypotheses = hypotheses(i, b, k, j);
    if (!env.hypotheses.all()) {
        std::string msg = "envelope hypotheses fail at stage " + std::to_string(i) + ":";
        for (const auto& f : env.hypotheses.failed()) msg += " [" + f + "]";
        throw std::domain_error(msg);
    }
    std::tie(env.e_tilde, env.t_tilde) = excess(i, b);
    env.epsilon_prime = g_envelope(i, b, 0.0, double(stage(i + 1).block_length + j), k, j);
    return env;
}

// ------------------------------------------------------------ trend reports

std::vector<double> TrendSeries::values() const {
    std::vector<double> out;
    out.reserve(log_values.size());
    for (double v : log_values) out.push_back(std::exp(v));
    return out;
}

TrendSeries make_trend(std::string name, std::vector<std::size_t> index, std::vector<double> log_values) {
    TrendSeries t{std::move(name), std::move(index), std::move(log_values), std::nullopt, false};
    const std::size_t n = t.log_values.size();
    if (n < 2) return t;
    std::size_t start = n - 1;
    if (!std::isfinite(t.log_values[start])) return t;
    while (start > 0 && std::isfinite(t.log_values[start - 1]) && t.log_values[start - 1] > t.log_values[start]) --start;
    if (start + 1 < n) t.decreasing_from = t.index[start];
    t.pass = t.decreasing_from.has_value() && start <= (n - 1) / 2;
    return t;
}

bool GoodReport::pass() const {
    for (const auto& s : series)
        if (!s.pass) return false;
    return !series.empty();
}

std::vector<std::string> GoodReport::failing() const {
    std::vector<std::string> out;
    for (const auto& s : series)
        if (!s.pass) out.push_back(s.name);
    return out;
}

std::string GoodReport::to_json(int indent) const {
    nlohmann::json j;
    j["pass"] = pass();
    j["failing"] = failing();
    auto& arr = j["series"] = nlohmann::json::array();
    for (const auto& s : series) {
        nlohmann::json rec;
        rec["name"] = s.name;
        rec["index"] = s.index;
        rec["values"] = s.values();
        rec["log_values"] = s.log_values;
        rec["decreasing_from"] = s.decreasing_from ? nlohmann::json(*s.decreasing_from) : nlohmann::json(nullptr);
        rec["pass"] = s.pass;
        arr.push_back(std::move(rec));
    }
    return j.dump(indent);
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0 ? std::log(v) : -inf; }

}  // namespace

GoodReport validate_good(const Schedule& schedule, std::size_t horizon) {
    const std::size_t n = std::min(horizon, schedule.stage_count());
    if (n < 3) throw std::invalid_argument("validate_good needs at least 3 stages");
    std::size_t first = 1;
    while (first <= n && schedule.stage(first).spec.l == 0) ++first;
    std::vector<std::size_t> idx;
    std::vector<double> r1, r2, r3;
    for (std::size_t i = std::max<std::size_t>(2, first + 1); i + 1 <= n; ++i) {
        const auto& prev = schedule.stage(i - 1);
        const auto& cur = schedule.stage(i);
        const auto& next = schedule.stage(i + 1);
        const double gap = prev.spec.epsilon - cur.spec.epsilon;
        const double log_w = std::log(double(cur.block_length));
        idx.push_back(i);
        r1.push_back(gap > 0 ? -std::log(gap) - log_w : inf);
        r2.push_back(std::log(double(i)) + safe_log(double(prev.spec.l)) + std::log(double(prev.block_length)) -
                     safe_log(double(cur.spec.l)) - log_w);
        r3.push_back(std::log(double(next.block_length)) - safe_log(double(cur.spec.l)) - log_w);
    }
    GoodReport report;
    report.series.push_back(make_trend("good1", idx, r1));
    report.series.push_back(make_trend("good2", idx, r2));
    report.series.push_back(make_trend("good3", idx, r3));
    std::vector<double> q, M;
    for (std::size_t i = 1; i <= n; ++i) {
        q.push_back(double(schedule.stage(i).spec.base));
        M.push_back(schedule.stage(i).spec.M);
    }
    report.series.push_back(validate_good4(q, M, first, n));
    return report;
}

TrendSeries validate_good4(const std::vector<double>& q, const std::vector<double>& M, std::size_t first_index,
                           std::size_t horizon) {
    if (q.size() != M.size()) throw std::invalid_argument("validate_good4: q and M sizes differ");
    std::vector<std::size_t> idx;
    std::vector<double> logs;
    for (std::size_t i = std::max<std::size_t>(1, first_index); i <= std::min(horizon, q.size()); ++i) {
        idx.push_back(i);
        logs.push_back(2.0 * double(i) * std::log(q[i - 1]) - safe_log(M[i - 1]));
    }
    return make_trend("good4", idx, logs);
}

}  // namespace munormal
