#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "munormal/schedule.hpp"

namespace munormal {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double log_or_neg_inf(double v) { return v > 0 ? std::log(v) : neg_inf; }

// log(i^{2i} log i); -inf at i = 1.
double log_power_weight(std::size_t i) {
    const double di = double(i);
    return 2.0 * di * std::log(di) + log_or_neg_inf(std::log(di));
}

}  // namespace

double SymbolicStage::log_length_lo() const { return log_M + std::log(double(window)); }

double SymbolicStage::log_length_hi() const {
    return std::log(double(j + window)) + log_add(log_M, double(window) * log_q);
}

std::size_t beta_phi(const ParryData& data, std::size_t window) {
    const std::size_t t = data.t(), p = data.p();
    if (p == 0 || window <= t) return 1;
    return 1 + (window - t + p - 1) / p;
}

SymbolicSchedule symbolic_schedule(const SymbolicParams& params) {
    auto eps = [law = params.epsilon_law, value = params.epsilon_value](std::size_t i) {
        return law == EpsilonLaw::constant ? value : 1.0 / std::sqrt(double(i));
    };
    SymbolicSchedule s;
    s.name = to_string(params.system);
    switch (params.system) {
        case NumerationSystem::qary: {
            if (params.q < 2) throw std::invalid_argument("q-ary schedule needs q >= 2");
            const double log_q = std::log(double(params.q));
            s.first_index = 2;
            s.stage = [=](std::size_t i) {
                const double di = double(i);
                SymbolicStage st;
                st.log_l = 2.0 * di * std::log(di);
                st.epsilon = eps(i);
                st.log_q = log_q;
                st.log_M = 2.0 * di * log_q + log_or_neg_inf(std::log(di));
                st.window = i;
                return st;
            };
            break;
        }
        case NumerationSystem::lueroth: {
            s.first_index = 2;
            s.stage = [=](std::size_t i) {
                const double di = double(i);
                SymbolicStage st;
                st.log_l = log_or_neg_inf(std::floor(di * di * std::log(di)));
                st.epsilon = eps(i);
                st.log_q = std::log(di + 2.0);
                st.log_M = std::max(std::log(36.0), log_power_weight(i));
                st.window = i;
                return st;
            };
            break;
        }
        case NumerationSystem::beta: {
            if (!params.parry) throw std::invalid_argument("beta schedule needs a Parry expansion");
            const ParryData data = *params.parry;
            const double beta = data.beta();
            const double log_beta = std::log(beta);
            const double log_q = std::log(double(data.alphabet_size()));
            const std::size_t j = data.t() + data.p();
            s.first_index = 1;
            s.stage = [=](std::size_t i) {
                const double di = double(i);
                const double expo = double(data.t() + beta_phi(data, i) * data.p());
                SymbolicStage st;
                st.log_l = 2.0 * di * std::log(di);
                st.epsilon = eps(i);
                st.log_q = log_q;
                st.log_M = std::max(expo * log_beta - std::log1p(-1.0 / beta),
                                    2.0 * di * log_q + log_or_neg_inf(std::log(di)));
                st.window = i;
                st.j = j;
                return st;
            };
            break;
        }
        case NumerationSystem::continued_fraction: {
            s.first_index = std::size_t(gauss_collapse_threshold);
            s.stage = [=](std::size_t i) {
                const double di = double(i);
                SymbolicStage st;
                st.log_l = i < gauss_collapse_threshold ? neg_inf : log_or_neg_inf(std::floor(di * di * std::log(di)));
                st.epsilon = eps(i);
                st.log_q = std::log(di + 1.0);
                st.log_M = std::log(2.0) + log_power_weight(i);
                st.window = i;
                return st;
            };
            break;
        }
    }
    return s;
}

GoodReport validate_good_symbolic(const SymbolicSchedule& schedule, std::size_t horizon) {
    const std::size_t first = schedule.first_index;
    if (horizon < first + 3) throw std::invalid_argument("horizon too short for a trend");
    std::vector<std::size_t> idx;
    std::vector<double> r1, r2, r3, g4;
    std::vector<std::size_t> idx4;
    SymbolicStage prev = schedule.stage(first);
    SymbolicStage cur = schedule.stage(first + 1);
    idx4.push_back(first);
    g4.push_back(2.0 * double(first) * prev.log_q - prev.log_M);
    for (std::size_t i = first + 1; i + 1 <= horizon; ++i) {
        const SymbolicStage next = schedule.stage(i + 1);
        const double gap = prev.epsilon - cur.epsilon;
        idx.push_back(i);
        // Numerators take the upper length bound, denominators the lower one.
        r1.push_back(gap > 0 ? -std::log(gap) - cur.log_length_lo() : std::numeric_limits<double>::infinity());
        r2.push_back(std::log(double(i)) + prev.log_l + prev.log_length_hi() - cur.log_l - cur.log_length_lo());
        r3.push_back(next.log_length_hi() - cur.log_l - cur.log_length_lo());
        idx4.push_back(i);
        g4.push_back(2.0 * double(i) * cur.log_q - cur.log_M);
        prev = cur;
        cur = next;
    }
    GoodReport report;
    report.series.push_back(make_trend("good1", idx, r1));
    report.series.push_back(make_trend("good2", idx, r2));
    report.series.push_back(make_trend("good3", idx, r3));
    report.series.push_back(make_trend("good4", idx4, g4));
    return report;
}

}  // namespace munormal
