#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "munormal/presets.hpp"
#include "munormal/schedule.hpp"
#include "oracles.hpp"

using namespace munormal;

namespace {

StageSpec pool_stage(MeasurePtr nu, std::uint64_t l, double eps, std::size_t k, std::size_t w, double M,
                     Digit base = 2) {
    StageSpec s;
    s.l = l;
    s.epsilon = eps;
    s.k = k;
    s.nu = std::move(nu);
    s.base = base;
    s.window = w;
    s.M = M;
    return s;
}

StageSpec fixed_stage(MeasurePtr nu, std::uint64_t l, double eps, Word block) {
    StageSpec s = pool_stage(std::move(nu), l, eps, 1, 1, 1);
    s.fixed_block = std::move(block);
    return s;
}

std::shared_ptr<const Schedule> binary_schedule() {
    auto mu = qary_measure(2);
    return std::make_shared<Schedule>(full_shift(Alphabet::range(0, 1)), mu,
                                      std::vector<StageSpec>{pool_stage(mu, 3, 0.9, 1, 1, 2),
                                                             pool_stage(mu, 3, 0.8, 1, 2, 8),
                                                             pool_stage(mu, 4, 0.7, 2, 3, 16),
                                                             pool_stage(mu, 5, 0.6, 2, 3, 32)});
}

std::shared_ptr<const Schedule> golden_schedule() {
    const ParryData g = ParryData::golden_ratio();
    auto mu = parry_measure(g);
    return std::make_shared<Schedule>(beta_shift(g), mu,
                                      std::vector<StageSpec>{pool_stage(mu, 2, 0.9, 1, 2, 8),
                                                             pool_stage(mu, 3, 0.8, 1, 3, 30),
                                                             pool_stage(mu, 3, 0.7, 2, 4, 60)});
}

void check_positions(const Schedule& s) {
    for (std::uint64_t n = 1; n <= s.total_length(); ++n) {
        const Position p = s.locate(n);
        REQUIRE(s.L(p.i) < n);
        REQUIRE(n <= s.L(p.i + 1));
        const auto& st = s.stage(p.i + 1);
        const std::uint64_t per = st.block_length + st.self_pad.size();
        REQUIRE(p.m == n - s.L(p.i));
        REQUIRE(p.x < st.spec.l);
        REQUIRE(n == s.L(p.i) + p.x * per + p.y);
        REQUIRE(p.y <= st.block_length + s.language().spec_constant());
        // maximal x: another full period does not fit unless it is the last copy
        if (p.x + 1 < st.spec.l) REQUIRE(p.y < per);
    }
}

}  // namespace

TEST_SUITE("schedule") {
    TEST_CASE("stage lengths and cumulative ends") {
        auto s = binary_schedule();
        REQUIRE(s->stage_count() == 4);
        CHECK(s->stage(1).block_length == 2);
        CHECK(s->stage(2).block_length == 16);
        CHECK(s->stage(3).block_length == 48);
        CHECK(s->stage(1).length == 6);
        CHECK(s->L(0) == 0);
        CHECK(s->L(2) == 6 + 48);
        CHECK(s->total_length() == 6 + 48 + 192 + 480);
        CHECK_THROWS_AS(s->stage(5), std::out_of_range);
        CHECK_THROWS_AS(s->locate(0), std::out_of_range);
        CHECK_THROWS_AS(s->locate(s->total_length() + 1), std::out_of_range);
    }

    TEST_CASE("padded stage lengths follow the copy formula") {
        auto s = golden_schedule();
        for (std::size_t i = 1; i <= s->stage_count(); ++i) {
            const auto& st = s->stage(i);
            CHECK(st.length == st.spec.l * st.block_length + (st.spec.l - 1) * st.self_pad.size() + st.next_pad.size());
            CHECK(st.self_pad.size() <= 2);
            CHECK(st.next_pad.size() <= 2);
            CHECK(s->L(i) == s->L(i - 1) + st.length);
        }
        CHECK(s->stage(3).next_pad.empty());
    }

    TEST_CASE("position decomposition round-trips") {
        check_positions(*binary_schedule());
        check_positions(*golden_schedule());
        auto s = binary_schedule();
        // n = L_i belongs to stage i
        for (std::size_t i = 1; i <= 4; ++i) {
            const Position p = s->locate(s->L(i));
            CHECK(p.i == i - 1);
            CHECK(p.m == s->stage(i).length);
        }
        CHECK(s->locate(s->L(1) + 1).i == 1);
        CHECK(s->locate(s->L(1) + 1).m == 1);
    }

    TEST_CASE("stages with no copies are skipped") {
        auto mu = qary_measure(2);
        Schedule s(full_shift(Alphabet::range(0, 1)), mu,
                   {pool_stage(mu, 0, 0.9, 1, 1, 2), pool_stage(mu, 2, 0.8, 1, 2, 4), pool_stage(mu, 2, 0.7, 1, 2, 8)});
        CHECK(s.L(1) == 0);
        CHECK(s.locate(1).i == 1);
        CHECK(s.digit_at(1) == 0);
        check_positions(s);
    }

    TEST_CASE("phi accumulator") {
        auto s = golden_schedule();
        for (const Word& b : {Word{0}, Word{1}, Word{0, 1}, Word{1, 0, 0}}) {
            CHECK(s->phi(s->L(1), b) == doctest::Approx(double(s->stage(1).length) * s->nu(1, b)));
            CHECK(s->phi(s->L(1) + 5, b) ==
                  doctest::Approx(double(s->stage(1).length) * s->nu(1, b) + 5 * s->nu(2, b)));
            for (std::size_t i = 1; i <= 3; ++i)
                CHECK(s->phi_at_end(i, b) ==
                      doctest::Approx(s->phi_at_end(i - 1, b) + double(s->stage(i).length) * s->nu(i, b)));
            // phi_n is linear inside a stage
            const std::uint64_t n = s->L(2) + 7;
            CHECK(s->phi(n, b) == doctest::Approx(s->phi_at_end(2, b) + 7 * s->nu(3, b)));
        }
        CHECK(s->phi(0, Word{0}) == 0.0);
    }

    TEST_CASE("envelope structure on the desk presets") {
        std::size_t tested = 0;
        for (const char* name : {"qary-b2-desk", "beta-golden-desk"}) {
            auto s = materialize(preset(name));
            const std::size_t j = s->language().spec_constant();
            for (std::size_t i = 1; i + 1 <= s->stage_count(); ++i)
                for (std::size_t k = 1; k <= 2; ++k)
                    for (const Word& b : oracle::all_words(0, 1, k)) {
                        if (s->nu(i, b) <= 0 || s->nu(i + 1, b) <= 0) continue;
                        const auto& sn = s->stage(i + 1);
                        const double xmax = double(sn.spec.l - 1), ymax = double(sn.block_length + j);
                        // f <= g everywhere
                        for (double x : {0.0, xmax / 2, xmax})
                            for (double y : {0.0, ymax / 3, ymax})
                                REQUIRE(s->f_envelope(i, b, x, y, k, j) <= s->g_envelope(i, b, x, y, k, j) + 1e-15);
                        const auto h = s->hypotheses(i, b, k, j);
                        if (!h.all()) {
                            CHECK_THROWS_AS(s->error_envelope(i, b, k, j), std::domain_error);
                            continue;
                        }
                        ++tested;
                        for (double x = 0; x + 1 <= xmax; x += std::max(1.0, std::floor(xmax / 8)))
                            for (double y = 0; y + 1 <= ymax; y += std::max(1.0, std::floor(ymax / 8))) {
                                REQUIRE(s->g_envelope(i, b, x + 1, y, k, j) < s->g_envelope(i, b, x, y, k, j));
                                REQUIRE(s->g_envelope(i, b, x, y + 1, k, j) > s->g_envelope(i, b, x, y, k, j));
                            }
                        const auto env = s->error_envelope(i, b, k, j);
                        CHECK(env.epsilon_prime == s->g_envelope(i, b, 0, ymax, k, j));
                        const auto t = s->g_terms(i, b, k, j);
                        CHECK(t.E == 1.0);
                        CHECK(t.H == s->nu(i + 1, b));
                        CHECK(t.F == doctest::Approx(s->phi_at_end(i, b)));
                    }
        }
        CHECK(tested > 0);
    }

    TEST_CASE("envelope shrinks along the q-ary desk schedule") {
        auto s = materialize(preset("qary-b2-desk"));
        const Word b{0};
        std::vector<double> eps;
        for (std::size_t i = 1; i + 1 <= s->stage_count(); ++i)
            if (s->hypotheses(i, b, 1, 0).all()) eps.push_back(s->error_envelope(i, b, 1, 0).epsilon_prime);
        REQUIRE(eps.size() >= 2);
        for (std::size_t t = 1; t < eps.size(); ++t) CHECK(eps[t] < eps[t - 1]);
    }

    TEST_CASE("no excess when every stage uses the target") {
        auto s = binary_schedule();
        for (const Word& b : {Word{0}, Word{1, 1}})
            for (std::size_t i = 1; i <= 3; ++i) {
                const auto [e, t] = s->excess(i, b);
                CHECK(t == i);
                CHECK(e <= 1e-9 * double(s->L(i)));
            }
    }

    TEST_CASE("excess picks the last stage dominated by the next measure") {
        // nu_1 = nu_3 > nu_2 on the digit 3 of the Lueroth family
        auto target = lueroth_measure();
        std::vector<StageSpec> st{fixed_stage(lueroth_truncated_measure(1), 1, 0.9, parse_word("23")),
                                  fixed_stage(lueroth_truncated_measure(2), 1, 0.8, parse_word("234")),
                                  fixed_stage(lueroth_truncated_measure(3), 1, 0.7, parse_word("2345"))};
        ScheduleOptions opt;
        opt.verify_normality = false;
        Schedule s(full_shift(Alphabet::from(2)), target, st, opt);
        const Word b{3};
        // nu_1(3) = 1/2, nu_2(3) = 1/6, nu_3(3) = 1/6
        CHECK(s.excess(2, b).second == 2);
        CHECK(s.excess(1, b).second == 0);
        CHECK(s.excess(1, b).first == 0.0);
        const Word c{4};  // nu_1 = 0, nu_2 = 1/3, nu_3 = 1/12
        CHECK(s.excess(2, c).second == 1);
        CHECK(s.excess(2, c).first == doctest::Approx(double(s.L(1)) / 12.0));
    }

    TEST_CASE("hypotheses report failures") {
        auto s = binary_schedule();
        const auto h = s->hypotheses(1, Word{0}, 1, 0);
        CHECK_FALSE(h.epsilon_small);
        CHECK(h.copies_positive);
        CHECK_FALSE(h.all());
        CHECK_FALSE(h.failed().empty());
        CHECK_THROWS_AS(s->error_envelope(1, Word{0}, 1, 0), std::domain_error);
        CHECK_THROWS_AS(s->g_terms(4, Word{0}, 1, 0), std::out_of_range);
    }

    TEST_CASE("monotonicity and normality are enforced") {
        auto mu = qary_measure(2);
        auto lang = full_shift(Alphabet::range(0, 1));
        CHECK_THROWS_AS(Schedule(lang, mu, {pool_stage(mu, 3, 0.9, 1, 1, 2), pool_stage(mu, 2, 0.8, 1, 1, 2)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {pool_stage(mu, 1, 0.9, 1, 1, 2), pool_stage(mu, 1, 0.9, 1, 1, 2)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {pool_stage(mu, 1, 0.9, 2, 2, 4), pool_stage(mu, 1, 0.8, 1, 2, 4)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {pool_stage(mu, 1, 0.9, 1, 2, 4), pool_stage(mu, 1, 0.8, 1, 1, 2)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {fixed_stage(mu, 1, 0.1, parse_word("000"))}), std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {}), std::invalid_argument);
        CHECK_THROWS_AS(Schedule(lang, mu, {pool_stage(mu, 1, 0.9, 3, 2, 4)}), std::invalid_argument);
        ScheduleOptions loose;
        loose.enforce_monotone = false;
        CHECK_NOTHROW(Schedule(lang, mu, {pool_stage(mu, 3, 0.9, 1, 1, 2), pool_stage(mu, 2, 0.95, 1, 1, 2)}, loose));
    }

    TEST_CASE("trend verdicts") {
        auto t = make_trend("r", {1, 2, 3, 4}, {3, 2, 1, 0});
        CHECK(t.pass);
        CHECK(t.decreasing_from == 1);
        t = make_trend("r", {1, 2, 3, 4}, {0, 1, 2, 3});
        CHECK_FALSE(t.pass);
        CHECK_FALSE(t.decreasing_from.has_value());
        t = make_trend("r", {1, 2, 3, 4, 5}, {9, 0, 3, 2, 1});
        CHECK(t.pass);  // tail from index 3 covers the second half
        CHECK(t.decreasing_from == 3);
        t = make_trend("r", {1, 2, 3, 4, 5}, {9, 8, 0, 3, 2});
        CHECK_FALSE(t.pass);
        t = make_trend("r", {1, 2, 3}, {1, 1, 1});
        CHECK_FALSE(t.pass);
        CHECK(t.values()[0] == doctest::Approx(std::exp(1.0)));
    }

    TEST_CASE("a constant schedule is flagged") {
        auto mu = qary_measure(2);
        std::vector<StageSpec> st;
        for (int i = 0; i < 6; ++i) st.push_back(fixed_stage(mu, 1, 0.9 - 0.1 * i, parse_word("01")));
        ScheduleOptions opt;
        opt.verify_normality = false;
        Schedule s(full_shift(Alphabet::range(0, 1)), mu, st, opt);
        const auto rep = validate_good(s, 6);
        CHECK_FALSE(rep.pass());
        const auto f = rep.failing();
        CHECK(std::find(f.begin(), f.end(), "good3") != f.end());
        const auto j = nlohmann::json::parse(rep.to_json());
        CHECK(j["pass"] == false);
        CHECK(j["series"].size() == 4);
        CHECK(j["series"][2]["name"] == "good3");
        CHECK(j["series"][2].contains("decreasing_from"));
    }

    TEST_CASE("good4 examples") {
        std::vector<double> q(20, 2.0), M, same;
        for (int i = 1; i <= 20; ++i) {
            M.push_back(std::pow(2.0, 2 * i) * std::log(double(i)));
            same.push_back(std::pow(2.0, 2 * i));
        }
        const auto t = validate_good4(q, M, 2, 20);
        CHECK(t.pass);
        for (std::size_t n = 0; n < t.index.size(); ++n)
            CHECK(t.values()[n] == doctest::Approx(1 / std::log(double(t.index[n]))).epsilon(1e-9));
        CHECK_FALSE(validate_good4(q, same, 1, 20).pass);
        CHECK_THROWS_AS(validate_good4(q, std::vector<double>(3, 1.0), 1, 20), std::invalid_argument);
    }

    TEST_CASE("symbolic q-ary schedule: ratios fall at i = 5, 10, 20") {
        SymbolicParams p;
        p.q = 2;
        const auto rep = validate_good_symbolic(symbolic_schedule(p), 21);
        CHECK(rep.pass());
        for (const auto& s : rep.series) {
            auto at = [&](std::size_t i) {
                for (std::size_t n = 0; n < s.index.size(); ++n)
                    if (s.index[n] == i) return s.log_values[n];
                FAIL("index missing");
                return 0.0;
            };
            CAPTURE(s.name);
            CHECK(at(5) > at(10));
            CHECK(at(10) > at(20));
        }
    }

    TEST_CASE("symbolic Lueroth good4 spot values") {
        SymbolicParams p;
        p.system = NumerationSystem::lueroth;
        const auto rep = validate_good_symbolic(symbolic_schedule(p), 30);
        const auto& g4 = rep.series[3];
        REQUIRE(g4.name == "good4");
        for (std::size_t n = 0; n < g4.index.size(); ++n) {
            const double i = double(g4.index[n]);
            const double expect = 2 * i * std::log(i + 2) - std::max(std::log(36.0), 2 * i * std::log(i) + std::log(std::log(i)));
            CHECK(g4.log_values[n] == doctest::Approx(expect).epsilon(1e-12));
        }
        auto value = [&](double i) { return std::pow(i + 2, 2 * i) / std::max(36.0, std::pow(i, 2 * i) * std::log(i)); };
        CHECK(g4.values()[3] == doctest::Approx(value(5)).epsilon(1e-9));
        CHECK(g4.values()[8] == doctest::Approx(value(10)).epsilon(1e-9));
        CHECK(rep.pass());
    }

    TEST_CASE("symbolic continued-fraction schedule meets the displayed bound at i = 9") {
        SymbolicParams p;
        p.system = NumerationSystem::continued_fraction;
        const auto rep = validate_good_symbolic(symbolic_schedule(p), 30);
        CHECK(rep.pass());
        const auto& r2 = rep.series[1];
        REQUIRE(r2.index.front() == 9);
        const double bound = std::pow(1 - 1.0 / 9, 18) / 8 + 1 / (2 * std::pow(9.0, 10));
        CHECK(r2.values()[0] < bound);
    }

    TEST_CASE("symbolic schedules for every system and a broken epsilon law") {
        for (auto sys : {NumerationSystem::qary, NumerationSystem::lueroth, NumerationSystem::beta,
                         NumerationSystem::continued_fraction}) {
            SymbolicParams p;
            p.system = sys;
            p.q = 10;
            p.parry = ParryData::parse("2(1)");
            CAPTURE(to_string(sys));
            CHECK(validate_good_symbolic(symbolic_schedule(p), 30).pass());
        }
        SymbolicParams bad;
        bad.epsilon_law = EpsilonLaw::constant;
        const auto rep = validate_good_symbolic(symbolic_schedule(bad), 30);
        CHECK_FALSE(rep.pass());
        CHECK(rep.failing().front() == "good1");
        CHECK_THROWS_AS(validate_good_symbolic(symbolic_schedule(SymbolicParams{}), 4), std::invalid_argument);
        SymbolicParams no_parry;
        no_parry.system = NumerationSystem::beta;
        CHECK_THROWS_AS(symbolic_schedule(no_parry), std::invalid_argument);
    }

    TEST_CASE("beta padding multiplier") {
        const ParryData g = ParryData::golden_ratio(), s = ParryData::parse("2(1)"), r = ParryData::parse("3(12)");
        CHECK(beta_phi(g, 10) == 1);
        CHECK(beta_phi(s, 1) == 1);
        CHECK(beta_phi(s, 2) == 2);
        CHECK(beta_phi(s, 5) == 5);
        CHECK(beta_phi(r, 1) == 1);
        CHECK(beta_phi(r, 4) == 3);
    }
}
