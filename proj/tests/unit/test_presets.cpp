#include "doctest.h"
#include "json.hpp"
#include "munormal/presets.hpp"
#include "oracles.hpp"

using namespace munormal;

TEST_SUITE("presets") {
    TEST_CASE("every preset parses") {
        const auto names = preset_names();
        CHECK(names.size() >= 10);
        for (const auto& name : names) {
            CAPTURE(name);
            CHECK(has_preset(name));
            const RunConfig c = preset(name);
            CHECK(c.name == name);
            CHECK((c.materializable() || c.symbolic.has_value()));
            CHECK(nlohmann::json::accept(preset_json(name)));
            if (c.symbolic) CHECK(validate_good_symbolic(make_symbolic(c), c.horizon).pass());
        }
        CHECK_FALSE(has_preset("nope"));
        CHECK_THROWS_AS(preset("nope"), ConfigError);
    }

    TEST_CASE("desk presets materialize with non-decreasing stages") {
        for (const char* name : {"qary-b2-desk", "beta-golden-desk"}) {
            auto s = materialize(preset(name));
            CHECK(s->total_length() >= 1000000);
            for (std::size_t i = 2; i <= s->stage_count(); ++i) {
                CHECK(s->stage(i).spec.epsilon < s->stage(i - 1).spec.epsilon);
                CHECK(s->stage(i).block_length >= s->stage(i - 1).block_length);
            }
        }
    }

    TEST_CASE("configs build languages, measures and stage specs") {
        const RunConfig lu = preset("lueroth-desk");
        CHECK(lu.system == NumerationSystem::lueroth);
        const auto specs = make_stage_specs(lu);
        REQUIRE(specs.size() == lu.stages.size());
        CHECK(specs[0].first_digit == 2);
        CHECK(specs[0].base == Digit(*lu.stages[0].truncation + 1));
        CHECK(make_language(lu)->alphabet().first == 2);
        CHECK_FALSE(make_language(lu)->alphabet().bounded());
        const RunConfig cf = preset("cf-desk");
        CHECK(make_stage_specs(cf)[0].first_digit == 1);
        CHECK(make_target(cf)->id() == "gauss");
        const RunConfig b = preset("beta-golden-desk");
        CHECK(make_language(b)->spec_constant() == 2);
        CHECK(default_encoding(b) == Encoding::chars);
        CHECK(default_encoding(preset("cf-desk")) == Encoding::packed);
        CHECK(default_encoding(preset("lueroth-desk")) == Encoding::chars);
    }

    TEST_CASE("overrides on top of a preset") {
        const RunConfig c = parse_config(R"({"preset": "qary-b2-desk", "n": 5000, "audit": {"k_max": 2}})");
        CHECK(c.n == 5000);
        CHECK(c.audit.k_max == 2);
        CHECK(c.stages.size() == preset("qary-b2-desk").stages.size());
    }

    TEST_CASE("custom configs") {
        const RunConfig c = parse_config(R"({
            "system": "beta", "parry": {"preperiod": [2], "period": [1]},
            "surrogate": {"stages": [{"window": 2, "M": 40, "l": 2, "epsilon": 0.9},
                                     {"block": "2101", "l": 3, "epsilon": 0.8}]},
            "symbolic": {"epsilon": "constant", "epsilon_value": 0.3}})");
        CHECK(c.parry->beta() == doctest::Approx(std::pow((1 + std::sqrt(5.0)) / 2, 2)));
        CHECK(c.stages[1].block == parse_word("2101"));
        CHECK(c.symbolic->epsilon_law == EpsilonLaw::constant);
        CHECK(c.symbolic->epsilon_value == 0.3);
        CHECK(c.materializable());
    }

    TEST_CASE("configuration errors") {
        for (const char* bad : {
                 "not json",
                 "[1, 2]",
                 R"({"q": 2})",
                 R"({"system": "octal", "symbolic": {}})",
                 R"({"system": "beta", "symbolic": {}})",
                 R"({"system": "beta", "parry": "12", "symbolic": {}})",
                 R"({"system": "qary", "q": 1, "symbolic": {}})",
                 R"({"system": "qary"})",
                 R"({"system": "qary", "symbolic": {"epsilon": "linear"}})",
                 R"({"system": "qary", "surrogate": {"stages": []}})",
                 R"({"system": "qary", "surrogate": {"stages": [{"window": 2, "l": 1, "epsilon": 0.5}]}})",
                 R"({"system": "qary", "surrogate": {"stages": [{"window": "two", "M": 4, "l": 1, "epsilon": 0.5}]}})",
                 R"({"system": "qary", "symbolic": {}, "encoding": "hex"})",
                 R"({"preset": "missing"})",
             }) {
            CAPTURE(bad);
            CHECK_THROWS_AS(parse_config(bad), ConfigError);
        }
        const RunConfig no_trunc =
            parse_config(R"({"system": "lueroth", "surrogate": {"stages": [{"window": 1, "M": 4, "l": 1, "epsilon": 0.5}]}})");
        CHECK_THROWS_AS(materialize(no_trunc), ConfigError);
        const RunConfig small_M =
            parse_config(R"({"system": "qary", "surrogate": {"stages": [{"window": 2, "M": 1, "l": 1, "epsilon": 0.5}]}})");
        CHECK_THROWS_AS(materialize(small_M), ConfigError);
        CHECK_THROWS_AS(make_symbolic(small_M), ConfigError);
        CHECK_THROWS_AS(materialize(preset("qary-b2")), ConfigError);
        CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
    }

    TEST_CASE("measure specifications") {
        CHECK(parse_measure("qary:3")->id() == "qary:3");
        CHECK(parse_measure("lueroth")->id() == "lueroth");
        CHECK(parse_measure("lueroth:4")->id() == "lueroth:4");
        CHECK(parse_measure("gauss")->id() == "gauss");
        CHECK(parse_measure("cf:9")->id() == "gauss:9");
        CHECK((*parse_measure("beta:11"))(parse_word("11")) == 0.0);
        CHECK((*parse_measure("parry:2(1)"))(Word{2}) > 0.0);
        for (const char* bad : {"qary", "qary:x", "qary:1", "beta:12", "poisson", "lueroth:2x"}) {
            CAPTURE(bad);
            CHECK_THROWS_AS(parse_measure(bad), ConfigError);
        }
    }

    TEST_CASE("audit sets agree with brute force") {
        const auto mu = parry_measure(ParryData::golden_ratio());
        const auto got = audit_set(*mu, 4, 0.05);
        std::vector<Word> expect;
        for (std::size_t k = 1; k <= 4; ++k)
            for (const Word& w : oracle::all_words(0, 1, k))
                if ((*mu)(w) >= 0.05) expect.push_back(w);
        CHECK(got == expect);

        const auto g = gauss_measure();
        const auto cf = audit_set(*g, 2, 0.01);
        std::vector<Word> cf_expect;
        for (std::size_t k = 1; k <= 2; ++k)
            for (const Word& w : oracle::all_words(1, 40, k))
                if (oracle::gauss_measure(w) >= 0.01) cf_expect.push_back(w);
        CHECK(cf == cf_expect);
        CHECK_THROWS_AS(audit_set(*g, 2, 0.0), ConfigError);
        CHECK(audit_set(*qary_measure(2), 3, 0).size() == 14);
    }
}
