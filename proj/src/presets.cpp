#include "munormal/presets.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace munormal {

namespace {

using nlohmann::json;

// Shipped configurations. The symbolic ones carry the asymptotic schedules
// and are only checked in log space; the "-desk" ones are small enough to
// materialize and stream.
const std::map<std::string, std::string>& preset_table() {
    static const std::map<std::string, std::string> table = {
        {"qary-b2", R"json({
  "name": "qary-b2",
  "description": "binary expansions: q_i = 2, M_i = 2^{2i} log i, l_i = i^{2i}, eps_i = 1/sqrt(i), window i",
  "system": "qary", "q": 2,
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"qary-b10", R"json({
  "name": "qary-b10",
  "description": "decimal expansions: q_i = 10, M_i = 10^{2i} log i, l_i = i^{2i}, eps_i = 1/sqrt(i), window i",
  "system": "qary", "q": 10,
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"lueroth", R"json({
  "name": "lueroth",
  "description": "Lueroth series: q_i = i + 2, M_i = max(36, i^{2i} log i), l_i = floor(i^2 log i), eps_i = 1/sqrt(i), window i",
  "system": "lueroth",
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"beta-golden", R"json({
  "name": "beta-golden",
  "description": "golden ratio beta, d(1) = 11: M_i = max(beta^{t + phi(i) p}/(1 - 1/beta), 2^{2i} log i), l_i = i^{2i}, eps_i = 1/sqrt(i)",
  "system": "beta", "parry": "11",
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"beta-phi2", R"json({
  "name": "beta-phi2",
  "description": "beta = golden ratio squared, d(1) = 2 1 1 1 ...: same laws as beta-golden with ceil(beta) = 3",
  "system": "beta", "parry": "2(1)",
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"cf", R"json({
  "name": "cf",
  "description": "continued fractions: M_i = 2 i^{2i} log i, l_i = 0 for i < 8 and floor(i^2 log i) after, pool base i + 1, eps_i = 1/sqrt(i)",
  "system": "cf",
  "symbolic": {"epsilon": "inv_sqrt"},
  "horizon": 30
})json"},
        {"qary-b2-desk", R"json({
  "name": "qary-b2-desk",
  "description": "binary surrogate: windows 4..14 with M = 2^window (one copy of every word), copies growing 2..400 so each stage outweighs the last",
  "system": "qary", "q": 2,
  "surrogate": {"stages": [
    {"window": 4,  "M": 16,    "l": 2,   "epsilon": 0.30, "k": 2},
    {"window": 6,  "M": 64,    "l": 30,  "epsilon": 0.20, "k": 3},
    {"window": 8,  "M": 256,   "l": 60,  "epsilon": 0.15, "k": 3},
    {"window": 10, "M": 1024,  "l": 150, "epsilon": 0.10, "k": 3},
    {"window": 12, "M": 4096,  "l": 400, "epsilon": 0.05, "k": 3},
    {"window": 14, "M": 16384, "l": 400, "epsilon": 0.03, "k": 3}
  ]},
  "n": 1000000,
  "audit": {"k_max": 3, "tol": 0.05, "mu_floor": 0.01}
})json"},
        {"beta-golden-desk", R"json({
  "name": "beta-golden-desk",
  "description": "golden ratio surrogate: Parry measure at every stage, windows 4..14, M from 20 to 20000, copies growing 2..120 so n = 10^6 lands inside whole copies of the window-10 block",
  "system": "beta", "parry": "11",
  "surrogate": {"stages": [
    {"window": 4,  "M": 20,     "l": 2,   "epsilon": 0.45, "k": 2},
    {"window": 6,  "M": 200,    "l": 8,   "epsilon": 0.35, "k": 3},
    {"window": 8,  "M": 500,    "l": 20,  "epsilon": 0.25, "k": 3},
    {"window": 10, "M": 2000,   "l": 60,  "epsilon": 0.15, "k": 3},
    {"window": 12, "M": 20000,  "l": 120, "epsilon": 0.10, "k": 3},
    {"window": 14, "M": 20000,  "l": 120, "epsilon": 0.08, "k": 3}
  ]},
  "n": 1000000,
  "audit": {"k_max": 3, "tol": 0.05, "mu_floor": 0.01}
})json"},
        {"lueroth-desk", R"json({
  "name": "lueroth-desk",
  "description": "Lueroth surrogate: truncations nu_2..nu_7 (digits 2..c+2), window 2, M = 8/m_2",
  "system": "lueroth",
  "surrogate": {"stages": [
    {"truncation": 2, "window": 2, "M": 288,   "l": 1,  "epsilon": 0.45, "k": 2},
    {"truncation": 3, "window": 2, "M": 1152,  "l": 1,  "epsilon": 0.35, "k": 2},
    {"truncation": 4, "window": 2, "M": 3200,  "l": 1,  "epsilon": 0.25, "k": 2},
    {"truncation": 5, "window": 2, "M": 7200,  "l": 16, "epsilon": 0.20, "k": 2},
    {"truncation": 6, "window": 2, "M": 14112, "l": 16, "epsilon": 0.15, "k": 2},
    {"truncation": 7, "window": 2, "M": 25088, "l": 20, "epsilon": 0.10, "k": 2}
  ]},
  "n": 1000000,
  "audit": {"k_max": 3, "tol": 0.05, "mu_floor": 0.01}
})json"},
        {"cf-desk", R"json({
  "name": "cf-desk",
  "description": "continued-fraction surrogate: truncations nu_8..nu_10 (last digit stands for all larger ones), windows 1..2",
  "system": "cf",
  "surrogate": {"stages": [
    {"truncation": 8,  "window": 1, "M": 400,    "l": 2, "epsilon": 0.45, "k": 1},
    {"truncation": 8,  "window": 2, "M": 30000,  "l": 4, "epsilon": 0.35, "k": 2},
    {"truncation": 9,  "window": 2, "M": 60000,  "l": 4, "epsilon": 0.25, "k": 2},
    {"truncation": 10, "window": 2, "M": 100000, "l": 8, "epsilon": 0.15, "k": 2}
  ]},
  "n": 1000000,
  "audit": {"k_max": 3, "tol": 0.05, "mu_floor": 0.01}
})json"},
    };
    return table;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

StageConfig parse_stage(const json& j, std::size_t index) {
    const std::string where = "stage " + std::to_string(index + 1) + ": ";
    if (!j.is_object()) throw ConfigError(where + "expected an object");
    StageConfig s;
    const bool fixed = j.contains("block");
    for (const char* key : {"window", "M", "l", "epsilon"}) {
        const bool optional = fixed && (std::string_view(key) == "window" || std::string_view(key) == "M");
        if (!optional && !j.contains(key)) throw ConfigError(where + "missing '" + key + "'");
    }
    if (j.contains("truncation")) s.truncation = j.at("truncation").get<std::size_t>();
    if (fixed) {
        s.block = parse_word(j.at("block").get<std::string>());
        s.window = get_or<std::size_t>(j, "window", 1);
        s.M = get_or<double>(j, "M", 1.0);
    } else {
        s.window = j.at("window").get<std::size_t>();
        s.M = j.at("M").get<double>();
    }
    s.l = j.at("l").get<std::uint64_t>();
    s.epsilon = j.at("epsilon").get<double>();
    s.k = get_or<std::size_t>(j, "k", 1);
    if (j.contains("base")) s.base = j.at("base").get<Digit>();
    if (j.contains("first_digit")) s.first_digit = j.at("first_digit").get<Digit>();
    return s;
}

Digit system_first_digit(NumerationSystem s) {
    switch (s) {
        case NumerationSystem::lueroth: return 2;
        case NumerationSystem::continued_fraction: return 1;
        default: return 0;
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    c.source = j.dump();
    try {
        if (j.contains("preset")) {
            // {"preset": NAME, ...overrides}
            RunConfig base = preset(j.at("preset").get<std::string>());
            json merged = json::parse(base.source);
            for (auto& [k, v] : j.items())
                if (k != "preset") merged[k] = v;
            RunConfig out = parse_config(merged.dump());
            out.source = j.dump();
            return out;
        }
        if (!j.contains("system")) throw ConfigError("config needs 'system' (qary, lueroth, beta, cf)");
        try {
            c.system = parse_system(j.at("system").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        c.name = get_or<std::string>(j, "name", "custom");
        c.description = get_or<std::string>(j, "description", "");
        c.q = get_or<unsigned>(j, "q", 2);
        if (c.system == NumerationSystem::qary && c.q < 2) throw ConfigError("q must be >= 2");
        if (c.system == NumerationSystem::beta) {
            if (!j.contains("parry"))
                throw ConfigError("beta systems need 'parry': \"11\", \"2(1)\" or {\"preperiod\": [...], \"period\": [...]}");
            try {
                const json& pj = j.at("parry");
                if (pj.is_object()) {
                    c.parry = ParryData(pj.at("preperiod").get<Word>(), get_or<Word>(pj, "period", Word{}));
                } else {
                    c.parry = ParryData::parse(pj.get<std::string>());
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("bad Parry expansion: ") + e.what());
            }
        }
        if (j.contains("surrogate")) {
            const json& stages = j.at("surrogate").at("stages");
            if (!stages.is_array() || stages.empty()) throw ConfigError("surrogate.stages must be a non-empty array");
            for (std::size_t i = 0; i < stages.size(); ++i) c.stages.push_back(parse_stage(stages[i], i));
        }
        if (j.contains("symbolic")) {
            const json& s = j.at("symbolic");
            SymbolicParams p;
            p.system = c.system;
            p.q = c.q;
            p.parry = c.parry;
            const std::string law = get_or<std::string>(s, "epsilon", "inv_sqrt");
            if (law == "inv_sqrt") {
                p.epsilon_law = EpsilonLaw::inv_sqrt;
            } else if (law == "constant") {
                p.epsilon_law = EpsilonLaw::constant;
                p.epsilon_value = get_or<double>(s, "epsilon_value", 0.25);
            } else {
                throw ConfigError("symbolic.epsilon must be 'inv_sqrt' or 'constant'");
            }
            c.symbolic = p;
        }
        if (c.stages.empty() && !c.symbolic) throw ConfigError("config needs 'surrogate' stages or a 'symbolic' schedule");
        c.horizon = get_or<std::size_t>(j, "horizon", 30);
        c.n = get_or<std::uint64_t>(j, "n", 1000000);
        if (j.contains("encoding")) {
            try {
                c.encoding = parse_encoding(j.at("encoding").get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (j.contains("audit")) {
            const json& a = j.at("audit");
            c.audit.k_max = get_or<std::size_t>(a, "k_max", c.audit.k_max);
            c.audit.tol = get_or<double>(a, "tol", c.audit.tol);
            c.audit.mu_floor = get_or<double>(a, "mu_floor", c.audit.mu_floor);
        }
        if (c.audit.k_max > c.n) throw ConfigError("n must be at least the largest audited block length");
        c.precision = get_or<unsigned>(j, "precision", 0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : preset_table()) out.push_back(name);
    return out;
}

bool has_preset(const std::string& name) { return preset_table().count(name) != 0; }

const std::string& preset_json(const std::string& name) {
    auto it = preset_table().find(name);
    if (it == preset_table().end()) throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

RunConfig preset(const std::string& name) { return parse_config(preset_json(name)); }

LanguagePtr make_language(const RunConfig& c) {
    switch (c.system) {
        case NumerationSystem::qary: return full_shift(Alphabet::range(0, c.q - 1));
        case NumerationSystem::lueroth: return full_shift(Alphabet::from(2));
        case NumerationSystem::beta: return beta_shift(*c.parry);
        case NumerationSystem::continued_fraction: return full_shift(Alphabet::from(1));
    }
    throw ConfigError("unknown system");
}

MeasurePtr make_target(const RunConfig& c) {
    switch (c.system) {
        case NumerationSystem::qary: return qary_measure(c.q);
        case NumerationSystem::lueroth: return lueroth_measure();
        case NumerationSystem::beta: return parry_measure(*c.parry);
        case NumerationSystem::continued_fraction: return gauss_measure();
    }
    throw ConfigError("unknown system");
}

MeasurePtr make_stage_measure(const RunConfig& c, const StageConfig& s) {
    switch (c.system) {
        case NumerationSystem::lueroth:
            if (!s.truncation) throw ConfigError("Lueroth stages need 'truncation'");
            return lueroth_truncated_measure(*s.truncation);
        case NumerationSystem::continued_fraction:
            if (!s.truncation) throw ConfigError("continued-fraction stages need 'truncation'");
            return gauss_truncated_measure(*s.truncation);
        default:
            return make_target(c);
    }
}

std::vector<StageSpec> make_stage_specs(const RunConfig& c) {
    if (c.stages.empty()) throw ConfigError("config '" + c.name + "' has no materializable stages");
    std::vector<StageSpec> specs;
    for (const auto& s : c.stages) {
        StageSpec sp;
        sp.nu = make_stage_measure(c, s);
        const Alphabet support = sp.nu->support();
        sp.first_digit = s.first_digit.value_or(system_first_digit(c.system));
        if (s.base) {
            sp.base = *s.base;
        } else if (support.bounded()) {
            sp.base = *support.last - sp.first_digit + 1;
        } else {
            throw ConfigError("stage needs 'base' when its measure has unbounded support");
        }
        sp.window = s.window;
        sp.M = s.M;
        sp.l = s.l;
        sp.epsilon = s.epsilon;
        sp.k = s.k;
        sp.fixed_block = s.block;
        specs.push_back(std::move(sp));
    }
    return specs;
}

std::shared_ptr<const Schedule> materialize(const RunConfig& c, ScheduleOptions options) {
    auto specs = make_stage_specs(c);
    try {
        return std::make_shared<const Schedule>(make_language(c), make_target(c), std::move(specs), options);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("schedule rejected: ") + e.what());
    } catch (const std::length_error& e) {
        throw ConfigError(std::string("schedule too large: ") + e.what());
    }
}

SymbolicSchedule make_symbolic(const RunConfig& c) {
    if (!c.symbolic) throw ConfigError("config '" + c.name + "' has no symbolic schedule");
    SymbolicSchedule s = symbolic_schedule(*c.symbolic);
    s.name = c.name;
    return s;
}

MeasurePtr parse_measure(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&](const char* what) -> unsigned long {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(std::string("measure '") + spec + "' needs an integer " + what);
        }
    };
    try {
        if (head == "qary") return qary_measure(unsigned(number("base")));
        if (head == "lueroth") return arg.empty() ? lueroth_measure() : lueroth_truncated_measure(number("stage"));
        if (head == "gauss" || head == "cf")
            return arg.empty() ? gauss_measure() : gauss_truncated_measure(number("stage"));
        if (head == "beta" || head == "parry") return parry_measure(ParryData::parse(arg));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("bad measure '" + spec + "': " + e.what());
    }
    throw ConfigError("unknown measure '" + spec + "' (qary:Q, lueroth[:C], gauss[:C], beta:EXPANSION)");
}

std::vector<Word> audit_set(const CylinderMeasure& mu, std::size_t k_max, double floor) {
    std::vector<Digit> digits;
    const Alphabet support = mu.support();
    if (support.bounded()) {
        for (Digit d = support.first; d <= *support.last; ++d) digits.push_back(d);
    } else {
        if (!(floor > 0)) throw ConfigError("an unbounded support needs a positive mu floor");
        for (Digit d = support.first;; ++d) {
            const Digit one[1] = {d};
            if (mu(one) < floor || d - support.first > 100000) break;
            digits.push_back(d);
        }
    }
    std::vector<Word> out;
    std::vector<Word> frontier = {Word{}};
    for (std::size_t k = 1; k <= k_max && !frontier.empty(); ++k) {
        std::vector<Word> next;
        for (const Word& prefix : frontier) {
            for (Digit d : digits) {
                Word b = prefix;
                b.push_back(d);
                // mu(b d) <= mu(b), so pruning below the floor is exact.
                const double m = mu(b);
                if (m > 0 && m >= floor) next.push_back(std::move(b));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

Encoding default_encoding(const RunConfig& c) {
    Digit hi = 0;
    if (c.system == NumerationSystem::qary) {
        hi = c.q - 1;
    } else if (c.system == NumerationSystem::beta) {
        hi = c.parry->alphabet_size() - 1;
    } else {
        for (const auto& sp : make_stage_specs(c)) hi = std::max<Digit>(hi, sp.first_digit + sp.base - 1);
    }
    if (hi <= 9) return Encoding::chars;
    if (hi <= 255) return Encoding::packed;
    return Encoding::lines;
}

}  // namespace munormal
