// Batch front end: generate, verify, schedule-check.
// Exit codes: 0 pass, 1 verification failure, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "munormal/counting.hpp"
#include "munormal/numerals.hpp"
#include "munormal/presets.hpp"
#include "munormal/stream.hpp"

using namespace munormal;
using nlohmann::json;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

struct Fnv1a {
    std::uint64_t h = 14695981039346656037ULL;
    void update(const std::string& bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

RunConfig resolve(const std::string& preset_name, const std::string& config_path) {
    if (!preset_name.empty() && !config_path.empty()) throw ConfigError("give --preset or --config, not both");
    if (!preset_name.empty()) return preset(preset_name);
    if (!config_path.empty()) return load_config_file(config_path);
    throw ConfigError("one of --preset or --config is required");
}

unsigned precision_of(const RunConfig& c) { return c.precision ? c.precision : default_precision(); }

json value_record(const RunConfig& c, WordView digits) {
    const unsigned bits = precision_of(c);
    RealValue v;
    switch (c.system) {
        case NumerationSystem::qary: v = qary_value(digits, c.q, bits); break;
        case NumerationSystem::lueroth: v = lueroth_value(digits, bits); break;
        case NumerationSystem::beta: v = beta_value(digits, *c.parry, bits); break;
        case NumerationSystem::continued_fraction: v = cf_value(digits, bits); break;
    }
    return json{{"value", v.value.to_string()},
                {"radius", v.radius().to_string(6)},
                {"tail", v.tail.to_string(6)},
                {"precision", bits},
                {"digits_used", v.digits_used}};
}

std::string target_spec(const RunConfig& c) { return make_target(c)->id(); }

int cmd_generate(const std::string& preset_name, const std::string& config_path, std::optional<std::uint64_t> n_opt,
                 const std::string& out_path, const std::string& encoding_name) {
    RunConfig c = resolve(preset_name, config_path);
    const std::uint64_t n = n_opt.value_or(c.n);
    const Encoding enc = !encoding_name.empty() ? parse_encoding(encoding_name) : c.encoding.value_or(default_encoding(c));
    auto schedule = materialize(c);
    if (n > schedule->total_length())
        throw ConfigError("schedule '" + c.name + "' supplies only " + std::to_string(schedule->total_length()) +
                          " digits; requested " + std::to_string(n));

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + out_path);
    DigitStream stream(schedule);
    Fnv1a checksum;
    Word prefix;
    prefix.reserve(n);
    constexpr std::uint64_t chunk = std::uint64_t(1) << 20;
    while (stream.emitted() < n) {
        const Word digits = stream.next_digits(std::min(chunk, n - stream.emitted()));
        std::ostringstream buf;
        write_digits(buf, digits, enc);
        const std::string bytes = buf.str();
        checksum.update(bytes);
        out.write(bytes.data(), std::streamsize(bytes.size()));
        prefix.insert(prefix.end(), digits.begin(), digits.end());
    }
    out.close();
    if (!out) throw ConfigError("write to " + out_path + " failed");

    json stages = json::array();
    for (std::size_t i = 1; i <= schedule->stage_count(); ++i) {
        const auto& st = schedule->stage(i);
        stages.push_back({{"i", i},
                          {"L", st.end},
                          {"reached", st.end <= n},
                          {"block_length", st.block_length},
                          {"copies", st.spec.l},
                          {"epsilon", st.spec.epsilon},
                          {"k", st.spec.k}});
        if (st.end > n) break;
    }
    json manifest{{"config", json::parse(c.source)},
                  {"name", c.name},
                  {"system", to_string(c.system)},
                  {"measure", target_spec(c)},
                  {"language", schedule->language().id()},
                  {"n", n},
                  {"encoding", to_string(enc)},
                  {"stages", stages},
                  {"checksum", {{"fnv1a64", checksum.hex()}}},
                  {"value", value_record(c, prefix)}};
    std::ofstream m(out_path + ".manifest.json");
    if (!m) throw ConfigError("cannot write manifest for " + out_path);
    m << manifest.dump(2) << "\n";
    std::cout << "wrote " << n << " digits to " << out_path << " (" << to_string(enc) << ", fnv1a64 "
              << checksum.hex() << ")\n";
    return exit_pass;
}

struct VerifyArgs {
    std::string in, preset, config, report, measure, encoding;
    std::optional<std::size_t> k_max;
    std::optional<double> tol, mu_floor;
    std::optional<std::uint64_t> n;
    unsigned chunks = 1;
};

int cmd_verify(const VerifyArgs& a) {
    Word digits;
    std::optional<RunConfig> config;
    if (!a.in.empty()) {
        if (!a.preset.empty() || !a.config.empty()) throw ConfigError("give --in or --preset/--config, not both");
        std::ifstream in(a.in, std::ios::binary);
        if (!in) throw ConfigError("cannot read " + a.in);
        std::optional<Encoding> enc;
        if (!a.encoding.empty()) enc = parse_encoding(a.encoding);
        std::ifstream manifest(a.in + ".manifest.json");
        if (manifest) {
            try {
                const json m = json::parse(manifest);
                config = parse_config(m.at("config").dump());
                if (!enc) enc = parse_encoding(m.at("encoding").get<std::string>());
            } catch (const json::exception& e) {
                throw ConfigError(std::string("bad manifest: ") + e.what());
            }
        }
        if (!enc) {
            std::string head(4096, '\0');
            in.read(head.data(), std::streamsize(head.size()));
            head.resize(std::size_t(in.gcount()));
            in.clear();
            in.seekg(0);
            enc = sniff_encoding(head);
        }
        try {
            digits = read_digits(in, *enc);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("unparsable digits: ") + e.what());
        }
    } else {
        config = resolve(a.preset, a.config);
        const std::uint64_t n = a.n.value_or(config->n);
        auto schedule = materialize(*config);
        if (n > schedule->total_length()) throw ConfigError("schedule too short for n = " + std::to_string(n));
        DigitStream stream(schedule);
        digits = stream.next_digits(n);
    }

    MeasurePtr mu;
    if (!a.measure.empty()) {
        mu = parse_measure(a.measure);
    } else if (config) {
        mu = make_target(*config);
    } else {
        throw ConfigError("--measure is required when the input has no manifest");
    }
    const AuditConfig defaults = config ? config->audit : AuditConfig{};
    const std::size_t k_max = a.k_max.value_or(defaults.k_max);
    const double tol = a.tol.value_or(defaults.tol);
    const double floor = a.mu_floor.value_or(defaults.mu_floor);
    const std::uint64_t n = a.n.value_or(digits.size());
    if (n > digits.size()) throw ConfigError("--n exceeds the " + std::to_string(digits.size()) + " available digits");
    if (k_max < 1 || k_max > n) throw ConfigError("k-max must lie in [1, n]");

    const auto targets = audit_set(*mu, k_max, floor);
    if (targets.empty()) throw ConfigError("no block reaches the mu floor");
    CountOptions opts;
    opts.chunks = a.chunks;
    opts.mu = mu.get();
    opts.mu_floor = floor;
    const FrequencyReport rep = count_blocks(digits, targets, n, opts);
    const bool pass = rep.max_rel_dev <= tol;

    json report = json::parse(rep.to_json());
    report["measure"] = mu->id();
    report["k_max"] = k_max;
    report["tol"] = tol;
    report["pass"] = pass;
    const std::string text = report.dump(2);
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) throw ConfigError("cannot write " + a.report);
        out << text << "\n";
    } else {
        std::cout << text << "\n";
    }
    std::cerr << (pass ? "PASS" : "FAIL") << ": max relative deviation " << rep.max_rel_dev << " over "
              << targets.size() << " blocks (tol " << tol << ")\n";
    return pass ? exit_pass : exit_fail;
}

int cmd_schedule_check(const std::string& preset_name, const std::string& config_path,
                       std::optional<std::size_t> horizon_opt, const std::string& report_path) {
    RunConfig c = resolve(preset_name, config_path);
    const std::size_t horizon = horizon_opt.value_or(c.horizon);
    GoodReport report;
    try {
        if (c.symbolic) {
            report = validate_good_symbolic(make_symbolic(c), horizon);
        } else {
            auto schedule = materialize(c);
            report = validate_good(*schedule, horizon);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::string text = report.to_json(2);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw ConfigError("cannot write " + report_path);
        out << text << "\n";
    } else {
        std::cout << text << "\n";
    }
    if (report.pass()) {
        std::cerr << "PASS: all trends decreasing over horizon " << horizon << "\n";
        return exit_pass;
    }
    std::cerr << "FAIL:";
    for (const auto& name : report.failing()) std::cerr << " (" << name << ")";
    std::cerr << "\n";
    return exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"munormal: digit streams that are normal for a target measure"};
    app.require_subcommand(1);

    std::string g_preset, g_config, g_out, g_encoding;
    std::optional<std::uint64_t> g_n;
    auto* gen = app.add_subcommand("generate", "write a digit prefix and its manifest");
    gen->add_option("--preset", g_preset, "shipped preset name");
    gen->add_option("--config", g_config, "JSON config file");
    gen->add_option("--n", g_n, "prefix length (default from the config)");
    gen->add_option("--out", g_out, "output path")->required();
    gen->add_option("--encoding", g_encoding, "lines | packed | chars");

    VerifyArgs v;
    auto* ver = app.add_subcommand("verify", "audit block frequencies of a prefix");
    ver->add_option("--in", v.in, "digit file (reads <in>.manifest.json when present)");
    ver->add_option("--preset", v.preset, "generate the prefix from a preset");
    ver->add_option("--config", v.config, "generate the prefix from a config file");
    ver->add_option("--k-max", v.k_max, "largest audited block length");
    ver->add_option("--tol", v.tol, "tolerance on the max relative deviation");
    ver->add_option("--mu-floor", v.mu_floor, "audit only blocks with mu(b) >= floor");
    ver->add_option("--report", v.report, "write the JSON report here instead of stdout");
    ver->add_option("--measure", v.measure, "qary:Q | lueroth[:C] | gauss[:C] | beta:EXPANSION");
    ver->add_option("--n", v.n, "audit the first n digits");
    ver->add_option("--encoding", v.encoding, "lines | packed | chars (default: manifest or sniffed)");
    ver->add_option("--chunks", v.chunks, "parallel counting chunks")->check(CLI::Range(1u, 1024u));

    std::string s_preset, s_config, s_report;
    std::optional<std::size_t> s_horizon;
    auto* chk = app.add_subcommand("schedule-check", "check the growth conditions of a schedule");
    chk->add_option("--preset", s_preset, "shipped preset name");
    chk->add_option("--config", s_config, "JSON config file");
    chk->add_option("--horizon", s_horizon, "largest stage index");
    chk->add_option("--report", s_report, "write the JSON report here instead of stdout");

    auto* list = app.add_subcommand("presets", "list shipped presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*gen) return cmd_generate(g_preset, g_config, g_n, g_out, g_encoding);
        if (*ver) return cmd_verify(v);
        if (*chk) return cmd_schedule_check(s_preset, s_config, s_horizon, s_report);
        if (*list) {
            for (const auto& name : preset_names()) std::cout << name << "\n";
            return exit_pass;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}
