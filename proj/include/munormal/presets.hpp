#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "munormal/languages.hpp"
#include "munormal/measures.hpp"
#include "munormal/schedule.hpp"
#include "munormal/stream.hpp"

namespace munormal {

// Malformed configuration or unknown preset (exit code 2 in the CLI).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StageConfig {
    std::optional<std::size_t> truncation;  // index c of nu_c (Lueroth, continued fractions)
    std::size_t window = 1;
    double M = 1.0;
    std::uint64_t l = 1;
    double epsilon = 0.5;
    std::size_t k = 1;
    std::optional<Digit> base;         // default: size of the stage measure's support
    std::optional<Digit> first_digit;  // default: smallest digit of the system
    std::optional<Word> block;         // explicit omega_i
};

struct AuditConfig {
    std::size_t k_max = 3;
    double tol = 0.05;
    double mu_floor = 0.01;
};

struct RunConfig {
    std::string name;
    std::string description;
    NumerationSystem system = NumerationSystem::qary;
    unsigned q = 2;
    std::optional<ParryData> parry;
    std::vector<StageConfig> stages;         // materialized schedule
    std::optional<SymbolicParams> symbolic;  // log-space schedule
    std::size_t horizon = 30;
    std::uint64_t n = 1000000;
    std::optional<Encoding> encoding;  // default picked from the alphabet
    AuditConfig audit;
    unsigned precision = 0;  // 0: MUNORMAL_PRECISION or 128
    std::string source;      // the JSON text this was parsed from

    bool materializable() const { return !stages.empty(); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
RunConfig preset(const std::string& name);  // throws ConfigError when unknown
const std::string& preset_json(const std::string& name);

LanguagePtr make_language(const RunConfig& config);
MeasurePtr make_target(const RunConfig& config);
MeasurePtr make_stage_measure(const RunConfig& config, const StageConfig& stage);
std::vector<StageSpec> make_stage_specs(const RunConfig& config);
std::shared_ptr<const Schedule> materialize(const RunConfig& config, ScheduleOptions options = {});
SymbolicSchedule make_symbolic(const RunConfig& config);
// "qary:Q", "lueroth", "lueroth:C", "gauss" (or "cf"), "gauss:C", "beta:EXPANSION".
MeasurePtr parse_measure(const std::string& spec);
// Words b with |b| <= k_max and mu(b) >= floor, in length-then-lexicographic
// order. Unbounded supports are scanned while single digits stay above floor.
std::vector<Word> audit_set(const CylinderMeasure& mu, std::size_t k_max, double floor);

// "chars" for alphabets of at most 10 digits, "packed" up to 256, else "lines".
Encoding default_encoding(const RunConfig& config);

}  // namespace munormal
