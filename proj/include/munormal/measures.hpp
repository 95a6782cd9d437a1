#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "munormal/bigfloat.hpp"
#include "munormal/languages.hpp"
#include "munormal/word.hpp"

namespace munormal {

enum class NumerationSystem { qary, lueroth, beta, continued_fraction };

std::string to_string(NumerationSystem s);
NumerationSystem parse_system(std::string_view name);

// A shift-invariant probability on cylinders. Implementations are immutable
// and safe to evaluate from several threads.
class CylinderMeasure {
public:
    virtual ~CylinderMeasure() = default;

    virtual double operator()(WordView b) const = 0;
    virtual BigFloat precise(WordView b, unsigned bits) const = 0;
    // Exact rational value when the measure has one.
    virtual std::optional<Rational> exact(WordView) const { return std::nullopt; }
    // Digits carrying positive single-letter mass.
    virtual Alphabet support() const = 0;
    virtual NumerationSystem system() const = 0;
    virtual std::string id() const = 0;
};

using MeasurePtr = std::shared_ptr<const CylinderMeasure>;

MeasurePtr qary_measure(unsigned q);
MeasurePtr lueroth_measure();
MeasurePtr lueroth_truncated_measure(std::size_t i);
MeasurePtr gauss_measure();
MeasurePtr gauss_truncated_measure(std::size_t i);
MeasurePtr parry_measure(const ParryData& data);

double measure_qary(unsigned q, WordView b);
double measure_lueroth(WordView b);
double measure_lueroth_truncated(std::size_t i, WordView b);
double measure_gauss(WordView b);
double measure_gauss_truncated(std::size_t i, WordView b);
double measure_beta(const ParryData& data, WordView b);

// Stage index from which the continued-fraction truncation differs from the
// Gauss measure itself.
inline constexpr std::size_t gauss_collapse_threshold = 8;

// Cylinder of b under the continued-fraction map, with its continuants.
struct GaussCylinder {
    Rational lo, hi;
    Integer q, q_prev;  // q_k and q_{k-1}
};
GaussCylinder gauss_cylinder(WordView b);

// Approximating family nu_i -> mu.
struct MeasureSequence {
    std::function<MeasurePtr(std::size_t)> stage;
    MeasurePtr target;
    std::size_t first_index = 1;

    MeasurePtr operator()(std::size_t i) const { return stage(i); }
};

MeasureSequence constant_sequence(MeasurePtr mu);
MeasureSequence lueroth_sequence();
MeasureSequence gauss_sequence();

struct MinMeasureOptions {
    std::size_t max_length = 8;
    std::uint64_t max_alphabet = 64;
};

// Exact minimum of nu over admissible words of length k with nu > 0.
double min_cylinder_measure(const CylinderMeasure& nu, const ShiftLanguage& language, std::size_t k,
                            MinMeasureOptions options = {});

// Lower bound (1/2) i^{-2i} for the minimum at continued-fraction stage i >= 8.
double cf_min_measure_bound(std::size_t i);

}  // namespace munormal
