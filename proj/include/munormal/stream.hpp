#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "munormal/schedule.hpp"

namespace munormal {

// Sequential reader of omega = omega_1^{(.)l_1} (.) omega_2^{(.)l_2} (.) ...
// over a materialized schedule. Single consumer; several streams may share
// one schedule.
class DigitStream {
public:
    explicit DigitStream(std::shared_ptr<const Schedule> schedule);

    // Next `count` digits; throws std::out_of_range (emitting nothing) when
    // the finite schedule cannot supply them.
    Word next_digits(std::uint64_t count);
    std::uint64_t emitted() const { return emitted_; }
    std::uint64_t available() const { return schedule_->total_length() - emitted_; }
    // Random access, independent of the cursor.
    Digit digit_at(std::uint64_t n) const { return schedule_->digit_at(n); }
    // Decomposition of the last emitted position (n = 0 before any output).
    Position position() const;
    const Schedule& schedule() const { return *schedule_; }

private:
    std::shared_ptr<const Schedule> schedule_;
    std::uint64_t emitted_ = 0;
    std::size_t stage_ = 0;      // 0-based stage under the cursor
    std::uint64_t copy_ = 0;     // copy index x within the stage
    std::uint64_t offset_ = 0;   // offset inside block + padding
    std::shared_ptr<const WeightedBlock> block_;
};

enum class Encoding { lines, packed, chars };

std::string to_string(Encoding e);
Encoding parse_encoding(std::string_view name);
// Throws if some digit does not fit the encoding.
void check_encodable(WordView digits, Encoding e);
void write_digits(std::ostream& out, WordView digits, Encoding e);
Word read_digits(std::istream& in, Encoding e);
// "chars" if every byte is an ASCII digit (a final newline is tolerated),
// "lines" if the text is newline separated integers, otherwise "packed".
Encoding sniff_encoding(std::string_view head);

}  // namespace munormal
