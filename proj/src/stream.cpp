#include "munormal/stream.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>
#include <stdexcept>

namespace munormal {

DigitStream::DigitStream(std::shared_ptr<const Schedule> schedule) : schedule_(std::move(schedule)) {
    if (!schedule_) throw std::invalid_argument("stream needs a schedule");
}

Word DigitStream::next_digits(std::uint64_t count) {
    if (count > available())
        throw std::out_of_range("schedule exhausted: requested " + std::to_string(count) + " digits, " +
                                std::to_string(available()) + " remain");
    Word out;
    out.reserve(count);
    while (out.size() < count) {
        const auto& st = schedule_->stage(stage_ + 1);
        if (st.spec.l == 0 || copy_ >= st.spec.l) {
            ++stage_;
            copy_ = offset_ = 0;
            block_.reset();
            continue;
        }
        if (!block_) block_ = schedule_->block(stage_ + 1);
        const Word& pad = copy_ + 1 < st.spec.l ? st.self_pad : st.next_pad;
        const std::uint64_t want = count - out.size();
        if (offset_ < st.block_length) {
            const std::uint64_t take = std::min<std::uint64_t>(want, st.block_length - offset_);
            out.insert(out.end(), block_->word.begin() + offset_, block_->word.begin() + offset_ + take);
            offset_ += take;
        } else {
            const std::uint64_t r = offset_ - st.block_length;
            const std::uint64_t take = std::min<std::uint64_t>(want, pad.size() - r);
            out.insert(out.end(), pad.begin() + r, pad.begin() + r + take);
            offset_ += take;
        }
        if (offset_ == st.block_length + pad.size()) {
            ++copy_;
            offset_ = 0;
        }
    }
    emitted_ += count;
    return out;
}

Position DigitStream::position() const {
    if (emitted_ == 0) return Position{};
    return schedule_->locate(emitted_);
}

std::string to_string(Encoding e) {
    switch (e) {
        case Encoding::lines: return "lines";
        case Encoding::packed: return "packed";
        case Encoding::chars: return "chars";
    }
    return "?";
}

Encoding parse_encoding(std::string_view name) {
    if (name == "lines") return Encoding::lines;
    if (name == "packed") return Encoding::packed;
    if (name == "chars") return Encoding::chars;
    throw std::invalid_argument("unknown encoding '" + std::string(name) + "' (lines, packed, chars)");
}

void check_encodable(WordView digits, Encoding e) {
    if (e == Encoding::lines || digits.empty()) return;
    const Digit hi = *std::max_element(digits.begin(), digits.end());
    if (e == Encoding::packed && hi > 255) throw std::invalid_argument("packed encoding needs digits <= 255");
    if (e == Encoding::chars && hi > 9) throw std::invalid_argument("chars encoding needs digits <= 9");
}

void write_digits(std::ostream& out, WordView digits, Encoding e) {
    check_encodable(digits, e);
    std::string buf;
    switch (e) {
        case Encoding::chars:
            buf.reserve(digits.size());
            for (Digit d : digits) buf.push_back(char('0' + d));
            break;
        case Encoding::packed:
            buf.reserve(digits.size());
            for (Digit d : digits) buf.push_back(char(static_cast<unsigned char>(d)));
            break;
        case Encoding::lines:
            buf.reserve(digits.size() * 2);
            for (Digit d : digits) {
                buf += std::to_string(d);
                buf.push_back('\n');
            }
            break;
    }
    out.write(buf.data(), std::streamsize(buf.size()));
}

Word read_digits(std::istream& in, Encoding e) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Word out;
    switch (e) {
        case Encoding::packed:
            out.reserve(data.size());
            for (char c : data) out.push_back(static_cast<unsigned char>(c));
            break;
        case Encoding::chars:
            out.reserve(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) {
                const char c = data[i];
                if (c >= '0' && c <= '9') {
                    out.push_back(Digit(c - '0'));
                } else if ((c == '\n' || c == '\r') && data.find_first_not_of("\r\n", i) == std::string::npos) {
                    break;
                } else {
                    throw std::invalid_argument("unparsable digit at byte " + std::to_string(i));
                }
            }
            break;
        case Encoding::lines: {
            std::uint64_t value = 0;
            bool any = false;
            std::size_t line = 1;
            for (char c : data) {
                if (c >= '0' && c <= '9') {
                    value = value * 10 + std::uint64_t(c - '0');
                    if (value > 0xffffffffULL) throw std::invalid_argument("digit too large on line " + std::to_string(line));
                    any = true;
                } else if (c == '\n') {
                    if (any) out.push_back(Digit(value));
                    value = 0;
                    any = false;
                    ++line;
                } else if (c != '\r' && c != ' ' && c != '\t') {
                    throw std::invalid_argument("unparsable digit on line " + std::to_string(line));
                }
            }
            if (any) out.push_back(Digit(value));
            break;
        }
    }
    return out;
}

Encoding sniff_encoding(std::string_view head) {
    const std::size_t body = head.find_last_not_of("\r\n");
    const std::string_view core = body == std::string_view::npos ? head.substr(0, 0) : head.substr(0, body + 1);
    const bool all_digits = std::all_of(core.begin(), core.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (all_digits) return Encoding::chars;
    const bool lines = std::all_of(core.begin(), core.end(), [](char c) {
        return (c >= '0' && c <= '9') || c == '\n' || c == '\r';
    });
    return lines ? Encoding::lines : Encoding::packed;
}

}  // namespace munormal
