#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace apv::csv {

/// Minimal RFC 4180 reader: quoted fields may contain commas, doubled
/// quotes and line breaks. CR before LF is dropped.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`; returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// Physical line on which the last returned record started (1-based).
    [[nodiscard]] std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

/// Quotes a field when it contains a comma, quote or line break.
[[nodiscard]] std::string escape(std::string_view field);

[[nodiscard]] std::string trim(std::string_view text);

}  // namespace apv::csv
