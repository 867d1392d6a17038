#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lifeins::io {

/// Shortest text that parses back to exactly x (17 significant digits).
std::string format_double(double x);

/// RFC 4180 CSV with a header row and LF line endings. Doubles are written
/// with 17 significant digits so re-reading reproduces them bit-for-bit.
class CsvWriter {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<Cell>& cells);
    std::size_t columns() const noexcept { return columns_; }
    std::size_t rows() const noexcept { return rows_; }
    const std::string& text() const noexcept { return text_; }

    /// Writes to a temporary sibling and renames it over path.
    void save(const std::filesystem::path& path) const;

private:
    void append_field(std::string_view field);

    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Header plus rows of raw fields (quotes removed).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws InputError if absent.
    std::size_t column(std::string_view name) const;
    /// Parses field (row, column) as a double; throws InputError on junk.
    double number(std::size_t row, std::size_t column) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Replaces path atomically with content (temporary file + rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace lifeins::io
