#include "lifeins/io/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins::io {

std::string format_double(double x) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw InputError("CSV header must not be empty");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        append_field(header[i]);
    }
    text_ += '\n';
}

void CsvWriter::append_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        text_ += field;
        return;
    }
    text_ += '"';
    for (char ch : field) {
        if (ch == '"') text_ += '"';
        text_ += ch;
    }
    text_ += '"';
}

void CsvWriter::add_row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_) {
        std::ostringstream os;
        os << "CSV row has " << cells.size() << " fields, header has " << columns_;
        throw InputError(os.str());
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        if (const auto* d = std::get_if<double>(&cells[i]))
            text_ += format_double(*d);
        else if (const auto* n = std::get_if<long long>(&cells[i]))
            text_ += std::to_string(*n);
        else
            append_field(std::get<std::string>(cells[i]));
    }
    text_ += '\n';
    ++rows_;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_file_atomic(path, text_); }

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InputError("CSV has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& field = rows.at(row).at(col);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw InputError("CSV field '" + field + "' is not a number");
    return v;
}

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, pending = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"': quoted = true; pending = true; break;
            case ',': record.push_back(std::move(field)); field.clear(); pending = true; break;
            case '\r': break;
            case '\n':
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                pending = false;
                break;
            default: field += ch; pending = true;
        }
    }
    if (quoted) throw InputError("CSV ends inside a quoted field");
    if (pending) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw InputError("CSV is empty");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            std::ostringstream os;
            os << "CSV line " << r + 1 << " has " << records[r].size() << " fields, expected " << table.header.size();
            throw InputError(os.str());
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp-" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignore;
            std::filesystem::remove(tmp, ignore);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        std::filesystem::remove(tmp, ignore);
        throw IoError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace lifeins::io
