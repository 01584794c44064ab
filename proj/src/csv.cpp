#include "csv.hpp"

#include "frugal/error.hpp"

namespace frugal::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::vector<std::vector<std::string>> split(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    auto end_cell = [&] {
        record.push_back(was_quoted ? cell : std::string(trim(cell)));
        cell.clear();
        was_quoted = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"' && trim(cell).empty()) {
            cell.clear();
            quoted = true;
            was_quoted = true;
        } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            continue;
        } else if (ch == ',') {
            end_cell();
        } else if (ch == '\n') {
            end_cell();
            if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
            record.clear();
        } else {
            cell += ch;
        }
    }
    if (quoted) throw Error(ErrorKind::InvalidInput, "unterminated quoted field");
    if (!cell.empty() || !record.empty()) {
        end_cell();
        if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
    }
    return records;
}

std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace frugal::csv
