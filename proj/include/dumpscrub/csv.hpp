#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace dumpscrub {

// RFC 4180 quoting: a field is quoted when it contains a comma, a quote, or a
// line break; embedded quotes double up.
inline std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Splits one CSV record. `pos` points at the start of a record inside `text`
// and is advanced past its terminating newline. Handles quoted fields with
// embedded commas, quotes, and line breaks.
inline std::vector<std::string> csv_next_record(std::string_view text, size_t& pos, size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    while (pos < text.size()) {
        char c = text[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cur.push_back('"');
                    pos += 2;
                } else {
                    in_quotes = false;
                    ++pos;
                }
            } else {
                cur.push_back(c);
                ++pos;
            }
            continue;
        }
        if (c == '"' && cur.empty()) {
            in_quotes = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            ++pos;
        } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
            pos += 2;
            fields.push_back(std::move(cur));
            return fields;
        } else if (c == '\n') {
            ++pos;
            fields.push_back(std::move(cur));
            return fields;
        } else {
            cur.push_back(c);
            ++pos;
        }
    }
    if (in_quotes)
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace dumpscrub
