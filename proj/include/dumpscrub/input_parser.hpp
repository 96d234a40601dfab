#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dump_format.hpp"
#include "encoding.hpp"
#include "errors.hpp"

namespace dumpscrub {

// A token recovered from the input. For dump input `byte_offset` is relative
// to the page payload (0..4032) and `page_index` names the page within the
// file; for log input `byte_offset` is absolute in the file and `page_index`
// is the paragraph ordinal. Extents never span pages.
struct ParsedToken {
    std::string text; // decoded printable ASCII
    uint64_t byte_offset = 0;
    uint32_t byte_len = 0;
    uint64_t page_index = 0;
};

struct PageRef {
    uint64_t page_index = 0;
    PageHeader header;
};

// Pages of one address space, ordered by logical address, with the tokens of
// those pages in page-then-offset order.
struct PageGroup {
    uint32_t group_id = 0;
    uint32_t asid = 0;
    std::vector<PageRef> pages;
    std::vector<ParsedToken> tokens;
    // Log inputs only: absolute byte extent of the paragraph.
    uint64_t log_begin = 0;
    uint64_t log_end = 0;
};

namespace detail {

inline bool is_token_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           c == '@' || c == '.' || c == '_' || c == '-' || c == '+';
}

inline bool is_alnum_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

} // namespace detail

// Tokenization: maximal runs of token constituents (alphanumerics plus
// @ . _ - +) taken from the printable characters, trimmed to alphanumeric
// boundaries. Runs shorter than two characters after trimming are dropped.
// Whitespace, remaining punctuation, and non-printable bytes separate tokens.
inline void tokenize_bytes(const uint8_t* data, size_t len, Encoding enc, uint64_t page_index,
                           uint64_t base_offset, std::vector<ParsedToken>& out) {
    std::string run;
    size_t run_start = 0;
    auto flush = [&](size_t end_pos) {
        (void)end_pos;
        if (run.empty())
            return;
        size_t front = 0;
        size_t back = run.size();
        while (front < back && !detail::is_alnum_char(run[front]))
            ++front;
        while (back > front && !detail::is_alnum_char(run[back - 1]))
            --back;
        if (back - front >= 2) {
            ParsedToken t;
            t.text = run.substr(front, back - front);
            t.byte_offset = base_offset + run_start + front;
            t.byte_len = static_cast<uint32_t>(back - front);
            t.page_index = page_index;
            out.push_back(std::move(t));
        }
        run.clear();
    };
    for (size_t i = 0; i < len; ++i) {
        char c = decode_printable(data[i], enc);
        if (c != '\0' && detail::is_token_char(c)) {
            if (run.empty())
                run_start = i;
            run.push_back(c);
        } else {
            flush(i);
        }
    }
    flush(len);
}

// Decodes a full page payload for inspection; non-printable bytes come out as
// ASCII SUB (0x1A).
inline std::string decode_payload(const uint8_t* page, Encoding enc) {
    PageHeader h = parse_page_header(page, 0);
    return decode_text(page + page_header_size, h.data_len, enc);
}

// Validates headers and assembles page groups without tokenizing, so large
// dumps can be tokenized group by group instead of all at once.
inline std::vector<PageGroup> parse_dump_layout(const uint8_t* data, size_t size) {
    if (size == 0 || size % page_size != 0)
        throw ParseError("dump size " + std::to_string(size) +
                         " is not a positive multiple of the page size");
    const uint64_t n_pages = size / page_size;
    std::vector<std::pair<uint32_t, uint64_t>> order; // (asid, page_index)
    order.reserve(n_pages);
    std::vector<PageHeader> headers(n_pages);
    for (uint64_t p = 0; p < n_pages; ++p) {
        headers[p] = parse_page_header(data + p * page_size, p);
        order.emplace_back(headers[p].asid, p);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        const PageHeader& ha = headers[a.second];
        const PageHeader& hb = headers[b.second];
        if (ha.logical_address != hb.logical_address)
            return ha.logical_address < hb.logical_address;
        return a.second < b.second;
    });

    std::vector<PageGroup> groups;
    for (const auto& [asid, page_index] : order) {
        if (groups.empty() || groups.back().asid != asid) {
            PageGroup g;
            g.group_id = static_cast<uint32_t>(groups.size());
            g.asid = asid;
            groups.push_back(std::move(g));
        }
        groups.back().pages.push_back(PageRef{page_index, headers[page_index]});
    }
    return groups;
}

// Fills one group's token list from the dump bytes.
inline void tokenize_group(const uint8_t* data, PageGroup& g, Encoding enc) {
    for (const PageRef& p : g.pages)
        tokenize_bytes(data + p.page_index * page_size + page_header_size, p.header.data_len, enc,
                       p.page_index, 0, g.tokens);
}

inline std::vector<PageGroup> parse_dump(const uint8_t* data, size_t size, Encoding enc) {
    std::vector<PageGroup> groups = parse_dump_layout(data, size);
    for (PageGroup& g : groups)
        tokenize_group(data, g, enc);
    return groups;
}

inline std::vector<PageGroup> parse_dump(const std::vector<uint8_t>& bytes, Encoding enc) {
    return parse_dump(bytes.data(), bytes.size(), enc);
}

// Text logs: paragraphs separated by blank lines form the grouping unit.
// Token offsets are absolute file offsets; logs are treated as ASCII.
inline std::vector<PageGroup> parse_log(std::string_view text) {
    std::vector<PageGroup> groups;
    size_t pos = 0;
    uint32_t next_id = 0;
    while (pos < text.size()) {
        // skip blank lines
        size_t line_end;
        bool blank = true;
        size_t start = pos;
        for (line_end = pos; line_end < text.size() && text[line_end] != '\n'; ++line_end)
            if (text[line_end] != ' ' && text[line_end] != '\t' && text[line_end] != '\r')
                blank = false;
        if (blank) {
            pos = line_end + (line_end < text.size() ? 1 : 0);
            continue;
        }
        // paragraph: consume until a blank line or end of input
        size_t para_end = start;
        size_t scan = start;
        while (scan < text.size()) {
            size_t le = scan;
            bool b = true;
            for (; le < text.size() && text[le] != '\n'; ++le)
                if (text[le] != ' ' && text[le] != '\t' && text[le] != '\r')
                    b = false;
            if (b)
                break;
            para_end = le;
            scan = le + (le < text.size() ? 1 : 0);
        }
        PageGroup g;
        g.group_id = next_id;
        g.asid = next_id;
        g.log_begin = start;
        g.log_end = para_end;
        ++next_id;
        tokenize_bytes(reinterpret_cast<const uint8_t*>(text.data()) + start, para_end - start,
                       Encoding::ascii, g.group_id, start, g.tokens);
        groups.push_back(std::move(g));
        pos = para_end;
    }
    return groups;
}

} // namespace dumpscrub
