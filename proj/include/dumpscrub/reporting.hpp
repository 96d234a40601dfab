#pragma once

// Report generation: sensitive and non-sensitive CSV reports, optional
// sealing with authenticated encryption, and the feedback-mode parser for
// user-marked rows.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crypto.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "io.hpp"

namespace dumpscrub {

inline constexpr std::string_view report_header = "token,entity_type,count,Is_Analysis_Correct";
inline constexpr std::string_view report_magic = "KRPT";

struct ReportRow {
    std::string token;
    std::string entity_type;
    uint64_t count = 1;
    bool marked_correct = true; // Y when true, N when false
};

// Occurrence counts keyed by (token, entity type). Workers aggregate into
// private instances; merging is plain addition, so merge order cannot
// change the result.
struct ReportAggregate {
    std::map<std::pair<std::string, std::string>, uint64_t> rows;

    void add(std::string token, std::string entity, uint64_t n = 1) {
        rows[{std::move(token), std::move(entity)}] += n;
    }

    void merge(const ReportAggregate& other) {
        for (const auto& [key, n] : other.rows)
            rows[key] += n;
    }

    bool empty() const { return rows.empty(); }
};

// Renders rows sorted by descending count, then token, then entity type.
inline std::string render_report(const ReportAggregate& agg) {
    std::vector<const std::pair<const std::pair<std::string, std::string>, uint64_t>*> order;
    order.reserve(agg.rows.size());
    for (const auto& kv : agg.rows)
        order.push_back(&kv);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->second != b->second)
            return a->second > b->second;
        if (a->first.first != b->first.first)
            return a->first.first < b->first.first;
        return a->first.second < b->first.second;
    });
    std::string out(report_header);
    out.push_back('\n');
    for (const auto* kv : order) {
        out += csv_escape(kv->first.first);
        out.push_back(',');
        out += csv_escape(kv->first.second);
        out.push_back(',');
        out += std::to_string(kv->second);
        out += ",Y\n";
    }
    return out;
}

// Sealed report layout: "KRPT" magic, 12-byte nonce, ciphertext with tag.
inline std::vector<uint8_t> seal_report(std::string_view plaintext, const KeyMaterial& key) {
    auto nonce = derive_nonce(key.master, "report", plaintext);
    auto sealed = aes256_gcm_seal(key.master, nonce, plaintext.data(), plaintext.size());
    std::vector<uint8_t> out(report_magic.begin(), report_magic.end());
    out.insert(out.end(), nonce.begin(), nonce.end());
    out.insert(out.end(), sealed.begin(), sealed.end());
    return out;
}

inline bool is_sealed_report(const std::vector<uint8_t>& bytes) {
    return bytes.size() >= report_magic.size() &&
           std::equal(report_magic.begin(), report_magic.end(), bytes.begin());
}

inline std::string unseal_report(const std::vector<uint8_t>& bytes, const KeyMaterial& key) {
    if (!is_sealed_report(bytes))
        throw ParseError("not a sealed report: missing KRPT magic");
    const size_t off = report_magic.size();
    if (bytes.size() < off + 12 + 16)
        throw ParseError("sealed report truncated");
    std::array<uint8_t, 12> nonce{};
    std::copy_n(bytes.begin() + static_cast<ptrdiff_t>(off), 12, nonce.begin());
    auto pt = aes256_gcm_open(key.master, nonce, bytes.data() + off + 12, bytes.size() - off - 12);
    return std::string(pt.begin(), pt.end());
}

// Writes one report, sealing it when a key is supplied.
inline void write_report_file(const std::string& path, const ReportAggregate& agg,
                              const KeyMaterial* seal_key) {
    std::string csv = render_report(agg);
    if (seal_key)
        write_file_atomic(path, seal_report(csv, *seal_key));
    else
        write_file_atomic(path, csv);
}

// Parses a full report. Row errors carry the record number (header is
// record 1). Accepts both plaintext and sealed bytes; sealed input needs
// the key.
inline std::vector<ReportRow> parse_report(std::string_view csv) {
    size_t pos = 0;
    size_t record_no = 1;
    auto header = csv_next_record(csv, pos, record_no);
    std::string joined;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i)
            joined.push_back(',');
        joined += header[i];
    }
    if (joined != report_header)
        throw ParseError("bad report header: expected \"" + std::string(report_header) + "\", got \"" +
                         joined + "\"");
    std::vector<ReportRow> rows;
    while (pos < csv.size()) {
        ++record_no;
        auto fields = csv_next_record(csv, pos, record_no);
        if (fields.size() == 1 && fields[0].empty())
            continue; // trailing blank line
        if (fields.size() != 4)
            throw ParseError("row " + std::to_string(record_no) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        ReportRow row;
        row.token = std::move(fields[0]);
        row.entity_type = std::move(fields[1]);
        bool digits_only = !fields[2].empty();
        for (char c : fields[2])
            digits_only = digits_only && c >= '0' && c <= '9';
        try {
            if (!digits_only)
                throw std::invalid_argument("not a digit string");
            size_t used = 0;
            row.count = std::stoull(fields[2], &used);
            if (used != fields[2].size())
                throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ParseError("row " + std::to_string(record_no) + ": bad count \"" + fields[2] + "\"");
        }
        if (row.count == 0)
            throw ParseError("row " + std::to_string(record_no) + ": count must be at least 1");
        if (fields[3] == "Y")
            row.marked_correct = true;
        else if (fields[3] == "N")
            row.marked_correct = false;
        else
            throw ParseError("row " + std::to_string(record_no) + ": Is_Analysis_Correct must be Y or N");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<ReportRow> parse_report_file(const std::string& path, const KeyMaterial* key) {
    auto bytes = read_file(path);
    if (is_sealed_report(bytes)) {
        if (!key)
            throw ConfigError("report " + path + " is sealed; key material required");
        return parse_report(unseal_report(bytes, *key));
    }
    return parse_report(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

// Feedback ingestion sees only the rows the user flipped to N.
inline std::vector<ReportRow> parse_marked_report(std::string_view csv) {
    std::vector<ReportRow> marked;
    for (auto& row : parse_report(csv))
        if (!row.marked_correct)
            marked.push_back(std::move(row));
    return marked;
}

} // namespace dumpscrub
