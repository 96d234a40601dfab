#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "dump_format.hpp"
#include "encoding.hpp"
#include "errors.hpp"
#include "identifiers.hpp"
#include "io.hpp"
#include "prng.hpp"
#include "wordlists.hpp"

namespace dumpscrub {

// Pages per address space in generated dumps. Page i belongs to asid
// i % num_asids, so the pages of one address space are scattered through the
// file and the parser has to gather them.
inline constexpr uint64_t gen_pages_per_asid = 64;

struct EntityMixEntry {
    std::string entity;
    double weight = 1.0;
};

struct DumpGenConfig {
    uint64_t total_size = 0;
    double pct_sensitive_pages = 0.0;
    double pct_sensitive_per_page = 0.0;
    double pct_control_data = 0.0;
    Encoding encoding = Encoding::ascii;
    std::vector<EntityMixEntry> entity_mix;
    uint64_t seed = 0;
};

struct GroundTruthEntry {
    uint64_t page_index = 0;
    uint32_t byte_offset = 0; // within the page payload
    uint32_t byte_len = 0;
    std::string entity_type;
    std::string plaintext;
};

struct GeneratedDump {
    std::vector<uint8_t> bytes;
    std::vector<GroundTruthEntry> manifest;
};

inline void validate_dumpgen_config(const DumpGenConfig& cfg) {
    if (cfg.total_size == 0 || cfg.total_size % page_size != 0)
        throw ConfigError("total_size must be a positive multiple of " + std::to_string(page_size));
    auto pct_ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!pct_ok(cfg.pct_sensitive_pages) || !pct_ok(cfg.pct_sensitive_per_page) ||
        !pct_ok(cfg.pct_control_data))
        throw ConfigError("percentage knobs must lie in [0, 1]");
    if (cfg.pct_sensitive_per_page + cfg.pct_control_data > 1.0 + 1e-9)
        throw ConfigError("pct_sensitive_per_page + pct_control_data must not exceed 1");
    if (cfg.pct_sensitive_pages > 0.0) {
        if (cfg.entity_mix.empty())
            throw ConfigError("entity_mix must be non-empty when sensitive pages are requested");
        const auto& known = builtin_entity_names();
        for (const auto& e : cfg.entity_mix) {
            if (e.weight <= 0.0)
                throw ConfigError("entity_mix weight for " + e.entity + " must be positive");
            if (std::find(known.begin(), known.end(), e.entity) == known.end())
                throw ConfigError("entity_mix names unknown entity " + e.entity);
        }
    }
}

// === entity sample constructors ===

namespace detail {

// Check digit that makes the full number pass the standard doubling checksum.
inline char luhn_check_digit(std::string_view digits_without_check) {
    int sum = 0;
    bool dbl = true; // position right of the rightmost payload digit is doubled
    for (size_t i = digits_without_check.size(); i-- > 0;) {
        int d = digits_without_check[i] - '0';
        if (dbl) {
            d *= 2;
            if (d > 9)
                d -= 9;
        }
        sum += d;
        dbl = !dbl;
    }
    return static_cast<char>('0' + (10 - sum % 10) % 10);
}

} // namespace detail

inline std::string make_credit_card(Prng& rng) {
    std::string d = "4";
    for (int i = 0; i < 14; ++i)
        d.push_back(static_cast<char>('0' + rng.below(10)));
    d.push_back(detail::luhn_check_digit(d));
    if (rng.below(4) == 0) {
        std::string grouped;
        for (size_t i = 0; i < d.size(); ++i) {
            if (i > 0 && i % 4 == 0)
                grouped.push_back('-');
            grouped.push_back(d[i]);
        }
        return grouped;
    }
    return d;
}

inline std::string make_ssn(Prng& rng) {
    int area = static_cast<int>(1 + rng.below(899));
    if (area == 666)
        area = 667;
    int group = static_cast<int>(1 + rng.below(99));
    int serial = static_cast<int>(1 + rng.below(9999));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d-%02d-%04d", area, group, serial);
    return buf;
}

inline std::string make_email(Prng& rng) {
    static constexpr std::string_view domains[] = {"example", "mailhost", "acme",
                                                   "contoso",  "fabrikam", "initech"};
    static constexpr std::string_view tlds[] = {"com", "org", "net", "io"};
    std::string local(words::person_names[rng.below(words::person_names.size())]);
    if (rng.below(2) == 0)
        local += std::to_string(rng.below(100));
    std::string out = local;
    out.push_back('@');
    out += domains[rng.below(std::size(domains))];
    out.push_back('.');
    out += tlds[rng.below(std::size(tlds))];
    return out;
}

inline std::string make_phone_us(Prng& rng) {
    int area = static_cast<int>(200 + rng.below(800));
    int exchange = static_cast<int>(200 + rng.below(800));
    int line = static_cast<int>(rng.below(10000));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d-%03d-%04d", area, exchange, line);
    return buf;
}

inline std::string make_ipv4(Prng& rng) {
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (i)
            out.push_back('.');
        out += std::to_string(rng.below(256));
    }
    return out;
}

inline std::string make_zipcode(Prng& rng) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%05d", static_cast<int>(rng.below(100000)));
    return buf;
}

inline std::string make_gender(Prng& rng) {
    // Single-letter dictionary terms are shorter than the token floor, so they
    // can never be recovered by the parser; plant the word forms only.
    static constexpr std::string_view plantable[] = {"male", "female", "man", "woman"};
    return std::string(plantable[rng.below(std::size(plantable))]);
}

inline std::string make_person_name(Prng& rng) {
    return std::string(words::person_names[rng.below(words::person_names.size())]);
}

inline std::string make_entity_sample(std::string_view entity, Prng& rng) {
    if (entity == "CREDIT_CARD")
        return make_credit_card(rng);
    if (entity == "EMAIL")
        return make_email(rng);
    if (entity == "GENDER")
        return make_gender(rng);
    if (entity == "IPV4")
        return make_ipv4(rng);
    if (entity == "PERSON_NAME")
        return make_person_name(rng);
    if (entity == "PHONE_US")
        return make_phone_us(rng);
    if (entity == "SSN")
        return make_ssn(rng);
    if (entity == "ZIPCODE")
        return make_zipcode(rng);
    throw ConfigError("no sample constructor for entity " + std::string(entity));
}

// === page assembly ===

namespace detail {

inline std::vector<uint8_t> control_byte_pool(Encoding e) {
    std::vector<uint8_t> pool;
    for (int b = 0; b < 256; ++b)
        if (!is_printable_byte(static_cast<uint8_t>(b), e))
            pool.push_back(static_cast<uint8_t>(b));
    return pool;
}

inline const std::string& pick_entity(const std::vector<EntityMixEntry>& mix, Prng& rng) {
    double total = 0.0;
    for (const auto& e : mix)
        total += e.weight;
    double x = rng.unit() * total;
    for (const auto& e : mix) {
        x -= e.weight;
        if (x < 0.0)
            return e.entity;
    }
    return mix.back().entity;
}

struct PageElement {
    bool is_token = false;
    std::string text;          // printable plaintext when is_token
    std::string entity;        // entity type when is_token
    std::vector<uint8_t> raw;  // encoded control bytes otherwise
};

// Fills a gap with filler vocabulary followed by single spaces, padding with
// spaces where no word fits.
inline void emit_filler(uint8_t* dst, size_t& cursor, size_t nbytes, Encoding enc, Prng& rng) {
    const uint8_t space = encode_char(' ', enc);
    while (nbytes > 0) {
        bool wrote_word = false;
        if (nbytes >= 5) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                std::string_view w = words::filler[rng.below(words::filler.size())];
                if (w.size() + 1 <= nbytes) {
                    for (char c : w)
                        dst[cursor++] = encode_char(c, enc);
                    dst[cursor++] = space;
                    nbytes -= w.size() + 1;
                    wrote_word = true;
                    break;
                }
            }
        }
        if (!wrote_word) {
            dst[cursor++] = space;
            --nbytes;
        }
    }
}

inline void fill_payload(uint8_t* dst, size_t cap, uint64_t page_index, bool sensitive,
                         const DumpGenConfig& cfg, Prng& rng,
                         const std::vector<uint8_t>& ctrl_pool,
                         std::vector<GroundTruthEntry>& manifest) {
    const size_t ctrl_budget = static_cast<size_t>(cfg.pct_control_data * static_cast<double>(cap));
    const size_t sens_budget =
        sensitive ? static_cast<size_t>(std::lround(cfg.pct_sensitive_per_page * static_cast<double>(cap))) : 0;

    std::vector<PageElement> elems;
    size_t token_bytes = 0; // token lengths plus one separating space each
    if (sensitive) {
        bool first = true;
        for (;;) {
            const std::string& entity = pick_entity(cfg.entity_mix, rng);
            std::string tok = make_entity_sample(entity, rng);
            size_t cost = tok.size() + 1;
            if (!first && token_bytes + cost > sens_budget)
                break;
            PageElement e;
            e.is_token = true;
            e.text = std::move(tok);
            e.entity = entity;
            elems.push_back(std::move(e));
            token_bytes += cost;
            first = false;
            if (token_bytes >= sens_budget)
                break;
        }
    }

    size_t ctrl_bytes = 0;
    while (ctrl_bytes + 4 <= ctrl_budget && token_bytes + ctrl_bytes + 4 <= cap) {
        size_t remaining = std::min(ctrl_budget - ctrl_bytes, cap - token_bytes - ctrl_bytes);
        size_t span = std::min<size_t>(64, remaining) - 4 + 1;
        size_t len = 4 + rng.below(span);
        PageElement e;
        e.raw.resize(len);
        for (auto& b : e.raw)
            b = ctrl_pool[rng.below(ctrl_pool.size())];
        ctrl_bytes += len;
        elems.push_back(std::move(e));
    }

    rng.shuffle(elems);

    const size_t gap_total = cap - token_bytes - ctrl_bytes;
    const size_t slots = elems.size() + 1;
    size_t cursor = 0;
    size_t gap_emitted = 0;
    for (size_t i = 0; i <= elems.size(); ++i) {
        size_t gap_target = gap_total * (i + 1) / slots;
        emit_filler(dst, cursor, gap_target - gap_emitted, cfg.encoding, rng);
        gap_emitted = gap_target;
        if (i == elems.size())
            break;
        const PageElement& e = elems[i];
        if (e.is_token) {
            GroundTruthEntry g;
            g.page_index = page_index;
            g.byte_offset = static_cast<uint32_t>(cursor);
            g.byte_len = static_cast<uint32_t>(e.text.size());
            g.entity_type = e.entity;
            g.plaintext = e.text;
            manifest.push_back(std::move(g));
            for (char c : e.text)
                dst[cursor++] = encode_char(c, cfg.encoding);
            dst[cursor++] = encode_char(' ', cfg.encoding);
        } else {
            std::copy(e.raw.begin(), e.raw.end(), dst + cursor);
            cursor += e.raw.size();
        }
    }
}

} // namespace detail

// Deterministic: the same config (seed included) produces byte-identical
// output. Generation is single-threaded by design.
inline GeneratedDump generate_dump(const DumpGenConfig& cfg) {
    validate_dumpgen_config(cfg);
    const uint64_t n_pages = cfg.total_size / page_size;
    uint64_t n_sensitive = 0;
    if (cfg.pct_sensitive_pages > 0.0) {
        n_sensitive = static_cast<uint64_t>(
            std::ceil(cfg.pct_sensitive_pages * static_cast<double>(n_pages)));
        n_sensitive = std::max<uint64_t>(1, std::min(n_sensitive, n_pages));
    }
    const uint64_t num_asids = std::max<uint64_t>(1, n_pages / gen_pages_per_asid);

    Prng rng(cfg.seed);
    GeneratedDump out;
    out.bytes.resize(cfg.total_size);
    const std::vector<uint8_t> ctrl_pool = detail::control_byte_pool(cfg.encoding);
    std::vector<uint32_t> seq(num_asids, 0);

    uint64_t sensitive_left = n_sensitive;
    for (uint64_t p = 0; p < n_pages; ++p) {
        // Selection sampling: exactly n_sensitive pages get marked. A fixed
        // stride would resonate with the round-robin asid layout and starve
        // whole address spaces (at 50% every marked page lands on an odd
        // asid), so the choice must be independent of the page's position.
        const bool sensitive = rng.below(n_pages - p) < sensitive_left;
        if (sensitive)
            --sensitive_left;
        uint8_t* page = out.bytes.data() + p * page_size;
        PageHeader h;
        h.asid = static_cast<uint32_t>(p % num_asids);
        h.logical_address =
            (static_cast<uint64_t>(h.asid) << 32) | (static_cast<uint64_t>(seq[h.asid]++) * page_size);
        h.data_len = static_cast<uint16_t>(payload_capacity);
        write_page_header(page, h);
        detail::fill_payload(page + page_header_size, payload_capacity, p, sensitive, cfg, rng,
                             ctrl_pool, out.manifest);
    }
    return out;
}

// === manifest round trips ===

inline constexpr std::string_view manifest_header = "page_index,byte_offset,byte_len,entity_type,plaintext";

inline std::string manifest_to_csv(const std::vector<GroundTruthEntry>& manifest) {
    std::string out(manifest_header);
    out.push_back('\n');
    for (const auto& g : manifest) {
        out += std::to_string(g.page_index);
        out.push_back(',');
        out += std::to_string(g.byte_offset);
        out.push_back(',');
        out += std::to_string(g.byte_len);
        out.push_back(',');
        out += csv_escape(g.entity_type);
        out.push_back(',');
        out += csv_escape(g.plaintext);
        out.push_back('\n');
    }
    return out;
}

inline std::vector<GroundTruthEntry> manifest_from_csv(std::string_view text) {
    size_t pos = 0;
    size_t line_no = 1;
    auto header = csv_next_record(text, pos, line_no);
    if (header.size() != 5 || header[0] != "page_index" || header[1] != "byte_offset" ||
        header[2] != "byte_len" || header[3] != "entity_type" || header[4] != "plaintext")
        throw ParseError("manifest line 1: unexpected header");
    std::vector<GroundTruthEntry> out;
    while (pos < text.size()) {
        ++line_no;
        auto fields = csv_next_record(text, pos, line_no);
        if (fields.size() == 1 && fields[0].empty())
            continue; // trailing newline
        if (fields.size() != 5)
            throw ParseError("manifest line " + std::to_string(line_no) + ": expected 5 fields, got " +
                             std::to_string(fields.size()));
        GroundTruthEntry g;
        try {
            g.page_index = std::stoull(fields[0]);
            g.byte_offset = static_cast<uint32_t>(std::stoul(fields[1]));
            g.byte_len = static_cast<uint32_t>(std::stoul(fields[2]));
        } catch (const std::exception&) {
            throw ParseError("manifest line " + std::to_string(line_no) + ": non-numeric extent field");
        }
        g.entity_type = fields[3];
        g.plaintext = fields[4];
        out.push_back(std::move(g));
    }
    return out;
}

inline void write_manifest_csv(const std::string& path, const std::vector<GroundTruthEntry>& manifest) {
    write_file_atomic(path, manifest_to_csv(manifest));
}

inline std::vector<GroundTruthEntry> read_manifest_csv(const std::string& path) {
    return manifest_from_csv(read_text_file(path));
}

// === config from JSON ===

inline DumpGenConfig dumpgen_config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("generator config must be a JSON object");
    static const std::vector<std::string> known = {
        "total_size",       "pct_sensitive_pages", "pct_sensitive_per_page",
        "pct_control_data", "encoding",            "entity_mix",
        "seed",
    };
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("generator config: unknown key '" + it.key() + "'");
    DumpGenConfig cfg;
    try {
        cfg.total_size = j.at("total_size").get<uint64_t>();
        cfg.pct_sensitive_pages = j.value("pct_sensitive_pages", 0.0);
        cfg.pct_sensitive_per_page = j.value("pct_sensitive_per_page", 0.0);
        cfg.pct_control_data = j.value("pct_control_data", 0.0);
        cfg.encoding = encoding_from_name(j.value("encoding", "ascii"));
        cfg.seed = j.value("seed", 0ULL);
        if (j.contains("entity_mix")) {
            for (const auto& e : j.at("entity_mix")) {
                EntityMixEntry m;
                m.entity = e.at("entity").get<std::string>();
                m.weight = e.value("weight", 1.0);
                cfg.entity_mix.push_back(std::move(m));
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("generator config: ") + ex.what());
    }
    validate_dumpgen_config(cfg);
    return cfg;
}

inline DumpGenConfig load_dumpgen_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(path + ": " + ex.what());
    }
    return dumpgen_config_from_json(j);
}

} // namespace dumpscrub
