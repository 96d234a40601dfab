#pragma once

// Output production: splices replacement bytes over sensitive extents while
// keeping page headers and every non-sensitive byte exactly as they were.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "crypto.hpp"
#include "dump_format.hpp"
#include "encoding.hpp"
#include "errors.hpp"
#include "ff1.hpp"
#include "identifiers.hpp"
#include "input_parser.hpp"
#include "modes.hpp"

namespace dumpscrub {

enum class RedactMethod { overwrite, hash, encrypt };
enum class HashLengthPolicy { full, fit };
enum class EncryptScheme { aes, fpe_ff1 };

inline const char* redact_method_name(RedactMethod m) {
    switch (m) {
    case RedactMethod::overwrite:
        return "overwrite";
    case RedactMethod::hash:
        return "hash";
    default:
        return "encrypt";
    }
}

inline RedactMethod redact_method_from_name(std::string_view n) {
    if (n == "overwrite")
        return RedactMethod::overwrite;
    if (n == "hash")
        return RedactMethod::hash;
    if (n == "encrypt")
        return RedactMethod::encrypt;
    throw ConfigError("unknown redaction method \"" + std::string(n) + "\"");
}

inline const char* hash_length_policy_name(HashLengthPolicy p) {
    return p == HashLengthPolicy::full ? "full" : "fit";
}

inline HashLengthPolicy hash_length_policy_from_name(std::string_view n) {
    if (n == "full")
        return HashLengthPolicy::full;
    if (n == "fit")
        return HashLengthPolicy::fit;
    throw ConfigError("unknown hash length policy \"" + std::string(n) + "\"");
}

inline const char* encrypt_scheme_name(EncryptScheme s) {
    return s == EncryptScheme::aes ? "aes" : "fpe_ff1";
}

inline EncryptScheme encrypt_scheme_from_name(std::string_view n) {
    if (n == "aes")
        return EncryptScheme::aes;
    if (n == "fpe_ff1")
        return EncryptScheme::fpe_ff1;
    throw ConfigError("unknown encryption scheme \"" + std::string(n) + "\"");
}

struct RedactionPolicy {
    RedactMethod method = RedactMethod::overwrite;
    // The default replacement carries a trailing space so that replicated
    // copies stay word-separated.
    std::string overwrite_string = "This data has been redacted ";
    std::map<std::string, std::string> overwrite_by_entity;
    HashAlgo hash_algo = HashAlgo::sha256;
    HashLengthPolicy hash_length_policy = HashLengthPolicy::fit;
    EncryptScheme encrypt_scheme = EncryptScheme::fpe_ff1;
    std::string key_file;

    const std::string& overwrite_for(const std::string& entity) const {
        auto it = overwrite_by_entity.find(entity);
        return it != overwrite_by_entity.end() ? it->second : overwrite_string;
    }
};

inline RedactionPolicy redaction_policy_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("redaction: expected an object");
    RedactionPolicy p;
    for (const auto& [key, value] : j.items()) {
        if (key == "method") {
            p.method = redact_method_from_name(value.get<std::string>());
        } else if (key == "overwrite_string") {
            p.overwrite_string = value.get<std::string>();
        } else if (key == "overwrite_by_entity") {
            if (!value.is_object())
                throw ConfigError("redaction.overwrite_by_entity: expected an object");
            for (const auto& [entity, text] : value.items())
                p.overwrite_by_entity[entity] = text.get<std::string>();
        } else if (key == "hash_algo") {
            p.hash_algo = hash_algo_from_name(value.get<std::string>());
        } else if (key == "hash_length_policy") {
            p.hash_length_policy = hash_length_policy_from_name(value.get<std::string>());
        } else if (key == "encrypt_scheme") {
            p.encrypt_scheme = encrypt_scheme_from_name(value.get<std::string>());
        } else if (key == "key_file") {
            p.key_file = value.get<std::string>();
        } else {
            throw ConfigError("redaction: unknown key \"" + key + "\"");
        }
    }
    return p;
}

// Validates the intrinsic policy invariants plus the input-kind restrictions:
// hash replacements must fit and AES is off-limits when the input is a dump,
// because dump outputs must preserve length byte for byte.
inline void validate_redaction_policy(const RedactionPolicy& p, bool dump_input) {
    auto check_text = [](const std::string& s, const std::string& what) {
        if (s.empty())
            throw ConfigError(what + " must be non-empty");
        for (char c : s)
            if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) > 0x7E)
                throw ConfigError(what + " must contain printable characters only");
    };
    check_text(p.overwrite_string, "redaction.overwrite_string");
    for (const auto& [entity, text] : p.overwrite_by_entity)
        check_text(text, "redaction.overwrite_by_entity[" + entity + "]");
    if (dump_input && p.method == RedactMethod::hash && p.hash_length_policy == HashLengthPolicy::full)
        throw ConfigError("hash_length_policy \"full\" cannot preserve length; dumps require \"fit\"");
    if (dump_input && p.method == RedactMethod::encrypt && p.encrypt_scheme == EncryptScheme::aes)
        throw ConfigError("aes redaction grows the data and is not allowed for dump inputs; use fpe_ff1");
}

// Replacement text of exactly plain_len characters: the overwrite string
// replicated end to end and truncated. "ab" at length 5 gives "ababa".
inline std::string redact_overwrite(size_t plain_len, std::string_view overwrite_string) {
    if (overwrite_string.empty())
        throw ConfigError("overwrite string must be non-empty");
    if (plain_len == 0)
        throw RunError("redact_overwrite: zero-length extent");
    std::string out;
    out.reserve(plain_len);
    while (out.size() < plain_len)
        out.append(overwrite_string.substr(0, std::min(overwrite_string.size(), plain_len - out.size())));
    return out;
}

// Hex digest of the plaintext; under the fit policy the digest is replicated
// or truncated to the plaintext's length so dumps keep their size.
inline std::string redact_hash(std::string_view plain, HashAlgo algo, HashLengthPolicy policy) {
    std::string digest = digest_hex(algo, plain);
    if (policy == HashLengthPolicy::full)
        return digest;
    return redact_overwrite(plain.size(), digest);
}

// Entities whose values are digit strings with optional punctuation. For
// these, format-preserving encryption runs over the digit subsequence and
// leaves separators (dashes, dots) in place.
inline bool digit_subsequence_entity(std::string_view entity) {
    return entity == "CREDIT_CARD" || entity == "PHONE_US" || entity == "SSN" || entity == "ZIPCODE";
}

inline const Ff1Alphabet& ff1_alphabet_for(std::string_view entity) {
    return digit_subsequence_entity(entity) ? Ff1Alphabet::digits() : Ff1Alphabet::printable94();
}

namespace detail {

inline bool ff1_len_ok(const Ff1Alphabet& alph, size_t n) {
    if (n < 2 || n > ff1_max_len(alph.radix()))
        return false;
    u128 domain = 1;
    for (size_t i = 0; i < n && domain < 100; ++i)
        domain *= alph.radix();
    return domain >= 100;
}

inline bool ff1_alphabet_ok(const Ff1Alphabet& alph, std::string_view s) {
    for (char c : s)
        if (alph.index[static_cast<uint8_t>(c)] < 0)
            return false;
    return true;
}

inline std::string base64_encode(const uint8_t* data, size_t len) {
    std::string out((len + 2) / 3 * 4 + 1, '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<uint8_t*>(out.data()), data, static_cast<int>(len));
    if (n < 0)
        throw RunError("base64 encoding failed");
    out.resize(static_cast<size_t>(n));
    return out;
}

inline std::vector<uint8_t> base64_decode(std::string_view s) {
    if (s.size() % 4 != 0)
        throw ParseError("base64 text length must be a multiple of four");
    std::vector<uint8_t> buf(s.size() / 4 * 3);
    int n = EVP_DecodeBlock(buf.data(), reinterpret_cast<const uint8_t*>(s.data()),
                            static_cast<int>(s.size()));
    if (n < 0)
        throw ParseError("invalid base64 text");
    size_t pad = 0;
    while (pad < 2 && pad < s.size() && s[s.size() - 1 - pad] == '=')
        ++pad;
    buf.resize(static_cast<size_t>(n) - pad);
    return buf;
}

} // namespace detail

// True when the FF1 scheme can encrypt this token in place: the relevant
// character sequence lies within the declared alphabet and length bounds.
inline bool ff1_feasible(std::string_view token, std::string_view entity) {
    if (digit_subsequence_entity(entity)) {
        size_t digits = 0;
        for (char c : token)
            if (c >= '0' && c <= '9')
                ++digits;
        return detail::ff1_len_ok(Ff1Alphabet::digits(), digits);
    }
    return detail::ff1_alphabet_ok(Ff1Alphabet::printable94(), token) &&
           detail::ff1_len_ok(Ff1Alphabet::printable94(), token.size());
}

// Encrypting replacement. fpe_ff1 keeps length and alphabet (digit entities:
// digits encrypted in place, separators kept; everything else: the whole
// token over the printable-94 alphabet, entity name as the tweak). aes emits
// base64(nonce || ciphertext || tag) and is only legal for log inputs.
inline std::string redact_encrypt(std::string_view plain, std::string_view entity, EncryptScheme scheme,
                                  const KeyMaterial& key, bool dump_input) {
    if (scheme == EncryptScheme::aes) {
        if (dump_input)
            throw ConfigError("aes redaction is not allowed for dump inputs");
        auto nonce = derive_nonce(key.master, "aes-log", plain);
        auto sealed = aes256_gcm_seal(key.master, nonce, plain.data(), plain.size());
        std::vector<uint8_t> blob(nonce.begin(), nonce.end());
        blob.insert(blob.end(), sealed.begin(), sealed.end());
        return detail::base64_encode(blob.data(), blob.size());
    }
    const std::string tweak(entity);
    if (digit_subsequence_entity(entity)) {
        std::string digits;
        std::vector<size_t> positions;
        for (size_t i = 0; i < plain.size(); ++i) {
            char c = plain[i];
            if (c >= '0' && c <= '9') {
                digits.push_back(c);
                positions.push_back(i);
            }
        }
        std::string enc = ff1_encrypt(key.aes128(), tweak, Ff1Alphabet::digits(), digits);
        std::string out(plain);
        for (size_t j = 0; j < positions.size(); ++j)
            out[positions[j]] = enc[j];
        return out;
    }
    if (!detail::ff1_alphabet_ok(Ff1Alphabet::printable94(), plain))
        throw ConfigError("FF1: token contains characters outside the printable alphabet");
    return ff1_encrypt(key.aes128(), tweak, Ff1Alphabet::printable94(), plain);
}

// Inverse of redact_encrypt, for round-trip verification.
inline std::string redact_decrypt(std::string_view cipher, std::string_view entity, EncryptScheme scheme,
                                  const KeyMaterial& key) {
    if (scheme == EncryptScheme::aes) {
        auto blob = detail::base64_decode(cipher);
        if (blob.size() < 12 + 16)
            throw ParseError("aes blob too short");
        std::array<uint8_t, 12> nonce{};
        std::copy_n(blob.begin(), 12, nonce.begin());
        auto pt = aes256_gcm_open(key.master, nonce, blob.data() + 12, blob.size() - 12);
        return std::string(pt.begin(), pt.end());
    }
    const std::string tweak(entity);
    if (digit_subsequence_entity(entity)) {
        std::string digits;
        std::vector<size_t> positions;
        for (size_t i = 0; i < cipher.size(); ++i) {
            char c = cipher[i];
            if (c >= '0' && c <= '9') {
                digits.push_back(c);
                positions.push_back(i);
            }
        }
        std::string dec = ff1_decrypt(key.aes128(), tweak, Ff1Alphabet::digits(), digits);
        std::string out(cipher);
        for (size_t j = 0; j < positions.size(); ++j)
            out[positions[j]] = dec[j];
        return out;
    }
    return ff1_decrypt(key.aes128(), tweak, Ff1Alphabet::printable94(), cipher);
}

// One sensitive extent to replace. For dumps byte_offset is relative to the
// page payload; for logs it is an absolute file offset and page_index is 0.
struct RedactionTarget {
    uint64_t page_index = 0;
    uint64_t byte_offset = 0;
    uint32_t byte_len = 0;
    std::string token;
    std::string entity;
};

// Computes the replacement text for one finding. FF1 falls back to the
// overwrite text when the token is outside the scheme's alphabet or length
// bounds, so a run never aborts halfway through an output file.
inline std::string replacement_for(const RedactionTarget& t, const RedactionPolicy& p,
                                   const KeyMaterial* key, bool dump_input) {
    switch (p.method) {
    case RedactMethod::overwrite:
        return redact_overwrite(t.byte_len, p.overwrite_for(t.entity));
    case RedactMethod::hash:
        return redact_hash(t.token, p.hash_algo, dump_input ? HashLengthPolicy::fit : p.hash_length_policy);
    default:
        break;
    }
    if (!key)
        throw ConfigError("encrypting redaction requires key material");
    if (p.encrypt_scheme == EncryptScheme::aes)
        return redact_encrypt(t.token, t.entity, EncryptScheme::aes, *key, dump_input);
    if (ff1_feasible(t.token, t.entity))
        return redact_encrypt(t.token, t.entity, EncryptScheme::fpe_ff1, *key, dump_input);
    return redact_overwrite(t.byte_len, p.overwrite_for(t.entity));
}

namespace detail {

inline void check_disjoint(std::vector<const RedactionTarget*>& sorted) {
    std::sort(sorted.begin(), sorted.end(), [](const RedactionTarget* a, const RedactionTarget* b) {
        if (a->page_index != b->page_index)
            return a->page_index < b->page_index;
        return a->byte_offset < b->byte_offset;
    });
    for (size_t i = 1; i < sorted.size(); ++i) {
        const auto* a = sorted[i - 1];
        const auto* b = sorted[i];
        if (a->page_index == b->page_index && a->byte_offset + a->byte_len > b->byte_offset)
            throw RunError("overlapping redaction extents at page " + std::to_string(b->page_index) +
                           " offset " + std::to_string(b->byte_offset));
    }
}

} // namespace detail

// Splices finding extents into a whole-file buffer (concise mode). Workers
// may call this concurrently as long as their targets touch disjoint pages.
inline void splice_dump_extents(std::vector<uint8_t>& out, const std::vector<RedactionTarget>& targets,
                                const RedactionPolicy& policy, const KeyMaterial* key, Encoding enc) {
    std::vector<const RedactionTarget*> sorted;
    sorted.reserve(targets.size());
    for (const auto& t : targets)
        sorted.push_back(&t);
    detail::check_disjoint(sorted);
    for (const auto* t : sorted) {
        if (t->byte_offset + t->byte_len > payload_capacity)
            throw RunError("redaction extent exceeds page payload at page " + std::to_string(t->page_index));
        size_t base = static_cast<size_t>(t->page_index) * page_size + page_header_size +
                      static_cast<size_t>(t->byte_offset);
        if (base + t->byte_len > out.size())
            throw RunError("redaction extent out of range at page " + std::to_string(t->page_index));
        std::string repl = replacement_for(*t, policy, key, true);
        if (repl.size() != t->byte_len)
            throw RunError("replacement length mismatch at page " + std::to_string(t->page_index));
        for (size_t i = 0; i < repl.size(); ++i)
            out[base + i] = encode_char(repl[i], enc);
    }
}

// Replaces the whole payload of each listed page (boolean and skip modes).
// Headers stay untouched; the fill is the overwrite text replicated across
// the payload, or the payload's digest under the hash method. FF1 cannot
// span a full page, so the encrypt method also falls back to the overwrite
// text here.
inline void redact_whole_pages(std::vector<uint8_t>& out, const std::vector<uint64_t>& page_indices,
                               const RedactionPolicy& policy, Encoding enc) {
    for (uint64_t pi : page_indices) {
        size_t base = static_cast<size_t>(pi) * page_size;
        if (base + page_size > out.size())
            throw RunError("page index out of range: " + std::to_string(pi));
        std::string fill;
        if (policy.method == RedactMethod::hash) {
            PageHeader h = parse_page_header(out.data() + base, pi);
            std::string digest = digest_hex(policy.hash_algo, out.data() + base + page_header_size, h.data_len);
            fill = redact_overwrite(payload_capacity, digest);
        } else {
            fill = redact_overwrite(payload_capacity, policy.overwrite_string);
        }
        for (size_t i = 0; i < payload_capacity; ++i)
            out[base + page_header_size + i] = encode_char(fill[i], enc);
    }
}

// Whole-file redaction for dump inputs. Concise mode replaces exactly the
// finding extents; boolean and skip modes replace the payloads of the
// affected pages. Output length always equals input length.
inline std::vector<uint8_t> apply_redactions(const std::vector<uint8_t>& input,
                                             const std::vector<RedactionTarget>& findings,
                                             const std::vector<uint64_t>& affected_pages,
                                             const RedactionPolicy& policy, const KeyMaterial* key,
                                             ProcessingMode mode, Encoding enc) {
    std::vector<uint8_t> out(input);
    if (mode == ProcessingMode::concise)
        splice_dump_extents(out, findings, policy, key, enc);
    else
        redact_whole_pages(out, affected_pages, policy, enc);
    if (out.size() != input.size())
        throw RunError("output length drifted from input length");
    return out;
}

// Whole-file redaction for text logs. Extent offsets are absolute; AES and
// full-length hashes may change the output length, which is fine for logs.
inline std::string apply_redactions_log(const std::string& input, const std::vector<RedactionTarget>& findings,
                                        const RedactionPolicy& policy, const KeyMaterial* key) {
    std::vector<const RedactionTarget*> sorted;
    sorted.reserve(findings.size());
    for (const auto& t : findings)
        sorted.push_back(&t);
    detail::check_disjoint(sorted);
    std::string out;
    out.reserve(input.size());
    size_t pos = 0;
    for (const auto* t : sorted) {
        if (t->byte_offset + t->byte_len > input.size())
            throw RunError("redaction extent out of range at offset " + std::to_string(t->byte_offset));
        out.append(input, pos, static_cast<size_t>(t->byte_offset) - pos);
        out += replacement_for(*t, policy, key, false);
        pos = static_cast<size_t>(t->byte_offset) + t->byte_len;
    }
    out.append(input, pos, std::string::npos);
    return out;
}

// Startup guard behind the overwrite idempotence guarantee: replicated
// overwrite text must never itself classify as sensitive, or a second run
// over the output would keep finding data to redact. Probes every extent
// length an identifier could match and checks each token of the replicated
// text against that identifier.
inline void check_overwrite_strings(const RedactionPolicy& p, const std::vector<Identifier>& identifiers) {
    auto check_one = [&](const std::string& s, const std::string& what) {
        for (const auto& id : identifiers) {
            const size_t lo = std::max<size_t>(id.min_len, 2);
            const size_t hi = std::min<size_t>(id.max_len, 512);
            for (size_t len = lo; len <= hi; ++len) {
                std::string r = redact_overwrite(len, s);
                std::vector<ParsedToken> tokens;
                tokenize_bytes(reinterpret_cast<const uint8_t*>(r.data()), r.size(), Encoding::ascii, 0, 0,
                               tokens);
                for (const auto& t : tokens)
                    if (identifier_matches(id, t.text))
                        throw ConfigError(what + " \"" + s + "\" replicates into a token matching " +
                                          id.name + "; choose different replacement text");
            }
        }
    };
    check_one(p.overwrite_string, "redaction.overwrite_string");
    for (const auto& [entity, text] : p.overwrite_by_entity)
        check_one(text, "redaction.overwrite_by_entity[" + entity + "]");
}

} // namespace dumpscrub
