#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "wordlists.hpp"

namespace dumpscrub {

enum class IdentifierKind { dictionary, regex };

// Post-match semantic checks.
enum class Validator { none, luhn, ipv4_octets, ssn_area };

// Hand-written equivalents of the built-in patterns. The regex source stays
// attached to every identifier and the unit suite asserts native/regex
// agreement, but the native path avoids std::regex in the hot loop.
enum class NativeMatcher { none, credit_card, ssn, email, phone_us, ipv4, zipcode };

inline const std::vector<std::string>& builtin_entity_names() {
    static const std::vector<std::string> names = {
        "CREDIT_CARD", "EMAIL", "GENDER", "IPV4",
        "PERSON_NAME", "PHONE_US", "SSN", "ZIPCODE",
    };
    return names;
}

inline bool luhn_check(std::string_view digits) {
    if (digits.empty())
        throw std::invalid_argument("luhn_check: empty input");
    int sum = 0;
    bool dbl = false;
    for (size_t i = digits.size(); i-- > 0;) {
        char c = digits[i];
        if (c < '0' || c > '9')
            throw std::invalid_argument("luhn_check: non-digit input");
        int d = c - '0';
        if (dbl) {
            d *= 2;
            if (d > 9)
                d -= 9;
        }
        sum += d;
        dbl = !dbl;
    }
    return sum % 10 == 0;
}

struct Identifier {
    std::string name;
    IdentifierKind kind = IdentifierKind::regex;
    uint32_t min_len = 2;
    uint32_t max_len = 256;

    // regex payload
    std::string pattern;
    std::optional<std::regex> compiled;
    NativeMatcher native = NativeMatcher::none;
    Validator validator = Validator::none;

    // dictionary payload, terms normalized to lower case
    std::unordered_set<std::string> terms;

    // Names of identifiers this one depends on (referenced by its validator).
    // None of the built-ins use this; it participates in minimal-set closure.
    std::vector<std::string> depends_on;
};

namespace detail {

inline bool is_digit(char c) {
    return c >= '0' && c <= '9';
}
inline bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// digits with optional single '-' separators between digit runs, 13..19 digits
inline bool native_credit_card(std::string_view t) {
    int digits = 0;
    bool prev_dash = true; // no leading '-'
    for (char c : t) {
        if (is_digit(c)) {
            ++digits;
            prev_dash = false;
        } else if (c == '-') {
            if (prev_dash)
                return false;
            prev_dash = true;
        } else {
            return false;
        }
    }
    if (prev_dash)
        return false; // trailing '-'
    return digits >= 13 && digits <= 19;
}

inline bool native_ssn(std::string_view t) {
    if (t.size() != 11)
        return false;
    for (size_t i = 0; i < 11; ++i) {
        if (i == 3 || i == 6) {
            if (t[i] != '-')
                return false;
        } else if (!is_digit(t[i])) {
            return false;
        }
    }
    return true;
}

// local: [A-Za-z0-9._%+-]+  domain: [A-Za-z0-9.-]+\.[A-Za-z]{2,}
inline bool native_email(std::string_view t) {
    size_t at = t.find('@');
    if (at == std::string_view::npos || at == 0)
        return false;
    if (t.find('@', at + 1) != std::string_view::npos)
        return false;
    for (size_t i = 0; i < at; ++i) {
        char c = t[i];
        if (!is_digit(c) && !is_alpha(c) && c != '.' && c != '_' && c != '%' && c != '+' && c != '-')
            return false;
    }
    std::string_view domain = t.substr(at + 1);
    size_t dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0)
        return false;
    std::string_view tld = domain.substr(dot + 1);
    if (tld.size() < 2)
        return false;
    for (char c : tld)
        if (!is_alpha(c))
            return false;
    for (size_t i = 0; i < dot; ++i) {
        char c = domain[i];
        if (!is_digit(c) && !is_alpha(c) && c != '.' && c != '-')
            return false;
    }
    return true;
}

// (1[-.])? ddd[-.]ddd[-.]dddd  or plain 10 digits
inline bool native_phone_us(std::string_view t) {
    auto all_digits = [](std::string_view s) {
        for (char c : s)
            if (!is_digit(c))
                return false;
        return !s.empty();
    };
    if (t.size() == 10)
        return all_digits(t);
    std::string_view rest = t;
    if (rest.size() == 14) {
        if (rest[0] != '1' || (rest[1] != '-' && rest[1] != '.'))
            return false;
        rest = rest.substr(2);
    }
    if (rest.size() != 12)
        return false;
    if ((rest[3] != '-' && rest[3] != '.') || (rest[7] != '-' && rest[7] != '.'))
        return false;
    return all_digits(rest.substr(0, 3)) && all_digits(rest.substr(4, 3)) && all_digits(rest.substr(8, 4));
}

inline bool native_ipv4(std::string_view t) {
    int part = 0;
    int part_len = 0;
    for (char c : t) {
        if (is_digit(c)) {
            if (++part_len > 3)
                return false;
        } else if (c == '.') {
            if (part_len == 0)
                return false;
            ++part;
            part_len = 0;
        } else {
            return false;
        }
    }
    return part == 3 && part_len > 0;
}

inline bool native_zipcode(std::string_view t) {
    if (t.size() != 5)
        return false;
    for (char c : t)
        if (!is_digit(c))
            return false;
    return true;
}

inline bool run_native(NativeMatcher m, std::string_view t) {
    switch (m) {
    case NativeMatcher::credit_card:
        return native_credit_card(t);
    case NativeMatcher::ssn:
        return native_ssn(t);
    case NativeMatcher::email:
        return native_email(t);
    case NativeMatcher::phone_us:
        return native_phone_us(t);
    case NativeMatcher::ipv4:
        return native_ipv4(t);
    case NativeMatcher::zipcode:
        return native_zipcode(t);
    case NativeMatcher::none:
        break;
    }
    return false;
}

inline bool run_validator(Validator v, std::string_view t) {
    switch (v) {
    case Validator::luhn: {
        std::string digits;
        digits.reserve(t.size());
        for (char c : t)
            if (is_digit(c))
                digits.push_back(c);
        return !digits.empty() && luhn_check(digits);
    }
    case Validator::ipv4_octets: {
        int value = 0;
        for (char c : t) {
            if (c == '.') {
                value = 0;
            } else {
                value = value * 10 + (c - '0');
                if (value > 255)
                    return false;
            }
        }
        return true;
    }
    case Validator::ssn_area: {
        int area = (t[0] - '0') * 100 + (t[1] - '0') * 10 + (t[2] - '0');
        return area != 0 && area != 666;
    }
    case Validator::none:
        break;
    }
    return true;
}

inline std::string fold_ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

} // namespace detail

// Whole-token match. `folded` must be the lower-cased form of `token`;
// dictionaries are consulted with it.
inline bool identifier_matches(const Identifier& id, std::string_view token, std::string_view folded) {
    size_t n = token.size();
    if (n < id.min_len || n > id.max_len)
        return false;
    if (id.kind == IdentifierKind::dictionary)
        return id.terms.count(std::string(folded)) > 0;
    bool structural;
    if (id.native != NativeMatcher::none)
        structural = detail::run_native(id.native, token);
    else if (id.compiled)
        structural = std::regex_match(token.begin(), token.end(), *id.compiled);
    else
        return false;
    if (!structural)
        return false;
    return detail::run_validator(id.validator, token);
}

inline bool identifier_matches(const Identifier& id, std::string_view token) {
    if (id.kind == IdentifierKind::dictionary)
        return identifier_matches(id, token, detail::fold_ascii_lower(token));
    return identifier_matches(id, token, token);
}

namespace detail {

inline Identifier make_regex_identifier(std::string name, std::string pattern, NativeMatcher native,
                                        Validator validator, uint32_t min_len, uint32_t max_len) {
    Identifier id;
    id.name = std::move(name);
    id.kind = IdentifierKind::regex;
    id.pattern = std::move(pattern);
    id.compiled.emplace(id.pattern, std::regex::ECMAScript | std::regex::optimize);
    id.native = native;
    id.validator = validator;
    id.min_len = min_len;
    id.max_len = max_len;
    return id;
}

inline Identifier make_dictionary_identifier(std::string name,
                                             const std::vector<std::string_view>& terms) {
    Identifier id;
    id.name = std::move(name);
    id.kind = IdentifierKind::dictionary;
    uint32_t lo = UINT32_MAX, hi = 0;
    for (auto t : terms) {
        id.terms.insert(fold_ascii_lower(t));
        lo = std::min<uint32_t>(lo, static_cast<uint32_t>(t.size()));
        hi = std::max<uint32_t>(hi, static_cast<uint32_t>(t.size()));
    }
    id.min_len = lo == UINT32_MAX ? 2 : lo;
    id.max_len = hi == 0 ? 2 : hi;
    return id;
}

} // namespace detail

// The eight built-in identifiers, alphabetical by name. This initial order is
// the classifier's starting point before most-recently-used promotion.
inline std::vector<Identifier> builtin_identifiers() {
    std::vector<Identifier> ids;
    ids.push_back(detail::make_regex_identifier(
        "CREDIT_CARD", "(?=(?:-?[0-9]){13,19}$)[0-9]+(?:-[0-9]+)*", NativeMatcher::credit_card,
        Validator::luhn, 13, 23));
    ids.push_back(detail::make_regex_identifier(
        "EMAIL", "[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\\.[A-Za-z]{2,}", NativeMatcher::email,
        Validator::none, 6, 254));
    {
        std::vector<std::string_view> terms(words::gender_terms.begin(), words::gender_terms.end());
        Identifier g = detail::make_dictionary_identifier("GENDER", terms);
        ids.push_back(std::move(g));
    }
    ids.push_back(detail::make_regex_identifier(
        "IPV4", "[0-9]{1,3}\\.[0-9]{1,3}\\.[0-9]{1,3}\\.[0-9]{1,3}", NativeMatcher::ipv4,
        Validator::ipv4_octets, 7, 15));
    {
        std::vector<std::string_view> terms(words::person_names.begin(), words::person_names.end());
        ids.push_back(detail::make_dictionary_identifier("PERSON_NAME", terms));
    }
    ids.push_back(detail::make_regex_identifier(
        "PHONE_US", "(?:1[-.])?[0-9]{3}[-.][0-9]{3}[-.][0-9]{4}|[0-9]{10}", NativeMatcher::phone_us,
        Validator::none, 10, 14));
    ids.push_back(detail::make_regex_identifier(
        "SSN", "[0-9]{3}-[0-9]{2}-[0-9]{4}", NativeMatcher::ssn, Validator::ssn_area, 11, 11));
    ids.push_back(detail::make_regex_identifier(
        "ZIPCODE", "[0-9]{5}", NativeMatcher::zipcode, Validator::none, 5, 5));
    return ids;
}

} // namespace dumpscrub
