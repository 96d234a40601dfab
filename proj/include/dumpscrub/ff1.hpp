#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "crypto.hpp"
#include "errors.hpp"

namespace dumpscrub {

// FF1 format-preserving encryption (NIST SP 800-38G) over a declared
// alphabet, with AES-128 as the round function. Arithmetic is done in
// unsigned __int128, which bounds the supported lengths: radix^ceil(n/2) must
// stay below 2^120.
struct Ff1Alphabet {
    std::string chars;
    std::array<int16_t, 256> index{};

    static Ff1Alphabet from_chars(std::string chars) {
        Ff1Alphabet a;
        a.chars = std::move(chars);
        a.index.fill(-1);
        for (size_t i = 0; i < a.chars.size(); ++i)
            a.index[static_cast<uint8_t>(a.chars[i])] = static_cast<int16_t>(i);
        return a;
    }

    static const Ff1Alphabet& digits() {
        static const Ff1Alphabet a = from_chars("0123456789");
        return a;
    }

    // Every printable ASCII character except space.
    static const Ff1Alphabet& printable94() {
        static const Ff1Alphabet a = [] {
            std::string s;
            for (int c = 0x21; c <= 0x7E; ++c)
                s.push_back(static_cast<char>(c));
            return from_chars(std::move(s));
        }();
        return a;
    }

    uint32_t radix() const { return static_cast<uint32_t>(chars.size()); }
};

namespace detail {

using u128 = unsigned __int128;

inline u128 pow_u128(uint32_t base, uint32_t exp) {
    u128 v = 1;
    for (uint32_t i = 0; i < exp; ++i)
        v *= base;
    return v;
}

// Largest string length the 128-bit arithmetic supports for this radix.
inline uint32_t ff1_max_len(uint32_t radix) {
    const u128 limit = static_cast<u128>(1) << 120;
    uint32_t v = 0;
    u128 acc = 1;
    while (acc < limit / radix) {
        acc *= radix;
        ++v;
    }
    return 2 * v;
}

inline uint32_t bit_length(u128 v) {
    uint32_t bits = 0;
    while (v) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

inline u128 num_radix(std::string_view s, const Ff1Alphabet& alph) {
    u128 x = 0;
    for (char c : s) {
        int16_t d = alph.index[static_cast<uint8_t>(c)];
        if (d < 0)
            throw ConfigError("FF1: character outside the declared alphabet");
        x = x * alph.radix() + static_cast<uint32_t>(d);
    }
    return x;
}

inline std::string str_radix(u128 x, uint32_t m, const Ff1Alphabet& alph) {
    std::string out(m, alph.chars[0]);
    for (uint32_t i = m; i-- > 0;) {
        out[i] = alph.chars[static_cast<size_t>(x % alph.radix())];
        x /= alph.radix();
    }
    return out;
}

// value of a big-endian byte string reduced mod m
inline u128 num_bytes_mod(const uint8_t* data, size_t len, u128 m) {
    u128 acc = 0;
    for (size_t i = 0; i < len; ++i)
        acc = ((acc << 8) | data[i]) % m;
    return acc;
}

inline std::array<uint8_t, 16> cbc_mac(Aes128Block& aes, const std::vector<uint8_t>& data) {
    std::array<uint8_t, 16> r{};
    std::array<uint8_t, 16> x;
    for (size_t off = 0; off < data.size(); off += 16) {
        for (int i = 0; i < 16; ++i)
            x[static_cast<size_t>(i)] = r[static_cast<size_t>(i)] ^ data[off + static_cast<size_t>(i)];
        aes.encrypt(x.data(), r.data());
    }
    return r;
}

struct Ff1Params {
    uint32_t n, u, v, b, d;
    std::vector<uint8_t> p; // the fixed first block
};

inline Ff1Params ff1_setup(const Ff1Alphabet& alph, std::string_view x, std::string_view tweak) {
    const uint32_t radix = alph.radix();
    if (radix < 2)
        throw ConfigError("FF1: radix must be at least 2");
    Ff1Params pr;
    pr.n = static_cast<uint32_t>(x.size());
    if (pr.n < 2)
        throw ConfigError("FF1: input shorter than the two-symbol minimum");
    u128 domain = 1; // capped at 100, the NIST domain-size floor
    for (uint32_t i = 0; i < pr.n && domain < 100; ++i)
        domain *= radix;
    if (domain < 100 || pr.n > ff1_max_len(radix))
        throw ConfigError("FF1: input length " + std::to_string(pr.n) + " outside scheme bounds for radix " +
                          std::to_string(radix));
    pr.u = pr.n / 2;
    pr.v = pr.n - pr.u;
    pr.b = (bit_length(pow_u128(radix, pr.v) - 1) + 7) / 8;
    pr.d = 4 * ((pr.b + 3) / 4) + 4;
    const uint32_t t = static_cast<uint32_t>(tweak.size());
    pr.p = {0x01, 0x02, 0x01,
            static_cast<uint8_t>(radix >> 16), static_cast<uint8_t>(radix >> 8),
            static_cast<uint8_t>(radix), 0x0A, static_cast<uint8_t>(pr.u % 256),
            static_cast<uint8_t>(pr.n >> 24), static_cast<uint8_t>(pr.n >> 16),
            static_cast<uint8_t>(pr.n >> 8), static_cast<uint8_t>(pr.n),
            static_cast<uint8_t>(t >> 24), static_cast<uint8_t>(t >> 16),
            static_cast<uint8_t>(t >> 8), static_cast<uint8_t>(t)};
    return pr;
}

inline u128 ff1_round_y(Aes128Block& aes, const Ff1Params& pr, std::string_view tweak, uint8_t round_i,
                        u128 num_other, u128 modulus) {
    const size_t t = tweak.size();
    const size_t pad = (16 - ((t + pr.b + 1) % 16)) % 16;
    std::vector<uint8_t> q;
    q.reserve(pr.p.size() + t + pad + 1 + pr.b);
    q.insert(q.end(), pr.p.begin(), pr.p.end());
    q.insert(q.end(), tweak.begin(), tweak.end());
    q.insert(q.end(), pad, 0);
    q.push_back(round_i);
    for (uint32_t i = pr.b; i-- > 0;)
        q.push_back(static_cast<uint8_t>(num_other >> (8 * i)));
    auto r = cbc_mac(aes, q);
    // S = R || E(R ^ [1]) || E(R ^ [2]) ... truncated to d bytes
    std::vector<uint8_t> s(r.begin(), r.end());
    uint64_t j = 1;
    while (s.size() < pr.d) {
        std::array<uint8_t, 16> block{};
        for (int i = 0; i < 8; ++i)
            block[static_cast<size_t>(8 + i)] = static_cast<uint8_t>(j >> (56 - 8 * i));
        for (int i = 0; i < 16; ++i)
            block[static_cast<size_t>(i)] ^= r[static_cast<size_t>(i)];
        std::array<uint8_t, 16> enc;
        aes.encrypt(block.data(), enc.data());
        s.insert(s.end(), enc.begin(), enc.end());
        ++j;
    }
    return num_bytes_mod(s.data(), pr.d, modulus);
}

} // namespace detail

inline std::string ff1_encrypt(const std::array<uint8_t, 16>& key, std::string_view tweak,
                               const Ff1Alphabet& alph, std::string_view plaintext) {
    auto pr = detail::ff1_setup(alph, plaintext, tweak);
    Aes128Block aes(key.data());
    std::string a(plaintext.substr(0, pr.u));
    std::string b(plaintext.substr(pr.u));
    for (uint8_t i = 0; i < 10; ++i) {
        uint32_t m = (i % 2 == 0) ? pr.u : pr.v;
        detail::u128 modulus = detail::pow_u128(alph.radix(), m);
        detail::u128 y = detail::ff1_round_y(aes, pr, tweak, i, detail::num_radix(b, alph), modulus);
        detail::u128 c = (detail::num_radix(a, alph) + y) % modulus;
        a = b;
        b = detail::str_radix(c, m, alph);
    }
    return a + b;
}

inline std::string ff1_decrypt(const std::array<uint8_t, 16>& key, std::string_view tweak,
                               const Ff1Alphabet& alph, std::string_view ciphertext) {
    auto pr = detail::ff1_setup(alph, ciphertext, tweak);
    Aes128Block aes(key.data());
    std::string a(ciphertext.substr(0, pr.u));
    std::string b(ciphertext.substr(pr.u));
    for (int i = 9; i >= 0; --i) {
        uint32_t m = (i % 2 == 0) ? pr.u : pr.v;
        detail::u128 modulus = detail::pow_u128(alph.radix(), m);
        detail::u128 y =
            detail::ff1_round_y(aes, pr, tweak, static_cast<uint8_t>(i), detail::num_radix(a, alph), modulus);
        detail::u128 num_b = detail::num_radix(b, alph);
        detail::u128 c = (num_b + modulus - (y % modulus)) % modulus;
        b = a;
        a = detail::str_radix(c, m, alph);
    }
    return a + b;
}

} // namespace dumpscrub
