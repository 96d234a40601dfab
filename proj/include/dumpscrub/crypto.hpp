#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "errors.hpp"
#include "io.hpp"

namespace dumpscrub {

enum class HashAlgo { md5, sha1, sha256 };

inline const char* hash_algo_name(HashAlgo a) {
    switch (a) {
    case HashAlgo::md5:
        return "md5";
    case HashAlgo::sha1:
        return "sha1";
    case HashAlgo::sha256:
        return "sha256";
    }
    return "";
}

inline HashAlgo hash_algo_from_name(std::string_view name) {
    if (name == "md5")
        return HashAlgo::md5;
    if (name == "sha1")
        return HashAlgo::sha1;
    if (name == "sha256")
        return HashAlgo::sha256;
    throw ConfigError("unknown hash algorithm '" + std::string(name) + "'");
}

namespace detail {

inline const EVP_MD* evp_md(HashAlgo a) {
    switch (a) {
    case HashAlgo::md5:
        return EVP_md5();
    case HashAlgo::sha1:
        return EVP_sha1();
    case HashAlgo::sha256:
        return EVP_sha256();
    }
    return nullptr;
}

} // namespace detail

inline std::vector<uint8_t> digest_bytes(HashAlgo a, const void* data, size_t len) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (EVP_Digest(data, len, md, &md_len, detail::evp_md(a), nullptr) != 1)
        throw RunError("digest computation failed");
    return std::vector<uint8_t>(md, md + md_len);
}

inline std::string digest_hex(HashAlgo a, const void* data, size_t len) {
    static const char hex[] = "0123456789abcdef";
    auto md = digest_bytes(a, data, len);
    std::string out;
    out.reserve(md.size() * 2);
    for (uint8_t b : md) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xF]);
    }
    return out;
}

inline std::string digest_hex(HashAlgo a, std::string_view data) {
    return digest_hex(a, data.data(), data.size());
}

inline std::array<uint8_t, 32> sha256_bytes(const void* data, size_t len) {
    auto md = digest_bytes(HashAlgo::sha256, data, len);
    std::array<uint8_t, 32> out{};
    std::copy(md.begin(), md.end(), out.begin());
    return out;
}

// Reusable AES-128 block encryptor (ECB is stateless, so one streaming context
// serves any number of single-block calls).
class Aes128Block {
public:
    explicit Aes128Block(const uint8_t key[16]) {
        ctx_ = EVP_CIPHER_CTX_new();
        if (!ctx_ || EVP_EncryptInit_ex(ctx_, EVP_aes_128_ecb(), nullptr, key, nullptr) != 1)
            throw RunError("AES-128 init failed");
        EVP_CIPHER_CTX_set_padding(ctx_, 0);
    }
    Aes128Block(const Aes128Block&) = delete;
    Aes128Block& operator=(const Aes128Block&) = delete;
    ~Aes128Block() { EVP_CIPHER_CTX_free(ctx_); }

    void encrypt(const uint8_t in[16], uint8_t out[16]) {
        int outl = 0;
        if (EVP_EncryptUpdate(ctx_, out, &outl, in, 16) != 1 || outl != 16)
            throw RunError("AES-128 block encryption failed");
    }

private:
    EVP_CIPHER_CTX* ctx_ = nullptr;
};

// AES-256-GCM. Returns ciphertext followed by the 16-byte tag.
inline std::vector<uint8_t> aes256_gcm_seal(const std::array<uint8_t, 32>& key,
                                            const std::array<uint8_t, 12>& nonce, const void* pt,
                                            size_t len) {
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx)
        throw RunError("GCM context allocation failed");
    std::vector<uint8_t> out(len + 16);
    int outl = 0;
    bool ok = EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) == 1 &&
              (len == 0 ||
               EVP_EncryptUpdate(ctx, out.data(), &outl, static_cast<const uint8_t*>(pt),
                                 static_cast<int>(len)) == 1);
    int fl = 0;
    ok = ok && EVP_EncryptFinal_ex(ctx, out.data() + outl, &fl) == 1;
    ok = ok && EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, 16, out.data() + len) == 1;
    EVP_CIPHER_CTX_free(ctx);
    if (!ok)
        throw RunError("GCM seal failed");
    return out;
}

inline std::vector<uint8_t> aes256_gcm_open(const std::array<uint8_t, 32>& key,
                                            const std::array<uint8_t, 12>& nonce, const void* ct,
                                            size_t len_with_tag) {
    if (len_with_tag < 16)
        throw ParseError("sealed payload shorter than its tag");
    size_t len = len_with_tag - 16;
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx)
        throw RunError("GCM context allocation failed");
    std::vector<uint8_t> out(len);
    int outl = 0;
    std::array<uint8_t, 16> tag;
    std::copy_n(static_cast<const uint8_t*>(ct) + len, 16, tag.begin());
    bool ok = EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) == 1 &&
              (len == 0 ||
               EVP_DecryptUpdate(ctx, out.data(), &outl, static_cast<const uint8_t*>(ct),
                                 static_cast<int>(len)) == 1) &&
              EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, 16, tag.data()) == 1;
    int fl = 0;
    ok = ok && EVP_DecryptFinal_ex(ctx, out.data() + outl, &fl) == 1;
    EVP_CIPHER_CTX_free(ctx);
    if (!ok)
        throw ParseError("sealed payload failed authentication");
    return out;
}

// Key material comes from a key file (hashed to 32 bytes) or, failing that,
// from the DUMPSCRUB_PASSPHRASE environment variable. Keys never live in the
// config itself.
struct KeyMaterial {
    std::array<uint8_t, 32> master{};

    std::array<uint8_t, 16> aes128() const {
        std::array<uint8_t, 16> k{};
        std::copy_n(master.begin(), 16, k.begin());
        return k;
    }
};

inline KeyMaterial load_key_material(const std::string& key_file) {
    KeyMaterial km;
    if (!key_file.empty()) {
        auto bytes = read_file(key_file);
        if (bytes.empty())
            throw ConfigError("key file " + key_file + " is empty");
        km.master = sha256_bytes(bytes.data(), bytes.size());
        return km;
    }
    const char* pp = std::getenv("DUMPSCRUB_PASSPHRASE");
    if (!pp || !*pp)
        throw ConfigError(
            "encryption requested but no key material: set redaction.key_file or DUMPSCRUB_PASSPHRASE");
    km.master = sha256_bytes(pp, std::string_view(pp).size());
    return km;
}

// Deterministic nonce in the synthetic-IV style: outputs stay pure functions
// of (input, config, key), and equal plaintexts map to equal ciphertexts,
// which matches the joinability the hash method offers.
inline std::array<uint8_t, 12> derive_nonce(const std::array<uint8_t, 32>& key, std::string_view domain,
                                            std::string_view plaintext) {
    std::string buf;
    buf.reserve(key.size() + domain.size() + plaintext.size() + 2);
    buf.append(reinterpret_cast<const char*>(key.data()), key.size());
    buf.push_back('\x1f');
    buf.append(domain);
    buf.push_back('\x1f');
    buf.append(plaintext);
    auto h = sha256_bytes(buf.data(), buf.size());
    std::array<uint8_t, 12> nonce{};
    std::copy_n(h.begin(), 12, nonce.begin());
    return nonce;
}

} // namespace dumpscrub
