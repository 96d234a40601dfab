#include <catch_amalgamated.hpp>

#include <cstdlib>

#include <dumpscrub/crypto.hpp>
#include <dumpscrub/errors.hpp>
#include <dumpscrub/io.hpp>

using namespace dumpscrub;

TEST_CASE("digest values match the published test vectors") {
    CHECK(digest_hex(HashAlgo::md5, "") == "d41d8cd98f00b204e9800998ecf8427e");
    CHECK(digest_hex(HashAlgo::sha1, "abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(digest_hex(HashAlgo::sha256, "abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(digest_hex(HashAlgo::md5, "4539578763621486") == "e7f20d3207db168bed7882dc63b0d41e");
    CHECK(digest_hex(HashAlgo::sha256, "alice@example.com") ==
          "ff8d9819fc0e12bf0d24892e45987e249a28dce836a85cad60e28eaaa8c6d976");
}

TEST_CASE("hash algo names round-trip and reject unknowns") {
    for (HashAlgo a : {HashAlgo::md5, HashAlgo::sha1, HashAlgo::sha256})
        CHECK(hash_algo_from_name(hash_algo_name(a)) == a);
    CHECK_THROWS_AS(hash_algo_from_name("sha512"), ConfigError);
}

TEST_CASE("gcm seal and open round-trip and authenticate") {
    std::array<uint8_t, 32> key{};
    for (size_t i = 0; i < key.size(); ++i)
        key[i] = static_cast<uint8_t>(i * 7 + 1);
    const std::string pt = "token,entity_type,count\nalice@example.com,EMAIL,3\n";
    const auto nonce = derive_nonce(key, "report", pt);

    auto sealed = aes256_gcm_seal(key, nonce, pt.data(), pt.size());
    REQUIRE(sealed.size() == pt.size() + 16);
    auto opened = aes256_gcm_open(key, nonce, sealed.data(), sealed.size());
    CHECK(std::string(opened.begin(), opened.end()) == pt);

    sealed[3] ^= 0x01;
    CHECK_THROWS_AS(aes256_gcm_open(key, nonce, sealed.data(), sealed.size()), ParseError);
    sealed[3] ^= 0x01;
    auto wrong = key;
    wrong[0] ^= 0xFF;
    CHECK_THROWS_AS(aes256_gcm_open(wrong, nonce, sealed.data(), sealed.size()), ParseError);
    CHECK_THROWS_AS(aes256_gcm_open(key, nonce, sealed.data(), 8), ParseError);
}

TEST_CASE("derived nonces are deterministic and domain-separated") {
    std::array<uint8_t, 32> key{};
    key.fill(0x42);
    const auto a = derive_nonce(key, "report", "same text");
    const auto b = derive_nonce(key, "report", "same text");
    const auto c = derive_nonce(key, "aes-log", "same text");
    const auto d = derive_nonce(key, "report", "other text");
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a != d);
}

TEST_CASE("key material prefers the key file and hashes it") {
    const std::string path = "test_crypto.key";
    write_file_atomic(path, std::string("correct horse battery staple\n"));
    KeyMaterial km = load_key_material(path);
    KeyMaterial again = load_key_material(path);
    CHECK(km.master == again.master);
    // aes128 subkey is the truncated master key.
    auto sub = km.aes128();
    CHECK(std::equal(sub.begin(), sub.end(), km.master.begin()));
    std::remove(path.c_str());
}

TEST_CASE("key material falls back to the passphrase variable") {
    setenv("DUMPSCRUB_PASSPHRASE", "unit test pass", 1);
    KeyMaterial km = load_key_material("");
    CHECK(km.master == sha256_bytes("unit test pass", 14));
    unsetenv("DUMPSCRUB_PASSPHRASE");
    CHECK_THROWS_AS(load_key_material(""), ConfigError);
}
