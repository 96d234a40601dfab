#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include "errors.hpp"

namespace dumpscrub {

// Fixed page geometry of the synthetic dump container. All header integers
// are big-endian.
inline constexpr size_t page_size = 4096;
inline constexpr size_t page_header_size = 64;
inline constexpr size_t payload_capacity = page_size - page_header_size; // 4032
inline constexpr char page_magic[4] = {'K', 'D', 'M', 'P'};
inline constexpr uint16_t format_version = 1;

struct PageHeader {
    uint32_t asid = 0;
    uint64_t logical_address = 0;
    uint16_t flags = 0;
    uint16_t data_len = 0;
};

namespace detail {

inline void store_be16(uint8_t* p, uint16_t v) {
    p[0] = static_cast<uint8_t>(v >> 8);
    p[1] = static_cast<uint8_t>(v);
}

inline void store_be32(uint8_t* p, uint32_t v) {
    for (int i = 0; i < 4; ++i)
        p[i] = static_cast<uint8_t>(v >> (24 - 8 * i));
}

inline void store_be64(uint8_t* p, uint64_t v) {
    for (int i = 0; i < 8; ++i)
        p[i] = static_cast<uint8_t>(v >> (56 - 8 * i));
}

inline uint16_t load_be16(const uint8_t* p) {
    return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

inline uint32_t load_be32(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v = (v << 8) | p[i];
    return v;
}

inline uint64_t load_be64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace detail

// Header layout: magic[4] version[2] asid[4] logical_address[8] flags[2]
// data_len[2] reserved[42]. Reserved bytes are zero on write and ignored on
// read.
inline void write_page_header(uint8_t* dst, const PageHeader& h) {
    std::memset(dst, 0, page_header_size);
    std::memcpy(dst, page_magic, 4);
    detail::store_be16(dst + 4, format_version);
    detail::store_be32(dst + 6, h.asid);
    detail::store_be64(dst + 10, h.logical_address);
    detail::store_be16(dst + 18, h.flags);
    detail::store_be16(dst + 20, h.data_len);
}

inline PageHeader parse_page_header(const uint8_t* src, uint64_t page_index) {
    if (std::memcmp(src, page_magic, 4) != 0)
        throw ParseError("page " + std::to_string(page_index) + ": bad magic");
    uint16_t version = detail::load_be16(src + 4);
    if (version != format_version)
        throw ParseError("page " + std::to_string(page_index) + ": unsupported version " +
                         std::to_string(version));
    PageHeader h;
    h.asid = detail::load_be32(src + 6);
    h.logical_address = detail::load_be64(src + 10);
    h.flags = detail::load_be16(src + 18);
    h.data_len = detail::load_be16(src + 20);
    if (h.data_len > payload_capacity)
        throw ParseError("page " + std::to_string(page_index) + ": data_len " +
                         std::to_string(h.data_len) + " exceeds payload capacity");
    return h;
}

} // namespace dumpscrub
