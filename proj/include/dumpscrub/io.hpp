#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace dumpscrub {

inline std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RunError("cannot open " + path + " for reading");
    in.seekg(0, std::ios::end);
    auto size = in.tellg();
    if (size < 0)
        throw RunError("cannot determine size of " + path);
    std::vector<uint8_t> data(static_cast<size_t>(size));
    in.seekg(0);
    if (size > 0)
        in.read(reinterpret_cast<char*>(data.data()), size);
    if (!in)
        throw RunError("short read from " + path);
    return data;
}

inline std::string read_text_file(const std::string& path) {
    auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

// Writes to a sibling temp file and renames over the target, so a failed run
// never leaves a partial output behind.
inline void write_file_atomic(const std::string& path, const void* data, size_t len) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw RunError("cannot open " + tmp + " for writing");
        if (len > 0)
            out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            throw RunError("short write to " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw RunError("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

inline void write_file_atomic(const std::string& path, const std::vector<uint8_t>& data) {
    write_file_atomic(path, data.data(), data.size());
}

inline void write_file_atomic(const std::string& path, const std::string& data) {
    write_file_atomic(path, data.data(), data.size());
}

} // namespace dumpscrub
