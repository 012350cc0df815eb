#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kplug {

// FNV-1a over raw bytes. Used for artifact provenance hashes and as a cheap
// stable string hash for deriving RNG stream keys. Not cryptographic.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::string hex64(uint64_t v);

std::vector<std::string> split_ws(const std::string& line);
std::vector<std::string> split_on(const std::string& s, char sep);
std::string trim(const std::string& s);

// Fixed-width decimal suffix, e.g. zero_pad(7, 4) == "0007".
std::string zero_pad(size_t v, int width);

// Float formatting used by all metric emitters: fixed, 4 decimals.
std::string fmt4(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
uint64_t hash_file(const std::string& path);
bool file_exists(const std::string& path);

} // namespace kplug
