#pragma once

#include "numcore/tensor.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace kplug::cli {

// Named-tensor container behind every trained artifact.
//
// File layout, all integers little-endian:
//   magic "KPLG" | u32 version | u32 entry_count
//   entry*: u32 name_len | name bytes | u32 dtype (0 = f64) | u32 rank
//           | u32 dims[rank] | f64 data[prod(dims)]
//   manifest JSON, raw bytes to end of file
//
// Entries are strictly lexicographic by name. Loading keeps the manifest's
// raw bytes so save(load(f)) reproduces f byte-for-byte.
struct Checkpoint {
    std::map<std::string, numcore::Tensor> tensors;
    nlohmann::json manifest;
    std::string manifest_raw;

    void set_manifest(const nlohmann::json& j);
    numcore::Tensor& tensor(const std::string& name); // lookup error if absent
    const numcore::Tensor& tensor(const std::string& name) const;
    bool has(const std::string& name) const { return tensors.count(name) != 0; }
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

constexpr uint32_t kCheckpointVersion = 1;

} // namespace kplug::cli
