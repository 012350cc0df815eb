#include "cli/checkpoint.hpp"

#include "common/error.hpp"
#include "common/util.hpp"

#include <bit>
#include <cstring>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts need byte swaps");

namespace kplug::cli {

namespace {

constexpr char kMagic[4] = {'K', 'P', 'L', 'G'};

void put_u32(std::string& out, uint32_t v) {
    out.append(reinterpret_cast<const char*>(&v), 4);
}

uint32_t take_u32(const std::string& buf, size_t& off, const std::string& what) {
    require(off + 4 <= buf.size(), "integrity",
            "truncated checkpoint: expected " + what + " at byte " + std::to_string(off));
    uint32_t v;
    std::memcpy(&v, buf.data() + off, 4);
    off += 4;
    return v;
}

} // namespace

void Checkpoint::set_manifest(const nlohmann::json& j) {
    manifest = j;
    manifest_raw = j.dump();
}

numcore::Tensor& Checkpoint::tensor(const std::string& name) {
    auto it = tensors.find(name);
    require(it != tensors.end(), "lookup", "checkpoint has no tensor named " + name);
    return it->second;
}

const numcore::Tensor& Checkpoint::tensor(const std::string& name) const {
    auto it = tensors.find(name);
    require(it != tensors.end(), "lookup", "checkpoint has no tensor named " + name);
    return it->second;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::string out;
    out.append(kMagic, 4);
    put_u32(out, kCheckpointVersion);
    put_u32(out, static_cast<uint32_t>(ckpt.tensors.size()));
    // std::map iterates in lexicographic name order, which is the file order
    for (const auto& [name, t] : ckpt.tensors) {
        require(t.defined(), "contract", "undefined tensor in checkpoint: " + name);
        put_u32(out, static_cast<uint32_t>(name.size()));
        out.append(name);
        put_u32(out, 0); // dtype 0: little-endian f64
        put_u32(out, static_cast<uint32_t>(t.shape().size()));
        for (size_t d : t.shape()) put_u32(out, static_cast<uint32_t>(d));
        out.append(reinterpret_cast<const char*>(t.data().data()), t.size() * sizeof(double));
    }
    out.append(ckpt.manifest_raw);
    write_file(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
    require(file_exists(path), "data", "missing artifact: " + path);
    const std::string buf = read_file(path);
    size_t off = 0;
    require(buf.size() >= 4 && std::memcmp(buf.data(), kMagic, 4) == 0, "integrity",
            "bad magic at byte 0 in " + path);
    off = 4;
    const uint32_t version = take_u32(buf, off, "version");
    require(version == kCheckpointVersion, "integrity",
            "unsupported checkpoint version " + std::to_string(version) + " in " + path);
    const uint32_t count = take_u32(buf, off, "entry count");

    Checkpoint ckpt;
    std::string prev_name;
    for (uint32_t e = 0; e < count; ++e) {
        const uint32_t name_len = take_u32(buf, off, "name length");
        require(off + name_len <= buf.size(), "integrity",
                "truncated name at byte " + std::to_string(off));
        std::string name = buf.substr(off, name_len);
        off += name_len;
        require(e == 0 || prev_name < name, "integrity",
                "entries out of lexicographic order at '" + name + "'");
        prev_name = name;
        const uint32_t dtype = take_u32(buf, off, "dtype");
        require(dtype == 0, "integrity", "unknown dtype code " + std::to_string(dtype));
        const uint32_t rank = take_u32(buf, off, "rank");
        std::vector<size_t> shape(rank);
        size_t numel = 1;
        for (uint32_t i = 0; i < rank; ++i) {
            shape[i] = take_u32(buf, off, "dim");
            numel *= shape[i];
        }
        const size_t payload = numel * sizeof(double);
        require(off + payload <= buf.size(), "integrity",
                "payload for '" + name + "' overruns file at byte " + std::to_string(off));
        std::vector<double> data(numel);
        std::memcpy(data.data(), buf.data() + off, payload);
        off += payload;
        ckpt.tensors.emplace(std::move(name), numcore::Tensor::from(shape, std::move(data)));
    }
    ckpt.manifest_raw = buf.substr(off);
    if (!ckpt.manifest_raw.empty()) {
        ckpt.manifest = nlohmann::json::parse(ckpt.manifest_raw, nullptr, false);
        require(!ckpt.manifest.is_discarded(), "integrity",
                "manifest JSON is malformed at byte " + std::to_string(off));
    }
    return ckpt;
}

} // namespace kplug::cli
