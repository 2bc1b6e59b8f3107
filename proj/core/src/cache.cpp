#include "grm/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "grm/errors.hpp"
#include "grm/json_io.hpp"
#include "grm/version.hpp"

namespace grm {

using nlohmann::json;

uint64_t fnv1a64(std::string_view data) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string checksum_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return std::string(buf);
}

SpectrumCache::SpectrumCache(Policy policy, std::string dir)
    : policy_(policy), dir_(std::move(dir)) {}

std::string SpectrumCache::default_dir() {
    if (const char* env = std::getenv("GRM_CACHE"); env && *env) return env;
    return ".grm-cache";
}

SpectrumCache::Policy SpectrumCache::policy_from_str(const std::string& s) {
    if (s == "use") return Policy::use;
    if (s == "refresh") return Policy::refresh;
    if (s == "off") return Policy::off;
    throw std::invalid_argument("unknown cache policy '" + s + "' (use|refresh|off)");
}

std::string SpectrumCache::path_for(const CodeParams& params) const {
    return dir_ + "/grm_p" + std::to_string(params.field.p()) + "_r" +
           std::to_string(params.order) + "_m" + std::to_string(params.vars) + ".json";
}

std::optional<WeightSpectrum> SpectrumCache::load(const CodeParams& params) const {
    if (policy_ == Policy::off || policy_ == Policy::refresh) return std::nullopt;
    std::string path = path_for(params);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;  // missing file: recompute
    std::ostringstream buf;
    buf << in.rdbuf();

    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded() || !doc.contains("checksum")) {
        throw CacheError("cache file " + path + " is malformed");
    }
    std::string stored = doc.at("checksum").get<std::string>();
    doc.erase("checksum");
    std::string payload = doc.dump(2) + "\n";
    if (checksum_hex(payload) != stored) {
        throw CacheError("cache file " + path + " fails its checksum");
    }
    WeightSpectrum spectrum = spectrum_from_payload_json(payload);
    if (!(spectrum.params == params)) {
        throw CacheError("cache file " + path + " holds a different code");
    }
    // Stale tool version or non-full mode: a key miss, not corruption.
    if (spectrum.tool_version != kToolVersion || spectrum.mode != EnumerationMode::full) {
        return std::nullopt;
    }
    return spectrum;
}

void SpectrumCache::store(const WeightSpectrum& spectrum) const {
    if (policy_ == Policy::off) return;
    if (spectrum.mode != EnumerationMode::full) return;
    std::filesystem::create_directories(dir_);
    std::string payload = spectrum_payload_json(spectrum);
    json doc = json::parse(payload);
    doc["checksum"] = checksum_hex(payload);

    std::string path = path_for(spectrum.params);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write cache file " + tmp);
        out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

WeightSpectrum SpectrumCache::get_or_compute(const CodeParams& params,
                                             const EnumerationBudget& budget, int workers) const {
    if (auto cached = load(params)) return std::move(*cached);
    WeightSpectrum spectrum = enumerate_spectrum(params, budget, workers);
    store(spectrum);
    return spectrum;
}

SpectrumProvider SpectrumCache::provider(const EnumerationBudget& budget, int workers) const {
    return [this, budget, workers](const CodeParams& params) {
        return get_or_compute(params, budget, workers);
    };
}

}  // namespace grm
