#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "grm/density.hpp"
#include "grm/spectrum.hpp"

namespace grm {

uint64_t fnv1a64(std::string_view data);
std::string checksum_hex(std::string_view data);

/// Content-addressed spectrum cache under $GRM_CACHE (default ./.grm-cache),
/// one file per (p, r, m) named grm_p{p}_r{r}_m{m}.json. The file is the
/// spectrum payload plus a "checksum" field over the canonical payload
/// bytes; a mismatch rejects the file. Writes are atomic
/// (write-temp-then-rename). Only full-mode spectra are cached: the pinned
/// file name carries no mode key.
class SpectrumCache {
   public:
    enum class Policy { use, refresh, off };

    explicit SpectrumCache(Policy policy, std::string dir = default_dir());

    static std::string default_dir();
    static Policy policy_from_str(const std::string& s);

    Policy policy() const { return policy_; }
    const std::string& dir() const { return dir_; }
    std::string path_for(const CodeParams& params) const;

    /// nullopt on miss (missing file, stale tool version, wrong mode, or --
    /// under refresh -- any corruption). A corrupt checksum under policy
    /// `use` is a CacheError, not a silent recompute.
    std::optional<WeightSpectrum> load(const CodeParams& params) const;

    /// No-op for policy off and for non-full spectra.
    void store(const WeightSpectrum& spectrum) const;

    WeightSpectrum get_or_compute(const CodeParams& params, const EnumerationBudget& budget,
                                  int workers) const;

    /// Adapter for gap_scan / min_weight spectrum reuse.
    SpectrumProvider provider(const EnumerationBudget& budget, int workers) const;

   private:
    Policy policy_;
    std::string dir_;
};

}  // namespace grm
