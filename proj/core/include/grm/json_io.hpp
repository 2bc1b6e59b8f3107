#pragma once

#include <string>

#include "grm/density.hpp"
#include "grm/distributions.hpp"
#include "grm/spectrum.hpp"
#include "grm/structure.hpp"

namespace grm {

/// Serialized exchange formats. Every document is emitted with sorted keys
/// and a trailing newline, so identical values produce identical bytes; all
/// rational values travel as exact "a/b" strings and all big counts as
/// decimal strings.

std::string to_json(const Polynomial& f);
Polynomial polynomial_from_json(const std::string& text);

/// The spectrum cache payload:
/// {"p","r","m","dim","mode","counts":[[w,"count"],...],"tool_version"}.
std::string spectrum_payload_json(const WeightSpectrum& spectrum);
WeightSpectrum spectrum_from_payload_json(const std::string& text);

std::string weight_set_json(const WeightSpectrum& spectrum);
std::string gap_report_json(const GapReport& report);
std::string ax_check_json(const CodeParams& params, const AxCheckResult& result);
std::string min_weight_json(const CodeParams& params, const std::string& mode,
                            const BigInt& value);
std::string rank_json(const RankResult& result);
std::string decomposition_json(const Decomposition& decomposition);
std::string regularity_certificate_json(const RegularityCertificate& certificate);
std::string regularize_json(const RegularizeResult& result);
std::string compress_json(const CompressResult& result);
std::string distribution_json(const Distribution& distribution);
Distribution distribution_from_json(const std::string& text);
std::string distance_json(const Distribution& d1, const Distribution& d2, const Rational& value);
std::string approximation_json(const ApproximationResult& result);
std::string bias_scan_json(const BiasRankScan& scan);

/// Spectrum CSV: "weight,count" rows sorted by weight.
std::string spectrum_csv(const WeightSpectrum& spectrum);
/// Bias scan CSV: "distance,rank" rows in scan order ("inf" for the marker).
std::string bias_scan_csv(const BiasRankScan& scan);
std::string weight_set_csv(const WeightSpectrum& spectrum);

}  // namespace grm
