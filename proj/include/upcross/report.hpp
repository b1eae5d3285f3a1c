#pragma once

#include "json.hpp"

#include "upcross/harness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace upcross {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

/// Hash of the canonical (sorted-key, compact) dump of the config JSON,
/// as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// k,trials,hits,p_hat,ci_lo,ci_hi,bound_ivanov,bound_t11,rhs_hat with
/// reals at %.17g; absent values are empty fields.
std::string estimates_to_csv(const std::vector<Estimate>& estimates);
std::vector<Estimate> estimates_from_csv(const std::string& text);

nlohmann::json estimates_to_json(const std::vector<Estimate>& estimates);

/// Config, seed, config hash and estimates.
nlohmann::json experiment_report(const ExperimentConfig& cfg, const std::vector<Estimate>& estimates);

/// Log-scale decay plot: one polyline per series (estimate, and each bound
/// or rhs column that has at least one positive value).
std::string estimates_to_svg(const std::vector<Estimate>& estimates);

/// Writes text to path; throws std::runtime_error if the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace upcross
