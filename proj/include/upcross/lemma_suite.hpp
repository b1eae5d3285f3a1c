#pragma once

#include "json.hpp"

#include "upcross/covering.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace upcross {

/// Outcome of one randomized property suite.
struct SuiteResult {
    std::string name;
    std::uint64_t instances = 0;
    std::uint64_t failures = 0;
    std::string first_failure;   // empty when none
    nlohmann::json details = nlohmann::json::object();

    bool pass() const { return failures == 0; }
    nlohmann::json to_json() const;
};

/// vitali_select: disjoint, a subcollection, covers at least half the union.
SuiteResult suite_vitali(std::uint64_t trials, std::uint64_t seed);

/// |∪ blowups| <= (1 + 2 eps)|∪U| for every eps in the list (trials per eps).
SuiteResult suite_blowup(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// Height-2 towers: crust blowups cover the tower, absorption, and the three
/// split postconditions.
SuiteResult suite_split(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// Towers of minimum height: disjointify output is a disjoint subcollection
/// covering at least (1 - 3 eps) of the union.
SuiteResult suite_disjointify(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// Paired towers at L = 1 + ceil(log2(1/eps)): dichotomy returns a verified
/// fill witness or the verified measure inequality. Also runs the crafted
/// instance that reaches the fill branch through the crust construction.
SuiteResult suite_dichotomy(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// Paired towers with L up to 3 ceil(log2(1/eps)): a fill exists or the
/// measure bound holds.
SuiteResult suite_bound_check(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// thin_pairs output length, growth ratio, minimum size and nesting.
SuiteResult suite_thin_pairs(std::uint64_t trials, std::uint64_t seed);

/// All suites above with the same trial count and eps list. Tower-based
/// suites skip eps values for which no valid instance fits in 64 bits.
std::vector<SuiteResult> run_all_suites(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list);

/// Chain at base 0 with sizes 1, 50, 50, ..., 6.25e6 and top 2501 T
/// (T = 125000) plus 2500 chains at bases j T whose level-3 U's tile
/// [T; 2501 T - 1]. eps = 0.2, L = 4.
PairedTower crafted_fill_tower();

} // namespace upcross
