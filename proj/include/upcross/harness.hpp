#pragma once

#include "json.hpp"

#include "upcross/process.hpp"
#include "upcross/statistics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace upcross {

struct ExperimentConfig {
    nlohmann::json model_doc;  // as loaded; kept for the report
    ProcessModel model = ProcessModel::bernoulli(0.5);
    StatKind stat = StatKind::ErgodicAverage;
    std::vector<Matrix> matrices;  // subadd only: matrices[symbol]
    double s = 0.4;
    double t = 0.6;
    double delta = 0.1;
    int kmax = 6;
    std::size_t horizon = 2000;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool rhs = false;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Reads "matrices" (a list of square matrices, one per symbol) from a model
/// document; empty when absent.
std::vector<Matrix> matrices_from_json(const nlohmann::json& doc);

StatArray make_stat(const ExperimentConfig& cfg);

struct Estimate {
    int k = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    std::optional<double> bound_ivanov;
    std::optional<double> bound_t11;
    /// Frequency of the truncated right-hand event; a lower bound for the
    /// untruncated probability.
    std::optional<double> rhs_hat;
    std::uint64_t rhs_hits = 0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Wilson score interval at normal quantile z (1.96 for 95%).
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

/// sqrt(p (1 - p) / trials).
double binomial_sigma(double p_hat, std::uint64_t trials);

/// Fills p_hat and the Wilson interval from hits and trials.
Estimate make_estimate(int k, std::uint64_t hits, std::uint64_t trials);

/// Frequencies of at least k upcrossings of [s, t] by S_{1,n}, n <= horizon,
/// for k = 1..kmax. With cfg.rhs, also the truncated right-hand event
/// frequency for each k.
std::vector<Estimate> run_upcrossing_experiment(const ExperimentConfig& cfg);

struct BEventSummary {
    Estimate estimate;
    /// Trials in which S_{1,n} > t for some n in (k, horizon]; shows whether
    /// the event's first half is reachable at all.
    std::uint64_t above_t = 0;
};

/// Frequency of the truncated right-hand event for one k. Requires k < horizon.
BEventSummary run_b_event_experiment(const ExperimentConfig& cfg, int k);

struct DecayFit {
    double intercept = 0;  // log2 scale
    double slope = 0;      // empirical log2 rho
};

/// Least-squares fit of log2 p against k over points with p > 0.
/// Throws when fewer than two such points exist.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& points);
DecayFit fit_decay(const std::vector<Estimate>& estimates);

struct Prop21Result {
    int n = 0;
    double delta = 0;
    std::int64_t k = 0;
    int horizon_mult = 0;
    bool include_boundary = false;
    int phases = 0;
    int hits = 0;
    double p_exact = 0;
    /// Per-phase outcome and the witnessing prefix length (0 when absent).
    std::vector<bool> phase_hit;
    std::vector<Index> witness_n;
};

/// Exact probability of the truncated right-hand event for the square wave
/// of half-period n with the sqrt-window statistic, band [-1/2, 1/2],
/// k = n^2, by enumerating all 2n phases. Scans n' in (k, horizon_mult k],
/// or [k, horizon_mult k] with include_boundary. Requires n divisible by 3
/// and n > 1/delta.
Prop21Result prop21_exact(int n, double delta, int horizon_mult = 4, bool include_boundary = false);

/// Number of phases of the square wave whose first 2n/3 symbols are all 1.
int prop21_leading_ones_phases(int n);

} // namespace upcross
