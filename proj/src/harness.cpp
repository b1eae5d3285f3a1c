#include "upcross/harness.hpp"

#include "upcross/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace upcross {

void ExperimentConfig::validate() const
{
    if (!(s < t)) {
        throw ConfigError("field \"s\"/\"t\": need s < t");
    }
    if (!(delta > 0.0)) {
        throw ConfigError("field \"delta\": must be positive");
    }
    if (kmax < 1) {
        throw ConfigError("field \"kmax\": must be at least 1");
    }
    if (trials < 1) {
        throw ConfigError("field \"trials\": must be at least 1");
    }
    if (horizon < static_cast<std::size_t>(kmax) + 1) {
        throw ConfigError("field \"horizon\": must be at least kmax + 1");
    }
    if (workers < 1) {
        throw ConfigError("field \"workers\": must be at least 1");
    }
    if (stat == StatKind::SubadditiveNorm && matrices.empty()) {
        throw ConfigError("field \"matrices\": the subadd statistic needs one matrix per symbol");
    }
    if ((stat == StatKind::InfoRate || stat == StatKind::Lz78Rate) && !model.discrete()) {
        throw ConfigError("field \"type\": the " + to_string(stat) + " statistic needs a discrete model");
    }
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j;
    j["model"] = model_doc.is_null() ? model.to_json() : model_doc;
    j["stat"] = to_string(stat);
    j["s"] = s;
    j["t"] = t;
    j["delta"] = delta;
    j["kmax"] = kmax;
    j["horizon"] = horizon;
    j["trials"] = trials;
    j["seed"] = seed;
    j["rhs"] = rhs;
    return j;
}

std::vector<Matrix> matrices_from_json(const nlohmann::json& doc)
{
    std::vector<Matrix> out;
    if (!doc.is_object() || !doc.contains("matrices")) {
        return out;
    }
    try {
        out = doc.at("matrices").get<std::vector<Matrix>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field \"matrices\": expected a list of numeric matrices (") + e.what() + ")");
    }
    return out;
}

StatArray make_stat(const ExperimentConfig& cfg)
{
    switch (cfg.stat) {
    case StatKind::ErgodicAverage:
        return StatArray::ergodic_average();
    case StatKind::SqrtWindowAverage:
        return StatArray::sqrt_window_average();
    case StatKind::SubadditiveNorm:
        return StatArray::subadditive_norm(cfg.matrices);
    case StatKind::InfoRate:
        return StatArray::info_rate(cfg.model);
    case StatKind::Lz78Rate:
        return StatArray::lz78_rate();
    }
    throw std::logic_error("make_stat: unknown kind");
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z)
{
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: trials must be positive");
    }
    if (hits > trials) {
        throw std::invalid_argument("wilson_interval: hits exceed trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
    double hi = hits == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

double binomial_sigma(double p_hat, std::uint64_t trials)
{
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

Estimate make_estimate(int k, std::uint64_t hits, std::uint64_t trials)
{
    Estimate e;
    e.k = k;
    e.trials = trials;
    e.hits = hits;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    std::tie(e.ci_lo, e.ci_hi) = wilson_interval(hits, trials);
    return e;
}

namespace {

/// Runs body(trial, slot) for trials 0..trials-1, striding over workers.
/// Each worker owns one slot; slots are summed by the caller.
template <class Body>
void for_trials(std::size_t trials, unsigned workers, Body body)
{
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    if (workers <= 1) {
        for (std::size_t tr = 0; tr < trials; ++tr) {
            body(tr, 0u);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t tr = w; tr < trials; tr += workers) {
                    body(tr, w);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

bool ivanov_applies(const ExperimentConfig& cfg)
{
    return cfg.stat == StatKind::ErgodicAverage && cfg.s >= 0.0 && cfg.t > 0.0 && cfg.model.min_value() >= 0.0;
}

} // namespace

std::vector<Estimate> run_upcrossing_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const StatArray stat = make_stat(cfg);
    const CrossingBand band(cfg.s, cfg.t);
    const auto kmax = static_cast<std::size_t>(cfg.kmax);
    const unsigned workers = std::max(1u, cfg.workers);

    // hits[w][k] and rhs[w][k] for k = 0..kmax
    std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(kmax + 1, 0));
    std::vector<std::vector<std::uint64_t>> rhs(workers, std::vector<std::uint64_t>(kmax + 1, 0));
    std::vector<SamplePath> paths(workers);

    for_trials(cfg.trials, workers, [&](std::size_t trial, unsigned w) {
        TrialStream stream(cfg.seed, trial);
        sample_into(cfg.model, cfg.horizon, stream, paths[w]);
        const auto series = stat.prefix_series(paths[w], cfg.horizon);
        const std::size_t up = std::min(count_upcrossings(series, band), kmax);
        for (std::size_t k = 1; k <= up; ++k) {
            ++hits[w][k];
        }
        if (cfg.rhs) {
            const BEvent ev = latest_b_event(stat, paths[w], band, cfg.delta, cfg.horizon);
            if (ev.holds) {
                const auto top = std::min<std::size_t>(kmax, static_cast<std::size_t>(ev.n - 1));
                for (std::size_t k = 1; k <= top; ++k) {
                    ++rhs[w][k];
                }
            }
        }
    });

    std::vector<Estimate> out;
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::uint64_t h = 0;
        std::uint64_t r = 0;
        for (unsigned w = 0; w < workers; ++w) {
            h += hits[w][k];
            r += rhs[w][k];
        }
        Estimate e = make_estimate(static_cast<int>(k), h, cfg.trials);
        if (ivanov_applies(cfg)) {
            e.bound_ivanov = ivanov_bound(cfg.s, cfg.t, static_cast<std::int64_t>(k));
        }
        if (cfg.delta < 0.25) {
            e.bound_t11 = t11_bound(static_cast<std::int64_t>(k), cfg.delta).bound;
        }
        if (cfg.rhs) {
            e.rhs_hits = r;
            e.rhs_hat = static_cast<double>(r) / static_cast<double>(cfg.trials);
        }
        out.push_back(e);
    }
    return out;
}

BEventSummary run_b_event_experiment(const ExperimentConfig& cfg, int k)
{
    cfg.validate();
    if (k < 0 || static_cast<std::size_t>(k) >= cfg.horizon) {
        throw ConfigError("field \"k\": must satisfy 0 <= k < horizon");
    }
    const StatArray stat = make_stat(cfg);
    const CrossingBand band(cfg.s, cfg.t);
    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<std::uint64_t> hits(workers, 0);
    std::vector<std::uint64_t> above(workers, 0);
    std::vector<SamplePath> paths(workers);

    for_trials(cfg.trials, workers, [&](std::size_t trial, unsigned w) {
        TrialStream stream(cfg.seed, trial);
        sample_into(cfg.model, cfg.horizon, stream, paths[w]);
        const auto series = stat.prefix_series(paths[w], cfg.horizon);
        if (std::any_of(series.begin() + k, series.end(), [&](double x) { return x > band.t; })) {
            ++above[w];
        }
        const BEvent ev = b_event_holds(paths[w], stat, band, cfg.delta, static_cast<std::size_t>(k), cfg.horizon);
        if (ev.holds) {
            ++hits[w];
        }
    });

    BEventSummary out;
    std::uint64_t h = 0;
    for (unsigned w = 0; w < workers; ++w) {
        h += hits[w];
        out.above_t += above[w];
    }
    out.estimate = make_estimate(k, h, cfg.trials);
    out.estimate.rhs_hits = h;
    out.estimate.rhs_hat = out.estimate.p_hat;
    return out;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& points)
{
    double n = 0;
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    for (const auto& [k, p] : points) {
        if (!(p > 0.0)) {
            continue;
        }
        const double y = std::log2(p);
        n += 1;
        sx += k;
        sy += y;
        sxx += k * k;
        sxy += k * y;
    }
    if (n < 2) {
        throw std::invalid_argument("fit_decay: need at least two points with positive probability");
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::invalid_argument("fit_decay: all points share the same k");
    }
    DecayFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

DecayFit fit_decay(const std::vector<Estimate>& estimates)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : estimates) {
        pts.emplace_back(e.k, e.p_hat);
    }
    return fit_decay(pts);
}

namespace {

void check_prop21_args(int n, double delta)
{
    if (n < 3 || n % 3 != 0) {
        throw std::invalid_argument("prop21: n must be a positive multiple of 3");
    }
    if (!(static_cast<double>(n) * delta > 1.0)) {
        throw std::invalid_argument("prop21: need n > 1/delta");
    }
}

SamplePath square_wave_path(int n, int phase, std::size_t length)
{
    SamplePath p;
    p.symbols.resize(length);
    p.values.resize(length);
    const int period = 2 * n;
    for (std::size_t i = 0; i < length; ++i) {
        const int pos = static_cast<int>((static_cast<std::size_t>(phase) + i) % static_cast<std::size_t>(period));
        p.symbols[i] = pos < n ? 1 : -1;
        p.values[i] = p.symbols[i];
    }
    p.trial = static_cast<std::uint64_t>(phase);
    return p;
}

} // namespace

Prop21Result prop21_exact(int n, double delta, int horizon_mult, bool include_boundary)
{
    check_prop21_args(n, delta);
    if (horizon_mult < 2) {
        throw std::invalid_argument("prop21: horizon multiplier must be at least 2");
    }
    Prop21Result r;
    r.n = n;
    r.delta = delta;
    r.k = static_cast<std::int64_t>(n) * n;
    r.horizon_mult = horizon_mult;
    r.include_boundary = include_boundary;
    r.phases = 2 * n;
    const auto horizon = static_cast<std::size_t>(r.k * horizon_mult);
    const StatArray stat = StatArray::sqrt_window_average();
    const CrossingBand band(-0.5, 0.5);
    for (int phase = 0; phase < r.phases; ++phase) {
        const SamplePath path = square_wave_path(n, phase, horizon);
        const BEvent ev = latest_b_event(stat, path, band, delta, horizon);
        const bool hit = ev.holds && (include_boundary ? ev.n >= r.k : ev.n > r.k);
        r.phase_hit.push_back(hit);
        r.witness_n.push_back(hit ? ev.n : 0);
        r.hits += hit ? 1 : 0;
    }
    r.p_exact = static_cast<double>(r.hits) / static_cast<double>(r.phases);
    return r;
}

int prop21_leading_ones_phases(int n)
{
    if (n < 3 || n % 3 != 0) {
        throw std::invalid_argument("prop21: n must be a positive multiple of 3");
    }
    const int need = 2 * n / 3;
    int count = 0;
    for (int phase = 0; phase < 2 * n; ++phase) {
        const SamplePath p = square_wave_path(n, phase, static_cast<std::size_t>(need));
        count += std::all_of(p.symbols.begin(), p.symbols.end(), [](int s) { return s == 1; }) ? 1 : 0;
    }
    return count;
}

} // namespace upcross
