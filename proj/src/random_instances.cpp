#include "upcross/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace upcross {

namespace {

constexpr long double kSizeCap = 1152921504606846976.0L;  // 2^60
constexpr Index kMaxBottom = 20;

/// Largest slack factor (at most 3) such that `steps` growth steps of
/// ratio * factor from kMaxBottom stay under the cap.
long double slack_limit(long double ratio, std::size_t steps)
{
    if (steps == 0) {
        return 3.0L;
    }
    const long double per_step = std::pow(kSizeCap / (2.0L * kMaxBottom), 1.0L / static_cast<long double>(steps));
    const long double f = std::min(3.0L, per_step / ratio);
    if (f < 1.0L) {
        throw std::overflow_error("random instance: sizes would exceed 2^60 at this height and eps");
    }
    return f;
}

long double uniform_in(TrialStream& rng, long double lo, long double hi)
{
    return lo + (hi - lo) * static_cast<long double>(rng.uniform());
}

Index grow(Index size, long double ratio, long double factor)
{
    return static_cast<Index>(std::ceil(static_cast<long double>(size) * ratio * factor));
}

std::vector<Index> spread_bases(TrialStream& rng, std::size_t count, Index scale)
{
    const long double log_scale = std::log(static_cast<long double>(std::max<Index>(scale, 2)));
    std::set<Index> seen;
    std::vector<Index> bases;
    while (bases.size() < count) {
        const auto b = static_cast<Index>(std::floor(std::exp(uniform_in(rng, 0.0L, log_scale))));
        if (seen.insert(b).second) {
            bases.push_back(b);
        }
    }
    return bases;
}

} // namespace

IntervalSet random_collection(TrialStream& rng, std::size_t max_count, Index max_endpoint)
{
    const std::size_t count = 1 + rng.below(max_count);
    IntervalSet out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        auto a = static_cast<Index>(1 + rng.below(static_cast<std::uint64_t>(max_endpoint)));
        auto b = static_cast<Index>(1 + rng.below(static_cast<std::uint64_t>(max_endpoint)));
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
}

Tower random_tower(TrialStream& rng, double eps, std::size_t height, std::size_t max_chains)
{
    if (height == 0) {
        throw std::invalid_argument("random_tower: height must be positive");
    }
    const long double ratio = 2.0L / (static_cast<long double>(eps) * eps);
    const long double fmax = slack_limit(ratio, height - 1);
    const std::size_t count = 1 + rng.below(max_chains);

    std::vector<std::vector<Index>> sizes(count);
    Index scale = 1;
    for (auto& s : sizes) {
        s.push_back(1 + static_cast<Index>(rng.below(kMaxBottom)));
        for (std::size_t k = 1; k < height; ++k) {
            s.push_back(grow(s.back(), ratio, uniform_in(rng, 1.0L, fmax)));
        }
        scale = std::max(scale, s.back());
    }
    const auto bases = spread_bases(rng, count, scale);
    std::vector<std::vector<IntInterval>> chains(count);
    for (std::size_t c = 0; c < count; ++c) {
        for (Index len : sizes[c]) {
            chains[c].emplace_back(bases[c], bases[c] + len - 1);
        }
    }
    return Tower(std::move(chains));
}

PairedTower random_paired_tower(TrialStream& rng, double eps, std::size_t top_level, std::size_t max_chains)
{
    const long double ratio = 2.0L / (static_cast<long double>(eps) * eps);
    // Each level contributes one required growth step (U -> V) and one free
    // step (V -> U of the next level); both share the slack budget.
    const long double fmax = std::sqrt(slack_limit(ratio, top_level + 1) * 1.0L);
    const std::size_t count = 1 + rng.below(max_chains);

    std::vector<std::vector<Index>> us(count);
    std::vector<std::vector<Index>> vs(count);
    Index scale = 1;
    for (std::size_t c = 0; c < count; ++c) {
        Index u = 1 + static_cast<Index>(rng.below(kMaxBottom));
        for (std::size_t k = 0; k <= top_level; ++k) {
            if (k > 0) {
                u = grow(vs[c].back(), 1.0L, uniform_in(rng, 1.0L, fmax));
            }
            us[c].push_back(u);
            vs[c].push_back(grow(u, ratio, uniform_in(rng, 1.0L, fmax)));
        }
        scale = std::max(scale, vs[c].back());
    }
    const auto bases = spread_bases(rng, count, scale);
    std::vector<std::vector<IntInterval>> u(count);
    std::vector<std::vector<IntInterval>> v(count);
    for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t k = 0; k <= top_level; ++k) {
            u[c].emplace_back(bases[c], bases[c] + us[c][k] - 1);
            v[c].emplace_back(bases[c], bases[c] + vs[c][k] - 1);
        }
    }
    return PairedTower(std::move(u), std::move(v));
}

PairSequence random_pair_sequence(TrialStream& rng, double delta, std::size_t k)
{
    PairSequence ps;
    const Index base = 1 + static_cast<Index>(rng.below(1000));
    Index u = 1 + static_cast<Index>(rng.below(5));
    const long double lo = 1.0L + delta;
    for (std::size_t m = 0; m < k; ++m) {
        if (m > 0) {
            u = ps.v.back().size() + 1 + static_cast<Index>(rng.below(2));
        }
        // Smallest size with ratio strictly above 1 + delta, plus a little slack.
        Index v = static_cast<Index>(std::floor(static_cast<long double>(u) * lo)) + 1;
        v += static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::max<Index>(1, u / 4))));
        if (static_cast<long double>(v) > kSizeCap) {
            throw std::overflow_error("random_pair_sequence: sizes would exceed 2^60");
        }
        ps.u.emplace_back(base, base + u - 1);
        ps.v.emplace_back(base, base + v - 1);
    }
    return ps;
}

} // namespace upcross
