#include "upcross/interval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace upcross {

IntInterval::IntInterval(Index left, Index right) : left_(left), right_(right)
{
    if (left > right) {
        throw std::invalid_argument("IntInterval: left endpoint " + std::to_string(left)
                                    + " exceeds right endpoint " + std::to_string(right));
    }
}

std::string IntInterval::str() const
{
    return "[" + std::to_string(left_) + ";" + std::to_string(right_) + "]";
}

IntervalSet union_components(std::span<const IntInterval> c)
{
    IntervalSet sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    IntervalSet out;
    for (const auto& iv : sorted) {
        if (!out.empty() && iv.left() <= out.back().right() + 1) {
            if (iv.right() > out.back().right()) {
                out.back() = IntInterval(out.back().left(), iv.right());
            }
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

Index union_size(std::span<const IntInterval> c)
{
    Index total = 0;
    for (const auto& piece : union_components(c)) {
        total += piece.size();
    }
    return total;
}

Index uncovered_count(const IntInterval& i, std::span<const IntInterval> c)
{
    IntervalSet clipped;
    for (const auto& iv : c) {
        if (iv.intersects(i)) {
            clipped.emplace_back(std::max(iv.left(), i.left()), std::min(iv.right(), i.right()));
        }
    }
    return i.size() - union_size(clipped);
}

bool is_pairwise_disjoint(std::span<const IntInterval> c)
{
    IntervalSet sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k].left() <= sorted[k - 1].right()) {
            return false;
        }
    }
    return true;
}

bool is_subcollection(std::span<const IntInterval> sub, std::span<const IntInterval> super)
{
    std::map<IntInterval, long> counts;
    for (const auto& iv : super) {
        ++counts[iv];
    }
    for (const auto& iv : sub) {
        auto it = counts.find(iv);
        if (it == counts.end() || it->second == 0) {
            return false;
        }
        --it->second;
    }
    return true;
}

Index blowup_margin(const IntInterval& u, double eps)
{
    // Long double keeps integer exactness for the interval sizes used here;
    // the relative nudge snaps products like 0.29 * 100 onto the integer.
    const long double raw = static_cast<long double>(eps) * static_cast<long double>(u.size());
    return static_cast<Index>(std::floor(raw * (1.0L + 1e-12L)));
}

IntInterval blowup(const IntInterval& u, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("blowup: eps must be positive");
    }
    const Index m = blowup_margin(u, eps);
    return {u.left() - m, u.right() + m};
}

IntervalSet blowup_all(std::span<const IntInterval> c, double eps)
{
    IntervalSet out;
    out.reserve(c.size());
    for (const auto& iv : c) {
        out.push_back(blowup(iv, eps));
    }
    return out;
}

IntervalSet minimal_subcover(std::span<const IntInterval> c)
{
    IntervalSet sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end(), [](const IntInterval& a, const IntInterval& b) {
        if (a.left() != b.left()) {
            return a.left() < b.left();
        }
        return a.size() > b.size();
    });

    // Drop members nested inside an earlier one; survivors have strictly
    // increasing left and right endpoints.
    IntervalSet chain;
    for (const auto& iv : sorted) {
        if (!chain.empty() && iv.right() <= chain.back().right()) {
            continue;
        }
        chain.push_back(iv);
    }

    // Pop the top whenever its neighbours already cover it.
    IntervalSet stack;
    for (const auto& iv : chain) {
        while (stack.size() >= 2 && stack[stack.size() - 2].right() + 1 >= iv.left()) {
            stack.pop_back();
        }
        stack.push_back(iv);
    }
    return stack;
}

IntervalSet vitali_select(std::span<const IntInterval> c)
{
    const IntervalSet cover = minimal_subcover(c);
    Index even_cov = 0;
    Index odd_cov = 0;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        (k % 2 == 0 ? even_cov : odd_cov) += cover[k].size();
    }
    const std::size_t keep = even_cov >= odd_cov ? 0 : 1;
    IntervalSet out;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        // In a minimal subcover member k can only meet members k-1 and k+1.
        const bool free = (k == 0 || !cover[k - 1].intersects(cover[k]))
                          && (k + 1 == cover.size() || !cover[k + 1].intersects(cover[k]));
        if (k % 2 == keep || free) {
            out.push_back(cover[k]);
        }
    }
    return out;
}

Coverage max_disjoint_coverage(const IntInterval& i, std::span<const IntInterval> cands)
{
    IntervalSet inside;
    for (const auto& c : cands) {
        if (i.contains(c)) {
            inside.push_back(c);
        }
    }
    std::sort(inside.begin(), inside.end(), [](const IntInterval& a, const IntInterval& b) {
        if (a.right() != b.right()) {
            return a.right() < b.right();
        }
        return a.left() < b.left();
    });

    const std::size_t n = inside.size();
    std::vector<Index> rights(n);
    for (std::size_t k = 0; k < n; ++k) {
        rights[k] = inside[k].right();
    }

    // best[k] = optimum over the first k candidates (by right endpoint).
    std::vector<Index> best(n + 1, 0);
    std::vector<std::size_t> pred(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto it = std::lower_bound(rights.begin(), rights.begin() + static_cast<long>(k),
                                         inside[k].left());
        pred[k] = static_cast<std::size_t>(it - rights.begin());
        best[k + 1] = std::max(best[k], best[pred[k]] + inside[k].size());
    }

    Coverage out;
    out.covered = best[n];
    for (std::size_t k = n; k > 0;) {
        if (best[k] == best[k - 1]) {
            --k;
        } else {
            out.witness.push_back(inside[k - 1]);
            k = pred[k - 1];
        }
    }
    std::reverse(out.witness.begin(), out.witness.end());
    return out;
}

bool fill_threshold_met(Index uncovered, Index size, double delta)
{
    // Decimal deltas stand for rationals: 0.1 * 10 is 1, not 1 + 5e-17.
    long double bound = static_cast<long double>(delta) * static_cast<long double>(size);
    const long double nearest = std::nearbyint(bound);
    if (std::fabs(bound - nearest) <= 1e-12L * std::max(1.0L, nearest)) {
        bound = nearest;
    }
    return static_cast<long double>(uncovered) < bound;
}

bool is_delta_fill(const IntInterval& i, std::span<const IntInterval> cands, double delta)
{
    if (!(delta > 0.0)) {
        throw std::invalid_argument("is_delta_fill: delta must be positive");
    }
    const Coverage cov = max_disjoint_coverage(i, cands);
    return fill_threshold_met(i.size() - cov.covered, i.size(), delta);
}

} // namespace upcross
