#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace upcross {

using Index = std::int64_t;

/// Closed integer interval [left; right]. Never empty.
class IntInterval {
public:
    IntInterval(Index left, Index right);

    Index left() const { return left_; }
    Index right() const { return right_; }
    Index size() const { return right_ - left_ + 1; }

    bool contains(Index x) const { return left_ <= x && x <= right_; }
    bool contains(const IntInterval& other) const
    {
        return left_ <= other.left_ && other.right_ <= right_;
    }
    bool intersects(const IntInterval& other) const
    {
        return left_ <= other.right_ && other.left_ <= right_;
    }

    std::string str() const;

    friend bool operator==(const IntInterval&, const IntInterval&) = default;
    friend auto operator<=>(const IntInterval&, const IntInterval&) = default;

private:
    Index left_;
    Index right_;
};

/// Finite collection of intervals; duplicates allowed, order irrelevant.
using IntervalSet = std::vector<IntInterval>;

/// Cardinality of the union of all intervals.
Index union_size(std::span<const IntInterval> c);

/// Maximal pairwise-disjoint pieces of the union, sorted.
IntervalSet union_components(std::span<const IntInterval> c);

/// Number of points of `i` not covered by the union of `c`.
Index uncovered_count(const IntInterval& i, std::span<const IntInterval> c);

bool is_pairwise_disjoint(std::span<const IntInterval> c);

/// True if every member of `sub` occurs in `super` (as a multiset).
bool is_subcollection(std::span<const IntInterval> sub, std::span<const IntInterval> super);

/// Number of points added on each side by an eps-blowup: floor(eps * |u|).
Index blowup_margin(const IntInterval& u, double eps);

/// [a - floor(eps|U|) ; b + floor(eps|U|)]. Throws for eps <= 0.
IntInterval blowup(const IntInterval& u, double eps);
IntervalSet blowup_all(std::span<const IntInterval> c, double eps);

/// An inclusion-minimal subcollection with the same union, sorted by left endpoint.
IntervalSet minimal_subcover(std::span<const IntInterval> c);

/// Disjoint subcollection covering at least half the union. Built from a
/// minimal subcover: the even- and odd-position members are each disjoint,
/// and the one with larger coverage is kept (even on ties). Members of the
/// other parity that miss both neighbours are then added back, so disjoint
/// input is returned whole.
IntervalSet vitali_select(std::span<const IntInterval> c);

struct Coverage {
    Index covered = 0;
    IntervalSet witness;
};

/// Maximum total size of a disjoint subfamily of `cands` lying inside `i`,
/// by weighted interval scheduling. Candidates not inside `i` are ignored.
Coverage max_disjoint_coverage(const IntInterval& i, std::span<const IntInterval> cands);

/// |i| - best coverage < delta * |i|. Throws for delta <= 0.
bool is_delta_fill(const IntInterval& i, std::span<const IntInterval> cands, double delta);

/// Strictly-less comparison of an uncovered count against delta * size.
bool fill_threshold_met(Index uncovered, Index size, double delta);

} // namespace upcross
