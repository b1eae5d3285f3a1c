#pragma once

#include "upcross/interval.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace upcross {

/// Raised when a covering operation's hypothesis does not hold for its input.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Smallest m >= 0 with 2^m * eps >= 1, i.e. ceil(log2(1/eps)) for eps in (0,1).
int ceil_log2_inverse(double eps);

/// Minimum height 1 + ceil(log2(1/eps)) required by disjointify and dichotomy.
int min_disjointify_height(double eps);

/// |big| >= (2/eps^2) |small|.
bool meets_growth(Index big, Index small, double eps);

/// Nested intervals U_i(0) ⊂ ... ⊂ U_i(M-1) sharing left endpoint i, one chain
/// per base index. Levels are numbered from 0 (bottom) to height()-1 (top).
class Tower {
public:
    Tower() = default;
    /// Validates: equal chain heights >= 1, common left endpoint per chain,
    /// strictly increasing sizes, distinct base indices.
    explicit Tower(std::vector<std::vector<IntInterval>> chains);

    std::size_t height() const { return chains_.empty() ? 0 : chains_.front().size(); }
    std::size_t chain_count() const { return chains_.size(); }
    const std::vector<IntInterval>& chain(std::size_t c) const { return chains_[c]; }
    const std::vector<std::vector<IntInterval>>& chains() const { return chains_; }
    Index base(std::size_t c) const { return chains_[c].front().left(); }

    IntervalSet level(std::size_t k) const;
    IntervalSet top() const { return level(height() - 1); }
    IntervalSet all() const;

    /// Tower on levels [lo, hi] of the chains listed in `which`.
    Tower restrict(const std::vector<std::size_t>& which, std::size_t lo, std::size_t hi) const;

private:
    std::vector<std::vector<IntInterval>> chains_;
};

/// Two interleaved towers U_i(0) ⊆ V_i(0) ⊆ U_i(1) ⊆ ... ⊆ U_i(L) ⊆ V_i(L).
class PairedTower {
public:
    PairedTower() = default;
    PairedTower(std::vector<std::vector<IntInterval>> u, std::vector<std::vector<IntInterval>> v);

    /// L, the index of the top level.
    std::size_t top_level() const { return u_.front().size() - 1; }
    std::size_t chain_count() const { return u_.size(); }
    const Tower& u() const { return u_tower_; }
    const Tower& v() const { return v_tower_; }

    /// First chain violating |V_i(k)| >= (2/eps^2)|U_i(k)|, if any.
    std::optional<std::size_t> growth_violation(double eps) const;

private:
    std::vector<std::vector<IntInterval>> u_;
    std::vector<std::vector<IntInterval>> v_;
    Tower u_tower_;
    Tower v_tower_;
};

/// k nested pairs U(1) ⊆ V(1) ⊆ ... ⊆ U(k) ⊆ V(k) with a common left endpoint
/// and |U(m+1)| > |V(m)| > |U(m)|.
struct PairSequence {
    std::vector<IntInterval> u;
    std::vector<IntInterval> v;

    std::size_t size() const { return u.size(); }
    /// Throws std::invalid_argument on broken nesting.
    void validate() const;
};

/// Indices of the members of `tops` whose eps-blowup is not strictly contained
/// in another member's blowup.
std::vector<std::size_t> crust_indices(const IntervalSet& tops, double eps);

/// Top-level members of `t` whose eps-blowup is inclusion-maximal. Blowup is
/// monotone under inclusion, so comparing against the top level suffices.
IntervalSet epsilon_crust(const Tower& t, double eps);

struct AbsorptionReport {
    bool pass = true;
    std::optional<IntInterval> lower;  // offending U from level 0
    std::optional<IntInterval> crust;  // crust member V with U ∩ V ≠ ∅ but U ⊄ V^eps
};

/// Checks that every bottom-level U meeting a crust member V lies in V^eps.
/// Throws PreconditionError when the growth hypothesis fails.
AbsorptionReport crust_absorbs(const Tower& t, double eps);

struct Split {
    IntervalSet u_hat;
    IntervalSet v_hat;
    std::vector<std::size_t> u_hat_chains;  // chain index of each u_hat member
};

/// Height-2 split: v_hat is a Vitali selection from the crust, u_hat the
/// bottom intervals missing it.
Split split_height2(const Tower& t, double eps);

struct SplitCheck {
    bool half_bound = true;    // |∪u_hat| <= |∪U| / 2
    bool separated = true;     // (∪u_hat) ∩ (∪v_hat) = ∅
    bool covers = true;        // ∪U ⊆ (∪v_hat^eps) ∪ (∪u_hat)
    bool v_hat_disjoint = true;
    bool ok() const { return half_bound && separated && covers && v_hat_disjoint; }
};
SplitCheck check_split(const Tower& t, double eps, const Split& s);

struct Disjointified {
    IntervalSet selected;
    /// |∪U_n| for n = 0..M-1 (n = 0 is the whole tower).
    std::vector<Index> leftover_union;
};

/// Iterated height-2 splits from the top down; the union of all selections is
/// disjoint and covers at least (1 - 3eps) of the tower. Requires height
/// >= 1 + ceil(log2(1/eps)) and consecutive-level growth 2/eps^2.
Disjointified disjointify(const Tower& t, double eps);

enum class Branch { Fill, Growth, Neither };
std::string to_string(Branch b);

struct DichotomyResult {
    Branch branch = Branch::Neither;
    /// Fill branch: the filled top-level V and a disjoint family of U's inside it.
    std::optional<IntInterval> filled;
    IntervalSet filling;
    Index uncovered = 0;
    /// True when the fill came from the proof's W / Z construction.
    bool proof_route = false;
    /// Disjointify's own witness on Z passed the 6eps threshold.
    bool proof_witness_fills = false;
    Index union_bottom = 0;  // |∪U(0)|
    Index union_top = 0;     // |∪V(L)|
};

/// Either some V ∈ V(L) is 6eps-filled by a disjoint family of U's, or
/// |∪V(L)| >= (1 + eps/6)|∪U(0)|. Requires L >= 1 + ceil(log2(1/eps)).
DichotomyResult dichotomy(const PairedTower& pt, double eps);

struct BoundCheck {
    bool fill_exists = false;
    std::optional<IntInterval> filled;
    IntervalSet filling;
    Index union_bottom = 0;
    Index union_top = 0;
    int literal_exponent = 0;  // floor(L / log2(1/eps))
    int safe_exponent = 0;     // floor((L-1) / ceil(log2(1/eps)))
    bool literal_holds = true;
    bool safe_holds = true;
    bool pass() const { return fill_exists || literal_holds; }
};

int literal_bound_exponent(std::size_t top_level, double eps);
int safe_bound_exponent(std::size_t top_level, double eps);

/// Decides exactly whether any V in the paired tower is 6eps-filled by
/// disjoint U's; if none is, evaluates
/// |∪U(0)| <= (1 + eps/6)^(-exponent) |∪V(L)| for both exponent forms.
BoundCheck covering_bound_check(const PairedTower& pt, double eps);

/// Drops the first ceil(k/2)+1 pairs, then merges blocks of q consecutive
/// pairs (first U, last V) so every kept pair has |V| >= (72/delta^2)|U|.
/// Throws when a pair has |V|/|U| <= 1 + delta.
PairSequence thin_pairs(const PairSequence& ps, double delta, std::size_t k);

} // namespace upcross
