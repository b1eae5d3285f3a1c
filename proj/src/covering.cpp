#include "upcross/covering.hpp"

#include "upcross/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace upcross {

namespace {

bool meets_components(const IntInterval& iv, const IntervalSet& components)
{
    // components are sorted and pairwise disjoint
    auto it = std::lower_bound(components.begin(), components.end(), iv.left(),
                               [](const IntInterval& c, Index x) { return c.right() < x; });
    return it != components.end() && it->left() <= iv.right();
}

void require_growth(const Tower& t, double eps, const char* what)
{
    for (std::size_t c = 0; c < t.chain_count(); ++c) {
        const auto& ch = t.chain(c);
        for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
            if (!meets_growth(ch[k + 1].size(), ch[k].size(), eps)) {
                throw PreconditionError(std::string(what) + ": growth |U(k+1)| >= (2/eps^2)|U(k)| fails for base index "
                                        + std::to_string(t.base(c)) + " at level " + std::to_string(k));
            }
        }
    }
}

void require_unit_eps(double eps, const char* what)
{
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": eps must lie in (0,1)");
    }
}

} // namespace

int ceil_log2_inverse(double eps)
{
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("ceil_log2_inverse: eps must lie in (0,1]");
    }
    int m = 0;
    long double p = eps;
    while (p < 1.0L) {
        p *= 2.0L;
        ++m;
    }
    return m;
}

int min_disjointify_height(double eps)
{
    return 1 + ceil_log2_inverse(eps);
}

bool meets_growth(Index big, Index small, double eps)
{
    const long double e = eps;
    return static_cast<long double>(big) * e * e
           >= 2.0L * static_cast<long double>(small) * (1.0L - 1e-12L);
}

// ---------------------------------------------------------------- Tower

Tower::Tower(std::vector<std::vector<IntInterval>> chains) : chains_(std::move(chains))
{
    if (chains_.empty()) {
        return;
    }
    const std::size_t h = chains_.front().size();
    if (h == 0) {
        throw std::invalid_argument("Tower: height must be at least 1");
    }
    std::set<Index> bases;
    for (const auto& ch : chains_) {
        if (ch.size() != h) {
            throw std::invalid_argument("Tower: chains have different heights");
        }
        const Index base = ch.front().left();
        if (!bases.insert(base).second) {
            throw std::invalid_argument("Tower: duplicate base index " + std::to_string(base));
        }
        for (std::size_t k = 0; k < h; ++k) {
            if (ch[k].left() != base) {
                throw std::invalid_argument("Tower: interval " + ch[k].str()
                                            + " does not start at its base index " + std::to_string(base));
            }
            if (k > 0 && ch[k].size() <= ch[k - 1].size()) {
                throw std::invalid_argument("Tower: chain at base " + std::to_string(base)
                                            + " is not strictly increasing");
            }
        }
    }
}

IntervalSet Tower::level(std::size_t k) const
{
    IntervalSet out;
    out.reserve(chains_.size());
    for (const auto& ch : chains_) {
        out.push_back(ch.at(k));
    }
    return out;
}

IntervalSet Tower::all() const
{
    IntervalSet out;
    for (const auto& ch : chains_) {
        out.insert(out.end(), ch.begin(), ch.end());
    }
    return out;
}

Tower Tower::restrict(const std::vector<std::size_t>& which, std::size_t lo, std::size_t hi) const
{
    std::vector<std::vector<IntInterval>> out;
    out.reserve(which.size());
    for (std::size_t c : which) {
        const auto& ch = chains_.at(c);
        out.emplace_back(ch.begin() + static_cast<long>(lo), ch.begin() + static_cast<long>(hi) + 1);
    }
    return Tower(std::move(out));
}

// ---------------------------------------------------------- PairedTower

PairedTower::PairedTower(std::vector<std::vector<IntInterval>> u, std::vector<std::vector<IntInterval>> v)
    : u_(std::move(u)), v_(std::move(v))
{
    if (u_.empty() || u_.size() != v_.size()) {
        throw std::invalid_argument("PairedTower: need matching, nonempty U and V chains");
    }
    for (std::size_t c = 0; c < u_.size(); ++c) {
        if (u_[c].empty() || u_[c].size() != v_[c].size()) {
            throw std::invalid_argument("PairedTower: U and V chains must have equal, nonzero height");
        }
        for (std::size_t k = 0; k < u_[c].size(); ++k) {
            if (!v_[c][k].contains(u_[c][k])) {
                throw std::invalid_argument("PairedTower: U(k) not inside V(k) at " + u_[c][k].str());
            }
            if (k + 1 < u_[c].size() && !u_[c][k + 1].contains(v_[c][k])) {
                throw std::invalid_argument("PairedTower: V(k) not inside U(k+1) at " + v_[c][k].str());
            }
        }
    }
    u_tower_ = Tower(u_);
    v_tower_ = Tower(v_);
}

std::optional<std::size_t> PairedTower::growth_violation(double eps) const
{
    for (std::size_t c = 0; c < u_.size(); ++c) {
        for (std::size_t k = 0; k < u_[c].size(); ++k) {
            if (!meets_growth(v_[c][k].size(), u_[c][k].size(), eps)) {
                return c;
            }
        }
    }
    return std::nullopt;
}

void PairSequence::validate() const
{
    if (u.size() != v.size()) {
        throw std::invalid_argument("PairSequence: U and V counts differ");
    }
    for (std::size_t m = 0; m < u.size(); ++m) {
        if (u[m].left() != u.front().left() || v[m].left() != u.front().left()) {
            throw std::invalid_argument("PairSequence: intervals must share a left endpoint");
        }
        if (!(v[m].size() > u[m].size())) {
            throw std::invalid_argument("PairSequence: need |V(m)| > |U(m)|");
        }
        if (m + 1 < u.size() && !(u[m + 1].size() > v[m].size())) {
            throw std::invalid_argument("PairSequence: need |U(m+1)| > |V(m)|");
        }
    }
}

// ---------------------------------------------------------------- crust

std::vector<std::size_t> crust_indices(const IntervalSet& tops, double eps)
{
    const IntervalSet blown = blowup_all(tops, eps);
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < blown.size(); ++a) {
        bool maximal = true;
        for (std::size_t b = 0; b < blown.size() && maximal; ++b) {
            if (blown[b].contains(blown[a]) && blown[b] != blown[a]) {
                maximal = false;
            }
        }
        if (maximal) {
            out.push_back(a);
        }
    }
    return out;
}

IntervalSet epsilon_crust(const Tower& t, double eps)
{
    require_unit_eps(eps, "epsilon_crust");
    if (t.chain_count() == 0) {
        return {};
    }
    const IntervalSet tops = t.top();
    IntervalSet out;
    for (std::size_t idx : crust_indices(tops, eps)) {
        out.push_back(tops[idx]);
    }
    return out;
}

AbsorptionReport crust_absorbs(const Tower& t, double eps)
{
    require_unit_eps(eps, "crust_absorbs");
    if (t.chain_count() > 0 && t.height() != 2) {
        throw PreconditionError("crust_absorbs: tower must have height 2");
    }
    require_growth(t, eps, "crust_absorbs");
    AbsorptionReport report;
    if (t.chain_count() == 0) {
        return report;
    }
    const IntervalSet crust = epsilon_crust(t, eps);
    for (const auto& u : t.level(0)) {
        for (const auto& v : crust) {
            if (u.intersects(v) && !blowup(v, eps).contains(u)) {
                report.pass = false;
                report.lower = u;
                report.crust = v;
                return report;
            }
        }
    }
    return report;
}

Split split_height2(const Tower& t, double eps)
{
    require_unit_eps(eps, "split_height2");
    if (t.chain_count() > 0 && t.height() != 2) {
        throw PreconditionError("split_height2: tower must have height 2");
    }
    require_growth(t, eps, "split_height2");
    Split out;
    if (t.chain_count() == 0) {
        return out;
    }
    out.v_hat = vitali_select(epsilon_crust(t, eps));
    const IntervalSet covered = union_components(out.v_hat);
    for (std::size_t c = 0; c < t.chain_count(); ++c) {
        const IntInterval& u = t.chain(c)[0];
        if (!meets_components(u, covered)) {
            out.u_hat.push_back(u);
            out.u_hat_chains.push_back(c);
        }
    }
    return out;
}

SplitCheck check_split(const Tower& t, double eps, const Split& s)
{
    SplitCheck chk;
    const IntervalSet all = t.all();
    const Index total = union_size(all);
    chk.half_bound = 2 * union_size(s.u_hat) <= total;
    chk.v_hat_disjoint = is_pairwise_disjoint(s.v_hat);
    const IntervalSet vhat_union = union_components(s.v_hat);
    for (const auto& u : s.u_hat) {
        if (meets_components(u, vhat_union)) {
            chk.separated = false;
        }
    }
    IntervalSet cover = blowup_all(s.v_hat, eps);
    cover.insert(cover.end(), s.u_hat.begin(), s.u_hat.end());
    for (const auto& piece : union_components(all)) {
        if (uncovered_count(piece, cover) != 0) {
            chk.covers = false;
        }
    }
    return chk;
}

Disjointified disjointify(const Tower& t, double eps)
{
    require_unit_eps(eps, "disjointify");
    Disjointified out;
    if (t.chain_count() == 0) {
        return out;
    }
    const std::size_t m = t.height();
    if (static_cast<int>(m) < min_disjointify_height(eps)) {
        throw PreconditionError("disjointify: height " + std::to_string(m) + " below required "
                                + std::to_string(min_disjointify_height(eps)));
    }
    require_growth(t, eps, "disjointify");

    std::vector<std::size_t> active(t.chain_count());
    for (std::size_t c = 0; c < active.size(); ++c) {
        active[c] = c;
    }
    out.leftover_union.push_back(union_size(t.top()));
    for (std::size_t n = 1; n < m && !active.empty(); ++n) {
        const std::size_t upper = m - n;
        const Tower layer = t.restrict(active, upper - 1, upper);
        const Split s = split_height2(layer, eps);
        out.selected.insert(out.selected.end(), s.v_hat.begin(), s.v_hat.end());
        std::vector<std::size_t> next;
        next.reserve(s.u_hat_chains.size());
        for (std::size_t local : s.u_hat_chains) {
            next.push_back(active[local]);
        }
        active = std::move(next);
        out.leftover_union.push_back(union_size(s.u_hat));
    }
    while (out.leftover_union.size() < m) {
        out.leftover_union.push_back(0);
    }
    return out;
}

// ------------------------------------------------------------ dichotomy

std::string to_string(Branch b)
{
    switch (b) {
    case Branch::Fill:
        return "fill";
    case Branch::Growth:
        return "growth";
    case Branch::Neither:
        return "neither";
    }
    return "?";
}

namespace {

struct FillSearch {
    bool found = false;
    IntInterval target{0, 0};
    Coverage coverage;
};

FillSearch search_fill(const IntervalSet& targets, const IntervalSet& fillers, double threshold)
{
    FillSearch out;
    for (const auto& v : targets) {
        Coverage cov = max_disjoint_coverage(v, fillers);
        if (fill_threshold_met(v.size() - cov.covered, v.size(), threshold)) {
            out.found = true;
            out.target = v;
            out.coverage = std::move(cov);
            return out;
        }
    }
    return out;
}

} // namespace

DichotomyResult dichotomy(const PairedTower& pt, double eps)
{
    require_unit_eps(eps, "dichotomy");
    const std::size_t top = pt.top_level();
    if (static_cast<int>(top) < min_disjointify_height(eps)) {
        throw PreconditionError("dichotomy: L = " + std::to_string(top) + " below required "
                                + std::to_string(min_disjointify_height(eps)));
    }
    if (auto bad = pt.growth_violation(eps)) {
        throw PreconditionError("dichotomy: growth |V(k)| >= (2/eps^2)|U(k)| fails for base index "
                                + std::to_string(pt.u().base(*bad)));
    }

    DichotomyResult res;
    const Tower& u = pt.u();
    const Tower& v = pt.v();
    const IntervalSet v_top = v.top();
    res.union_bottom = union_size(u.level(0));
    res.union_top = union_size(v_top);
    const IntervalSet all_u = u.all();

    // Maximal disjoint subfamily of the crust, seeded by the Vitali selection.
    IntervalSet crust;
    for (std::size_t idx : crust_indices(v_top, eps)) {
        crust.push_back(v_top[idx]);
    }
    IntervalSet chosen = vitali_select(crust);
    IntervalSet rest = crust;
    std::sort(rest.begin(), rest.end(),
              [](const IntInterval& a, const IntInterval& b) { return a.size() > b.size(); });
    for (const auto& w : rest) {
        const bool clear = std::none_of(chosen.begin(), chosen.end(),
                                        [&](const IntInterval& x) { return x.intersects(w); });
        if (clear) {
            chosen.push_back(w);
        }
    }
    std::sort(chosen.begin(), chosen.end());

    const IntervalSet below_top = u.level(top - 1);
    for (const auto& w : chosen) {
        if (!fill_threshold_met(uncovered_count(w, below_top), w.size(), eps)) {
            continue;
        }
        std::vector<std::size_t> z_chains;
        for (std::size_t c = 0; c < u.chain_count(); ++c) {
            if (w.contains(u.chain(c)[top - 1])) {
                z_chains.push_back(c);
            }
        }
        if (!z_chains.empty()) {
            const Disjointified dz = disjointify(u.restrict(z_chains, 0, top - 1), eps);
            res.proof_witness_fills =
                fill_threshold_met(uncovered_count(w, dz.selected), w.size(), 6.0 * eps);
        }
        Coverage best = max_disjoint_coverage(w, all_u);
        if (fill_threshold_met(w.size() - best.covered, w.size(), 6.0 * eps)) {
            res.branch = Branch::Fill;
            res.filled = w;
            res.filling = std::move(best.witness);
            res.uncovered = w.size() - best.covered;
            res.proof_route = true;
            return res;
        }
    }

    const long double factor = 1.0L + static_cast<long double>(eps) / 6.0L;
    if (static_cast<long double>(res.union_top) >= factor * static_cast<long double>(res.union_bottom)) {
        res.branch = Branch::Growth;
        return res;
    }

    FillSearch any = search_fill(v_top, all_u, 6.0 * eps);
    if (any.found) {
        res.branch = Branch::Fill;
        res.filled = any.target;
        res.uncovered = any.target.size() - any.coverage.covered;
        res.filling = std::move(any.coverage.witness);
    }
    return res;
}

// --------------------------------------------------------- bound check

int literal_bound_exponent(std::size_t top_level, double eps)
{
    const double lg = std::log2(1.0 / eps);
    if (!(lg > 0.0)) {
        return 0;
    }
    return static_cast<int>(std::floor(static_cast<double>(top_level) / lg + 1e-12));
}

int safe_bound_exponent(std::size_t top_level, double eps)
{
    if (top_level < 1) {
        return 0;
    }
    return static_cast<int>((top_level - 1) / static_cast<std::size_t>(std::max(1, ceil_log2_inverse(eps))));
}

BoundCheck covering_bound_check(const PairedTower& pt, double eps)
{
    require_unit_eps(eps, "covering_bound_check");
    BoundCheck out;
    const std::size_t top = pt.top_level();
    out.union_bottom = union_size(pt.u().level(0));
    out.union_top = union_size(pt.v().top());
    out.literal_exponent = literal_bound_exponent(top, eps);
    out.safe_exponent = safe_bound_exponent(top, eps);

    FillSearch any = search_fill(pt.v().all(), pt.u().all(), 6.0 * eps);
    if (any.found) {
        out.fill_exists = true;
        out.filled = any.target;
        out.filling = std::move(any.coverage.witness);
        return out;
    }
    const long double base = 1.0L + static_cast<long double>(eps) / 6.0L;
    const auto holds = [&](int e) {
        return static_cast<long double>(out.union_bottom)
               <= std::pow(base, -static_cast<long double>(e)) * static_cast<long double>(out.union_top)
                      * (1.0L + 1e-12L);
    };
    out.literal_holds = holds(out.literal_exponent);
    out.safe_holds = holds(out.safe_exponent);
    return out;
}

// ---------------------------------------------------------- thin pairs

PairSequence thin_pairs(const PairSequence& ps, double delta, std::size_t k)
{
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("thin_pairs: delta must lie in (0,1)");
    }
    if (ps.size() != k) {
        throw std::invalid_argument("thin_pairs: sequence has " + std::to_string(ps.size())
                                    + " pairs, expected " + std::to_string(k));
    }
    ps.validate();
    for (std::size_t m = 0; m < k; ++m) {
        if (!(static_cast<long double>(ps.v[m].size())
              > (1.0L + static_cast<long double>(delta)) * static_cast<long double>(ps.u[m].size()))) {
            throw PreconditionError("thin_pairs: |V|/|U| <= 1 + delta at pair " + std::to_string(m + 1));
        }
    }

    const std::size_t q = static_cast<std::size_t>(q_of_delta(delta));
    const std::size_t dropped = (k + 1) / 2 + 1;
    PairSequence out;
    if (k <= dropped) {
        return out;
    }
    const std::size_t remaining = k - dropped;
    for (std::size_t b = 0; b < remaining / q; ++b) {
        const std::size_t first = dropped + b * q;
        out.u.push_back(ps.u[first]);
        out.v.push_back(ps.v[first + q - 1]);
    }
    return out;
}

} // namespace upcross
