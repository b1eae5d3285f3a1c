#include "upcross/lemma_suite.hpp"

#include "upcross/bounds.hpp"
#include "upcross/random_instances.hpp"
#include "upcross/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace upcross {

nlohmann::json SuiteResult::to_json() const
{
    nlohmann::json j;
    j["name"] = name;
    j["instances"] = instances;
    j["failures"] = failures;
    j["pass"] = pass();
    j["first_failure"] = first_failure;
    j["details"] = details;
    return j;
}

namespace {

std::uint64_t suite_seed(std::uint64_t seed, std::uint64_t salt)
{
    return seed ^ (salt * 0x9E3779B97F4A7C15ULL);
}

std::string show(const IntervalSet& c)
{
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << (i ? "," : "") << c[i].str();
    }
    out << "}";
    return out.str();
}

void fail(SuiteResult& r, const std::string& what)
{
    if (r.failures == 0) {
        r.first_failure = what;
    }
    ++r.failures;
}

void bump(nlohmann::json& j, const std::string& key)
{
    j[key] = j.value(key, 0) + 1;
}

std::string eps_key(double eps)
{
    std::ostringstream out;
    out << eps;
    return out.str();
}

bool is_disjoint_fill_of(const IntInterval& target, const IntervalSet& filling, const IntervalSet& pool)
{
    return is_pairwise_disjoint(filling) && is_subcollection(filling, pool)
           && std::all_of(filling.begin(), filling.end(), [&](const IntInterval& x) { return target.contains(x); });
}

} // namespace

SuiteResult suite_vitali(std::uint64_t trials, std::uint64_t seed)
{
    SuiteResult r;
    r.name = "vitali_select";
    const std::uint64_t s = suite_seed(seed, 1);
    for (std::uint64_t tr = 0; tr < trials; ++tr) {
        TrialStream rng(s, tr);
        const IntervalSet c = random_collection(rng, 50, 1000);
        const IntervalSet sel = vitali_select(c);
        ++r.instances;
        const Index whole = union_size(c);
        const Index got = union_size(sel);
        if (!is_pairwise_disjoint(sel) || !is_subcollection(sel, c) || 2 * got < whole) {
            fail(r, "trial " + std::to_string(tr) + ": input " + show(c) + " selected " + show(sel));
        }
    }
    return r;
}

SuiteResult suite_blowup(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    SuiteResult r;
    r.name = "blowup_union";
    const std::uint64_t s = suite_seed(seed, 2);
    for (double eps : eps_list) {
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            const IntervalSet c = random_collection(rng, 50, 1000);
            ++r.instances;
            const Index lhs = union_size(blowup_all(c, eps));
            const long double rhs = (1.0L + 2.0L * static_cast<long double>(eps)) * static_cast<long double>(union_size(c));
            if (static_cast<long double>(lhs) > rhs * (1.0L + 1e-12L)) {
                fail(r, "eps " + eps_key(eps) + " trial " + std::to_string(tr) + ": " + std::to_string(lhs) + " > "
                            + std::to_string(static_cast<double>(rhs)));
            }
        }
    }
    return r;
}

SuiteResult suite_split(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    SuiteResult r;
    r.name = "split_height2";
    const std::uint64_t s = suite_seed(seed, 3);
    for (double eps : eps_list) {
        auto& d = r.details[eps_key(eps)];
        d = nlohmann::json::object();
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            const Tower t = random_tower(rng, eps, 2, 20);
            ++r.instances;
            const std::string where = "eps " + eps_key(eps) + " trial " + std::to_string(tr);

            IntervalSet blown = blowup_all(epsilon_crust(t, eps), eps);
            const Index crust_union = union_size(blown);
            IntervalSet both = blown;
            const IntervalSet all = t.all();
            both.insert(both.end(), all.begin(), all.end());
            if (union_size(both) != crust_union) {
                bump(d, "crust_cover_failures");
                fail(r, where + ": crust blowups miss part of the tower");
            }
            const AbsorptionReport ab = crust_absorbs(t, eps);
            if (!ab.pass) {
                bump(d, "absorption_failures");
                fail(r, where + ": " + ab.lower->str() + " meets crust member " + ab.crust->str()
                            + " without lying in its blowup");
            }
            const Split sp = split_height2(t, eps);
            const SplitCheck ck = check_split(t, eps, sp);
            if (!ck.half_bound) {
                bump(d, "half_bound_failures");
            }
            if (!ck.separated) {
                bump(d, "separation_failures");
            }
            if (!ck.covers) {
                bump(d, "cover_failures");
            }
            if (!ck.v_hat_disjoint) {
                bump(d, "disjointness_failures");
            }
            // The part of the cover claim that follows from absorption alone:
            // bottom-level members are covered.
            IntervalSet cover = blowup_all(sp.v_hat, eps);
            cover.insert(cover.end(), sp.u_hat.begin(), sp.u_hat.end());
            for (const auto& piece : union_components(t.level(0))) {
                if (uncovered_count(piece, cover) != 0) {
                    bump(d, "bottom_cover_failures");
                    break;
                }
            }
            if (!ck.ok()) {
                fail(r, where + ": split postcondition fails; bottom " + show(t.level(0)) + " top "
                            + show(t.level(1)));
            }
            if (sp.u_hat.empty()) {
                bump(d, "u_hat_empty");
            }
        }
    }
    return r;
}

SuiteResult suite_disjointify(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    SuiteResult r;
    r.name = "disjointify";
    const std::uint64_t s = suite_seed(seed, 4);
    for (double eps : eps_list) {
        const auto height = static_cast<std::size_t>(min_disjointify_height(eps));
        auto& d = r.details[eps_key(eps)];
        d = nlohmann::json::object();
        d["height"] = height;
        double worst = 1.0;
        double worst_best = 1.0;
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            Tower t;
            try {
                t = random_tower(rng, eps, height, 12);
            } catch (const std::overflow_error&) {
                d["skipped"] = "sizes exceed 64 bits";
                break;
            }
            ++r.instances;
            const Disjointified dj = disjointify(t, eps);
            const IntervalSet all = t.all();
            const Index whole = union_size(all);
            const Index got = union_size(dj.selected);
            const double ratio = static_cast<double>(got) / static_cast<double>(whole);
            worst = std::min(worst, ratio);
            const bool enough = static_cast<long double>(got)
                                >= (1.0L - 3.0L * static_cast<long double>(eps)) * static_cast<long double>(whole)
                                       * (1.0L - 1e-12L);
            // Exact optimum over all disjoint subfamilies: scheduling on the hull.
            const IntervalSet hull = union_components(all);
            const Index best =
                max_disjoint_coverage(IntInterval(hull.front().left(), hull.back().right()), all).covered;
            const double best_ratio = static_cast<double>(best) / static_cast<double>(whole);
            worst_best = std::min(worst_best, best_ratio);
            if (!enough) {
                const bool attainable = static_cast<long double>(best)
                                        >= (1.0L - 3.0L * static_cast<long double>(eps))
                                               * static_cast<long double>(whole) * (1.0L - 1e-12L);
                bump(d, attainable ? "construction_short" : "no_disjoint_subfamily_suffices");
            }
            if (!is_pairwise_disjoint(dj.selected) || !is_subcollection(dj.selected, all) || !enough) {
                fail(r, "eps " + eps_key(eps) + " trial " + std::to_string(tr) + ": coverage ratio "
                            + std::to_string(ratio));
            }
        }
        d["worst_ratio"] = worst;
        d["worst_optimum_ratio"] = worst_best;
    }
    return r;
}

PairedTower crafted_fill_tower()
{
    const Index T = 125000;
    const std::vector<Index> u_sizes{1, 50, 2500, T, 50 * T};
    const std::vector<Index> v_sizes{50, 2500, T, 50 * T};
    std::vector<std::vector<IntInterval>> u;
    std::vector<std::vector<IntInterval>> v;
    for (Index j = 0; j <= 2500; ++j) {
        const Index base = j * T;
        const Index top = j == 0 ? 2501 * T : 2500 * T;
        std::vector<IntInterval> uc;
        std::vector<IntInterval> vc;
        for (std::size_t k = 0; k < u_sizes.size(); ++k) {
            uc.emplace_back(base, base + u_sizes[k] - 1);
            vc.emplace_back(base, base + (k + 1 < u_sizes.size() ? v_sizes[k] : top) - 1);
        }
        u.push_back(std::move(uc));
        v.push_back(std::move(vc));
    }
    return PairedTower(std::move(u), std::move(v));
}

namespace {

/// Checks a dichotomy result against its own claims. Returns an empty string
/// when it verifies.
std::string verify_dichotomy(const PairedTower& pt, double eps, const DichotomyResult& res)
{
    switch (res.branch) {
    case Branch::Fill: {
        const IntervalSet tops = pt.v().top();
        if (!res.filled || std::find(tops.begin(), tops.end(), *res.filled) == tops.end()) {
            return "fill target is not a top-level V";
        }
        if (!is_disjoint_fill_of(*res.filled, res.filling, pt.u().all())) {
            return "filling is not a disjoint family of U's inside the target";
        }
        const Index unc = uncovered_count(*res.filled, res.filling);
        if (unc != res.uncovered || !fill_threshold_met(unc, res.filled->size(), 6.0 * eps)) {
            return "filling misses the 6 eps threshold";
        }
        return {};
    }
    case Branch::Growth: {
        const long double f = 1.0L + static_cast<long double>(eps) / 6.0L;
        if (static_cast<long double>(res.union_top) < f * static_cast<long double>(res.union_bottom)) {
            return "measure inequality does not hold";
        }
        return {};
    }
    case Branch::Neither:
        return "neither branch holds";
    }
    return "unknown branch";
}

} // namespace

SuiteResult suite_dichotomy(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    SuiteResult r;
    r.name = "dichotomy";
    const std::uint64_t s = suite_seed(seed, 5);
    for (double eps : eps_list) {
        const auto top = static_cast<std::size_t>(min_disjointify_height(eps));
        auto& d = r.details[eps_key(eps)];
        d = nlohmann::json::object();
        d["L"] = top;
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            PairedTower pt;
            try {
                pt = random_paired_tower(rng, eps, top, 15);
            } catch (const std::overflow_error&) {
                d["skipped"] = "sizes exceed 64 bits";
                break;
            }
            ++r.instances;
            const DichotomyResult res = dichotomy(pt, eps);
            bump(d, to_string(res.branch));
            if (res.proof_route) {
                bump(d, "proof_route");
            }
            const std::string err = verify_dichotomy(pt, eps, res);
            if (!err.empty()) {
                fail(r, "eps " + eps_key(eps) + " trial " + std::to_string(tr) + ": " + err);
            }
        }
    }

    const PairedTower crafted = crafted_fill_tower();
    const DichotomyResult res = dichotomy(crafted, 0.2);
    ++r.instances;
    r.details["crafted"] = {{"branch", to_string(res.branch)},
                            {"proof_route", res.proof_route},
                            {"proof_witness_fills", res.proof_witness_fills},
                            {"filled", res.filled ? res.filled->str() : std::string()}};
    const std::string err = verify_dichotomy(crafted, 0.2, res);
    if (!err.empty() || res.branch != Branch::Fill || !res.proof_route) {
        fail(r, "crafted instance: " + (err.empty() ? std::string("fill not reached through the crust") : err));
    }
    return r;
}

SuiteResult suite_bound_check(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    SuiteResult r;
    r.name = "covering_bound";
    const std::uint64_t s = suite_seed(seed, 6);
    for (double eps : eps_list) {
        auto& d = r.details[eps_key(eps)];
        d = nlohmann::json::object();
        // Largest L <= 3 ceil(log2(1/eps)) whose instances fit in 64 bits.
        std::size_t lmax = static_cast<std::size_t>(3 * std::max(1, ceil_log2_inverse(eps)));
        for (;; --lmax) {
            try {
                TrialStream probe(s, 0);
                (void)random_paired_tower(probe, eps, lmax, 1);
                break;
            } catch (const std::overflow_error&) {
                if (lmax == 1) {
                    lmax = 0;
                    break;
                }
            }
        }
        d["max_L"] = lmax;
        if (lmax == 0) {
            d["skipped"] = "sizes exceed 64 bits";
            continue;
        }
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            const auto top = 1 + static_cast<std::size_t>(rng.below(lmax));
            const PairedTower pt = random_paired_tower(rng, eps, top, 15);
            ++r.instances;
            const BoundCheck bc = covering_bound_check(pt, eps);
            if (bc.fill_exists) {
                bump(d, "fill");
                if (!is_disjoint_fill_of(*bc.filled, bc.filling, pt.u().all())
                    || !fill_threshold_met(uncovered_count(*bc.filled, bc.filling), bc.filled->size(), 6.0 * eps)) {
                    fail(r, "eps " + eps_key(eps) + " trial " + std::to_string(tr) + ": bad fill witness");
                }
                continue;
            }
            bump(d, "no_fill");
            if (!bc.safe_holds) {
                bump(d, "safe_form_failures");
            }
            if (!bc.pass()) {
                fail(r, "eps " + eps_key(eps) + " trial " + std::to_string(tr) + ": no fill and |U(0)| = "
                            + std::to_string(bc.union_bottom) + " exceeds the bound with |V(L)| = "
                            + std::to_string(bc.union_top) + ", L = " + std::to_string(top));
            }
        }
    }
    return r;
}

SuiteResult suite_thin_pairs(std::uint64_t trials, std::uint64_t seed)
{
    SuiteResult r;
    r.name = "thin_pairs";
    const std::uint64_t s = suite_seed(seed, 7);
    for (double delta : {0.5, 0.9}) {
        const int q = q_of_delta(delta);
        const long double need = 72.0L / (static_cast<long double>(delta) * delta);
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            TrialStream rng(s, tr);
            const std::size_t k = 1 + rng.below(40);
            const PairSequence ps = random_pair_sequence(rng, delta, k);
            const PairSequence out = thin_pairs(ps, delta, k);
            ++r.instances;
            const auto kk = static_cast<std::int64_t>(k);
            const std::int64_t k_prime = std::max<std::int64_t>(0, kk / 2 - 1);
            const std::int64_t floor_bound = k_prime >= 1 ? (k_prime - 1) / q : 0;
            std::string err;
            if (static_cast<std::int64_t>(out.size()) < floor_bound) {
                err = "too few pairs";
            }
            for (std::size_t m = 0; m < out.size() && err.empty(); ++m) {
                if (static_cast<long double>(out.v[m].size()) < need * static_cast<long double>(out.u[m].size())) {
                    err = "growth ratio below 72/delta^2";
                } else if (out.u[m].size() <= kk) {
                    err = "pair smaller than k";
                } else if (out.u[m].left() != ps.u.front().left()) {
                    err = "left endpoint moved";
                }
            }
            if (err.empty()) {
                try {
                    out.validate();
                } catch (const std::exception& e) {
                    err = e.what();
                }
            }
            if (!err.empty()) {
                fail(r, "delta " + eps_key(delta) + " k " + std::to_string(k) + ": " + err);
            }
        }
    }
    return r;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps_list)
{
    std::vector<SuiteResult> out;
    out.push_back(suite_vitali(trials, seed));
    out.push_back(suite_blowup(trials, seed, eps_list));
    out.push_back(suite_split(trials, seed, eps_list));
    out.push_back(suite_disjointify(trials, seed, eps_list));
    out.push_back(suite_dichotomy(trials, seed, eps_list));
    out.push_back(suite_bound_check(trials, seed, eps_list));
    out.push_back(suite_thin_pairs(trials, seed));
    return out;
}

} // namespace upcross
