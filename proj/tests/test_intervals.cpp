#include "doctest.h"

#include "oracles.hpp"

#include "upcross/interval.hpp"
#include "upcross/random_instances.hpp"
#include "upcross/rng.hpp"

using namespace upcross;

TEST_CASE("interval basics")
{
    CHECK_THROWS_AS(IntInterval(5, 4), std::invalid_argument);
    IntInterval i(3, 7);
    CHECK(i.size() == 5);
    CHECK(i.contains(3));
    CHECK_FALSE(i.contains(8));
    CHECK(i.contains(IntInterval(4, 7)));
    CHECK(i.intersects(IntInterval(7, 9)));
    CHECK_FALSE(i.intersects(IntInterval(8, 9)));
    CHECK(i.str() == "[3;7]");
}

TEST_CASE("union size")
{
    CHECK(union_size(IntervalSet{{1, 2}, {4, 5}}) == 4);
    CHECK(union_size(IntervalSet{{1, 3}, {2, 5}}) == 5);
    CHECK(union_size(IntervalSet{}) == 0);
    CHECK(union_components(IntervalSet{{1, 2}, {3, 4}}).size() == 1);
}

TEST_CASE("union size matches point sets")
{
    for (std::uint64_t tr = 0; tr < 300; ++tr) {
        TrialStream rng(11, tr);
        const auto c = random_collection(rng, 20, 200);
        CHECK(union_size(c) == static_cast<Index>(oracle::points(c).size()));
        const IntInterval probe(50, 150);
        Index inside = 0;
        for (Index x : oracle::points(c)) {
            inside += probe.contains(x) ? 1 : 0;
        }
        CHECK(uncovered_count(probe, c) == probe.size() - inside);
    }
}

TEST_CASE("blowup")
{
    CHECK(blowup(IntInterval(5, 8), 0.25) == IntInterval(4, 9));
    CHECK(blowup(IntInterval(5, 8), 0.10) == IntInterval(5, 8));
    const IntInterval big = blowup(IntInterval(1, 100), 0.5);
    CHECK(big == IntInterval(-49, 150));
    CHECK(big.size() <= 200);
    CHECK_THROWS_AS(blowup(IntInterval(1, 2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(blowup(IntInterval(1, 2), -0.1), std::invalid_argument);
    // 0.1 * 10 is exactly one point despite binary rounding of 0.1
    CHECK(blowup(IntInterval(1, 10), 0.1) == IntInterval(0, 11));
}

TEST_CASE("blowup union bound on random collections")
{
    for (double eps : {0.1, 0.25, 0.5}) {
        for (std::uint64_t tr = 0; tr < 500; ++tr) {
            TrialStream rng(12, tr);
            const auto c = random_collection(rng, 30, 500);
            const auto lhs = static_cast<double>(union_size(blowup_all(c, eps)));
            CHECK(lhs <= (1 + 2 * eps) * static_cast<double>(union_size(c)) + 1e-9);
        }
    }
}

TEST_CASE("vitali examples")
{
    const IntervalSet three{{1, 4}, {3, 6}, {5, 8}};
    const auto sel = vitali_select(three);
    CHECK(sel == IntervalSet{{1, 4}, {5, 8}});
    CHECK(oracle::max_disjoint_coverage(IntInterval(1, 8), three) == 8);

    CHECK(vitali_select(IntervalSet{{1, 3}}) == IntervalSet{{1, 3}});
    CHECK(vitali_select(IntervalSet{}).empty());

    const IntervalSet apart{{20, 25}, {1, 3}, {10, 12}};
    auto got = vitali_select(apart);
    std::sort(got.begin(), got.end());
    CHECK(got == IntervalSet{{1, 3}, {10, 12}, {20, 25}});
}

TEST_CASE("vitali properties on random collections")
{
    for (std::uint64_t tr = 0; tr < 2000; ++tr) {
        TrialStream rng(13, tr);
        const auto c = random_collection(rng, 50, 1000);
        const auto sel = vitali_select(c);
        CHECK(oracle::disjoint(sel));
        CHECK(is_subcollection(sel, c));
        CHECK(2 * union_size(sel) >= union_size(c));
        const auto cover = minimal_subcover(c);
        CHECK(union_size(cover) == union_size(c));
        // inclusion-minimal: dropping any member shrinks the union
        for (std::size_t k = 0; k < cover.size() && k < 8; ++k) {
            IntervalSet less = cover;
            less.erase(less.begin() + static_cast<long>(k));
            CHECK(union_size(less) < union_size(c));
        }
    }
}

TEST_CASE("max disjoint coverage examples")
{
    const IntervalSet c{{1, 4}, {4, 7}, {6, 10}};
    const auto cov = max_disjoint_coverage(IntInterval(1, 10), c);
    CHECK(cov.covered == 9);
    CHECK(cov.witness == IntervalSet{{1, 4}, {6, 10}});
    CHECK(max_disjoint_coverage(IntInterval(1, 10), IntervalSet{}).covered == 0);
    CHECK(max_disjoint_coverage(IntInterval(1, 10), IntervalSet{{1, 10}}).covered == 10);
    CHECK(max_disjoint_coverage(IntInterval(1, 10), IntervalSet{{0, 3}, {9, 11}}).covered == 0);
}

TEST_CASE("max disjoint coverage agrees with subset search")
{
    for (std::uint64_t tr = 0; tr < 400; ++tr) {
        TrialStream rng(14, tr);
        const auto c = random_collection(rng, 12, 60);
        const IntInterval i(1 + static_cast<Index>(rng.below(10)), 50 + static_cast<Index>(rng.below(11)));
        const auto cov = max_disjoint_coverage(i, c);
        CHECK(cov.covered == oracle::max_disjoint_coverage(i, c));
        CHECK(oracle::disjoint(cov.witness));
        CHECK(is_subcollection(cov.witness, c));
        Index total = 0;
        for (const auto& w : cov.witness) {
            CHECK(i.contains(w));
            total += w.size();
        }
        CHECK(total == cov.covered);
    }
}

TEST_CASE("delta fill")
{
    const IntervalSet c{{1, 4}, {4, 7}, {6, 10}};
    CHECK(is_delta_fill(IntInterval(1, 10), c, 0.15));
    CHECK_FALSE(is_delta_fill(IntInterval(1, 10), c, 0.05));
    CHECK(is_delta_fill(IntInterval(1, 10), IntervalSet{{1, 10}}, 1e-9));
    CHECK_THROWS_AS(is_delta_fill(IntInterval(1, 10), c, 0.0), std::invalid_argument);
    // strict inequality: uncovered 1 of 10 at delta 0.1 is not a fill
    CHECK_FALSE(is_delta_fill(IntInterval(1, 10), c, 0.1));
}

TEST_CASE("delta fill monotonicity")
{
    for (std::uint64_t tr = 0; tr < 300; ++tr) {
        TrialStream rng(15, tr);
        auto c = random_collection(rng, 15, 100);
        const IntInterval i(1, 100);
        bool prev = false;
        for (double d : {0.05, 0.1, 0.2, 0.4, 0.8}) {
            const bool now = is_delta_fill(i, c, d);
            CHECK((!prev || now));
            prev = now;
        }
        const bool full = is_delta_fill(i, c, 0.3);
        c.pop_back();
        CHECK((full || !is_delta_fill(i, c, 0.3)));
    }
}
