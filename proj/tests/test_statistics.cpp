#include "doctest.h"

#include "oracles.hpp"

#include "upcross/bounds.hpp"
#include "upcross/harness.hpp"
#include "upcross/statistics.hpp"

#include <cmath>
#include <numeric>

using namespace upcross;
using doctest::Approx;

namespace {

const Matrix a0{{2, 0}, {0, 1}};
const Matrix a1{{1, 1}, {0, 1}};

SamplePath path_of(std::vector<int> symbols)
{
    SamplePath p;
    p.values.assign(symbols.begin(), symbols.end());
    p.symbols = std::move(symbols);
    return p;
}

double naive_mean(const std::vector<double>& x, Index i, Index j)
{
    double s = 0;
    for (Index k = i; k <= j; ++k) {
        s += x[static_cast<std::size_t>(k - 1)];
    }
    return s / static_cast<double>(j - i + 1);
}

Matrix mult(const Matrix& a, const Matrix& b)
{
    Matrix c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t col = 0; col < b[0].size(); ++col) {
                c[r][col] += a[r][k] * b[k][col];
            }
        }
    }
    return c;
}

double naive_log_norm(const std::vector<int>& w, Index i, Index j)
{
    Matrix p = j >= i ? (w[static_cast<std::size_t>(i - 1)] ? a1 : a0) : Matrix{};
    for (Index k = i + 1; k <= j; ++k) {
        p = mult(p, w[static_cast<std::size_t>(k - 1)] ? a1 : a0);
    }
    double best = 0;
    for (const auto& row : p) {
        double s = 0;
        for (double v : row) {
            s += std::abs(v);
        }
        best = std::max(best, s);
    }
    return std::log2(best);
}

std::vector<StatArray> all_stats(const ProcessModel& model)
{
    return {StatArray::ergodic_average(), StatArray::sqrt_window_average(), StatArray::subadditive_norm({a0, a1}),
            StatArray::info_rate(model), StatArray::lz78_rate()};
}

bool same(double a, double b)
{
    if (std::isnan(a) || std::isnan(b)) {
        return std::isnan(a) && std::isnan(b);
    }
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

} // namespace

TEST_CASE("ergodic average")
{
    const std::vector<double> x{1, 0, 1, 1, 0};
    CHECK(ergodic_average(x, 1, 5) == Approx(0.6));
    CHECK(ergodic_average(x, 2, 2) == 0.0);
    CHECK_THROWS(ergodic_average(x, 3, 2));
    CHECK_THROWS(ergodic_average(x, 0, 2));
    CHECK_THROWS(ergodic_average(x, 1, 6));
    const auto p = sample(ProcessModel::bernoulli(0.3), 200, 3);
    for (Index i = 1; i <= 200; i += 17) {
        for (Index j = i; j <= 200; j += 13) {
            CHECK(ergodic_average(p.values, i, j) == Approx(naive_mean(p.values, i, j)));
        }
    }
}

TEST_CASE("sqrt window average")
{
    const std::vector<double> x{1, -1, 1, 1, 1, 1, 1, 1, 1, 1};
    CHECK(sqrt_window_average(x, 1, 2) == 1.0);    // one entry
    CHECK(sqrt_window_average(x, 1, 5) == 0.0);    // two entries
    CHECK(sqrt_window_average(x, 1, 10) == Approx(1.0 / 3));
    CHECK_THROWS(sqrt_window_average(x, 4, 4));
    CHECK(std::isnan(StatArray::sqrt_window_average().value(path_of({1, 0, 1}), 2, 2)));
}

TEST_CASE("subadditive norm")
{
    const std::vector<int> w{0, 1};
    const auto v = subadd_value({a0, a1}, w, 1, 2);
    CHECK(v.log_norm == Approx(2.0));
    CHECK(v.normalized == Approx(1.0));
    const Matrix id{{1, 0}, {0, 1}};
    const std::vector<int> zeros(30, 0);
    CHECK(subadd_value({id, id}, zeros, 1, 30).log_norm == Approx(0.0));

    const auto p = sample(ProcessModel::bernoulli(0.5), 60, 4);
    for (Index i = 1; i <= 60; i += 7) {
        for (Index j = i; j <= 60; j += 5) {
            const double whole = subadd_value({a0, a1}, p.symbols, i, j).log_norm;
            CHECK(whole == Approx(naive_log_norm(p.symbols, i, j)));
            for (Index m = i; m < j; m += 3) {
                const double left = subadd_value({a0, a1}, p.symbols, i, m).log_norm;
                const double right = subadd_value({a0, a1}, p.symbols, m + 1, j).log_norm;
                CHECK(whole <= left + right + 1e-9);
            }
        }
    }
    // long products do not overflow
    const std::vector<int> many(5000, 0);
    CHECK(subadd_value({a0, a1}, many, 1, 5000).normalized == Approx(1.0));
    CHECK(StatArray::subadditive_norm({a0, a1}).single_step_max() == Approx(1.0));
}

TEST_CASE("information rate")
{
    const auto b = ProcessModel::bernoulli(0.5);
    const auto p = sample(b, 100, 5);
    CHECK(info_value(b, p.symbols, 1, 100) == Approx(1.0));
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    const std::vector<int> zz{0, 0};
    CHECK(info_value(mk, zz, 1, 2) == Approx(-std::log2(0.6) / 2));
    CHECK(info_value(mk, zz, 1, 2) == Approx(0.3684).epsilon(1e-3));

    // product law for iid words
    const auto q = ProcessModel::bernoulli(0.3);
    const auto path = sample(q, 80, 6);
    const double whole = info_value(q, path.symbols, 1, 80) * 80;
    const double split = info_value(q, path.symbols, 1, 33) * 33 + info_value(q, path.symbols, 34, 80) * 47;
    CHECK(whole == Approx(split));

    // agreement with word_prob on a Markov path
    const auto mp = sample(mk, 50, 7);
    for (Index i = 1; i <= 50; i += 6) {
        for (Index j = i; j <= 50; j += 7) {
            const std::span<const int> word(mp.symbols.data() + i - 1, static_cast<std::size_t>(j - i + 1));
            CHECK(info_value(mk, mp.symbols, i, j)
                  == Approx(-std::log2(mk.word_prob(word)) / static_cast<double>(j - i + 1)));
        }
    }
    // a long Markov window has probability far below the smallest double
    const auto long_path = sample(mk, 5000, 8);
    const double long_rate = info_value(mk, long_path.symbols, 1, 5000);
    CHECK(std::isfinite(long_rate));
    CHECK(long_rate == Approx(StatArray::info_rate(mk).prefix_series(long_path, 5000).back()));
    CHECK(std::abs(long_rate - mk.entropy_rate().bits_per_symbol) < 0.1);

    const auto per = ProcessModel::periodic({1, 0});
    const std::vector<int> bad{1, 1};
    CHECK_THROWS(info_value(per, bad, 1, 2));
}

TEST_CASE("lz78")
{
    const std::vector<int> w{0, 0, 1, 1};
    CHECK(lz78_phrase_count(w) == 3);
    CHECK(lz78_rate(w, 1, 4) == Approx(3 * (std::log2(3.0) + 1) / 4));
    CHECK(lz78_rate(w, 1, 4) == Approx(1.94).epsilon(1e-2));
    const std::vector<int> zeros(10000, 0);
    // c is about sqrt(2n), so the rate is about 0.115 at n = 10^4 and 0.044 at 10^5
    CHECK(lz78_phrase_count(zeros) == oracle::lz78_phrases(zeros));
    CHECK(lz78_rate(zeros, 1, 10000) < 0.12);
    const std::vector<int> more(100000, 0);
    CHECK(lz78_rate(more, 1, 100000) < 0.05);
    CHECK_THROWS(lz78_rate(w, 3, 2));
    for (std::uint64_t tr = 0; tr < 50; ++tr) {
        const auto p = sample(ProcessModel::bernoulli(0.2 + 0.01 * static_cast<double>(tr)), 300, 8, tr);
        CHECK(lz78_phrase_count(p.symbols) == oracle::lz78_phrases(p.symbols));
    }
}

TEST_CASE("upcrossing count")
{
    const CrossingBand band(0.0, 1.0);
    CHECK(count_upcrossings(std::vector<double>{-1, 2, -1, 2}, band) == 2);
    CHECK(count_upcrossings(std::vector<double>{2, -1, 0.5, -1, 2}, band) == 1);
    CHECK(count_upcrossings(std::vector<double>{0, 1, 0, 1}, band) == 0);  // strict
    CHECK(count_upcrossings(std::vector<double>{}, band) == 0);
    CHECK(count_upcrossings(std::vector<double>{-1, NAN, 2}, band) == 1);
    CHECK_THROWS(CrossingBand(1.0, 1.0));

    for (std::uint64_t tr = 0; tr < 300; ++tr) {
        TrialStream rng(9, tr);
        std::vector<double> x(12);
        for (auto& v : x) {
            v = rng.uniform() * 3 - 1;
        }
        const std::size_t c = count_upcrossings(x, band);
        CHECK(c == oracle::upcrossings(x, 0.0, 1.0));
        // narrower band, more crossings; scaling preserves the count
        CHECK(count_upcrossings(x, CrossingBand(0.2, 0.8)) >= c);
        std::vector<double> y = x;
        for (auto& v : y) {
            v = 3 * v + 2;
        }
        CHECK(count_upcrossings(y, CrossingBand(2.0, 5.0)) == c);
    }
}

TEST_CASE("prefix series and window table agree with direct values")
{
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    for (const auto& model : {mk, ProcessModel::bernoulli(0.4)}) {
        const auto path = sample(model, 90, 10);
        for (const auto& stat : all_stats(model)) {
            const auto series = stat.prefix_series(path, 90);
            REQUIRE(series.size() == 90);
            for (Index n = 1; n <= 90; ++n) {
                CHECK(same(series[static_cast<std::size_t>(n - 1)], stat.value(path, 1, n)));
            }
            WindowTable table(stat, path);
            for (Index b = 1; b <= 90; ++b) {
                table.advance();
                REQUIRE(table.right() == b);
                for (Index a = 1; a <= b; ++a) {
                    CHECK(same(table.at(a), stat.value(path, a, b)));
                }
            }
        }
    }
    // periodic info with an impossible window shows as NaN or infinity, never a small value
    const auto per = ProcessModel::periodic({1, 1, 0, 0});
    const auto ppath = sample(per, 20, 1);
    WindowTable t(StatArray::info_rate(per), ppath);
    for (Index b = 1; b <= 20; ++b) {
        t.advance();
        for (Index a = 1; a <= b; ++a) {
            CHECK(same(t.at(a), StatArray::info_rate(per).value(ppath, a, b)));
        }
    }
}

TEST_CASE("b-event matches the prefix-fill oracle")
{
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    int seen = 0;
    for (std::uint64_t tr = 0; tr < 120; ++tr) {
        const auto path = sample(mk, 40, 11, tr);
        for (const auto& stat : all_stats(mk)) {
            if (stat.kind() == StatKind::SqrtWindowAverage) {
                continue;
            }
            const std::vector<double> cuts = stat.kind() == StatKind::SubadditiveNorm
                                                 ? std::vector<double>{0.5, 0.7}
                                                 : stat.kind() == StatKind::Lz78Rate
                                                       ? std::vector<double>{1.2, 1.8}
                                                       : std::vector<double>{0.3, 0.5};
            const CrossingBand band(cuts[0], cuts[1]);
            const double delta = 0.3;
            const auto series = stat.prefix_series(path, 40);
            Index expected = 0;
            for (Index n = 1; n <= 40; ++n) {
                if (series[static_cast<std::size_t>(n - 1)] > band.t
                    && oracle::prefix_filled([&](Index a, Index b) { return stat.value(path, a, b); }, n, band.s, 3,
                                             10)) {
                    expected = n;
                }
            }
            const auto ev = latest_b_event(stat, path, band, delta, 40);
            CHECK(ev.holds == (expected > 0));
            CHECK(ev.n == expected);
            if (ev.holds) {
                ++seen;
                CHECK(oracle::disjoint(ev.filling));
                CHECK(is_delta_fill(IntInterval(1, ev.n), ev.filling, delta));
                for (const auto& v : ev.filling) {
                    CHECK(stat.value(path, v.left(), v.right()) < band.s);
                }
            }
            const auto trunc = b_event_holds(path, stat, band, delta, 10, 40);
            CHECK(trunc.holds == (expected > 10));
        }
    }
    CHECK(seen > 20);
    const auto path = sample(mk, 40, 11);
    CHECK_THROWS(b_event_holds(path, StatArray::ergodic_average(), CrossingBand(0.3, 0.5), 0.1, 40, 40));
    CHECK_THROWS(b_event_holds(path, StatArray::ergodic_average(), CrossingBand(0.3, 0.5), 0.1, 5, 41));
    CHECK_THROWS(b_event_holds(path, StatArray::ergodic_average(), CrossingBand(0.3, 0.5), 0.0, 5, 40));
}

TEST_CASE("square wave event count matches a direct check")
{
    for (int n : {9, 12}) {
        const auto r = prop21_exact(n, 0.2);
        const auto stat = StatArray::sqrt_window_average();
        const Index k = static_cast<Index>(n) * n;
        int hits = 0;
        for (int phase = 0; phase < 2 * n; ++phase) {
            SamplePath path;
            for (Index i = 0; i < 4 * k; ++i) {
                const int sym = ((i + phase) / n) % 2 == 0 ? 1 : -1;
                path.symbols.push_back(sym);
                path.values.push_back(sym);
            }
            const auto ev = b_event_holds(path, stat, CrossingBand(-0.5, 0.5), 0.2, static_cast<std::size_t>(k),
                                          static_cast<std::size_t>(4 * k));
            if (!ev.holds) {
                continue;
            }
            ++hits;
            CHECK(ev.n > k);
            CHECK(stat.value(path, 1, ev.n) > 0.5);
            CHECK(oracle::prefix_filled([&](Index a, Index b) { return stat.value(path, a, b); }, ev.n, -0.5, 1, 5));
        }
        CHECK(hits == r.hits);
        CHECK(6 * r.hits >= 2 * n);
    }
}
