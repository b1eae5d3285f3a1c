#include "doctest.h"

#include "oracles.hpp"

#include "upcross/bounds.hpp"
#include "upcross/process.hpp"

#include <cmath>

using namespace upcross;
using doctest::Approx;

namespace {

// Words of length n filled by subwords of probability above 2^(-s |v|),
// through the generic prefix DP on explicit probabilities.
std::uint64_t smb_count_slow(const ProcessModel& model, int n, double s, Index num, Index den)
{
    std::uint64_t total = 0;
    std::vector<int> w(static_cast<std::size_t>(n));
    for (std::uint32_t code = 0; code < (1u << n); ++code) {
        for (int k = 0; k < n; ++k) {
            w[static_cast<std::size_t>(k)] = static_cast<int>(code >> k & 1u);
        }
        auto stat = [&](Index a, Index b) {
            const std::span<const int> v(w.data() + a - 1, static_cast<std::size_t>(b - a + 1));
            return model.word_prob(v) > std::exp2(-s * static_cast<double>(b - a + 1)) ? 0.0 : 1.0;
        };
        total += oracle::prefix_filled(stat, n, 0.5, num, den) ? 1 : 0;
    }
    return total;
}

} // namespace

TEST_CASE("binary entropy")
{
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.1) == Approx(0.4689955935892812));
    CHECK(binary_entropy(0.3) == Approx(binary_entropy(0.7)));
    CHECK_THROWS(binary_entropy(1.5));
}

TEST_CASE("q of delta")
{
    CHECK(q_of_delta(0.3) == 27);
    CHECK(q_of_delta(0.9) == 8);
    for (double d = 0.01; d < 0.99; d += 0.0137) {
        const int q = q_of_delta(d);
        CHECK(q == q_of_delta_closed_form(d));
        CHECK(std::pow(1 + d, q - 1) >= 72 / (d * d) * (1 - 1e-12));
        CHECK(std::pow(1 + d, q - 2) < 72 / (d * d));
    }
    CHECK_THROWS(q_of_delta(0.0));
}

TEST_CASE("universal upcrossing bound chain")
{
    CHECK_THROWS(t11_bound(10, 0.3));
    CHECK_THROWS(t11_bound(10, 0.25));
    CHECK_THROWS(t11_bound(0, 0.1));
    const auto small = t11_bound(5, 0.2);
    CHECK(small.bound == 1.0);
    CHECK(small.exponent == 0);
    const auto big = t11_bound(10000, 0.24);
    CHECK(big.q == q_of_delta(0.24));
    CHECK(big.log_term == 5);  // eps = 0.04
    CHECK(big.k_prime == 4999);
    CHECK(big.bound < 1.0);
    double prev = 1.0;
    for (std::int64_t k = 1; k <= 200000; k += 997) {
        const auto b = t11_bound(k, 0.2);
        CHECK(b.bound <= prev);
        CHECK(b.bound <= std::min(1.0, b.c * std::pow(b.rho, static_cast<double>(k))) * (1 + 1e-12));
        CHECK(b.rho < 1.0);
        prev = b.bound;
    }
}

TEST_CASE("ivanov bound and delta")
{
    CHECK(ivanov_bound(0.4, 0.6, 3) == Approx(8.0 / 27));
    CHECK(ivanov_bound(0.0, 0.6, 2) == 0.0);
    CHECK(ivanov_bound(0.2, 0.6, 0) == 1.0);
    CHECK_THROWS(ivanov_bound(-0.1, 0.6, 1));
    CHECK_THROWS(ivanov_bound(0.6, 0.6, 1));
    for (double s : {0.1, 0.3}) {
        for (double t : {0.4, 0.7}) {
            for (double m : {0.8, 2.0}) {
                const double d = t12_delta(s, t, m);
                CHECK(std::abs((1 - d) * s + d * m - t) < 1e-12);
            }
        }
    }
    CHECK_THROWS(t12_delta(0.5, 0.4, 1));
    CHECK_THROWS(t12_delta(0.1, 0.4, 0.4));
}

TEST_CASE("counting bound")
{
    const auto b = smb_bound(0.2, 1.2, 0.05);
    CHECK(b.summable());
    double direct = 0;
    for (std::int64_t n = 11; n < 5000; ++n) {
        direct += b.term(n);
    }
    CHECK(b.tail(10) == Approx(direct).epsilon(1e-9));
    CHECK_FALSE(smb_bound(0.5, 0.6, 0.1).summable());
    CHECK(std::isinf(smb_bound(0.5, 0.6, 0.1).tail(3)));
}

TEST_CASE("filled word count against the slow oracle and its bound")
{
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    const auto fair = ProcessModel::bernoulli(0.5);
    for (const auto& model : {mk, fair, ProcessModel::bernoulli(0.2)}) {
        for (int n : {1, 4, 7, 10}) {
            for (double s : {0.3, 0.7, 1.2}) {
                for (Index den : {20, 5}) {
                    const double d = 1.0 / static_cast<double>(den);
                    const auto c = smb_count_oracle(model, n, s, d);
                    CHECK(c == smb_count_slow(model, n, s, 1, den));
                    CHECK(static_cast<double>(c) <= smb_count_bound(n, s, d));
                }
            }
        }
    }
    // nothing qualifies at s = 0, every word at large s
    CHECK(smb_count_oracle(mk, 8, 0.0, 0.1) == 0);
    CHECK(smb_count_oracle(mk, 8, 50.0, 0.1) == 256);
    CHECK(smb_count_oracle(fair, 8, 1.0, 0.1) == 0);  // P(v) = 2^-|v| exactly
    CHECK(smb_count_oracle(mk, 12, 0.5, 0.1) == 42);
    CHECK_THROWS(smb_count_oracle(ProcessModel::periodic({1, 2, 3}), 4, 0.5, 0.1));
    CHECK_THROWS(smb_count_oracle(mk, 21, 0.5, 0.1));
}
