#include "upcross/bounds.hpp"

#include "upcross/interval.hpp"
#include "upcross/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace upcross {

double binary_entropy(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("binary_entropy: argument must lie in [0,1]");
    }
    if (x == 0.0 || x == 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

int q_of_delta(double delta)
{
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("q_of_delta: delta must lie in (0,1)");
    }
    const long double target = 72.0L / (static_cast<long double>(delta) * delta);
    const long double ratio = 1.0L + static_cast<long double>(delta);
    int q = 1;
    long double power = 1.0L;  // (1 + delta)^(q-1)
    while (power < target) {
        power *= ratio;
        ++q;
    }
    return q;
}

int q_of_delta_closed_form(double delta)
{
    return static_cast<int>(std::ceil(std::log(72.0 / (delta * delta)) / std::log1p(delta))) + 1;
}

BoundChain t11_bound(std::int64_t k, double delta)
{
    if (!(delta > 0.0 && delta < 0.25)) {
        throw std::invalid_argument("t11_bound: delta must satisfy 0 < delta < 1/4");
    }
    if (k < 1) {
        throw std::invalid_argument("t11_bound: k must be at least 1");
    }
    BoundChain b;
    b.delta = delta;
    b.eps = delta / 6.0;
    b.q = q_of_delta(delta);
    // ceil(log2(1/eps)) by exact doubling
    {
        int m = 0;
        long double p = b.eps;
        while (p < 1.0L) {
            p *= 2.0L;
            ++m;
        }
        b.log_term = m;
    }
    b.k = k;
    b.k0 = (k + 1) / 2 + 1;
    b.k_prime = std::max<std::int64_t>(0, k / 2 - 1);
    b.k_double_prime = b.k_prime >= 1 ? (b.k_prime - 1) / b.q : 0;
    b.exponent = b.k_double_prime >= 1 ? (b.k_double_prime - 1) / b.log_term : 0;

    const double base = 1.0 + b.eps / 6.0;
    b.raw = std::pow(base, -static_cast<double>(b.exponent));
    b.bound = std::min(1.0, b.raw);

    // exponent >= (k - 3 - 2q - 2q m) / (2 q m) with m = log_term.
    const double qm2 = 2.0 * b.q * b.log_term;
    b.rho = std::pow(base, -1.0 / qm2);
    b.c = std::pow(base, (3.0 + 2.0 * b.q + qm2) / qm2);
    return b;
}

double ivanov_bound(double s, double t, std::int64_t k)
{
    if (!(s >= 0.0) || !(t > 0.0) || !(s < t)) {
        throw std::invalid_argument("ivanov_bound: need 0 <= s < t");
    }
    if (k < 0) {
        throw std::invalid_argument("ivanov_bound: k must be nonnegative");
    }
    return std::pow(s / t, static_cast<double>(k));
}

double t12_delta(double s, double t, double m)
{
    if (!(s < t)) {
        throw std::invalid_argument("t12_delta: need s < t");
    }
    if (!(m > t)) {
        throw std::invalid_argument("t12_delta: need M > t");
    }
    return (t - s) / (m - s);
}

double SmbBound::term(std::int64_t n) const
{
    return static_cast<double>(n + 1) * std::exp2(-exponent * static_cast<double>(n));
}

double SmbBound::tail(std::int64_t k) const
{
    if (!summable()) {
        return INFINITY;
    }
    const double x = std::exp2(-exponent);
    const double kk = static_cast<double>(k);
    const double num = (kk + 2.0) * std::pow(x, kk + 1.0) - (kk + 1.0) * std::pow(x, kk + 2.0);
    return num / ((1.0 - x) * (1.0 - x));
}

SmbBound smb_bound(double s, double t, double delta)
{
    SmbBound b;
    b.s = s;
    b.t = t;
    b.delta = delta;
    b.exponent = t - s - binary_entropy(delta) - delta;
    return b;
}

std::uint64_t smb_count_oracle(const ProcessModel& model, int n, double s, double delta)
{
    if (n < 1 || n > 20) {
        throw std::invalid_argument("smb_count_oracle: n must lie in [1, 20]");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("smb_count_oracle: delta must be positive");
    }
    const std::vector<int> alphabet = model.alphabet();
    if (alphabet.size() != 2) {
        throw std::invalid_argument("smb_count_oracle: model must have a two-symbol alphabet");
    }

    // qualifies[len][bits]: P(v) > 2^(-s len), first symbol in the high bit.
    std::vector<std::vector<char>> qualifies(static_cast<std::size_t>(n) + 1);
    std::vector<int> word;
    for (int len = 1; len <= n; ++len) {
        const std::uint32_t count = 1u << len;
        qualifies[len].resize(count);
        word.assign(static_cast<std::size_t>(len), 0);
        const double threshold = std::exp2(-s * len);
        for (std::uint32_t bits = 0; bits < count; ++bits) {
            for (int p = 0; p < len; ++p) {
                word[static_cast<std::size_t>(p)] = alphabet[(bits >> (len - 1 - p)) & 1u];
            }
            qualifies[len][bits] = model.word_prob(word) > threshold ? 1 : 0;
        }
    }

    std::uint64_t total = 0;
    std::vector<int> best(static_cast<std::size_t>(n) + 1);
    const std::uint32_t words = 1u << n;
    for (std::uint32_t w = 0; w < words; ++w) {
        best[0] = 0;
        for (int b = 1; b <= n; ++b) {
            int here = best[b - 1];
            for (int a = 1; a <= b; ++a) {
                const int len = b - a + 1;
                const std::uint32_t sub = (w >> (n - b)) & ((1u << len) - 1u);
                if (qualifies[len][sub]) {
                    here = std::max(here, best[a - 1] + len);
                }
            }
            best[b] = here;
        }
        if (fill_threshold_met(n - best[n], n, delta)) {
            ++total;
        }
    }
    return total;
}

double smb_count_bound(int n, double s, double delta)
{
    const double nn = static_cast<double>(n);
    return std::ceil((nn + 1.0) * std::exp2((binary_entropy(delta) + delta + s) * nn));
}

} // namespace upcross
