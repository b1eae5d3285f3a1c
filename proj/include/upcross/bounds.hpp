#pragma once

#include <cstdint>

namespace upcross {

class ProcessModel;

/// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// Minimal q with (1 + delta)^(q-1) >= 72 / delta^2, found by direct search.
int q_of_delta(double delta);

/// The same q from the closed form ceil(log(72/delta^2) / log(1+delta)) + 1.
/// Kept only as a cross-check of q_of_delta.
int q_of_delta_closed_form(double delta);

/// Constants feeding the upcrossing bound for a given delta and k.
struct BoundChain {
    double delta = 0;
    double eps = 0;       // delta / 6
    int q = 0;
    int log_term = 0;     // ceil(log2(1/eps))
    std::int64_t k = 0;
    std::int64_t k0 = 0;            // ceil(k/2) + 1 pairs dropped
    std::int64_t k_prime = 0;       // floor(k/2) - 1 pairs kept, clamped at 0
    std::int64_t k_double_prime = 0;// floor((k'-1)/q), clamped at 0
    std::int64_t exponent = 0;      // max(0, floor((k''-1)/log_term))
    double raw = 1;                 // (1 + eps/6)^(-exponent)
    double bound = 1;               // min(1, raw) with c = 1
    double c = 1;                   // asymptotic envelope: bound <= c * rho^k
    double rho = 1;
};

/// Explicit chain for the universal upcrossing bound. Requires 0 < delta < 1/4.
BoundChain t11_bound(std::int64_t k, double delta);

/// (s/t)^k. Requires 0 <= s < t.
double ivanov_bound(double s, double t, std::int64_t k);

/// delta = (t - s) / (m - s), for which (1 - delta) s + delta m = t.
double t12_delta(double s, double t, double m);

/// Exponent and tail of the counting bound on P(B_n).
struct SmbBound {
    double s = 0;
    double t = 0;
    double delta = 0;
    double exponent = 0;  // t - s - h(delta) - delta
    bool summable() const { return exponent > 0; }
    /// (n + 1) 2^(-exponent n)
    double term(std::int64_t n) const;
    /// Closed form of sum_{n > k} (n + 1) 2^(-exponent n).
    double tail(std::int64_t k) const;
};
SmbBound smb_bound(double s, double t, double delta);

/// Exact number of binary words of length n that are delta-filled by disjoint
/// subwords v with P(v) > 2^(-s |v|). Enumerates all 2^n words (n <= 20).
std::uint64_t smb_count_oracle(const ProcessModel& model, int n, double s, double delta);

/// (n + 1) 2^(h(delta) n) 2^(delta n) 2^(s n), rounded up.
double smb_count_bound(int n, double s, double delta);

} // namespace upcross
