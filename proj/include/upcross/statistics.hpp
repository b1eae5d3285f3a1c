#pragma once

#include "upcross/interval.hpp"
#include "upcross/process.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace upcross {

/// Upcrossing band with s < t. Crossings are strict: below means < s, above
/// means > t.
struct CrossingBand {
    double s;
    double t;

    CrossingBand(double s_, double t_);
};

// Window statistics. Indices are 1-based and inclusive, as in [i; j].

/// Mean of x_i..x_j.
double ergodic_average(std::span<const double> x, Index i, Index j);

/// Mean of the first floor(sqrt(j - i)) entries from i. Undefined (throws)
/// when j == i.
double sqrt_window_average(std::span<const double> x, Index i, Index j);

struct SubaddValue {
    double log_norm;    // log2 of the max-row-sum norm of A_{x_i} ... A_{x_j}
    double normalized;  // log_norm / (j - i + 1)
};

/// Ordered matrix product over symbols; `matrices[s]` is the matrix for symbol s.
SubaddValue subadd_value(const std::vector<Matrix>& matrices, std::span<const int> symbols, Index i, Index j);

/// -log2 P(x_i..x_j) / (j - i + 1). Throws when the word has probability 0.
double info_value(const ProcessModel& model, std::span<const int> symbols, Index i, Index j);

/// Number of LZ78 phrases in a binary word, counting a trailing partial phrase.
std::size_t lz78_phrase_count(std::span<const int> symbols);

/// c (log2 c + 1) / length with c the LZ78 phrase count of x_i..x_j.
double lz78_rate(std::span<const int> symbols, Index i, Index j);

/// Maximum k with indices i_1 < j_1 < ... < i_k < j_k, x_{i_m} < s and
/// x_{j_m} > t. NaN entries count for neither side.
std::size_t count_upcrossings(std::span<const double> seq, const CrossingBand& band);

enum class StatKind { ErgodicAverage, SqrtWindowAverage, SubadditiveNorm, InfoRate, Lz78Rate };

std::string to_string(StatKind k);
StatKind stat_kind_from_string(const std::string& name);  // avg|sqrt-avg|subadd|info|lz78

/// An interval statistic S_{i,j} evaluated on sample paths.
class StatArray {
public:
    static StatArray ergodic_average();
    static StatArray sqrt_window_average();
    static StatArray subadditive_norm(std::vector<Matrix> matrices);
    static StatArray info_rate(ProcessModel model);
    static StatArray lz78_rate();

    StatKind kind() const { return kind_; }
    const std::vector<Matrix>& matrices() const { return matrices_; }

    /// S_{i,j}; NaN where the statistic is undefined.
    double value(const SamplePath& path, Index i, Index j) const;

    /// S_{1,n} for n = 1..n_max (entry n-1), in one pass.
    std::vector<double> prefix_series(const SamplePath& path, std::size_t n_max) const;

    /// Largest X_{1,1} over all symbols (subadditive kind only).
    double single_step_max() const;

private:
    friend class WindowTable;

    StatKind kind_ = StatKind::ErgodicAverage;
    std::vector<Matrix> matrices_;
    std::shared_ptr<const ProcessModel> model_;
};

/// S_{a,b} for every left end a <= b as the right end b advances one step at
/// a time. Used to decide fills of every prefix [1; n] in a single sweep.
class WindowTable {
public:
    WindowTable(const StatArray& stat, const SamplePath& path);
    ~WindowTable();
    WindowTable(const WindowTable&) = delete;
    WindowTable& operator=(const WindowTable&) = delete;

    /// Moves the right end to b + 1.
    void advance();
    Index right() const;
    /// S_{a, right()} for 1 <= a <= right().
    double at(Index a) const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

struct BEvent {
    bool holds = false;
    Index n = 0;             // prefix length witnessing the event
    IntervalSet filling;     // disjoint V's inside [1; n] with S_V < s
};

/// Largest n <= n_max with S_{1,n} > t and [1; n] delta-filled by disjoint
/// windows V with S_V < s, with its filling. holds == false if none.
BEvent latest_b_event(const StatArray& stat, const SamplePath& path, const CrossingBand& band, double delta,
                      std::size_t n_max);

/// The truncated right-hand event: some n in (k, n_max] as above.
/// Requires delta > 0 and k < n_max <= path length.
BEvent b_event_holds(const SamplePath& path, const StatArray& stat, const CrossingBand& band, double delta,
                     std::size_t k, std::size_t n_max);

} // namespace upcross
