#pragma once

#include "json.hpp"

#include "upcross/rng.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace upcross {

/// Bad configuration document. The message names the offending field or line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Markov chain whose stationary law cannot be determined.
class ReducibleChainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

/// Stationary law pi with pi P = pi. Throws ReducibleChainError for reducible
/// chains and std::invalid_argument for non-stochastic input.
std::vector<double> stationary_dist(const Matrix& transition);

enum class ProcessKind { Iid, Uniform, Markov, Periodic };

struct EntropyRate {
    double bits_per_symbol = 0;
    /// Set for periodic processes, which are deterministic given the phase;
    /// the rate is reported as 0 by convention.
    bool conventional = false;
};

/// Stationary process with exact finite-dimensional word probabilities.
/// Symbols are integers; `value_of` maps a symbol to the real value seen by
/// interval statistics.
class ProcessModel {
public:
    static ProcessModel bernoulli(double p);
    /// I.i.d. over symbols 0..m-1.
    static ProcessModel iid(std::vector<double> probs);
    /// I.i.d. Uniform(0,1) reals; no word probabilities.
    static ProcessModel uniform();
    /// Chain over symbols 0..m-1, started from its stationary law.
    static ProcessModel markov(Matrix transition);
    /// Repeats `pattern` forever from a uniformly random phase.
    static ProcessModel periodic(std::vector<int> pattern);
    /// Alternating blocks of n ones and n minus-ones.
    static ProcessModel square_wave(int n);

    static ProcessModel from_json(const nlohmann::json& doc);
    static ProcessModel from_json_text(const std::string& text);
    static ProcessModel from_json_file(const std::string& path);
    nlohmann::json to_json() const;

    /// Replaces the symbol -> value map (indexed by alphabet position).
    ProcessModel with_values(std::vector<double> values) const;

    ProcessKind kind() const { return kind_; }
    bool discrete() const { return kind_ != ProcessKind::Uniform; }
    /// Sorted symbol set; empty for the continuous model.
    const std::vector<int>& alphabet() const { return alphabet_; }
    const std::vector<double>& probs() const { return probs_; }
    const Matrix& transition() const { return transition_; }
    const std::vector<double>& stationary() const { return stationary_; }
    const std::vector<int>& pattern() const { return pattern_; }

    double value_of(int symbol) const;
    /// Smallest value the process can take.
    double min_value() const;
    /// Largest value the process can take.
    double max_value() const;

    /// Exact P(X_1..X_n = word). Throws for symbols outside the alphabet or
    /// for the continuous model.
    double word_prob(std::span<const int> word) const;

    EntropyRate entropy_rate() const;

private:
    std::size_t symbol_index(int symbol) const;

    ProcessKind kind_ = ProcessKind::Iid;
    std::vector<int> alphabet_;
    std::vector<double> values_;
    std::vector<double> probs_;
    Matrix transition_;
    std::vector<double> stationary_;
    std::vector<int> pattern_;
};

/// A finite sample with the (seed, trial) pair that regenerates it.
struct SamplePath {
    std::vector<int> symbols;  // empty for the continuous model
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;

    std::size_t size() const { return values.size(); }
};

/// Draws n >= 1 steps of a stationary path from the trial's stream.
SamplePath sample(const ProcessModel& model, std::size_t n, std::uint64_t seed, std::uint64_t trial = 0);

/// Buffer-reusing variant for inner loops.
void sample_into(const ProcessModel& model, std::size_t n, TrialStream& stream, SamplePath& out);

} // namespace upcross
