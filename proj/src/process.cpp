#include "upcross/process.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace upcross {

namespace {

void check_distribution(const std::vector<double>& row, const std::string& what)
{
    if (row.empty()) {
        throw std::invalid_argument(what + ": empty distribution");
    }
    double total = 0;
    for (double p : row) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument(what + ": negative or NaN probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument(what + ": probabilities sum to " + std::to_string(total));
    }
}

std::vector<bool> reachable(const Matrix& p, std::size_t from, bool reverse)
{
    const std::size_t m = p.size();
    std::vector<bool> seen(m, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < m; ++b) {
            const double w = reverse ? p[b][a] : p[a][b];
            if (w > 0.0 && !seen[b]) {
                seen[b] = true;
                stack.push_back(b);
            }
        }
    }
    return seen;
}

std::size_t draw(const std::vector<double>& probs, double u)
{
    double acc = 0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) {
            return k;
        }
    }
    return probs.size() - 1;
}

double plog2p(double p)
{
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

} // namespace

std::vector<double> stationary_dist(const Matrix& transition)
{
    const std::size_t m = transition.size();
    if (m == 0) {
        throw std::invalid_argument("stationary_dist: empty transition matrix");
    }
    for (std::size_t r = 0; r < m; ++r) {
        if (transition[r].size() != m) {
            throw std::invalid_argument("stationary_dist: transition matrix must be square");
        }
        check_distribution(transition[r], "stationary_dist: row " + std::to_string(r));
    }
    const auto fwd = reachable(transition, 0, false);
    const auto back = reachable(transition, 0, true);
    for (std::size_t s = 0; s < m; ++s) {
        if (!fwd[s] || !back[s]) {
            throw ReducibleChainError("stationary_dist: chain is reducible (state " + std::to_string(s)
                                      + " does not communicate with state 0)");
        }
    }

    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a(m, m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            a(static_cast<long>(r), static_cast<long>(c)) = transition[c][r] - (r == c ? 1.0 : 0.0);
        }
    }
    a.row(static_cast<long>(m) - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(m));
    rhs(static_cast<long>(m) - 1) = 1.0;
    const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);

    std::vector<double> out(pi.data(), pi.data() + m);
    double residual = 0;
    for (std::size_t c = 0; c < m; ++c) {
        double acc = 0;
        for (std::size_t r = 0; r < m; ++r) {
            acc += out[r] * transition[r][c];
        }
        residual = std::max(residual, std::abs(acc - out[c]));
    }
    if (!(residual < 1e-10) || std::any_of(out.begin(), out.end(), [](double x) { return x < -1e-12; })) {
        throw ReducibleChainError("stationary_dist: solver did not produce a stationary law");
    }
    for (double& x : out) {
        x = std::max(0.0, x);
    }
    return out;
}

// -------------------------------------------------------------- models

ProcessModel ProcessModel::bernoulli(double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("bernoulli: p must lie in [0,1]");
    }
    return iid({1.0 - p, p});
}

ProcessModel ProcessModel::iid(std::vector<double> probs)
{
    check_distribution(probs, "iid");
    ProcessModel m;
    m.kind_ = ProcessKind::Iid;
    m.alphabet_.resize(probs.size());
    std::iota(m.alphabet_.begin(), m.alphabet_.end(), 0);
    m.values_.assign(m.alphabet_.begin(), m.alphabet_.end());
    m.probs_ = std::move(probs);
    return m;
}

ProcessModel ProcessModel::uniform()
{
    ProcessModel m;
    m.kind_ = ProcessKind::Uniform;
    return m;
}

ProcessModel ProcessModel::markov(Matrix transition)
{
    ProcessModel m;
    m.kind_ = ProcessKind::Markov;
    m.stationary_ = stationary_dist(transition);
    m.transition_ = std::move(transition);
    m.alphabet_.resize(m.transition_.size());
    std::iota(m.alphabet_.begin(), m.alphabet_.end(), 0);
    m.values_.assign(m.alphabet_.begin(), m.alphabet_.end());
    return m;
}

ProcessModel ProcessModel::periodic(std::vector<int> pattern)
{
    if (pattern.empty()) {
        throw std::invalid_argument("periodic: pattern must be nonempty");
    }
    ProcessModel m;
    m.kind_ = ProcessKind::Periodic;
    const std::set<int> symbols(pattern.begin(), pattern.end());
    m.alphabet_.assign(symbols.begin(), symbols.end());
    m.values_.assign(m.alphabet_.begin(), m.alphabet_.end());
    m.pattern_ = std::move(pattern);
    return m;
}

ProcessModel ProcessModel::square_wave(int n)
{
    if (n < 1) {
        throw std::invalid_argument("square_wave: block length must be positive");
    }
    std::vector<int> pattern(static_cast<std::size_t>(2 * n), -1);
    std::fill(pattern.begin(), pattern.begin() + n, 1);
    return periodic(std::move(pattern));
}

ProcessModel ProcessModel::with_values(std::vector<double> values) const
{
    if (!discrete()) {
        throw std::invalid_argument("with_values: continuous model has no symbols");
    }
    if (values.size() != alphabet_.size()) {
        throw std::invalid_argument("with_values: need one value per alphabet symbol");
    }
    ProcessModel copy = *this;
    copy.values_ = std::move(values);
    return copy;
}

std::size_t ProcessModel::symbol_index(int symbol) const
{
    const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), symbol);
    if (it == alphabet_.end() || *it != symbol) {
        throw std::invalid_argument("symbol " + std::to_string(symbol) + " is outside the model alphabet");
    }
    return static_cast<std::size_t>(it - alphabet_.begin());
}

double ProcessModel::value_of(int symbol) const
{
    return values_[symbol_index(symbol)];
}

double ProcessModel::min_value() const
{
    if (!discrete()) {
        return 0.0;
    }
    return *std::min_element(values_.begin(), values_.end());
}

double ProcessModel::max_value() const
{
    if (!discrete()) {
        return 1.0;
    }
    return *std::max_element(values_.begin(), values_.end());
}

double ProcessModel::word_prob(std::span<const int> word) const
{
    if (!discrete()) {
        throw std::invalid_argument("word_prob: continuous model has no word probabilities");
    }
    std::vector<std::size_t> idx;
    idx.reserve(word.size());
    for (int s : word) {
        idx.push_back(symbol_index(s));
    }
    if (idx.empty()) {
        return 1.0;
    }
    switch (kind_) {
    case ProcessKind::Iid: {
        double p = 1.0;
        for (std::size_t s : idx) {
            p *= probs_[s];
        }
        return p;
    }
    case ProcessKind::Markov: {
        double p = stationary_[idx[0]];
        for (std::size_t k = 1; k < idx.size(); ++k) {
            p *= transition_[idx[k - 1]][idx[k]];
        }
        return p;
    }
    case ProcessKind::Periodic: {
        const std::size_t period = pattern_.size();
        std::size_t hits = 0;
        for (std::size_t phase = 0; phase < period; ++phase) {
            bool match = true;
            for (std::size_t k = 0; k < word.size() && match; ++k) {
                match = pattern_[(phase + k) % period] == word[k];
            }
            hits += match ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(period);
    }
    case ProcessKind::Uniform:
        break;
    }
    return 0.0;
}

EntropyRate ProcessModel::entropy_rate() const
{
    EntropyRate out;
    switch (kind_) {
    case ProcessKind::Iid:
        for (double p : probs_) {
            out.bits_per_symbol += plog2p(p);
        }
        break;
    case ProcessKind::Markov:
        for (std::size_t i = 0; i < transition_.size(); ++i) {
            double row = 0;
            for (double p : transition_[i]) {
                row += plog2p(p);
            }
            out.bits_per_symbol += stationary_[i] * row;
        }
        break;
    case ProcessKind::Periodic:
        out.conventional = true;
        break;
    case ProcessKind::Uniform:
        throw std::invalid_argument("entropy_rate: undefined for the continuous model");
    }
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

const nlohmann::json& require_field(const nlohmann::json& doc, const char* name)
{
    if (!doc.contains(name)) {
        throw ConfigError(std::string("model config: missing field \"") + name + "\"");
    }
    return doc.at(name);
}

double number_field(const nlohmann::json& v, const std::string& where)
{
    if (!v.is_number()) {
        throw ConfigError("model config: field \"" + where + "\" must be a number");
    }
    return v.get<double>();
}

std::vector<double> number_array(const nlohmann::json& v, const std::string& where)
{
    if (!v.is_array()) {
        throw ConfigError("model config: field \"" + where + "\" must be an array");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        out.push_back(number_field(v[k], where + "[" + std::to_string(k) + "]"));
    }
    return out;
}

} // namespace

ProcessModel ProcessModel::from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("model config: top level must be an object");
    }
    const auto& type_field = require_field(doc, "type");
    if (!type_field.is_string()) {
        throw ConfigError("model config: field \"type\" must be a string");
    }
    const std::string type = type_field.get<std::string>();

    ProcessModel model;
    try {
        if (type == "iid") {
            if (doc.contains("dist")) {
                if (doc.at("dist") != "uniform") {
                    throw ConfigError("model config: field \"dist\" supports only \"uniform\"");
                }
                return uniform();
            }
            if (doc.contains("probs")) {
                model = iid(number_array(doc.at("probs"), "probs"));
            } else {
                model = bernoulli(number_field(require_field(doc, "p"), "p"));
            }
        } else if (type == "markov") {
            const auto& t = require_field(doc, "transition");
            if (!t.is_array()) {
                throw ConfigError("model config: field \"transition\" must be an array of rows");
            }
            Matrix rows;
            for (std::size_t r = 0; r < t.size(); ++r) {
                rows.push_back(number_array(t[r], "transition[" + std::to_string(r) + "]"));
            }
            model = markov(std::move(rows));
        } else if (type == "periodic") {
            const auto& p = require_field(doc, "pattern");
            if (!p.is_array()) {
                throw ConfigError("model config: field \"pattern\" must be an array");
            }
            std::vector<int> pattern;
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (!p[k].is_number_integer()) {
                    throw ConfigError("model config: field \"pattern[" + std::to_string(k)
                                      + "]\" must be an integer");
                }
                pattern.push_back(p[k].get<int>());
            }
            model = periodic(std::move(pattern));
        } else {
            throw ConfigError("model config: field \"type\" must be one of markov, iid, periodic (got \"" + type
                              + "\")");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    } catch (const ReducibleChainError& e) {
        throw ConfigError(std::string("model config: field \"transition\": ") + e.what());
    }
    if (doc.contains("values")) {
        try {
            model = model.with_values(number_array(doc.at("values"), "values"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model config: field \"values\": ") + e.what());
        }
    }
    return model;
}

ProcessModel ProcessModel::from_json_text(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ConfigError("model config: line " + std::to_string(line) + ": " + e.what());
    }
    return from_json(doc);
}

ProcessModel ProcessModel::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("model config: cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

nlohmann::json ProcessModel::to_json() const
{
    nlohmann::json doc;
    switch (kind_) {
    case ProcessKind::Iid:
        doc["type"] = "iid";
        doc["probs"] = probs_;
        break;
    case ProcessKind::Uniform:
        doc["type"] = "iid";
        doc["dist"] = "uniform";
        return doc;
    case ProcessKind::Markov:
        doc["type"] = "markov";
        doc["transition"] = transition_;
        break;
    case ProcessKind::Periodic:
        doc["type"] = "periodic";
        doc["pattern"] = pattern_;
        break;
    }
    doc["values"] = values_;
    return doc;
}

// ------------------------------------------------------------ sampling

void sample_into(const ProcessModel& model, std::size_t n, TrialStream& stream, SamplePath& out)
{
    if (n == 0) {
        throw std::invalid_argument("sample: length must be at least 1");
    }
    out.seed = stream.seed();
    out.trial = stream.trial();
    out.values.resize(n);
    if (!model.discrete()) {
        out.symbols.clear();
        for (auto& v : out.values) {
            v = stream.uniform();
        }
        return;
    }
    out.symbols.resize(n);
    const auto& alphabet = model.alphabet();
    switch (model.kind()) {
    case ProcessKind::Iid:
        for (std::size_t t = 0; t < n; ++t) {
            out.symbols[t] = alphabet[draw(model.probs(), stream.uniform())];
        }
        break;
    case ProcessKind::Markov: {
        std::size_t state = draw(model.stationary(), stream.uniform());
        out.symbols[0] = alphabet[state];
        for (std::size_t t = 1; t < n; ++t) {
            state = draw(model.transition()[state], stream.uniform());
            out.symbols[t] = alphabet[state];
        }
        break;
    }
    case ProcessKind::Periodic: {
        const auto& pattern = model.pattern();
        const std::size_t phase = stream.below(pattern.size());
        for (std::size_t t = 0; t < n; ++t) {
            out.symbols[t] = pattern[(phase + t) % pattern.size()];
        }
        break;
    }
    case ProcessKind::Uniform:
        break;
    }
    for (std::size_t t = 0; t < n; ++t) {
        out.values[t] = model.value_of(out.symbols[t]);
    }
}

SamplePath sample(const ProcessModel& model, std::size_t n, std::uint64_t seed, std::uint64_t trial)
{
    TrialStream stream(seed, trial);
    SamplePath out;
    sample_into(model, n, stream, out);
    return out;
}

} // namespace upcross
