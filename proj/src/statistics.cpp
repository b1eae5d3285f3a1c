#include "upcross/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace upcross {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_window(std::size_t len, Index i, Index j)
{
    if (i < 1 || j < i || static_cast<std::size_t>(j) > len) {
        throw std::out_of_range("window [" + std::to_string(i) + ";" + std::to_string(j)
                                + "] outside path of length " + std::to_string(len));
    }
}

Index isqrt(Index v)
{
    auto r = static_cast<Index>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) {
        --r;
    }
    while ((r + 1) * (r + 1) <= v) {
        ++r;
    }
    return r;
}

/// Square matrices flattened row-major, sharing one dimension.
struct MatrixSet {
    std::size_t dim = 0;
    std::vector<std::vector<double>> flat;

    explicit MatrixSet(const std::vector<Matrix>& ms)
    {
        if (ms.empty()) {
            throw std::invalid_argument("subadditive statistic: no matrices given");
        }
        dim = ms.front().size();
        if (dim == 0) {
            throw std::invalid_argument("subadditive statistic: empty matrix");
        }
        for (const auto& m : ms) {
            if (m.size() != dim) {
                throw std::invalid_argument("subadditive statistic: matrices have mismatched sizes");
            }
            std::vector<double> f;
            for (const auto& row : m) {
                if (row.size() != dim) {
                    throw std::invalid_argument("subadditive statistic: matrix is not square");
                }
                f.insert(f.end(), row.begin(), row.end());
            }
            flat.push_back(std::move(f));
        }
    }

    const std::vector<double>& of(int symbol) const
    {
        if (symbol < 0 || static_cast<std::size_t>(symbol) >= flat.size()) {
            throw std::invalid_argument("subadditive statistic: no matrix for symbol " + std::to_string(symbol));
        }
        return flat[static_cast<std::size_t>(symbol)];
    }

    double norm(const std::vector<double>& m) const
    {
        double best = 0;
        for (std::size_t r = 0; r < dim; ++r) {
            double row = 0;
            for (std::size_t c = 0; c < dim; ++c) {
                row += std::abs(m[r * dim + c]);
            }
            best = std::max(best, row);
        }
        return best;
    }

    /// acc <- acc * rhs, then rescale acc to unit norm and add log2 of the
    /// factor to log_scale.
    void multiply_right(std::vector<double>& acc, const std::vector<double>& rhs, double& log_scale,
                        std::vector<double>& tmp) const
    {
        tmp.assign(dim * dim, 0.0);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t k = 0; k < dim; ++k) {
                const double a = acc[r * dim + k];
                if (a == 0.0) {
                    continue;
                }
                for (std::size_t c = 0; c < dim; ++c) {
                    tmp[r * dim + c] += a * rhs[k * dim + c];
                }
            }
        }
        acc.swap(tmp);
        normalize(acc, log_scale);
    }

    void normalize(std::vector<double>& acc, double& log_scale) const
    {
        const double n = norm(acc);
        if (n == 0.0) {
            log_scale = -std::numeric_limits<double>::infinity();
            return;
        }
        for (double& x : acc) {
            x /= n;
        }
        log_scale += std::log2(n);
    }
};

void require_binary(std::span<const int> symbols)
{
    for (int s : symbols) {
        if (s != 0 && s != 1) {
            throw std::invalid_argument("lz78: window contains non-binary symbol " + std::to_string(s));
        }
    }
}

/// Incremental LZ78 parser over {0,1}.
struct Lz78Parser {
    std::vector<std::array<int, 2>> trie{{-1, -1}};
    int node = 0;
    std::size_t phrases = 0;

    void push(int bit)
    {
        const int next = trie[static_cast<std::size_t>(node)][static_cast<std::size_t>(bit)];
        if (next >= 0) {
            node = next;
            return;
        }
        trie[static_cast<std::size_t>(node)][static_cast<std::size_t>(bit)] = static_cast<int>(trie.size());
        trie.push_back({-1, -1});
        ++phrases;
        node = 0;
    }

    std::size_t count() const { return phrases + (node != 0 ? 1 : 0); }
};

double lz_rate_from_count(std::size_t c, std::size_t len)
{
    const double cc = static_cast<double>(c);
    return cc * (std::log2(cc) + 1.0) / static_cast<double>(len);
}

/// log2 P(x_a..x_b) for iid and Markov models via prefix sums.
struct InfoPrefix {
    std::vector<double> head;   // log2 of the marginal of x_t
    std::vector<double> cumul;  // cumul[t] = sum of log2 conditional terms for positions 2..t (1-based)
    bool markov = false;

    InfoPrefix(const ProcessModel& model, std::span<const int> symbols)
    {
        const std::size_t n = symbols.size();
        head.resize(n + 1, 0.0);
        cumul.assign(n + 1, 0.0);
        markov = model.kind() == ProcessKind::Markov;
        const auto& alpha = model.alphabet();
        auto idx = [&](int s) {
            const auto it = std::lower_bound(alpha.begin(), alpha.end(), s);
            if (it == alpha.end() || *it != s) {
                throw std::invalid_argument("info statistic: symbol outside model alphabet");
            }
            return static_cast<std::size_t>(it - alpha.begin());
        };
        for (std::size_t t = 1; t <= n; ++t) {
            const std::size_t cur = idx(symbols[t - 1]);
            if (markov) {
                head[t] = std::log2(model.stationary()[cur]);
                const double step = t >= 2 ? std::log2(model.transition()[idx(symbols[t - 2])][cur]) : 0.0;
                cumul[t] = cumul[t - 1] + step;
            } else {
                head[t] = std::log2(model.probs()[cur]);
                cumul[t] = cumul[t - 1] + head[t];
            }
        }
    }

    double log_prob(Index a, Index b) const
    {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (markov) {
            return head[ua] + cumul[ub] - cumul[ua];
        }
        return cumul[ub] - cumul[ua - 1];
    }
};

double info_from_log_prob(double lp, Index len)
{
    if (!(lp > -std::numeric_limits<double>::infinity())) {
        throw std::runtime_error("info statistic: impossible sample (word has probability 0 under the model)");
    }
    return -lp / static_cast<double>(len);
}

} // namespace

CrossingBand::CrossingBand(double s_, double t_) : s(s_), t(t_)
{
    if (!(s < t)) {
        throw std::invalid_argument("CrossingBand: need s < t");
    }
}

double ergodic_average(std::span<const double> x, Index i, Index j)
{
    check_window(x.size(), i, j);
    double sum = 0;
    for (Index k = i; k <= j; ++k) {
        sum += x[static_cast<std::size_t>(k - 1)];
    }
    return sum / static_cast<double>(j - i + 1);
}

double sqrt_window_average(std::span<const double> x, Index i, Index j)
{
    check_window(x.size(), i, j);
    if (j == i) {
        throw std::invalid_argument("sqrt_window_average: undefined for a single-point window");
    }
    const Index w = isqrt(j - i);
    double sum = 0;
    for (Index k = i; k < i + w; ++k) {
        sum += x[static_cast<std::size_t>(k - 1)];
    }
    return sum / static_cast<double>(w);
}

SubaddValue subadd_value(const std::vector<Matrix>& matrices, std::span<const int> symbols, Index i, Index j)
{
    check_window(symbols.size(), i, j);
    const MatrixSet set(matrices);
    std::vector<double> acc = set.of(symbols[static_cast<std::size_t>(i - 1)]);
    std::vector<double> tmp;
    double log_scale = 0;
    set.normalize(acc, log_scale);
    for (Index k = i + 1; k <= j; ++k) {
        set.multiply_right(acc, set.of(symbols[static_cast<std::size_t>(k - 1)]), log_scale, tmp);
    }
    return {log_scale, log_scale / static_cast<double>(j - i + 1)};
}

double info_value(const ProcessModel& model, std::span<const int> symbols, Index i, Index j)
{
    check_window(symbols.size(), i, j);
    const auto word = symbols.subspan(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - i + 1));
    if (model.kind() != ProcessKind::Periodic) {
        // log domain: long words underflow as plain products
        return info_from_log_prob(InfoPrefix(model, word).log_prob(1, j - i + 1), j - i + 1);
    }
    const double p = model.word_prob(word);
    return info_from_log_prob(p > 0.0 ? std::log2(p) : -std::numeric_limits<double>::infinity(), j - i + 1);
}

std::size_t lz78_phrase_count(std::span<const int> symbols)
{
    require_binary(symbols);
    Lz78Parser parser;
    for (int s : symbols) {
        parser.push(s);
    }
    return parser.count();
}

double lz78_rate(std::span<const int> symbols, Index i, Index j)
{
    if (symbols.empty() || j < i) {
        throw std::invalid_argument("lz78_rate: empty window");
    }
    check_window(symbols.size(), i, j);
    const auto word = symbols.subspan(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - i + 1));
    return lz_rate_from_count(lz78_phrase_count(word), word.size());
}

std::size_t count_upcrossings(std::span<const double> seq, const CrossingBand& band)
{
    std::size_t count = 0;
    bool below = false;
    for (double x : seq) {
        if (!below) {
            below = x < band.s;
        } else if (x > band.t) {
            ++count;
            below = false;
        }
    }
    return count;
}

// ----------------------------------------------------------- StatArray

std::string to_string(StatKind k)
{
    switch (k) {
    case StatKind::ErgodicAverage:
        return "avg";
    case StatKind::SqrtWindowAverage:
        return "sqrt-avg";
    case StatKind::SubadditiveNorm:
        return "subadd";
    case StatKind::InfoRate:
        return "info";
    case StatKind::Lz78Rate:
        return "lz78";
    }
    return "?";
}

StatKind stat_kind_from_string(const std::string& name)
{
    for (auto k : {StatKind::ErgodicAverage, StatKind::SqrtWindowAverage, StatKind::SubadditiveNorm,
                   StatKind::InfoRate, StatKind::Lz78Rate}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown statistic \"" + name + "\" (expected avg|sqrt-avg|subadd|info|lz78)");
}

StatArray StatArray::ergodic_average()
{
    return {};
}

StatArray StatArray::sqrt_window_average()
{
    StatArray s;
    s.kind_ = StatKind::SqrtWindowAverage;
    return s;
}

StatArray StatArray::subadditive_norm(std::vector<Matrix> matrices)
{
    const MatrixSet check(matrices);
    StatArray s;
    s.kind_ = StatKind::SubadditiveNorm;
    s.matrices_ = std::move(matrices);
    return s;
}

StatArray StatArray::info_rate(ProcessModel model)
{
    if (!model.discrete()) {
        throw std::invalid_argument("info statistic needs a discrete model");
    }
    StatArray s;
    s.kind_ = StatKind::InfoRate;
    s.model_ = std::make_shared<const ProcessModel>(std::move(model));
    return s;
}

StatArray StatArray::lz78_rate()
{
    StatArray s;
    s.kind_ = StatKind::Lz78Rate;
    return s;
}

double StatArray::single_step_max() const
{
    if (kind_ != StatKind::SubadditiveNorm) {
        throw std::logic_error("single_step_max: only defined for the subadditive statistic");
    }
    const MatrixSet set(matrices_);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : set.flat) {
        best = std::max(best, std::log2(set.norm(m)));
    }
    return best;
}

double StatArray::value(const SamplePath& path, Index i, Index j) const
{
    switch (kind_) {
    case StatKind::ErgodicAverage:
        return upcross::ergodic_average(path.values, i, j);
    case StatKind::SqrtWindowAverage:
        check_window(path.size(), i, j);
        return j == i ? kNaN : upcross::sqrt_window_average(path.values, i, j);
    case StatKind::SubadditiveNorm:
        return subadd_value(matrices_, path.symbols, i, j).normalized;
    case StatKind::InfoRate:
        return info_value(*model_, path.symbols, i, j);
    case StatKind::Lz78Rate:
        return upcross::lz78_rate(path.symbols, i, j);
    }
    return kNaN;
}

std::vector<double> StatArray::prefix_series(const SamplePath& path, std::size_t n_max) const
{
    if (n_max > path.size()) {
        throw std::out_of_range("prefix_series: n_max exceeds path length");
    }
    std::vector<double> out(n_max);
    switch (kind_) {
    case StatKind::ErgodicAverage: {
        double sum = 0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            sum += path.values[n - 1];
            out[n - 1] = sum / static_cast<double>(n);
        }
        break;
    }
    case StatKind::SqrtWindowAverage: {
        std::vector<double> prefix(n_max + 1, 0.0);
        for (std::size_t n = 1; n <= n_max; ++n) {
            prefix[n] = prefix[n - 1] + path.values[n - 1];
        }
        for (std::size_t n = 1; n <= n_max; ++n) {
            const Index w = isqrt(static_cast<Index>(n) - 1);
            out[n - 1] = w == 0 ? kNaN : prefix[static_cast<std::size_t>(w)] / static_cast<double>(w);
        }
        break;
    }
    case StatKind::SubadditiveNorm: {
        if (n_max == 0) {
            break;
        }
        const MatrixSet set(matrices_);
        std::vector<double> acc = set.of(path.symbols[0]);
        std::vector<double> tmp;
        double log_scale = 0;
        set.normalize(acc, log_scale);
        out[0] = log_scale;
        for (std::size_t n = 2; n <= n_max; ++n) {
            set.multiply_right(acc, set.of(path.symbols[n - 1]), log_scale, tmp);
            out[n - 1] = log_scale / static_cast<double>(n);
        }
        break;
    }
    case StatKind::InfoRate: {
        if (model_->kind() == ProcessKind::Periodic) {
            for (std::size_t n = 1; n <= n_max; ++n) {
                out[n - 1] = info_value(*model_, path.symbols, 1, static_cast<Index>(n));
            }
            break;
        }
        const InfoPrefix info(*model_, std::span<const int>(path.symbols).first(n_max));
        for (std::size_t n = 1; n <= n_max; ++n) {
            out[n - 1] = info_from_log_prob(info.log_prob(1, static_cast<Index>(n)), static_cast<Index>(n));
        }
        break;
    }
    case StatKind::Lz78Rate: {
        require_binary(std::span<const int>(path.symbols).first(n_max));
        Lz78Parser parser;
        for (std::size_t n = 1; n <= n_max; ++n) {
            parser.push(path.symbols[n - 1]);
            out[n - 1] = lz_rate_from_count(parser.count(), n);
        }
        break;
    }
    }
    return out;
}

// --------------------------------------------------------- WindowTable

struct WindowTable::State {
    StatKind kind;
    const SamplePath* path;
    Index b = 0;
    std::vector<double> prefix;  // value prefix sums

    // subadditive
    std::unique_ptr<MatrixSet> mats;
    std::vector<std::vector<double>> products;
    std::vector<double> scales;
    std::vector<double> tmp;

    // information
    std::unique_ptr<InfoPrefix> info;
    std::shared_ptr<const ProcessModel> model;
    std::vector<std::vector<std::uint32_t>> alive;  // periodic: matching phases per left end

    // lz78
    std::vector<Lz78Parser> parsers;

    std::vector<double> cached;  // S_{a,b} for the current b, where stateful
};

WindowTable::WindowTable(const StatArray& stat, const SamplePath& path) : state_(std::make_unique<State>())
{
    auto& st = *state_;
    st.kind = stat.kind_;
    st.path = &path;
    const std::size_t n = path.size();
    switch (st.kind) {
    case StatKind::ErgodicAverage:
    case StatKind::SqrtWindowAverage:
        st.prefix.assign(n + 1, 0.0);
        for (std::size_t t = 1; t <= n; ++t) {
            st.prefix[t] = st.prefix[t - 1] + path.values[t - 1];
        }
        break;
    case StatKind::SubadditiveNorm:
        st.mats = std::make_unique<MatrixSet>(stat.matrices_);
        break;
    case StatKind::InfoRate:
        st.model = stat.model_;
        if (st.model->kind() != ProcessKind::Periodic) {
            st.info = std::make_unique<InfoPrefix>(*st.model, path.symbols);
        }
        break;
    case StatKind::Lz78Rate:
        require_binary(path.symbols);
        break;
    }
}

WindowTable::~WindowTable() = default;

Index WindowTable::right() const
{
    return state_->b;
}

void WindowTable::advance()
{
    auto& st = *state_;
    if (static_cast<std::size_t>(st.b) >= st.path->size()) {
        throw std::out_of_range("WindowTable: advanced past the end of the path");
    }
    ++st.b;
    const auto ub = static_cast<std::size_t>(st.b);
    const int sym = st.path->symbols.empty() ? 0 : st.path->symbols[ub - 1];
    switch (st.kind) {
    case StatKind::ErgodicAverage:
    case StatKind::SqrtWindowAverage:
        return;
    case StatKind::SubadditiveNorm: {
        const auto& m = st.mats->of(sym);
        for (std::size_t a = 0; a + 1 < ub; ++a) {
            if (st.scales[a] == -std::numeric_limits<double>::infinity()) {
                continue;
            }
            st.mats->multiply_right(st.products[a], m, st.scales[a], st.tmp);
        }
        st.products.push_back(m);
        st.scales.push_back(0.0);
        st.mats->normalize(st.products.back(), st.scales.back());
        st.cached.resize(ub);
        for (std::size_t a = 0; a < ub; ++a) {
            st.cached[a] = st.scales[a] / static_cast<double>(ub - a);
        }
        return;
    }
    case StatKind::InfoRate:
        if (st.info) {
            return;
        }
        {
            const auto& pattern = st.model->pattern();
            const auto period = static_cast<std::uint32_t>(pattern.size());
            std::vector<std::uint32_t> all(period);
            for (std::uint32_t p = 0; p < period; ++p) {
                all[p] = p;
            }
            st.alive.push_back(std::move(all));
            st.cached.resize(ub);
            for (std::size_t a = 0; a < ub; ++a) {
                auto& phases = st.alive[a];
                const std::size_t offset = ub - 1 - a;
                std::erase_if(phases, [&](std::uint32_t p) { return pattern[(p + offset) % period] != sym; });
                const double prob = static_cast<double>(phases.size()) / static_cast<double>(period);
                st.cached[a] = info_from_log_prob(prob > 0 ? std::log2(prob) : -INFINITY,
                                                  static_cast<Index>(ub - a));
            }
        }
        return;
    case StatKind::Lz78Rate:
        st.parsers.emplace_back();
        st.cached.resize(ub);
        for (std::size_t a = 0; a < ub; ++a) {
            st.parsers[a].push(sym);
            st.cached[a] = lz_rate_from_count(st.parsers[a].count(), ub - a);
        }
        return;
    }
}

double WindowTable::at(Index a) const
{
    const auto& st = *state_;
    if (a < 1 || a > st.b) {
        throw std::out_of_range("WindowTable: left end outside [1; right]");
    }
    switch (st.kind) {
    case StatKind::ErgodicAverage:
        return (st.prefix[static_cast<std::size_t>(st.b)] - st.prefix[static_cast<std::size_t>(a - 1)])
               / static_cast<double>(st.b - a + 1);
    case StatKind::SqrtWindowAverage: {
        const Index w = isqrt(st.b - a);
        if (w == 0) {
            return kNaN;
        }
        return (st.prefix[static_cast<std::size_t>(a - 1 + w)] - st.prefix[static_cast<std::size_t>(a - 1)])
               / static_cast<double>(w);
    }
    case StatKind::InfoRate:
        if (st.info) {
            return info_from_log_prob(st.info->log_prob(a, st.b), st.b - a + 1);
        }
        return st.cached[static_cast<std::size_t>(a - 1)];
    case StatKind::SubadditiveNorm:
    case StatKind::Lz78Rate:
        return st.cached[static_cast<std::size_t>(a - 1)];
    }
    return kNaN;
}

// -------------------------------------------------------------- events

BEvent latest_b_event(const StatArray& stat, const SamplePath& path, const CrossingBand& band, double delta,
                      std::size_t n_max)
{
    if (!(delta > 0.0)) {
        throw std::invalid_argument("b_event: delta must be positive");
    }
    if (n_max > path.size()) {
        throw std::out_of_range("b_event: n_max exceeds path length");
    }
    BEvent out;
    const std::vector<double> series = stat.prefix_series(path, n_max);
    if (std::none_of(series.begin(), series.end(), [&](double x) { return x > band.t; })) {
        return out;
    }

    // best[b]: maximum disjoint coverage of [1; b] by windows with S < s.
    std::vector<Index> best(n_max + 1, 0);
    std::vector<Index> from(n_max + 1, 0);
    WindowTable table(stat, path);
    for (std::size_t b = 1; b <= n_max; ++b) {
        table.advance();
        best[b] = best[b - 1];
        for (std::size_t a = 1; a <= b; ++a) {
            if (table.at(static_cast<Index>(a)) < band.s) {
                const Index cand = best[a - 1] + static_cast<Index>(b - a + 1);
                if (cand > best[b]) {
                    best[b] = cand;
                    from[b] = static_cast<Index>(a);
                }
            }
        }
        const auto nb = static_cast<Index>(b);
        if (series[b - 1] > band.t && fill_threshold_met(nb - best[b], nb, delta)) {
            out.holds = true;
            out.n = nb;
        }
    }
    if (out.holds) {
        for (Index b = out.n; b > 0;) {
            if (best[static_cast<std::size_t>(b)] == best[static_cast<std::size_t>(b - 1)]) {
                --b;
            } else {
                const Index a = from[static_cast<std::size_t>(b)];
                out.filling.emplace_back(a, b);
                b = a - 1;
            }
        }
        std::reverse(out.filling.begin(), out.filling.end());
    }
    return out;
}

BEvent b_event_holds(const SamplePath& path, const StatArray& stat, const CrossingBand& band, double delta,
                     std::size_t k, std::size_t n_max)
{
    if (!(delta > 0.0)) {
        throw std::invalid_argument("b_event_holds: delta must be positive");
    }
    if (!(k < n_max) || n_max > path.size()) {
        throw std::invalid_argument("b_event_holds: need k < n_max <= path length");
    }
    BEvent ev = latest_b_event(stat, path, band, delta, n_max);
    if (ev.holds && ev.n <= static_cast<Index>(k)) {
        return {};
    }
    return ev;
}

} // namespace upcross
