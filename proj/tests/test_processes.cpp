#include "doctest.h"

#include "upcross/bounds.hpp"
#include "upcross/process.hpp"
#include "upcross/rng.hpp"

#include <cmath>
#include <map>

using namespace upcross;
using doctest::Approx;

namespace {

double total_prob(const ProcessModel& m, int n)
{
    const auto& alpha = m.alphabet();
    const std::size_t a = alpha.size();
    std::vector<int> word(static_cast<std::size_t>(n));
    std::size_t count = 1;
    for (int k = 0; k < n; ++k) {
        count *= a;
    }
    double sum = 0;
    for (std::size_t code = 0; code < count; ++code) {
        std::size_t c = code;
        for (int k = 0; k < n; ++k) {
            word[static_cast<std::size_t>(k)] = alpha[c % a];
            c /= a;
        }
        sum += m.word_prob(word);
    }
    return sum;
}

} // namespace

TEST_CASE("rng known answer and streams")
{
    const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
    const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    TrialStream a(5, 0);
    TrialStream b(5, 0);
    TrialStream c(5, 1);
    int same = 0;
    for (int k = 0; k < 100; ++k) {
        const auto x = a();
        CHECK(x == b());
        same += x == c() ? 1 : 0;
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(a.below(7) < 7);
        b.uniform();
        b.below(7);
    }
    CHECK(same == 0);
}

TEST_CASE("stationary distribution")
{
    const auto pi = stationary_dist({{0.9, 0.1}, {0.2, 0.8}});
    CHECK(pi[0] == Approx(2.0 / 3).epsilon(1e-12));
    CHECK(pi[1] == Approx(1.0 / 3).epsilon(1e-12));
    CHECK_THROWS_AS(stationary_dist({{1, 0}, {0, 1}}), ReducibleChainError);
    const auto sym = stationary_dist({{0.3, 0.7}, {0.7, 0.3}});
    CHECK(sym[0] == Approx(0.5));
    CHECK_THROWS_AS(stationary_dist({{0.5, 0.4}, {0.2, 0.8}}), std::invalid_argument);
    CHECK_THROWS_AS(stationary_dist({{1.0}, {0.2, 0.8}}), std::invalid_argument);
    // three states, periodic but irreducible
    const auto cyc = stationary_dist({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    for (double p : cyc) {
        CHECK(p == Approx(1.0 / 3));
    }
}

TEST_CASE("word probabilities")
{
    const auto b = ProcessModel::bernoulli(0.5);
    CHECK(b.word_prob(std::vector<int>{0, 1, 0}) == Approx(0.125));
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    CHECK(mk.word_prob(std::vector<int>{0, 0}) == Approx(0.6));
    CHECK_THROWS(b.word_prob(std::vector<int>{2}));
    CHECK_THROWS(ProcessModel::uniform().word_prob(std::vector<int>{0}));

    const auto per = ProcessModel::periodic({1, 1, 0});
    CHECK(per.word_prob(std::vector<int>{1, 1}) == Approx(1.0 / 3));
    CHECK(per.word_prob(std::vector<int>{0, 0}) == 0.0);

    for (int n = 1; n <= 10; ++n) {
        CHECK(total_prob(b, n) == Approx(1.0).epsilon(1e-10));
        CHECK(total_prob(mk, n) == Approx(1.0).epsilon(1e-10));
        CHECK(total_prob(ProcessModel::bernoulli(0.25), n) == Approx(1.0).epsilon(1e-10));
        CHECK(total_prob(ProcessModel::square_wave(3), n) == Approx(1.0).epsilon(1e-10));
    }
    CHECK(total_prob(mk, 16) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("entropy rate")
{
    CHECK(ProcessModel::bernoulli(0.5).entropy_rate().bits_per_symbol == Approx(1.0));
    CHECK(ProcessModel::bernoulli(0.25).entropy_rate().bits_per_symbol == Approx(0.8112781244591328));
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    CHECK(mk.entropy_rate().bits_per_symbol
          == Approx(2.0 / 3 * binary_entropy(0.1) + 1.0 / 3 * binary_entropy(0.2)));
    const auto per = ProcessModel::square_wave(3).entropy_rate();
    CHECK(per.bits_per_symbol == 0.0);
    CHECK(per.conventional);
}

TEST_CASE("sampling")
{
    const auto b = ProcessModel::bernoulli(0.5);
    const auto p = sample(b, 1000000, 42);
    double mean = 0;
    for (double v : p.values) {
        mean += v;
    }
    mean /= static_cast<double>(p.size());
    CHECK(std::abs(mean - 0.5) < 0.002);
    CHECK(sample(b, 50, 9, 3).symbols == sample(b, 50, 9, 3).symbols);
    CHECK(sample(b, 50, 9, 3).symbols != sample(b, 50, 9, 4).symbols);
    CHECK_THROWS(sample(b, 0, 1));

    // a periodic path of length 36 is a rotation of the doubled pattern
    std::vector<int> pattern(18);
    for (int k = 0; k < 18; ++k) {
        pattern[static_cast<std::size_t>(k)] = k < 9 ? 1 : -1;
    }
    const auto per = ProcessModel::periodic(pattern);
    const auto path = sample(per, 36, 3);
    bool rotation = false;
    for (int shift = 0; shift < 18 && !rotation; ++shift) {
        bool ok = true;
        for (int i = 0; i < 36 && ok; ++i) {
            ok = path.symbols[static_cast<std::size_t>(i)] == pattern[static_cast<std::size_t>((i + shift) % 18)];
        }
        rotation = ok;
    }
    CHECK(rotation);
}

TEST_CASE("markov word frequencies match word probabilities")
{
    const auto mk = ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}});
    const std::size_t n = 1000000;
    const auto path = sample(mk, n + 2, 77);
    std::map<int, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
        counts[path.symbols[i] * 4 + path.symbols[i + 1] * 2 + path.symbols[i + 2]]++;
    }
    for (int code = 0; code < 8; ++code) {
        const std::vector<int> w{code >> 2 & 1, code >> 1 & 1, code & 1};
        const double p = mk.word_prob(w);
        // overlapping windows are dependent; 6 sigma of the iid count is ample
        const double sd = std::sqrt(p * (1 - p) / static_cast<double>(n)) * 3;
        CHECK(std::abs(static_cast<double>(counts[code]) / static_cast<double>(n) - p) < 4 * sd);
    }

    // stationarity: the first symbol over many short paths follows pi
    std::size_t ones_first = 0;
    std::size_t ones_later = 0;
    const std::size_t trials = 200000;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto s = sample(mk, 6, 5, t);
        ones_first += static_cast<std::size_t>(s.symbols[0]);
        ones_later += static_cast<std::size_t>(s.symbols[5]);
    }
    const double sd = std::sqrt((1.0 / 3) * (2.0 / 3) / static_cast<double>(trials));
    CHECK(std::abs(static_cast<double>(ones_first) / trials - 1.0 / 3) < 3 * sd);
    CHECK(std::abs(static_cast<double>(ones_later) / trials - 1.0 / 3) < 3 * sd);
}

TEST_CASE("model json")
{
    const auto mk = ProcessModel::from_json_text(R"({"type":"markov","transition":[[0.9,0.1],[0.2,0.8]]})");
    CHECK(mk.kind() == ProcessKind::Markov);
    CHECK(ProcessModel::from_json_text(R"({"type":"iid","p":0.25})").probs()[1] == Approx(0.25));
    CHECK(ProcessModel::from_json_text(R"({"type":"iid","dist":"uniform"})").kind() == ProcessKind::Uniform);
    CHECK(ProcessModel::from_json_text(R"({"type":"periodic","pattern":[1,1,-1,-1]})").kind() == ProcessKind::Periodic);

    auto message = [](const std::string& text) {
        try {
            ProcessModel::from_json_text(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"type":"markov"})").find("transition") != std::string::npos);
    CHECK(message(R"({"type":"iid","p":"x"})").find("\"p\"") != std::string::npos);
    CHECK(message(R"({"type":"cube"})").find("type") != std::string::npos);
    CHECK(message("{\n\"type\": \"iid\",\n\"p\": 0.5,,\n}").find("line 3") != std::string::npos);
    CHECK(message(R"({"type":"markov","transition":[[1,0],[0,1]]})").find("transition") != std::string::npos);

    const auto round = ProcessModel::from_json(mk.to_json());
    CHECK(round.transition() == mk.transition());
}
