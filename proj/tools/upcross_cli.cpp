// Command-line front end for the covering suites, the upcrossing
// experiments, the square-wave counterexample and the word-count bound.

#include "CLI11.hpp"

#include "upcross/bounds.hpp"
#include "upcross/harness.hpp"
#include "upcross/lemma_suite.hpp"
#include "upcross/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace upcross;

namespace {

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(std::stod(item));
        }
    }
    if (out.empty()) {
        throw CLI::ValidationError("--eps", "empty list");
    }
    return out;
}

int run_lemmas(std::uint64_t trials, std::uint64_t seed, const std::string& eps_text, const std::string& out_path)
{
    const auto eps = parse_list(eps_text);
    const auto results = run_all_suites(trials, seed, eps);
    bool ok = true;
    nlohmann::json doc;
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["eps"] = eps;
    doc["suites"] = nlohmann::json::array();
    for (const auto& r : results) {
        std::printf("%-16s %s  instances=%llu failures=%llu\n", r.name.c_str(), r.pass() ? "PASS" : "FAIL",
                    static_cast<unsigned long long>(r.instances), static_cast<unsigned long long>(r.failures));
        if (!r.pass()) {
            std::printf("    first failure: %s\n", r.first_failure.c_str());
        }
        ok = ok && r.pass();
        doc["suites"].push_back(r.to_json());
    }
    doc["pass"] = ok;
    write_text_file(out_path, doc.dump(2) + "\n");
    return ok ? 0 : 1;
}

struct VerifyArgs {
    std::string model;
    std::string stat = "avg";
    double s = 0.4;
    double t = 0.6;
    double delta = 0.1;
    int kmax = 6;
    std::size_t horizon = 2000;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string csv;
    std::string svg;
    std::string json;
    bool rhs = false;
    unsigned workers = 1;
};

int run_verify(const VerifyArgs& a)
{
    ExperimentConfig cfg;
    cfg.model_doc = nlohmann::json::parse(read_text_file(a.model), nullptr, false);
    cfg.model = ProcessModel::from_json_file(a.model);
    cfg.matrices = matrices_from_json(cfg.model_doc);
    cfg.stat = stat_kind_from_string(a.stat);
    cfg.s = a.s;
    cfg.t = a.t;
    cfg.delta = a.delta;
    cfg.kmax = a.kmax;
    cfg.horizon = a.horizon;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    cfg.rhs = a.rhs;

    const auto est = run_upcrossing_experiment(cfg);

    bool ok = true;
    std::printf("%4s %10s %12s %12s %12s %12s %12s\n", "k", "hits", "p_hat", "p+3sd", "ivanov", "t11", "rhs_lb");
    for (std::size_t i = 0; i < est.size(); ++i) {
        const auto& e = est[i];
        const double upper = e.p_hat + 3.0 * binomial_sigma(e.p_hat, e.trials);
        auto opt = [](const std::optional<double>& x) { return x ? *x : NAN; };
        std::printf("%4d %10llu %12.6g %12.6g %12.6g %12.6g %12.6g\n", e.k, static_cast<unsigned long long>(e.hits),
                    e.p_hat, upper, opt(e.bound_ivanov), opt(e.bound_t11), opt(e.rhs_hat));
        if (i > 0 && e.p_hat > est[i - 1].p_hat) {
            std::printf("  FAIL: p_hat increases at k=%d\n", e.k);
            ok = false;
        }
        if (e.bound_ivanov && upper > *e.bound_ivanov) {
            std::printf("  FAIL: p_hat + 3sd exceeds (s/t)^k at k=%d\n", e.k);
            ok = false;
        }
        if (e.bound_t11 && e.p_hat > std::min(1.0, *e.bound_t11 + e.rhs_hat.value_or(0.0))) {
            std::printf("  FAIL: p_hat exceeds the explicit bound at k=%d\n", e.k);
            ok = false;
        }
    }
    if (a.rhs) {
        std::printf("rhs_lb is the frequency of the right-hand event truncated at n <= %zu (a lower bound)\n",
                    cfg.horizon);
    }
    try {
        const DecayFit fit = fit_decay(est);
        std::printf("decay fit: log2 p ~ %.4f + %.4f k\n", fit.intercept, fit.slope);
    } catch (const std::invalid_argument&) {
        std::printf("decay fit: fewer than two positive estimates\n");
    }

    write_text_file(a.csv, estimates_to_csv(est));
    std::string json_path = a.json;
    if (json_path.empty()) {
        json_path = std::filesystem::path(a.csv).replace_extension(".json").string();
    }
    write_text_file(json_path, experiment_report(cfg, est).dump(2) + "\n");
    if (!a.svg.empty()) {
        write_text_file(a.svg, estimates_to_svg(est));
    }
    std::printf("config hash %s; wrote %s and %s\n", config_hash(cfg).c_str(), a.csv.c_str(), json_path.c_str());
    std::printf("%s\n", ok ? "all asserted inequalities hold" : "some asserted inequality failed");
    return ok ? 0 : 1;
}

int run_counterexample(int n, double delta, int mult)
{
    const Prop21Result r = prop21_exact(n, delta, mult, false);
    const Prop21Result b = prop21_exact(n, delta, mult, true);
    const int lead = prop21_leading_ones_phases(n);
    std::printf("square wave n=%d, delta=%g, k=%lld, scan n' in (k, %dk]\n", n, delta, static_cast<long long>(r.k),
                mult);
    std::printf("exact p_k = %d/%d = %.6f\n", r.hits, r.phases, r.p_exact);
    std::printf("with n' = k allowed: %d/%d = %.6f\n", b.hits, b.phases, b.p_exact);
    std::printf("phases whose first 2n/3 symbols are 1: %d/%d = %.6f\n", lead, r.phases,
                static_cast<double>(lead) / r.phases);
    std::printf("phase hits:");
    for (int p = 0; p < r.phases; ++p) {
        if (r.phase_hit[static_cast<std::size_t>(p)]) {
            std::printf(" %d(n'=%lld)", p, static_cast<long long>(r.witness_n[static_cast<std::size_t>(p)]));
        }
    }
    std::printf("\n");
    const bool ok = 6 * r.hits >= r.phases;
    std::printf("%s: p_k %s 1/6\n", ok ? "PASS" : "FAIL", ok ? ">=" : "<");
    return ok ? 0 : 1;
}

int run_smb_count(const std::string& model_path, int n, double s, double delta)
{
    const ProcessModel model = ProcessModel::from_json_file(model_path);
    const auto count = smb_count_oracle(model, n, s, delta);
    const double bound = smb_count_bound(n, s, delta);
    const bool ok = static_cast<double>(count) <= bound;
    std::printf("n=%d s=%g delta=%g: fillable words %llu, bound %.17g\n", n, s, delta,
                static_cast<unsigned long long>(count), bound);
    std::printf("%s\n", ok ? "PASS: count <= bound" : "FAIL: count exceeds bound");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"upcrossing inequalities: covering lemmas and Monte Carlo checks"};
    app.require_subcommand(1);

    std::uint64_t l_trials = 1000;
    std::uint64_t l_seed = 1;
    std::string l_eps = "0.1,0.25,0.5";
    std::string l_out;
    auto* lemmas = app.add_subcommand("lemmas", "run the covering property suites");
    lemmas->add_option("--trials", l_trials, "instances per suite and eps")->check(CLI::PositiveNumber);
    lemmas->add_option("--seed", l_seed, "master seed");
    lemmas->add_option("--eps", l_eps, "comma-separated eps values in (0,1)");
    lemmas->add_option("--out", l_out, "JSON report path")->required();

    VerifyArgs v;
    auto* verify = app.add_subcommand("verify", "estimate upcrossing tails and compare with bounds");
    verify->add_option("--model", v.model, "process model JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--stat", v.stat, "statistic")
        ->required()
        ->check(CLI::IsMember({"avg", "sqrt-avg", "subadd", "info", "lz78"}));
    verify->add_option("--s", v.s, "lower level of the band")->required();
    verify->add_option("--t", v.t, "upper level of the band")->required();
    verify->add_option("--delta", v.delta, "fill tolerance")->required();
    verify->add_option("--kmax", v.kmax, "largest k")->required()->check(CLI::PositiveNumber);
    verify->add_option("--horizon", v.horizon, "path length N")->required()->check(CLI::PositiveNumber);
    verify->add_option("--trials", v.trials, "number of trials")->required()->check(CLI::PositiveNumber);
    verify->add_option("--seed", v.seed, "master seed")->required();
    verify->add_option("--csv", v.csv, "CSV output path")->required();
    verify->add_option("--svg", v.svg, "optional SVG plot path");
    verify->add_option("--json", v.json, "JSON report path (default: CSV path with .json)");
    verify->add_option("--workers", v.workers, "worker threads")->check(CLI::PositiveNumber);
    verify->add_flag("--rhs", v.rhs, "also estimate the truncated right-hand event");

    int c_n = 9;
    double c_delta = 0.2;
    int c_mult = 4;
    auto* cex = app.add_subcommand("counterexample", "exact square-wave enumeration");
    cex->add_option("--n", c_n, "half period (multiple of 3)")->required();
    cex->add_option("--delta", c_delta, "fill tolerance")->required();
    cex->add_option("--horizon-mult", c_mult, "scan n' up to this multiple of k");

    std::string m_model;
    int m_n = 10;
    double m_s = 0.5;
    double m_delta = 0.1;
    auto* smb = app.add_subcommand("smb-count", "exact fillable-word count against the counting bound");
    smb->add_option("--model", m_model, "two-symbol process model JSON")->required()->check(CLI::ExistingFile);
    smb->add_option("--n", m_n, "word length (<= 20)")->required();
    smb->add_option("--s", m_s, "information level")->required();
    smb->add_option("--delta", m_delta, "fill tolerance")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lemmas) {
            return run_lemmas(l_trials, l_seed, l_eps, l_out);
        }
        if (*verify) {
            return run_verify(v);
        }
        if (*cex) {
            return run_counterexample(c_n, c_delta, c_mult);
        }
        if (*smb) {
            return run_smb_count(m_model, m_n, m_s, m_delta);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
