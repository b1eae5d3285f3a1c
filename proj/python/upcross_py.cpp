#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "upcross/bounds.hpp"
#include "upcross/covering.hpp"
#include "upcross/harness.hpp"
#include "upcross/interval.hpp"
#include "upcross/lemma_suite.hpp"
#include "upcross/process.hpp"
#include "upcross/report.hpp"
#include "upcross/statistics.hpp"

namespace py = pybind11;
using namespace upcross;

namespace {

std::vector<IntInterval> to_intervals(const std::vector<std::pair<Index, Index>>& pairs)
{
    std::vector<IntInterval> out;
    out.reserve(pairs.size());
    for (const auto& [l, r] : pairs) {
        out.emplace_back(l, r);
    }
    return out;
}

std::vector<std::pair<Index, Index>> to_pairs(const std::vector<IntInterval>& c)
{
    std::vector<std::pair<Index, Index>> out;
    for (const auto& i : c) {
        out.emplace_back(i.left(), i.right());
    }
    return out;
}

py::dict estimate_dict(const Estimate& e)
{
    py::dict d;
    d["k"] = e.k;
    d["trials"] = e.trials;
    d["hits"] = e.hits;
    d["p_hat"] = e.p_hat;
    d["ci_lo"] = e.ci_lo;
    d["ci_hi"] = e.ci_hi;
    d["bound_ivanov"] = e.bound_ivanov ? py::object(py::float_(*e.bound_ivanov)) : py::object(py::none());
    d["bound_t11"] = e.bound_t11 ? py::object(py::float_(*e.bound_t11)) : py::object(py::none());
    d["rhs_hat"] = e.rhs_hat ? py::object(py::float_(*e.rhs_hat)) : py::object(py::none());
    return d;
}

} // namespace

PYBIND11_MODULE(_upcross, m)
{
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    // intervals are (left, right) tuples on the Python side
    m.def("union_size", [](const std::vector<std::pair<Index, Index>>& c) { return union_size(to_intervals(c)); });
    m.def("blowup", [](Index l, Index r, double eps) {
        const IntInterval b = blowup(IntInterval(l, r), eps);
        return std::make_pair(b.left(), b.right());
    });
    m.def("vitali_select",
          [](const std::vector<std::pair<Index, Index>>& c) { return to_pairs(vitali_select(to_intervals(c))); });
    m.def("max_disjoint_coverage", [](std::pair<Index, Index> i, const std::vector<std::pair<Index, Index>>& c) {
        const Coverage cov = max_disjoint_coverage(IntInterval(i.first, i.second), to_intervals(c));
        return std::make_pair(cov.covered, to_pairs(cov.witness));
    });
    m.def("is_delta_fill", [](std::pair<Index, Index> i, const std::vector<std::pair<Index, Index>>& c, double delta) {
        return is_delta_fill(IntInterval(i.first, i.second), to_intervals(c), delta);
    });

    py::class_<ProcessModel>(m, "ProcessModel")
        .def_static("bernoulli", &ProcessModel::bernoulli)
        .def_static("markov", &ProcessModel::markov)
        .def_static("periodic", &ProcessModel::periodic)
        .def_static("square_wave", &ProcessModel::square_wave)
        .def_static("uniform", &ProcessModel::uniform)
        .def_static("from_json", [](const std::string& text) { return ProcessModel::from_json_text(text); })
        .def("to_json", [](const ProcessModel& p) { return p.to_json().dump(); })
        .def("word_prob", [](const ProcessModel& p, const std::vector<int>& w) { return p.word_prob(w); })
        .def("entropy_rate", [](const ProcessModel& p) { return p.entropy_rate().bits_per_symbol; })
        .def_property_readonly("stationary", &ProcessModel::stationary)
        .def_property_readonly("alphabet", &ProcessModel::alphabet);

    m.def("stationary_dist", &stationary_dist);
    m.def(
        "sample",
        [](const ProcessModel& model, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
            const SamplePath p = sample(model, n, seed, trial);
            return std::make_pair(p.symbols, p.values);
        },
        py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("trial") = 0);

    m.def("count_upcrossings",
          [](const std::vector<double>& x, double s, double t) { return count_upcrossings(x, CrossingBand(s, t)); });
    m.def("ergodic_average", [](const std::vector<double>& x, Index i, Index j) { return ergodic_average(x, i, j); });
    m.def("info_value", [](const ProcessModel& model, const std::vector<int>& w, Index i, Index j) {
        return info_value(model, w, i, j);
    });
    m.def("lz78_rate", [](const std::vector<int>& w, Index i, Index j) { return lz78_rate(w, i, j); });
    m.def("lz78_phrase_count", [](const std::vector<int>& w) { return lz78_phrase_count(w); });

    m.def("binary_entropy", &binary_entropy);
    m.def("q_of_delta", &q_of_delta);
    m.def("t11_bound", [](std::int64_t k, double delta) { return t11_bound(k, delta).bound; });
    m.def("ivanov_bound", &ivanov_bound);
    m.def("t12_delta", &t12_delta);
    m.def("smb_count_oracle", &smb_count_oracle);
    m.def("smb_count_bound", &smb_count_bound);

    m.def("wilson_interval", &wilson_interval, py::arg("hits"), py::arg("trials"), py::arg("z") = 1.959963984540054);
    m.def(
        "prop21_exact",
        [](int n, double delta, int mult, bool boundary) {
            const Prop21Result r = prop21_exact(n, delta, mult, boundary);
            return std::make_pair(r.hits, r.phases);
        },
        py::arg("n"), py::arg("delta"), py::arg("horizon_mult") = 4, py::arg("include_boundary") = false);

    m.def(
        "run_experiment",
        [](const std::string& model_json, const std::string& stat, double s, double t, double delta, int kmax,
           std::size_t horizon, std::size_t trials, std::uint64_t seed, bool rhs) {
            ExperimentConfig cfg;
            cfg.model_doc = nlohmann::json::parse(model_json);
            cfg.model = ProcessModel::from_json(cfg.model_doc);
            cfg.matrices = matrices_from_json(cfg.model_doc);
            cfg.stat = stat_kind_from_string(stat);
            cfg.s = s;
            cfg.t = t;
            cfg.delta = delta;
            cfg.kmax = kmax;
            cfg.horizon = horizon;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.rhs = rhs;
            std::vector<Estimate> est;
            {
                py::gil_scoped_release release;
                est = run_upcrossing_experiment(cfg);
            }
            py::list out;
            for (const auto& e : est) {
                out.append(estimate_dict(e));
            }
            return out;
        },
        py::arg("model_json"), py::arg("stat"), py::arg("s"), py::arg("t"), py::arg("delta"), py::arg("kmax"),
        py::arg("horizon"), py::arg("trials"), py::arg("seed"), py::arg("rhs") = false);

    m.def("run_suites_json", [](std::uint64_t trials, std::uint64_t seed, const std::vector<double>& eps) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : run_all_suites(trials, seed, eps)) {
            out.push_back(r.to_json());
        }
        return out.dump();
    });
}
