#include "upcross/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace upcross {

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const ExperimentConfig& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.to_json().dump())));
    return buf;
}

namespace {

const char* const kHeader = "k,trials,hits,p_hat,ci_lo,ci_hi,bound_ivanov,bound_t11,rhs_hat";

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(const std::optional<double>& x)
{
    return x ? fmt(*x) : std::string();
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_opt(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    return std::stod(s);
}

} // namespace

std::string estimates_to_csv(const std::vector<Estimate>& estimates)
{
    std::string out = std::string(kHeader) + "\n";
    for (const auto& e : estimates) {
        out += std::to_string(e.k) + "," + std::to_string(e.trials) + "," + std::to_string(e.hits) + ","
               + fmt(e.p_hat) + "," + fmt(e.ci_lo) + "," + fmt(e.ci_hi) + "," + fmt(e.bound_ivanov) + ","
               + fmt(e.bound_t11) + "," + fmt(e.rhs_hat) + "\n";
    }
    return out;
}

std::vector<Estimate> estimates_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split_fields(line) != split_fields(kHeader)) {
        throw std::runtime_error("estimates CSV: missing or unexpected header");
    }
    std::vector<Estimate> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 9) {
            throw std::runtime_error("estimates CSV line " + std::to_string(lineno) + ": expected 9 fields");
        }
        Estimate e;
        e.k = std::stoi(f[0]);
        e.trials = std::stoull(f[1]);
        e.hits = std::stoull(f[2]);
        e.p_hat = std::stod(f[3]);
        e.ci_lo = std::stod(f[4]);
        e.ci_hi = std::stod(f[5]);
        e.bound_ivanov = parse_opt(f[6]);
        e.bound_t11 = parse_opt(f[7]);
        e.rhs_hat = parse_opt(f[8]);
        if (e.rhs_hat) {
            e.rhs_hits = static_cast<std::uint64_t>(std::llround(*e.rhs_hat * static_cast<double>(e.trials)));
        }
        out.push_back(e);
    }
    return out;
}

nlohmann::json estimates_to_json(const std::vector<Estimate>& estimates)
{
    auto arr = nlohmann::json::array();
    for (const auto& e : estimates) {
        nlohmann::json j{{"k", e.k}, {"trials", e.trials}, {"hits", e.hits}, {"p_hat", e.p_hat},
                         {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}};
        j["bound_ivanov"] = e.bound_ivanov ? nlohmann::json(*e.bound_ivanov) : nlohmann::json();
        j["bound_t11"] = e.bound_t11 ? nlohmann::json(*e.bound_t11) : nlohmann::json();
        if (e.rhs_hat) {
            j["rhs_hat"] = *e.rhs_hat;
            j["rhs_hits"] = e.rhs_hits;
            j["rhs_is_lower_bound"] = true;
        }
        arr.push_back(j);
    }
    return arr;
}

nlohmann::json experiment_report(const ExperimentConfig& cfg, const std::vector<Estimate>& estimates)
{
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["seed"] = cfg.seed;
    j["config_hash"] = config_hash(cfg);
    j["estimates"] = estimates_to_json(estimates);
    return j;
}

std::string estimates_to_svg(const std::vector<Estimate>& estimates)
{
    struct Series {
        std::string name;
        std::string colour;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series{{"p_hat", "#1f77b4", {}},
                               {"bound_ivanov", "#d62728", {}},
                               {"bound_t11", "#2ca02c", {}},
                               {"rhs_hat", "#9467bd", {}}};
    for (const auto& e : estimates) {
        const double k = e.k;
        if (e.p_hat > 0) {
            series[0].pts.emplace_back(k, e.p_hat);
        }
        if (e.bound_ivanov && *e.bound_ivanov > 0) {
            series[1].pts.emplace_back(k, *e.bound_ivanov);
        }
        if (e.bound_t11 && *e.bound_t11 > 0) {
            series[2].pts.emplace_back(k, *e.bound_t11);
        }
        if (e.rhs_hat && *e.rhs_hat > 0) {
            series[3].pts.emplace_back(k, *e.rhs_hat);
        }
    }
    std::erase_if(series, [](const Series& s) { return s.pts.empty(); });

    double kmin = 1;
    double kmax = 2;
    double ymin = 0;  // log10 range
    double ymax = 0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [k, p] : s.pts) {
            const double y = std::log10(p);
            if (first) {
                kmin = kmax = k;
                ymin = ymax = y;
                first = false;
            }
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (kmax <= kmin) {
        kmax = kmin + 1;
    }
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1);

    const double w = 640;
    const double h = 400;
    const double pad = 50;
    auto px = [&](double k) { return pad + (k - kmin) / (kmax - kmin) * (w - 2 * pad); };
    auto py = [&](double p) { return h - pad - (std::log10(p) - ymin) / (ymax - ymin) * (h - 2 * pad); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
        const double y = py(std::pow(10.0, d));
        out << "<text x=\"5\" y=\"" << y + 4 << "\" font-size=\"11\">1e" << d << "</text>\n";
    }
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" font-size=\"12\">k</text>\n";
    int row = 0;
    for (const auto& s : series) {
        out << "<polyline class=\"series\" data-series=\"" << s.name << "\" fill=\"none\" stroke=\"" << s.colour
            << "\" points=\"";
        for (std::size_t i = 0; i < s.pts.size(); ++i) {
            out << (i ? " " : "") << px(s.pts[i].first) << "," << py(s.pts[i].second);
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - pad - 90 << "\" y=\"" << pad + 14 * row << "\" font-size=\"11\" fill=\""
            << s.colour << "\">" << s.name << "</text>\n";
        ++row;
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing " + path);
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

} // namespace upcross
