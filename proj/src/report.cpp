#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "psido/harness.hpp"

namespace psido {

Check make_check(std::string name, double value, std::string relation, double threshold, bool required) {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.relation = std::move(relation);
    c.threshold = threshold;
    c.required = required;
    c.pass = evaluate(c);
    return c;
}

bool evaluate(const Check& c) {
    if (std::isnan(c.value)) return false;
    if (c.relation == "<=") return c.value <= c.threshold;
    if (c.relation == "<") return c.value < c.threshold;
    if (c.relation == ">=") return c.value >= c.threshold;
    if (c.relation == ">") return c.value > c.threshold;
    throw InvalidArgument("unknown check relation '" + c.relation + "'");
}

std::string compute_verdict(const Report& r) {
    if (r.degenerate) return "degenerate";
    bool ok = true;
    for (const auto& c : r.checks)
        if (c.required && !evaluate(c)) ok = false;
    if (r.exploratory) return "outside_proven_scope";
    return ok ? "pass" : "fail";
}

Fit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw InvalidArgument("slope fit needs at least two points");
    std::vector<double> x, y;
    for (const auto& [p, v] : points) {
        if (!(p > 0.0)) throw InvalidArgument("slope fit: parameters must be positive");
        if (!(v > 0.0)) throw InvalidArgument("slope fit: values must be positive (got " + std::to_string(v) + ")");
        x.push_back(std::log(p));
        y.push_back(std::log(v));
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("slope fit: parameters must not all coincide");
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (x.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - f.intercept - f.slope * x[i];
            ssr += e * e;
        }
        f.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
    }
    return f;
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json row_json(const Row& r) {
    json j{{"param", r.param},          {"value", num(r.value)},          {"bound", num(r.bound)},
           {"ratio", num(r.ratio)},     {"tail_qmass", num(r.tail_qmass)}, {"tail_sensitivity", num(r.tail_sensitivity)},
           {"defect", num(r.defect)}};
    json e = json::object();
    for (const auto& [k, v] : r.extra) e[k] = num(v);
    j["extra"] = e;
    return j;
}

Row row_from(const json& j) {
    Row r;
    r.param = j.at("param").get<double>();
    r.value = from(j.at("value"));
    r.bound = from(j.at("bound"));
    r.ratio = from(j.at("ratio"));
    r.tail_qmass = from(j.at("tail_qmass"));
    r.tail_sensitivity = from(j.at("tail_sensitivity"));
    r.defect = from(j.at("defect"));
    for (const auto& [k, v] : j.at("extra").items()) r.extra[k] = from(v);
    return r;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "-";
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

json to_json(const Report& r) {
    json j;
    j["schema_version"] = r.schema;
    j["kind"] = r.kind;
    j["name"] = r.name;
    j["seed"] = r.seed;
    j["config"] = r.config;
    j["series"] = json::array();
    for (const auto& s : r.series) {
        json js{{"label", s.label}, {"degenerate", s.degenerate}, {"notes", s.notes}};
        js["predicted_exponent"] = s.predicted ? json(*s.predicted) : json(nullptr);
        js["predicted_source"] = s.predicted_source;
        if (s.fit) js["fit"] = {{"slope", num(s.fit->slope)}, {"stderr", num(s.fit->stderr_)}, {"intercept", num(s.fit->intercept)}};
        else js["fit"] = nullptr;
        js["rows"] = json::array();
        for (const auto& row : s.rows) js["rows"].push_back(row_json(row));
        j["series"].push_back(js);
    }
    j["checks"] = json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"value", num(c.value)},
                               {"relation", c.relation},
                               {"threshold", c.threshold},
                               {"required", c.required},
                               {"pass", c.pass}});
    j["warnings"] = r.warnings;
    j["degenerate"] = r.degenerate;
    j["exploratory"] = r.exploratory;
    j["verdict"] = r.verdict;
    return j;
}

Report report_from_json(const json& j) {
    Report r;
    r.schema = j.at("schema_version").get<int>();
    if (r.schema != kReportSchema) throw InvalidArgument("unsupported report schema " + std::to_string(r.schema));
    r.kind = j.at("kind").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    for (const auto& js : j.at("series")) {
        Series s;
        s.label = js.at("label").get<std::string>();
        s.degenerate = js.at("degenerate").get<bool>();
        s.notes = js.at("notes").get<std::vector<std::string>>();
        if (!js.at("predicted_exponent").is_null()) s.predicted = js.at("predicted_exponent").get<double>();
        s.predicted_source = js.at("predicted_source").get<std::string>();
        if (!js.at("fit").is_null())
            s.fit = Fit{from(js.at("fit").at("slope")), from(js.at("fit").at("stderr")), from(js.at("fit").at("intercept"))};
        for (const auto& row : js.at("rows")) s.rows.push_back(row_from(row));
        r.series.push_back(std::move(s));
    }
    for (const auto& jc : j.at("checks")) {
        Check c;
        c.name = jc.at("name").get<std::string>();
        c.value = from(jc.at("value"));
        c.relation = jc.at("relation").get<std::string>();
        c.threshold = jc.at("threshold").get<double>();
        c.required = jc.at("required").get<bool>();
        c.pass = jc.at("pass").get<bool>();
        r.checks.push_back(c);
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.degenerate = j.at("degenerate").get<bool>();
    r.exploratory = j.at("exploratory").get<bool>();
    r.verdict = j.at("verdict").get<std::string>();
    return r;
}

std::string report_csv(const Report& r) {
    std::set<std::string> extra_keys;
    for (const auto& s : r.series)
        for (const auto& row : s.rows)
            for (const auto& [k, v] : row.extra) extra_keys.insert(k);
    std::ostringstream os;
    os << std::setprecision(17);
    os << "series,param,value,bound,ratio,tail_qmass,tail_sensitivity,defect";
    for (const auto& k : extra_keys) os << ',' << k;
    os << '\n';
    auto cell = [&](double v) {
        if (std::isfinite(v)) os << v;
    };
    for (const auto& s : r.series)
        for (const auto& row : s.rows) {
            os << s.label << ',';
            cell(row.param);
            os << ',';
            cell(row.value);
            os << ',';
            cell(row.bound);
            os << ',';
            cell(row.ratio);
            os << ',';
            cell(row.tail_qmass);
            os << ',';
            cell(row.tail_sensitivity);
            os << ',';
            cell(row.defect);
            for (const auto& k : extra_keys) {
                os << ',';
                auto it = row.extra.find(k);
                if (it != row.extra.end()) cell(it->second);
            }
            os << '\n';
        }
    return os.str();
}

std::string report_table(const Report& r) {
    std::ostringstream os;
    os << r.kind << " '" << r.name << "' seed=" << r.seed << "\n";
    for (const auto& s : r.series) {
        os << "\n  [" << s.label << "]";
        if (s.degenerate) os << " (degenerate)";
        os << "\n";
        os << "  " << std::setw(12) << "param" << std::setw(14) << "value" << std::setw(14) << "bound" << std::setw(14)
           << "ratio" << std::setw(12) << "tail_q" << std::setw(12) << "defect" << "\n";
        for (const auto& row : s.rows)
            os << "  " << std::setw(12) << fmt(row.param) << std::setw(14) << fmt(row.value) << std::setw(14)
               << fmt(row.bound) << std::setw(14) << fmt(row.ratio) << std::setw(12) << fmt(row.tail_qmass)
               << std::setw(12) << fmt(row.defect) << "\n";
        if (s.fit) os << "  slope " << fmt(s.fit->slope) << " +- " << fmt(s.fit->stderr_);
        if (s.predicted) os << "  predicted " << fmt(*s.predicted) << " (" << s.predicted_source << ")";
        if (s.fit || s.predicted) os << "\n";
        for (const auto& n : s.notes) os << "  note: " << n << "\n";
    }
    os << "\n  checks:\n";
    for (const auto& c : r.checks)
        os << "    " << (evaluate(c) ? "ok  " : "FAIL") << ' ' << c.name << ": " << fmt(c.value) << ' ' << c.relation << ' '
           << fmt(c.threshold) << (c.required ? "" : " (informational)") << "\n";
    for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
    os << "  verdict: " << r.verdict << "\n";
    return os.str();
}

std::pair<std::string, std::string> write_report(const Report& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::string jp = (std::filesystem::path(dir) / (r.name + ".json")).string();
    const std::string cp = (std::filesystem::path(dir) / (r.name + ".csv")).string();
    {
        std::ofstream os(jp);
        if (!os) throw Error("cannot write " + jp);
        os << to_json(r).dump(2) << "\n";
    }
    {
        std::ofstream os(cp);
        if (!os) throw Error("cannot write " + cp);
        os << report_csv(r);
    }
    return {jp, cp};
}

}  // namespace psido
