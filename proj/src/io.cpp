#include "mobius/io.hpp"

#include "mobius/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mobius::io {

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& what)
{
    T v{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw FormatError("bad " + what + " '" + text + "'");
    return v;
}

double parse_double(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw FormatError("bad " + what + " '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw FormatError("bad " + what + " '" + text + "'");
    }
}

std::pair<std::string, std::string> split_row(const std::string& line, std::size_t lineno)
{
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
        throw FormatError("line " + std::to_string(lineno) + ": expected two columns");
    return {trim(line.substr(0, comma)), trim(line.substr(comma + 1))};
}

// Non-finite values are stored as null and read back as NaN.
json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json& j)
{
    return j.is_null() ? std::nan("") : j.get<double>();
}

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw ArgumentError("cannot write " + path.string());
    return out;
}

} // namespace

void write_function_csv(std::ostream& out, const ArithFunction& f)
{
    out << "n,value\n";
    for (std::uint64_t n = 1; n <= f.limit(); ++n)
        out << n << ',' << f[n] << '\n';
}

ArithFunction read_function_csv(std::istream& in, std::string label)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != "n,value")
        throw FormatError("missing header 'n,value'");
    std::vector<std::int64_t> values{0};
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto [ns, vs] = split_row(line, lineno);
        const auto n = parse_number<std::uint64_t>(ns, "index");
        if (n != values.size())
            throw FormatError("line " + std::to_string(lineno) + ": expected n = " + std::to_string(values.size()));
        values.push_back(parse_number<std::int64_t>(vs, "value"));
    }
    if (values.size() < 2)
        throw FormatError("no rows");
    return ArithFunction(std::move(values), std::move(label));
}

ArithFunction read_function_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("cannot read " + path.string());
    return read_function_csv(in, path.stem().string());
}

void write_function_csv(const std::filesystem::path& path, const ArithFunction& f)
{
    auto out = open_out(path);
    write_function_csv(out, f);
}

void write_checkpoints_csv(std::ostream& out, const DensityEstimate& est)
{
    out << "x,count,ratio\n";
    out.precision(17);
    for (const auto& c : est.checkpoints)
        out << c.x << ',' << c.count << ',' << c.ratio << '\n';
}

json checkpoints_json(const DensityEstimate& est)
{
    json a = json::array();
    for (const auto& c : est.checkpoints)
        a.push_back({{"x", c.x}, {"count", c.count}, {"ratio", number(c.ratio)}});
    return a;
}

ZFunction read_z_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,value")
        throw FormatError("Z table needs the header 'x,value'");
    std::vector<std::pair<double, double>> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto [xs, vs] = split_row(line, lineno);
        points.emplace_back(parse_double(xs, "x"), parse_double(vs, "value"));
    }
    return ZFunction::table(std::move(points));
}

std::vector<std::uint64_t> parse_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            out.push_back(parse_number<std::uint64_t>(item, "integer"));
        } catch (const FormatError& e) {
            throw ArgumentError(e.what());
        }
    }
    return out;
}

std::string format_list(std::span<const std::uint64_t> values)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? "," : "") + std::to_string(values[i]);
    return s;
}

json to_json(const Criterion& c)
{
    return {{"id", c.id},
            {"status", std::string(to_string(c.status))},
            {"observed", number(c.observed)},
            {"relation", std::string(to_string(c.relation))},
            {"threshold", number(c.threshold)},
            {"note", c.note}};
}

json to_json(const ExperimentReport& r)
{
    json series = json::array();
    for (const auto& s : r.series) {
        json pts = json::array();
        for (const auto& p : s.points) {
            json q = {{"x", number(p.x)}, {"value", number(p.value)}};
            if (p.count)
                q["count"] = *p.count;
            pts.push_back(std::move(q));
        }
        series.push_back({{"label", s.label}, {"points", std::move(pts)}});
    }
    json criteria = json::array();
    for (const auto& c : r.criteria)
        criteria.push_back(to_json(c));
    return {{"name", r.name},
            {"params", r.params},
            {"series", std::move(series)},
            {"verdict", {{"criteria", std::move(criteria)}, {"overall", r.passed() ? "pass" : "fail"}}},
            {"warnings", r.warnings},
            {"runtime_ms", r.runtime_ms}};
}

json to_json(const PrimeSelection& s)
{
    return {{"primes", s.primes},
            {"size", s.primes.size()},
            {"target", number(s.target)},
            {"achieved", number(s.achieved)},
            {"factor", std::string(to_string(s.factor_kind))},
            {"pool_bound", s.pool_bound}};
}

json to_json(const ConstructionReport& r)
{
    json selections = json::object();
    for (const auto& [name, sel] : r.selections)
        selections[name] = to_json(sel);
    json j = {{"construction", r.construction},
              {"limit", r.pair.f().limit()},
              {"selections", std::move(selections)},
              {"predicted_f_density", number(r.predicted_f_density)},
              {"predicted_g_density", r.predicted_g_density ? number(*r.predicted_g_density) : json(nullptr)},
              {"start_bound", r.start_bound}};
    if (r.alpha_achieved)
        j["alpha_achieved"] = number(*r.alpha_achieved);
    if (r.beta_achieved)
        j["beta_achieved"] = number(*r.beta_achieved);
    json trace = json::array();
    for (const auto& [x, v] : r.product_trace)
        trace.push_back({{"x", x}, {"value", number(v)}});
    j["product_trace"] = std::move(trace);
    return j;
}

ExperimentReport report_from_json(const json& j)
{
    try {
        ExperimentReport r;
        r.name = j.at("name").get<std::string>();
        r.params = j.at("params").get<std::map<std::string, std::string>>();
        for (const auto& s : j.at("series")) {
            Series series{s.at("label").get<std::string>(), {}};
            for (const auto& p : s.at("points")) {
                SeriesPoint pt{number_from(p.at("x")), number_from(p.at("value")), std::nullopt};
                if (p.contains("count"))
                    pt.count = p.at("count").get<std::int64_t>();
                series.points.push_back(pt);
            }
            r.series.push_back(std::move(series));
        }
        for (const auto& c : j.at("verdict").at("criteria"))
            r.criteria.push_back({c.at("id").get<std::string>(),
                                  status_from_string(c.at("status").get<std::string>()),
                                  number_from(c.at("observed")),
                                  relation_from_string(c.at("relation").get<std::string>()),
                                  number_from(c.at("threshold")),
                                  c.value("note", std::string{})});
        r.warnings = j.value("warnings", std::vector<std::string>{});
        r.runtime_ms = j.value("runtime_ms", std::int64_t{0});
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed report: ") + e.what());
    }
}

std::vector<Criterion> recompute_verdict(const ExperimentReport& r)
{
    std::vector<Criterion> out;
    for (const auto& c : r.criteria) {
        Criterion x = c;
        if (c.status != Status::inconclusive)
            x.status = holds(c.observed, c.relation, c.threshold) ? Status::pass : Status::fail;
        out.push_back(std::move(x));
    }
    return out;
}

json comparable(const ExperimentReport& r)
{
    json j = to_json(r);
    j.erase("runtime_ms");
    return j;
}

void write_json(const std::filesystem::path& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace mobius::io
