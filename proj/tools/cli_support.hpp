#pragma once

// Report assembly, spec-string parsing and exit-code mapping for the CLI.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <sympath/batteries.hpp>
#include <sympath/io.hpp>
#include <sympath/reeb.hpp>
#include <sympath/return_map.hpp>

namespace cli {

using sympath::Json;

enum Exit : int { ok = 0, failed = 1, usage = 2, io = 3 };

/// Thrown by subcommands for malformed option values that CLI11 cannot catch.
struct UsageError : sympath::ValidationError
{
    using sympath::ValidationError::ValidationError;
};

struct Globals
{
    std::uint64_t seed = 1;
    double rtol = 1e-10;
    double atol = 1e-12;
    double tol_surf = sympath::kTolSurf;
    std::string format = "auto";
    std::string out;
};

inline sympath::IntegrateOptions integrate_options(const Globals& g)
{
    sympath::IntegrateOptions o;
    o.rtol = g.rtol;
    o.atol = g.atol;
    o.tol_surf = g.tol_surf;
    return o;
}

inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Every option of the app and the chosen subcommand, as parsed or defaulted.
inline Json resolved_config(const CLI::App& app, const CLI::App* sub)
{
    Json c = Json::object();
    c["subcommand"] = sub ? sub->get_name() : "";
    auto collect = [&c](const CLI::App& a) {
        for (const CLI::Option* o : a.get_options()) {
            if (o->get_lnames().empty() || o->get_lnames()[0] == "help")
                continue;
            const std::string key = o->get_lnames()[0];
            if (o->get_type_size() == 0) {
                c[key] = o->count() > 0;
                continue;
            }
            if (o->count() > 0) {
                auto r = o->results();
                std::string joined;
                for (std::size_t i = 0; i < r.size(); ++i)
                    joined += (i ? "," : "") + r[i];
                c[key] = joined;
            } else {
                c[key] = o->get_default_str();
            }
        }
        for (const CLI::Option* o : a.get_options())
            if (o->get_lnames().empty() && !o->get_name().empty() && o->get_name() != "--help")
                c[o->get_name()] = o->count() > 0 ? o->results().front() : o->get_default_str();
    };
    collect(app);
    if (sub)
        collect(*sub);
    return c;
}

struct Context
{
    Globals globals;
    Json config;
};

inline Json header(const Context& ctx)
{
    return Json{{"schema", "1"}, {"convention", sympath::kLiouvilleConvention}, {"config", ctx.config}};
}

inline void write_output(const Context& ctx, const std::string& text)
{
    if (ctx.globals.out.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        sympath::write_text_file(ctx.globals.out, text);
    }
}

/// JSON report, or "key,value" rows of the flattened report in csv mode.
inline void emit_report(const Context& ctx, const Json& body)
{
    Json doc = header(ctx);
    for (auto it = body.begin(); it != body.end(); ++it)
        doc[it.key()] = it.value();
    if (ctx.globals.format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        const Json flat = doc.flatten();
        for (auto& [k, v] : flat.items())
            os << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        write_output(ctx, os.str());
    } else {
        write_output(ctx, doc.dump(2) + "\n");
    }
}

/// Tables are csv unless json is requested; the csv form carries the header as comments.
inline void emit_table(const Context& ctx, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows, const Json& summary = Json::object())
{
    if (ctx.globals.format == "json") {
        Json doc = header(ctx);
        for (auto it = summary.begin(); it != summary.end(); ++it)
            doc[it.key()] = it.value();
        doc["columns"] = columns;
        doc["rows"] = rows;
        write_output(ctx, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "# schema=1\n# convention=" << sympath::kLiouvilleConvention << "\n# config=" << ctx.config.dump() << "\n";
    if (!summary.empty())
        os << "# summary=" << summary.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << fmt(r[i]);
        os << "\n";
    }
    write_output(ctx, os.str());
}

/// Checks sorted by id; wall-clock checks are dropped so that reports are reproducible.
inline Json battery_json(const sympath::Battery& b, bool& pass)
{
    std::vector<sympath::Check> checks;
    for (const auto& c : b.checks)
        if (!c.timing)
            checks.push_back(c);
    std::sort(checks.begin(), checks.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    Json arr = Json::array();
    bool all = !checks.empty();
    for (const auto& c : checks) {
        all = all && c.pass;
        arr.push_back(Json{{"id", c.id},
                           {"pass", c.pass},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"relation", c.relation},
                           {"method", c.method},
                           {"detail", c.detail}});
    }
    pass = all;
    return Json{{"criterion", b.criterion}, {"name", b.name}, {"pass", all}, {"checks", arr}};
}

inline std::vector<double> parse_numbers(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot read '" + item + "' in " + what);
        }
    }
    return out;
}

/// "name" or "name:a,b,..." split into the name and its numeric arguments.
inline std::pair<std::string, std::vector<double>> split_spec(const std::string& s, const std::string& what)
{
    auto colon = s.find(':');
    if (colon == std::string::npos)
        return {s, {}};
    return {s.substr(0, colon), parse_numbers(s.substr(colon + 1), what)};
}

inline void arity(const std::vector<double>& a, std::size_t n, const std::string& spec)
{
    if (a.size() != n)
        throw UsageError(spec + " needs " + std::to_string(n) + " numeric argument(s)");
}

/// The concave quartic perturbation used for the refusal example.
inline constexpr double kNonconvexPerturbation = 0.2;

inline sympath::HypersurfaceSpec parse_surface(const std::string& s)
{
    auto [name, a] = split_spec(s, "--surface");
    if (name == "sphere") {
        arity(a, 0, name);
        return sympath::surfaces::round_sphere();
    }
    if (name == "ellipsoid") {
        arity(a, 2, name);
        return sympath::surfaces::ellipsoid(a[0], a[1]);
    }
    if (name == "perturbed") {
        arity(a, 1, name);
        return sympath::surfaces::perturbed(a[0]);
    }
    if (name == "perturbed-nonconvex") {
        arity(a, 0, name);
        auto p = sympath::surfaces::perturbed(kNonconvexPerturbation);
        p.name = "perturbed-nonconvex";
        return p;
    }
    throw UsageError("unknown surface '" + s + "' (sphere, ellipsoid:r1,r2, perturbed:c, perturbed-nonconvex)");
}

inline sympath::PageModel parse_model(const std::string& s)
{
    namespace m = sympath::models;
    auto [name, a] = split_spec(s, "--model");
    if (name == "weighted") {
        arity(a, 2, name);
        return m::weighted_sphere(a[0], a[1]);
    }
    if (name == "disk") {
        arity(a, 0, name);
        return m::disk_rotation();
    }
    if (name == "katok") {
        arity(a, 1, name);
        return m::katok_page(a[0]);
    }
    if (name == "perturbed") {
        arity(a, 1, name);
        return m::perturbed_sphere(a[0]);
    }
    throw UsageError("unknown model '" + s + "' (weighted:a1,a2, disk, katok:eps, perturbed:c)");
}

} // namespace cli
