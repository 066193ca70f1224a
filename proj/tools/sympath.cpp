// sympath: command-line front end for the index, flow, return-map,
// convexity, Katok and twist experiments.
//
// Exit status: 0 pass or certified, 1 fail or refused, 2 usage error, 3 I/O error.

#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "cli_support.hpp"

#include <sympath/certify.hpp>
#include <sympath/katok.hpp>
#include <sympath/twist.hpp>

namespace cli {

using namespace sympath;

// ---- index ----------------------------------------------------------------

struct IndexOpts
{
    std::string demo = "rotation";
    int k = 1;
    int dim = 2;
    std::string path;
    std::string method = "all";
};

inline int run_index(const Context& ctx, const IndexOpts& o)
{
    SymplecticPath p = [&] {
        if (!o.path.empty())
            return path_from_json(read_json_file(o.path));
        if (o.demo == "rotation")
            return paths::rotation(2 * std::numbers::pi * o.k, 1.0, o.dim);
        if (o.demo == "shear")
            return paths::shear(o.k, 1.0);
        if (o.demo == "identity")
            return paths::constant_identity(1.0, o.dim);
        std::mt19937_64 rng(ctx.globals.seed);
        return paths::random_lie(rng, o.dim, 6, 3.0, 1.5);
    }();
    Json est = Json::array();
    std::vector<HalfInteger> values;
    auto add = [&](const IndexEstimate& e) {
        est.push_back(index_to_json(e));
        values.push_back(e.value);
    };
    if (o.method == "all" || o.method == "crossing")
        add(rs_index(p));
    if ((o.method == "all" && p.dim() == 2) || o.method == "kan")
        add(rs_index_kan(p));
    if (o.method == "all" || o.method == "spectral")
        add(rs_index_spectral(p));
    bool agree = std::all_of(values.begin(), values.end(), [&](HalfInteger v) { return v == values.front(); });
    Json body{{"path", {{"dim", p.dim()}, {"horizon", p.times().back()}, {"samples", p.times().size()}}},
              {"indices", est},
              {"methods_agree", agree},
              {"pass", agree}};
    emit_report(ctx, body);
    return agree ? ok : failed;
}

// ---- flow -----------------------------------------------------------------

struct FlowOpts
{
    std::string surface = "sphere";
    std::string x0;
    double T = 2 * std::numbers::pi;
    double dt = 0.05;
    bool index = false;
};

inline int run_flow(const Context& ctx, const FlowOpts& o)
{
    auto s = parse_surface(o.surface);
    Vector x0(4);
    if (o.x0.empty()) {
        x0 << 1, 0, 0, 0;
    } else {
        auto v = parse_numbers(o.x0, "--x0");
        arity(v, 4, "--x0");
        x0 = Eigen::Map<Vector>(v.data(), 4);
    }
    x0 = project_to_surface(s, x0, ctx.globals.tol_surf);
    auto io = integrate_options(ctx.globals);
    io.output_dt = o.dt;
    io.action_density = [](const Vector& x, const Vector& dx) { return liouville(x, dx); };
    auto arc = reeb_arc(s, x0, o.T, io);
    double phi_max = arc.phi_residual.empty()
                         ? 0.0
                         : *std::max_element(arc.phi_residual.begin(), arc.phi_residual.end());
    Json body{{"surface", s.name},
              {"arc", arc_to_json(arc)},
              {"max_phi_residual", {{"value", phi_max}, {"tolerance", ctx.globals.tol_surf}, {"method", "projected dopri5"}}}};
    bool pass = phi_max <= ctx.globals.tol_surf;
    if (o.index) {
        auto e = rs_index(reduce_to_frame(s, arc));
        body["reduced_index"] = index_to_json(e);
    }
    body["pass"] = pass;
    emit_report(ctx, body);
    return pass ? ok : failed;
}

// ---- return-map -----------------------------------------------------------

struct ReturnMapOpts
{
    std::string model = "weighted:1.2,0.8";
    std::string grid = "8x8";
};

inline int run_return_map(const Context& ctx, const ReturnMapOpts& o)
{
    auto m = parse_model(o.model);
    std::string grid = o.grid;
    std::replace(grid.begin(), grid.end(), 'x', ',');
    auto g = parse_numbers(grid, "--grid");
    if (g.size() != 2 || g[0] < 1 || g[1] < 1 || g[0] != std::floor(g[0]) || g[1] != std::floor(g[1]))
        throw UsageError("--grid must be NxM with positive integers");
    const int N = static_cast<int>(g[0]), M = static_cast<int>(g[1]);
    const auto& box = m.page.box;
    const int d = m.page.dim();
    Vector s(d);
    for (int i = 0; i < d; ++i)
        s(i) = 0.5 * (box[i].first + box[i].second);
    auto io = integrate_options(ctx.globals);
    std::vector<std::vector<double>> rows;
    std::size_t skipped = 0;
    int amb = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < M; ++j) {
            s(0) = box[0].first + (i + 0.5) / N * (box[0].second - box[0].first);
            if (d > 1)
                s(1) = box[1].first + (j + 0.5) / M * (box[1].second - box[1].first);
            try {
                Vector x = m.page.point(s);
                auto r = first_return(m, x, io);
                amb = static_cast<int>(x.size());
                std::vector<double> row(s.data(), s.data() + d);
                row.insert(row.end(), x.data(), x.data() + x.size());
                row.insert(row.end(), r.tau_x.data(), r.tau_x.data() + r.tau_x.size());
                row.push_back(r.T);
                rows.push_back(std::move(row));
            } catch (const DomainError&) {
                ++skipped;
            }
        }
    std::vector<std::string> cols;
    for (int i = 0; i < d; ++i)
        cols.push_back("s" + std::to_string(i));
    for (int i = 0; i < amb; ++i)
        cols.push_back("x" + std::to_string(i));
    for (int i = 0; i < amb; ++i)
        cols.push_back("tau_x" + std::to_string(i));
    cols.push_back("T");
    emit_table(ctx, cols, rows, Json{{"model", m.name}, {"points", rows.size()}, {"skipped", skipped}});
    return rows.empty() ? failed : ok;
}

// ---- calabi ---------------------------------------------------------------

struct CalabiOpts
{
    std::string model = "weighted:1.2,0.8";
    std::size_t samples = 100000;
    int nodes = 24;
};

inline int run_calabi(const Context& ctx, const CalabiOpts& o)
{
    auto m = parse_model(o.model);
    auto r = calabi(m, o.samples, ctx.globals.seed, integrate_options(ctx.globals), o.nodes);
    bool cal_ok = std::abs(r.cal_diff()) <= 3 * r.cal_combined_error();
    bool bd_ok = std::abs(r.boundary_diff()) <= 3 * r.boundary_combined_error();
    Json body{{"model", m.name},
              {"cal", r.cal},
              {"mc_stderr", r.mc_stderr},
              {"integration_error", r.integration_error},
              {"vol_M", r.vol_M},
              {"vol_M_error", r.vol_M_error},
              {"vol_Sigma", r.vol_Sigma},
              {"vol_Sigma_error", r.vol_Sigma_error},
              {"vol_B", r.vol_B},
              {"vol_B_error", r.vol_B_error},
              {"n_samples", r.n_samples},
              {"quadrature_nodes", r.quadrature_nodes},
              {"mean_T", r.mean_T},
              {"checks",
               Json::array({Json{{"id", "cal_vs_volume"},
                                 {"pass", cal_ok},
                                 {"value", std::abs(r.cal_diff())},
                                 {"tolerance", 3 * r.cal_combined_error()},
                                 {"method", "Monte Carlo vs Gauss-Legendre, 3 combined errors"}},
                            Json{{"id", "page_vs_binding"},
                                 {"pass", bd_ok},
                                 {"value", std::abs(r.boundary_diff())},
                                 {"tolerance", 3 * r.boundary_combined_error()},
                                 {"method", "Gauss-Legendre, 3 combined errors"}}})},
              {"pass", cal_ok && bd_ok}};
    emit_report(ctx, body);
    return cal_ok && bd_ok ? ok : failed;
}

// ---- convexity ------------------------------------------------------------

struct ConvexityOpts
{
    std::string surface = "sphere";
    std::size_t samples = 2000;
    std::size_t arcs = 0;
    double tmax = 50.0;
};

inline int run_convexity(const Context& ctx, const ConvexityOpts& o)
{
    auto s = parse_surface(o.surface);
    auto cert = convexity_certify(s, o.samples, ctx.globals.seed);
    Json c{{"surface", cert.surface},
           {"verdict", to_string(cert.verdict)},
           {"lambda_min", cert.lambda_min},
           {"max_alpha_xphi", cert.max_alpha_xphi},
           {"min_alpha_xphi", cert.min_alpha_xphi},
           {"predicted_slope", cert.predicted_slope},
           {"n_samples", cert.n_samples},
           {"method", "restricted Hessian eigenvalues at sampled points"}};
    if (cert.witness)
        c["witness"] = Json{{"point", to_json(cert.witness->point)},
                            {"direction", to_json(cert.witness->direction)},
                            {"eigenvalue", cert.witness->eigenvalue}};
    Json body{{"certificate", c}};
    bool pass = cert.verdict == Verdict::certified;
    if (pass && o.arcs > 0) {
        auto arcs = random_reeb_arcs(s, o.arcs, o.tmax, ctx.globals.seed + 1, integrate_options(ctx.globals));
        auto rep = index_bound_check(s, cert, arcs);
        Json margins = Json::array();
        for (const auto& a : rep.arcs)
            margins.push_back(
                Json{{"T_R", a.T_R}, {"mu", a.mu.value()}, {"bound", a.bound}, {"margin", a.margin}});
        double required = cert.lambda_min / cert.max_alpha_xphi;
        std::size_t bad = 0;
        for (const auto& a : arcs)
            if (a.times.size() > 1 && !crossing_positivity_check(reduce_to_frame(s, a), required).all_positive)
                ++bad;
        body["index_bound"] = Json{{"predicted_slope", rep.predicted_slope},
                                   {"min_margin", rep.min_margin},
                                   {"holds", rep.holds()},
                                   {"arcs", margins},
                                   {"method", "crossing_form index of the reduced linearised Reeb flow"}};
        body["crossing_positivity"] = Json{{"arcs_with_negative_crossings", bad}, {"required_rate", required}};
        pass = rep.holds() && bad == 0;
    }
    body["pass"] = pass;
    emit_report(ctx, body);
    return pass ? ok : failed;
}

// ---- katok ----------------------------------------------------------------

struct KatokOpts
{
    int n = 3;
    std::string eps = "0.3";
    bool orbits = false;
    bool return_map = false;
    std::size_t samples = 100;
    std::size_t scan = 0;
    double tmax = 50.0;
};

inline int run_katok(const Context& ctx, const KatokOpts& o)
{
    KatokParams p{o.n, parse_numbers(o.eps, "--eps"), true};
    p.validate();
    if (o.return_map) {
        std::mt19937_64 rng(ctx.globals.seed);
        std::vector<std::vector<double>> rows;
        int amb = 0;
        for (std::size_t i = 0; i < o.samples; ++i) {
            CVector w = katok::random_page_point(p, rng);
            CVector f = katok::page_return_map(p, w);
            Vector x = to_real(w), y = to_real(f);
            amb = static_cast<int>(x.size());
            std::vector<double> row(x.data(), x.data() + x.size());
            row.insert(row.end(), y.data(), y.data() + y.size());
            row.push_back((f - w).norm());
            rows.push_back(std::move(row));
        }
        std::vector<std::string> cols;
        for (int i = 0; i < amb; ++i)
            cols.push_back("p" + std::to_string(i));
        for (int i = 0; i < amb; ++i)
            cols.push_back("phi_p" + std::to_string(i));
        cols.push_back("distance");
        emit_table(ctx, cols, rows, Json{{"map", "closed-form return map on the page"}});
        return ok;
    }
    auto cat = katok::orbit_catalog(p);
    Json orbits = Json::array();
    for (const auto& orb : cat.orbits)
        orbits.push_back(Json{{"label", orb.label}, {"period", orb.period}, {"point", to_json(to_real(orb.point))}});
    Json body{{"n", p.n},
              {"eps", p.eps},
              {"independence", "declared"},
              {"orbit_count", cat.orbits.size()},
              {"completeness_asserted", cat.completeness_asserted},
              {"orbits", orbits}};
    bool pass = true;
    if (o.scan > 0) {
        auto sc = katok::scan_for_returns(p, o.scan, o.tmax, 1e-6, ctx.globals.seed);
        body["scan"] = Json{{"samples", sc.samples},
                            {"t_max", o.tmax},
                            {"tolerance", 1e-6},
                            {"returns_off_catalog", sc.returns_off_catalog},
                            {"min_return_distance", sc.min_return_distance}};
        pass = sc.returns_off_catalog == 0;
    }
    body["pass"] = pass;
    emit_report(ctx, body);
    return pass ? ok : failed;
}

// ---- twist ----------------------------------------------------------------

struct TwistOpts
{
    std::string g = "poly:0.5";
    int kmax = 13;
    int grid = 2000;
    double radius = 1.0;
};

inline int run_twist(const Context& ctx, const TwistOpts& o)
{
    auto [name, coeffs] = split_spec(o.g, "--g");
    if (name != "poly" || coeffs.empty())
        throw UsageError("--g must be poly:c2,c3,... (coefficients of s^2, s^3, ...)");
    auto spec = polynomial_twist(coeffs, 1, o.radius);
    auto cat = periodic_point_search(spec, o.kmax, o.grid);
    std::vector<std::vector<double>> rows;
    for (const auto& pl : cat) {
        std::vector<double> row{double(pl.k), double(pl.j), pl.level};
        Vector x = pl.point.packed();
        row.insert(row.end(), x.data(), x.data() + x.size());
        row.push_back(pl.residual);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> cols{"k", "j", "level", "q0", "q1", "p0", "p1", "residual"};
    std::vector<bool> seen(o.kmax + 1, false);
    for (const auto& pl : cat)
        seen[pl.k] = true;
    bool every = std::all_of(seen.begin() + 1, seen.end(), [](bool b) { return b; });
    emit_table(ctx, cols, rows, Json{{"g", o.g}, {"levels", cat.size()}, {"every_period_present", every}});
    return every ? ok : failed;
}

// ---- extension ------------------------------------------------------------

struct ExtensionOpts
{
    std::string model = "ds1";
    double delta1 = 0.1;
    int samples = 16;
    int ladder = 3;
};

inline int run_extension(const Context& ctx, const ExtensionOpts& o)
{
    CollarHamiltonian c = [&] {
        if (o.model == "ds1")
            return twist_collar(polynomial_twist({0.5}), 0.5);
        if (o.model == "wavy")
            return wavy_circle_collar();
        if (o.model == "katok-s3")
            return katok_collar_s3();
        throw UsageError("unknown extension model '" + o.model + "' (ds1, wavy, katok-s3)");
    }();
    auto smp = boundary_samples(c.boundary, o.samples, ctx.globals.seed);
    auto split = split_collar(c, smp);
    auto params = default_extension_params(split, smp, o.delta1);
    auto e = extend_hamiltonian(split, params, smp);
    auto rc = reeb_coefficient(e, smp, o.ladder);
    auto xh = xh_formula_check(e, smp);
    Json ladder = Json::array();
    for (auto& [d, f] : rc.ladder)
        ladder.push_back(Json{{"delta1", d}, {"min_F", f}});
    bool pass = rc.min_F > 0 && rc.ladder_monotone && xh.sup_error < 1e-5;
    Json body{{"model", o.model},
              {"boundary", c.boundary.name},
              {"params",
               {{"delta0", params.delta0},
                {"delta1", params.delta1},
                {"A", params.A},
                {"C", params.C},
                {"spectrum_gap", params.spectrum_gap}}},
              {"linear_beyond", e.r_lin()},
              {"min_F", {{"value", rc.min_F}, {"tolerance", 0.0}, {"relation", ">"}, {"r", rc.r_at}}},
              {"F_lower_bound", F_lower_bound(e, smp)},
              {"ladder", ladder},
              {"ladder_monotone", rc.ladder_monotone},
              {"field_formula",
               {{"sup_error", xh.sup_error},
                {"sup_relative", xh.sup_relative},
                {"tolerance", 1e-5},
                {"method", "decomposed field vs I grad H in the ambient chart"}}},
              {"pass", pass}};
    emit_report(ctx, body);
    return pass ? ok : failed;
}

// ---- dehn -----------------------------------------------------------------

struct DehnOpts
{
    int k = 1;
    int ell = 2;
    double eps = 0.5;
    int samples = 8;
};

inline int run_dehn(const Context& ctx, const DehnOpts& o)
{
    DehnTwistProfile prof{o.k, o.ell, o.eps};
    prof.validate();
    auto v = dehn_twist_verdict(prof, o.samples, ctx.globals.seed);
    Json body{{"k", v.k},
              {"ell", v.ell},
              {"eps", v.eps},
              {"boundary_slope", v.boundary_slope},
              {"verdict", v.twist.twist ? "twist" : "no-twist"},
              {"min_h", v.twist.min_h},
              {"max_liouville", v.twist.max_liouville},
              {"max_xi", v.twist.max_xi},
              {"reason", v.twist.reason},
              {"expected", o.k <= o.ell ? "twist" : "no-twist"}};
    body["pass"] = v.twist.twist;
    emit_report(ctx, body);
    return v.twist.twist ? ok : failed;
}

// ---- structured and suite ---------------------------------------------------

struct StructuredOpts
{
    int n = 2;
    int trials = 100;
    double T = 20.0;
};

inline int emit_batteries(const Context& ctx, const std::vector<Battery>& bs, const std::string& suite)
{
    Json arr = Json::array();
    bool all = true;
    for (const auto& b : bs) {
        bool p = false;
        arr.push_back(battery_json(b, p));
        all = all && p;
    }
    Json body{{"suite", suite}, {"batteries", arr}, {"pass", all}};
    emit_report(ctx, body);
    return all ? ok : failed;
}

inline int run_structured(const Context& ctx, const StructuredOpts& o)
{
    return emit_batteries(ctx, {structured_trials(o.n, o.T, o.trials, ctx.globals.seed)}, "structured");
}

inline const std::map<std::string, std::vector<BatteryFn>>& suites()
{
    static const std::map<std::string, std::vector<BatteryFn>> s{
        {"indices", {battery_index_exactness, battery_method_agreement, battery_mean_index}},
        {"convexity", {battery_convexity}},
        {"katok", {battery_katok_orbits, battery_katok_return, battery_generating_hamiltonian}},
        {"calabi", {battery_calabi, battery_period_formula}},
        {"extension", {battery_extension, battery_winding}},
        {"structured", {battery_structured}},
        {"twist", {battery_dehn, battery_periodic_points}}};
    return s;
}

inline int run_suite(const Context& ctx, const std::string& name, int trials)
{
    BatteryOptions bo;
    bo.seed = ctx.globals.seed;
    bo.rtol = ctx.globals.rtol;
    bo.atol = ctx.globals.atol;
    bo.trials = trials;
    std::vector<Battery> out;
    for (auto fn : suites().at(name))
        out.push_back(fn(bo));
    return emit_batteries(ctx, out, name);
}

// ---- main -----------------------------------------------------------------

inline int main(int argc, char** argv)
{
    CLI::App app{"Symplectic path, Reeb flow and twist experiments"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--rtol", g.rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--atol", g.atol, "integrator absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-surf", g.tol_surf, "hypersurface projection tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"auto", "json", "csv"}));
    app.add_option("--out", g.out, "write the report to this file instead of stdout");

    std::function<int(const Context&)> action;
    auto bind = [&](CLI::App* sub, auto run, auto& opts) {
        sub->callback([&action, run, &opts] { action = [run, &opts](const Context& c) { return run(c, opts); }; });
    };

    IndexOpts xo;
    auto* s_index = app.add_subcommand("index", "Robbin-Salamon index of a path");
    s_index->add_option("--demo", xo.demo)->check(CLI::IsMember({"rotation", "shear", "identity", "random"}));
    s_index->add_option("--k", xo.k, "winding or shear parameter");
    s_index->add_option("--dim", xo.dim)->check(CLI::IsMember({2, 4, 6}));
    s_index->add_option("--path", xo.path, "JSON path document")->check(CLI::ExistingFile);
    s_index->add_option("--method", xo.method)->check(CLI::IsMember({"all", "crossing", "kan", "spectral"}));
    bind(s_index, run_index, xo);

    FlowOpts fo;
    auto* s_flow = app.add_subcommand("flow", "Reeb arc on a star-shaped hypersurface");
    s_flow->add_option("--surface", fo.surface);
    s_flow->add_option("--x0", fo.x0, "start point a,b,c,d (projected to the surface)");
    s_flow->add_option("--T", fo.T, "Reeb time")->check(CLI::PositiveNumber);
    s_flow->add_option("--dt", fo.dt, "output spacing")->check(CLI::PositiveNumber);
    s_flow->add_flag("--index", fo.index, "index of the reduced linearised flow");
    bind(s_flow, run_flow, fo);

    ReturnMapOpts ro;
    auto* s_rm = app.add_subcommand("return-map", "first-return map on a grid of the page");
    s_rm->add_option("--model", ro.model);
    s_rm->add_option("--grid", ro.grid, "NxM");
    bind(s_rm, run_return_map, ro);

    CalabiOpts co;
    auto* s_cal = app.add_subcommand("calabi", "Calabi and volume identities");
    s_cal->add_option("--model", co.model);
    s_cal->add_option("--samples", co.samples)->check(CLI::Range(2ul, 100000000ul));
    s_cal->add_option("--nodes", co.nodes)->check(CLI::Range(2, 200));
    bind(s_cal, run_calabi, co);

    ConvexityOpts vo;
    auto* s_conv = app.add_subcommand("convexity", "convexity certificate and index bound");
    s_conv->add_option("--surface", vo.surface);
    s_conv->add_option("--samples", vo.samples)->check(CLI::PositiveNumber);
    s_conv->add_option("--arcs", vo.arcs);
    s_conv->add_option("--tmax", vo.tmax)->check(CLI::PositiveNumber);
    bind(s_conv, run_convexity, vo);

    KatokOpts ko;
    auto* s_kat = app.add_subcommand("katok", "Katok examples");
    s_kat->add_option("--n", ko.n)->check(CLI::Range(2, 12));
    s_kat->add_option("--eps", ko.eps, "comma-separated weights, n/2 of them");
    auto* f_orb = s_kat->add_flag("--orbits", ko.orbits, "orbit catalog (default)");
    s_kat->add_flag("--return-map", ko.return_map, "closed-form return map samples")->excludes(f_orb);
    s_kat->add_option("--samples", ko.samples);
    s_kat->add_option("--scan", ko.scan, "random points scanned for extra returns");
    s_kat->add_option("--tmax", ko.tmax)->check(CLI::PositiveNumber);
    bind(s_kat, run_katok, ko);

    TwistOpts to;
    auto* s_tw = app.add_subcommand("twist", "periodic-point catalog of a cotangent twist map");
    s_tw->add_option("--g", to.g, "poly:c2,c3,...");
    s_tw->add_option("--kmax", to.kmax)->check(CLI::Range(1, 200));
    s_tw->add_option("--grid", to.grid)->check(CLI::Range(10, 10000000));
    s_tw->add_option("--radius", to.radius)->check(CLI::PositiveNumber);
    bind(s_tw, run_twist, to);

    ExtensionOpts eo;
    auto* s_ext = app.add_subcommand("extension", "linear extension of a collar Hamiltonian");
    s_ext->add_option("--model", eo.model)->check(CLI::IsMember({"ds1", "wavy", "katok-s3"}));
    s_ext->add_option("--delta1", eo.delta1)->check(CLI::PositiveNumber);
    s_ext->add_option("--samples", eo.samples)->check(CLI::Range(1, 100000));
    s_ext->add_option("--ladder", eo.ladder)->check(CLI::Range(1, 12));
    bind(s_ext, run_extension, eo);

    DehnOpts dopt;
    auto* s_dehn = app.add_subcommand("dehn", "twist verdict of a Dehn-twist extension");
    s_dehn->add_option("--k", dopt.k)->check(CLI::PositiveNumber);
    s_dehn->add_option("--ell", dopt.ell)->check(CLI::PositiveNumber);
    s_dehn->add_option("--eps", dopt.eps);
    s_dehn->add_option("--samples", dopt.samples)->check(CLI::Range(1, 100000));
    bind(s_dehn, run_dehn, dopt);

    StructuredOpts so;
    auto* s_st = app.add_subcommand("structured", "determinant identities on structured paths");
    s_st->add_option("--n", so.n)->check(CLI::Range(1, 6));
    s_st->add_option("--trials", so.trials)->check(CLI::Range(1, 1000000));
    s_st->add_option("--T", so.T)->check(CLI::PositiveNumber);
    bind(s_st, run_structured, so);

    std::string suite_name;
    int suite_trials = 0;
    auto* s_suite = app.add_subcommand("suite", "acceptance battery of one module");
    std::vector<std::string> names;
    for (auto& [k, v] : suites())
        names.push_back(k);
    s_suite->add_option("name", suite_name)->required()->check(CLI::IsMember(names));
    s_suite->add_option("--trials", suite_trials, "override the battery sample counts");
    s_suite->callback([&] { action = [&](const Context& c) { return run_suite(c, suite_name, suite_trials); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    Context ctx{g, resolved_config(app, sub)};
    try {
        return action(ctx);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const sympath::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io;
    } catch (const sympath::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return failed;
    }
}

} // namespace cli

int main(int argc, char** argv) { return cli::main(argc, argv); }
