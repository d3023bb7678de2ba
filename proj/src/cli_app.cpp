#include "mrigark/cli.hpp"

#include "mrigark/convergence.hpp"
#include "mrigark/gark_expansion.hpp"
#include "mrigark/io.hpp"
#include "mrigark/method_json.hpp"
#include "mrigark/order_conditions.hpp"
#include "mrigark/registry.hpp"
#include "mrigark/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace mrigark {

namespace {

using nlohmann::json;

constexpr double pi = 3.14159265358979323846;

json reports_to_json(const std::vector<ConditionReport>& reports)
{
    json arr = json::array();
    for (const auto& r : reports)
        arr.push_back({{"id", r.id},
                       {"lhs", r.lhs},
                       {"rhs", r.rhs},
                       {"residual", r.residual},
                       {"pass", r.pass}});
    return arr;
}

bool gate_pass(const std::vector<ConditionReport>& reports)
{
    for (const auto& r : reports)
        if (!r.pass && r.id.find(".aux.") == std::string::npos)
            return false;
    return true;
}

template <class T>
std::vector<ConditionReport> run_validation(const MriGarkMethod<T>& m, int order, double tol,
                                            bool oracle, double oracle_tol)
{
    std::vector<ConditionReport> all;
    auto append = [&](std::vector<ConditionReport> r) {
        all.insert(all.end(), r.begin(), r.end());
    };
    append(check_internal_consistency(m, tol));
    append(check_gamma_base_consistency(m, tol));
    append(check_base_order(m, std::min(order, 4), tol));
    if (order >= 3)
        all.push_back(check_coupling_order3(m, tol));
    if (order >= 4)
        append(check_coupling_order4(m, tol, true));
    if (oracle) {
        int p = std::min(order, 4);
        for (const auto& fast : {fast_rk4_classic<T>(), fast_rk4_three_eighths<T>()}) {
            auto tab = expand(m, fast);
            auto tree_reports = check_gark_order(tab, p, oracle_tol);
            for (auto& r : tree_reports)
                r.id = "oracle." + fast.name + "." + r.id;
            append(tree_reports);
        }
    }
    return all;
}

void emit_reports(const std::vector<ConditionReport>& reports, const std::string& format,
                  const std::string& out)
{
    std::string text;
    if (format == "json") {
        text = reports_to_json(reports).dump(2) + "\n";
    } else {
        for (const auto& r : reports)
            text += (r.pass ? "PASS " : "FAIL ") + r.id + " lhs=" + fmt17(r.lhs) +
                    " rhs=" + fmt17(r.rhs) + " residual=" + fmt17(r.residual) + "\n";
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        f << text;
    }
}

int cmd_list(const std::string& format, const std::string& filter, const std::string& out)
{
    auto infos = builtin_infos();
    std::string text;
    if (format == "json") {
        json arr = json::array();
        for (const auto& i : infos) {
            if (!filter.empty() && i.name.find(filter) == std::string::npos)
                continue;
            arr.push_back({{"name", i.name},
                           {"order", i.order},
                           {"embedded_order", i.embedded_order},
                           {"stages", i.stages},
                           {"kind", kind_name(i.kind)}});
        }
        text = arr.dump(2) + "\n";
    } else {
        for (const auto& i : infos) {
            if (!filter.empty() && i.name.find(filter) == std::string::npos)
                continue;
            text += i.name + " order=" + std::to_string(i.order) +
                    " embedded=" + std::to_string(i.embedded_order) +
                    " stages=" + std::to_string(i.stages) + " kind=" + kind_name(i.kind) + "\n";
        }
    }
    if (out.empty())
        std::cout << text;
    else
        std::ofstream(out) << text;
    return 0;
}

struct ParamMap {
    std::map<std::string, double> values;

    double get(const std::string& key, double fallback) const
    {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
};

ParamMap parse_params(const std::vector<std::string>& kvs)
{
    ParamMap p;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param expects key=value, got '" + kv + "'");
        p.values[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return p;
}

ConvergenceCase build_case(const std::string& problem, const ParamMap& p, double& tf, double& h0,
                           int& levels)
{
    if (problem == "kpr") {
        KprParams kp;
        kp.lambda_f = p.get("lambda_f", kp.lambda_f);
        kp.lambda_s = p.get("lambda_s", kp.lambda_s);
        kp.xi = p.get("xi", kp.xi);
        kp.alpha = p.get("alpha", kp.alpha);
        kp.omega = p.get("omega", kp.omega);
        if (tf <= 0)
            tf = 2.5 * pi;
        if (h0 <= 0)
            h0 = tf / 16.0;
        if (levels <= 0)
            levels = 6;
        return make_kpr_case(kp, tf);
    }
    if (problem == "gray-scott") {
        GrayScottParams gp;
        gp.n = static_cast<int>(p.get("n", gp.n));
        gp.eps_u = p.get("eps_u", gp.eps_u);
        gp.eps_v = p.get("eps_v", gp.eps_v);
        gp.feed = p.get("feed", gp.feed);
        gp.kill = p.get("kill", gp.kill);
        if (tf <= 0)
            tf = 2.0;
        if (h0 <= 0)
            h0 = 1.0 / 256.0;
        if (levels <= 0)
            levels = 5;
        return make_gray_scott_case(gp, tf, p.get("reference_tol", 1e-12));
    }
    if (problem == "linear-scalar") {
        if (tf <= 0)
            tf = 1.0;
        if (h0 <= 0)
            h0 = 0.1;
        if (levels <= 0)
            levels = 6;
        return make_linear_scalar_case(p.get("lambda_f", -10.0), p.get("lambda_s", -1.0), tf);
    }
    if (problem == "linear-2d") {
        CoupledTestProblem cp;
        cp.lambda_f = p.get("lambda_f", -10.0);
        cp.lambda_s = p.get("lambda_s", -1.0);
        cp.xi = p.get("xi", 0.1);
        cp.alpha_scale = p.get("alpha", 1.0);
        if (tf <= 0)
            tf = 1.0;
        if (h0 <= 0)
            h0 = 0.1;
        if (levels <= 0)
            levels = 6;
        return make_linear_2d_case(cp, tf);
    }
    throw RegistryError("unknown problem '" + problem +
                        "'; available: gray-scott kpr linear-scalar linear-2d");
}

} // namespace

int cli_run(const std::vector<std::string>& args)
{
    CLI::App app{"MRI-GARK multirate infinitesimal integrators"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string out;
    long seed = 0;   // reserved
    int threads = 1; // outputs are identical for any thread count
    app.add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", out);
    app.add_option("--seed", seed);
    app.add_option("--threads", threads);

    auto* list = app.add_subcommand("list", "list registry methods");
    list->fallthrough();
    std::string filter;
    list->add_option("--filter", filter, "substring filter on names");

    auto* validate = app.add_subcommand("validate", "check order conditions");
    validate->fallthrough();
    std::string v_method, v_method_file;
    int v_order = 0;
    double v_tol = -1.0;
    bool v_oracle = false;
    validate->add_option("--method", v_method);
    validate->add_option("--method-file", v_method_file);
    validate->add_option("--order", v_order, "target order (default: declared)");
    validate->add_option("--tol", v_tol, "residual tolerance (default: exact/extended)");
    validate->add_flag("--oracle", v_oracle, "run the GARK expansion tree oracle");

    auto* converge = app.add_subcommand("converge", "fixed-step convergence study");
    converge->fallthrough();
    std::string c_method, c_problem;
    double c_h0 = 0, c_tf = 0, c_inner_tol = 1e-10;
    int c_levels = 0;
    std::vector<std::string> c_params;
    converge->add_option("--method", c_method)->required();
    converge->add_option("--problem", c_problem)->required();
    converge->add_option("--h0", c_h0);
    converge->add_option("--tf", c_tf);
    converge->add_option("--levels", c_levels);
    converge->add_option("--inner-tol", c_inner_tol);
    converge->add_option("--param", c_params, "problem parameter key=value");

    auto* stability = app.add_subcommand("stability", "slow stability region scan");
    stability->fallthrough();
    std::string s_method, s_mode = "scalar", s_rho = "inf";
    double s_alpha = 45.0, s_xi = 0.5;
    GridSpec s_grid;
    stability->add_option("--method", s_method)->required();
    stability->add_option("--mode", s_mode)->check(CLI::IsMember({"scalar", "matrix"}));
    stability->add_option("--rho", s_rho, "fast wedge radius or 'inf'");
    stability->add_option("--alpha", s_alpha, "fast wedge half-angle, degrees");
    stability->add_option("--xi", s_xi, "coupling (matrix mode)");
    stability->add_option("--re-min", s_grid.re_min);
    stability->add_option("--re-max", s_grid.re_max);
    stability->add_option("--im-min", s_grid.im_min);
    stability->add_option("--im-max", s_grid.im_max);
    stability->add_option("--nre", s_grid.nre);
    stability->add_option("--nim", s_grid.nim);

    std::vector<const char*> argv;
    argv.push_back("mrigark");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed())
            return cmd_list(format == "csv" ? "text" : format, filter, out);

        if (validate->parsed()) {
            if (v_method.empty() == v_method_file.empty()) {
                std::cerr << "validate: give exactly one of --method / --method-file\n";
                return 2;
            }
            ExactMethod em = v_method_file.empty() ? builtin_exact(v_method)
                                                   : load_method_file(v_method_file);
            std::vector<ConditionReport> reports;
            std::visit(
                [&](const auto& m) {
                    using T = std::decay_t<decltype(m.base.c[0])>;
                    int order = v_order > 0 ? v_order : m.order;
                    double tol = v_tol;
                    if (tol < 0)
                        tol = std::is_same_v<T, Rational> ? 0.0 : 1e-20;
                    reports = run_validation(m, order, tol, v_oracle,
                                             v_tol < 0 ? tol : v_tol);
                },
                em);
            emit_reports(reports, format == "csv" ? "text" : format, out);
            return gate_pass(reports) ? 0 : 1;
        }

        if (converge->parsed()) {
            MriGarkMethod<double> m = builtin(c_method);
            ParamMap params = parse_params(c_params);
            double tf = c_tf, h0 = c_h0;
            int levels = c_levels;
            ConvergenceCase cc = build_case(c_problem, params, tf, h0, levels);
            InnerSolveConfig inner;
            inner.rel_tol = inner.abs_tol = c_inner_tol;
            ConvergenceReport rep = convergence_study(m, cc, h0, levels, inner);
            if (out.empty()) {
                write_convergence_csv(std::cout, rep);
            } else {
                std::ofstream fcsv(out + ".csv");
                write_convergence_csv(fcsv, rep);
                std::ofstream fjson(out + ".json");
                write_convergence_json(fjson, rep);
            }
            if (rep.failed) {
                std::cerr << "converge: level failed: " << rep.failure << "\n";
                return 1;
            }
            return 0;
        }

        if (stability->parsed()) {
            MriGarkMethod<double> m = builtin(s_method);
            RegionScan scan;
            scan.mode = s_mode == "scalar" ? ScanMode::scalar : ScanMode::matrix;
            scan.rho = s_rho == "inf" ? std::numeric_limits<double>::infinity()
                                      : std::stod(s_rho);
            scan.alpha_deg = s_alpha;
            scan.xi = s_xi;
            scan.grid = s_grid;
            scan = scan_region(m, scan);
            if (out.empty()) {
                write_scan_csv(std::cout, scan);
            } else {
                std::ofstream fcsv(out + ".csv");
                write_scan_csv(fcsv, scan);
                std::ofstream fjson(out + ".json");
                write_scan_sidecar_json(fjson, m.name, scan);
            }
            return 0;
        }
    } catch (const RegistryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace mrigark
