// command-line front end: load a model, run one analysis, write report.json
// plus the data files for that command. Exit codes: 0 pass, 1 usage or I/O,
// 2 invalid model, 3 incomplete search, 4 verification failure.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "resokit/gamov.hpp"
#include "resokit/livsic.hpp"
#include "resokit/model.hpp"
#include "resokit/quad.hpp"
#include "resokit/report.hpp"
#include "resokit/resonance.hpp"
#include "resokit/scattering.hpp"
#include "resokit/semigroup.hpp"

namespace {

using namespace resokit;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitModel = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitVerify = 4;

std::map<std::string, double> default_tolerances() {
    return {
        {"axis_clearance", 1e-8},  {"plemelj_jump", 1e-8},
        {"s_unitarity", 1e-8},     {"intertwining", 1e-10},
        {"principal_angle", 1e-6}, {"two_route", 1e-8},
        {"dirac_psi", 1e-6},       {"paley_wiener", 1e-8},
        {"semigroup_defect", 1e-3}, {"survival_at_zero", 1e-6},
        {"contraction", 1e-8},     {"decay_rate", 0.15},
        {"bw_center", 0.05},       {"bw_width", 0.10},
    };
}

using TolMap = std::map<std::string, double>;

// value must stay at or above the floor (clearance-style check)
CheckResult make_floor_check(const std::string& name, double value, double floor) {
    CheckResult c;
    c.name = name;
    c.lhs = value;
    c.rhs = floor;
    c.tolerance = floor;
    c.pass = std::isfinite(value) && value >= floor;
    return c;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * i / static_cast<double>(count - 1);
    return out;
}

Rectangle default_search_rect(const ModelSpec& m) {
    Rectangle r = m.region;
    r.im_min = std::max(r.im_min, -1.0);
    r.im_max = std::min(r.im_max, -1e-4);
    return r;
}

CVector probe_vector(int n) {
    CVector e = CVector::Zero(n);
    e[0] = 1.0;
    return e;
}

json rect_to_json(const Rectangle& r) {
    return json{{"re_min", r.re_min},
                {"re_max", r.re_max},
                {"im_min", r.im_min},
                {"im_max", r.im_max}};
}

void write_resonances_file(const std::string& path, const ModelSpec& m,
                           const Rectangle& rect, const LocateResult& lr) {
    json list = json::array();
    for (const auto& r : lr.found) list.push_back(resonance_record(m, r));
    json body{{"schema", "resonance-kit/resonances/v1"},
              {"model_hash", m.hash_hex()},
              {"rect", rect_to_json(rect)},
              {"complete", lr.complete},
              {"exhausted_cells", lr.exhausted_cells},
              {"jitter_retries", lr.jitter_retries},
              {"resonances", list}};
    std::ofstream out(path);
    if (!out) throw KitError("cannot write " + path);
    out << body.dump(2) << "\n";
}

json locate_summary(const LocateResult& lr) {
    return json{{"count", lr.found.size()},
                {"complete", lr.complete},
                {"exhausted_cells", lr.exhausted_cells},
                {"jitter_retries", lr.jitter_retries}};
}

// ---------------------------------------------------------------- validate

int cmd_validate(const ModelSpec& m, const std::string& out, const TolMap& tol) {
    RunReport rep("validate");
    rep.echo_model(m);
    const double floor = tol.at("axis_clearance");
    rep.record_tolerance("axis_clearance", floor);
    const AxisClearance ac = check_assumption2(m);
    rep.add_check(make_floor_check("axis_clearance", ac.min_abs_det, floor));
    rep.put("axis_scan", json{{"min_abs_det", ac.min_abs_det},
                              {"argmin_lambda", ac.argmin_lambda}});
    rep.write_file(out + "/report.json");
    return rep.all_pass() ? kExitPass : kExitModel;
}

// -------------------------------------------------------------- resonances

int cmd_resonances(const ModelSpec& m, const std::string& out, const Rectangle& rect,
                   const TolMap&) {
    RunReport rep("resonances");
    rep.echo_model(m);
    const LocateResult lr = locate_resonances(m, rect);
    write_resonances_file(out + "/resonances.json", m, rect, lr);
    rep.put("rect", rect_to_json(rect));
    rep.put("resonances", locate_summary(lr));
    rep.write_file(out + "/report.json");
    return lr.complete ? kExitPass : kExitIncomplete;
}

// ----------------------------------------------------------------- smatrix

int cmd_smatrix(const ModelSpec& m, const std::string& out, const Rectangle& rect,
                const TolMap& tol) {
    RunReport rep("smatrix");
    rep.echo_model(m);
    const auto [lo, hi] = m.scan_range();
    const auto grid = linspace(lo, hi, 201);

    std::vector<std::string> header{"lambda"};
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            header.push_back("re_s_" + std::to_string(i) + "_" + std::to_string(j));
            header.push_back("im_s_" + std::to_string(i) + "_" + std::to_string(j));
        }
    std::vector<std::vector<double>> srows, rrows;
    SpectralDensity dens(m);
    const CVector e0 = probe_vector(m.n);
    for (double lam : grid) {
        const CMatrix s = s_matrix_K(m, lam);
        std::vector<double> row{lam};
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j) {
                row.push_back(s(i, j).real());
                row.push_back(s(i, j).imag());
            }
        srows.push_back(std::move(row));
        rrows.push_back({lam, dens.rho(lam, e0)});
    }
    write_csv(out + "/smatrix.csv", header, srows);
    write_csv(out + "/rho.csv", {"lambda", "rho"}, rrows);

    // line-shape fit on a dedicated dense grid around the resonance the probe
    // actually responds to (mirror poles in other channels contribute nothing
    // at this probe); the 201-point dump grid undersamples a weak peak anyway
    const LocateResult lr = locate_resonances(m, rect);
    rep.put("resonances", locate_summary(lr));
    if (!lr.found.empty()) {
        const Resonance* best = &lr.found[0];
        double best_peak = dens.rho(best->zeta.real(), e0);
        for (const auto& r : lr.found) {
            const double peak = dens.rho(r.zeta.real(), e0);
            if (peak > best_peak) {
                best = &r;
                best_peak = peak;
            }
        }
        const double gamma_ref = 2.0 * std::abs(best->zeta.imag());
        const double c0 = best->zeta.real();
        std::vector<std::pair<double, double>> samples;
        for (double lam : linspace(c0 - 20.0 * gamma_ref, c0 + 20.0 * gamma_ref, 401))
            samples.emplace_back(lam, dens.rho(lam, e0));
        const BWFit fit = breit_wigner_fit(samples);
        rep.put("breit_wigner", json{{"c", fit.c},
                                     {"lambda0_fit", fit.lambda0_fit},
                                     {"gamma_fit", fit.gamma_fit},
                                     {"rms_residual", fit.rms_residual},
                                     {"converged", fit.converged}});
        rep.record_tolerance("bw_center", tol.at("bw_center"));
        rep.record_tolerance("bw_width", tol.at("bw_width"));
        rep.add_check(make_check("bw_center", fit.lambda0_fit, c0,
                                 tol.at("bw_center") * gamma_ref));
        rep.add_check(make_check("bw_width", fit.gamma_fit, gamma_ref,
                                 tol.at("bw_width") * gamma_ref));
    }
    rep.write_file(out + "/report.json");
    if (!lr.complete) return kExitIncomplete;
    return rep.all_pass() ? kExitPass : kExitVerify;
}

// ------------------------------------------------------------------- gamov

int cmd_gamov(const ModelSpec& m, const std::string& out, const Rectangle& rect,
              const TolMap& tol) {
    RunReport rep("gamov");
    rep.echo_model(m);
    const LocateResult lr = locate_resonances(m, rect);
    write_resonances_file(out + "/resonances.json", m, rect, lr);
    rep.put("resonances", locate_summary(lr));
    rep.record_tolerance("dirac_psi", tol.at("dirac_psi"));
    rep.record_tolerance("paley_wiener", tol.at("paley_wiener"));

    const auto dirac_set = bundled_dirac_functions(m.n);
    CMatrix pw_amp = CMatrix::Ones(m.n, 1) / std::sqrt(static_cast<double>(m.n));
    const TestFunction pw_s =
        TestFunction::rational_lower({Complex(0.0, -1.0)}, {2}, pw_amp);

    json table = json::array();
    double worst_dirac = 0.0, worst_pw = 0.0;
    for (const auto& res : lr.found) {
        if (res.q == 0) continue;
        const GamovVector gv = gamov_vector(m, res);
        json entry{{"zeta", complex_to_json(gv.zeta)}, {"k0", vector_to_json(gv.k0)}};
        json pair_list = json::array();
        for (const auto& s : dirac_set) {
            const Complex direct = dirac_pairing(gv, s);
            const Complex routed = dirac_pairing_psi_route(m, gv, s);
            worst_dirac = std::max(worst_dirac, std::abs(direct - routed));
            pair_list.push_back(json{{"direct", complex_to_json(direct)},
                                     {"continued", complex_to_json(routed)}});
        }
        entry["dirac"] = pair_list;
        const PaleyWienerCheck pw = paley_wiener_check(gv, pw_s);
        worst_pw = std::max(worst_pw, pw.rel_err);
        entry["hardy_restriction"] = json{{"lhs", complex_to_json(pw.lhs)},
                                          {"rhs", complex_to_json(pw.rhs)},
                                          {"rel_err", pw.rel_err}};
        table.push_back(std::move(entry));
    }
    rep.put("gamov", table);
    if (!table.empty()) {
        rep.add_check(make_check("dirac_psi_route", worst_dirac, 0.0, tol.at("dirac_psi")));
        rep.add_check(make_check("paley_wiener", worst_pw, 0.0, tol.at("paley_wiener")));
    }
    rep.write_file(out + "/report.json");
    if (!lr.complete) return kExitIncomplete;
    return rep.all_pass() ? kExitPass : kExitVerify;
}

// ------------------------------------------------------------------- decay

struct SurvivalData {
    std::vector<double> times;
    std::vector<Complex> amps;
    double max_abs = 0.0;
};

SurvivalData run_survival(const ModelSpec& m, const std::string& csv_path) {
    SurvivalData d;
    for (double t = 0.0; t <= 60.0 + 1e-9; t += 0.25) d.times.push_back(t);
    const auto pts = survival_amplitude(m, probe_vector(m.n), d.times);
    std::vector<std::vector<double>> rows;
    for (const auto& p : pts) {
        d.amps.push_back(p.a);
        d.max_abs = std::max(d.max_abs, std::abs(p.a));
        rows.push_back({p.t, p.a.real(), p.a.imag(), std::abs(p.a)});
    }
    if (!csv_path.empty()) write_csv(csv_path, {"t", "re_a", "im_a", "abs_a"}, rows);
    return d;
}

void add_decay_checks(RunReport& rep, const ModelSpec& m, const SurvivalData& d,
                      const Resonance* nearest, const TolMap& tol) {
    rep.record_tolerance("survival_at_zero", tol.at("survival_at_zero"));
    rep.record_tolerance("contraction", tol.at("contraction"));
    rep.add_check(make_check("survival_at_zero", std::abs(d.amps.front()), 1.0,
                             tol.at("survival_at_zero")));
    rep.add_check(make_check("contraction", std::max(d.max_abs, 1.0), 1.0,
                             tol.at("contraction")));
    const DecayFit fit = decay_fit(d.times, d.amps);
    rep.put("decay_fit", json{{"amplitude", fit.amplitude},
                              {"gamma", fit.gamma},
                              {"t_lo", fit.t_lo},
                              {"t_hi", fit.t_hi},
                              {"rms_log_residual", fit.rms_log_residual},
                              {"points_used", fit.points_used}});
    if (nearest != nullptr) {
        const double gamma_ref = 2.0 * std::abs(nearest->zeta.imag());
        rep.record_tolerance("decay_rate", tol.at("decay_rate"));
        rep.add_check(make_check("decay_rate_match", fit.gamma, gamma_ref,
                                 tol.at("decay_rate") * gamma_ref));
    }
    (void)m;
}

int cmd_decay(const ModelSpec& m, const std::string& out, const Rectangle& rect,
              const TolMap& tol) {
    RunReport rep("decay");
    rep.echo_model(m);
    const SurvivalData d = run_survival(m, out + "/survival.csv");
    const LocateResult lr = locate_resonances(m, rect);
    rep.put("resonances", locate_summary(lr));
    const Resonance* slowest = nullptr;
    for (const auto& r : lr.found)
        if (slowest == nullptr ||
            std::abs(r.zeta.imag()) < std::abs(slowest->zeta.imag()))
            slowest = &r;
    add_decay_checks(rep, m, d, slowest, tol);
    rep.write_file(out + "/report.json");
    if (!lr.complete) return kExitIncomplete;
    return rep.all_pass() ? kExitPass : kExitVerify;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const ModelSpec& m, const std::string& out, const Rectangle& rect,
               const TolMap& tol) {
    RunReport rep("verify");
    rep.echo_model(m);

    const AxisClearance ac = check_assumption2(m);
    if (!ac.pass) {
        rep.put("axis_scan", json{{"min_abs_det", ac.min_abs_det},
                                  {"argmin_lambda", ac.argmin_lambda}});
        rep.add_check(make_floor_check("axis_clearance", ac.min_abs_det,
                                       tol.at("axis_clearance")));
        rep.write_file(out + "/report.json");
        return kExitModel;
    }
    const LocateResult lr = locate_resonances(m, rect);
    rep.put("resonances", locate_summary(lr));
    write_resonances_file(out + "/resonances.json", m, rect, lr);
    if (lr.found.empty() || lr.found.front().q == 0) {
        rep.put("note", "no resonance with a kernel inside the search rectangle");
        rep.write_file(out + "/report.json");
        return kExitModel;
    }

    for (const auto& name :
         {"plemelj_jump", "s_unitarity", "intertwining", "principal_angle", "two_route",
          "dirac_psi", "paley_wiener", "semigroup_defect", "survival_at_zero",
          "decay_rate"})
        rep.record_tolerance(name, tol.at(name));

    // boundary identities on a common grid
    const auto [lo, hi] = m.scan_range();
    double jump = 0.0, unit = 0.0, twine = 0.0;
    for (double lam : linspace(lo, hi, 101)) {
        const Complex zl(lam, 0.0);
        const CMatrix lp = eval_L(m, zl, Branch::plus_boundary).matrix;
        const CMatrix lm = eval_L(m, zl, Branch::minus_boundary).matrix;
        const CMatrix b = m.B(zl);
        jump = std::max(jump, (lp - lm - 2.0 * kPi * kI * b).norm());
        const CMatrix sk = s_matrix_K(m, lam);
        unit = std::max(unit,
                        (sk * sk.adjoint() - CMatrix::Identity(m.n, m.n)).norm());
        const CMatrix se = s_matrix_E(m, zl);
        const CMatrix mm = m.M(zl);
        twine = std::max(twine, (mm * se - sk * mm).norm());
    }
    rep.add_check(make_check("plemelj_jump", jump, 0.0, tol.at("plemelj_jump")));
    rep.add_check(make_check("s_unitarity", unit, 0.0, tol.at("s_unitarity")));
    rep.add_check(make_check("intertwining", twine, 0.0, tol.at("intertwining")));

    // resonance-anchored checks use the best-separated simple zero
    const Resonance& res = lr.found.front();
    const GamovVector gv = gamov_vector(m, res);

    if (res.det_order == 1) {
        const SubspaceMatch sm = residue_kernel_match(m, res);
        rep.put("principal_angle", json{{"angle", sm.principal_angle},
                                        {"residue_rank", sm.residue_rank},
                                        {"rank_matches", sm.rank_matches}});
        CheckResult c = make_check("principal_angle", sm.principal_angle, 0.0,
                                   tol.at("principal_angle"));
        c.pass = c.pass && sm.rank_matches;
        rep.add_check(c);
    }

    double two_route = 0.0;
    const CVector e0 = probe_vector(m.n);
    for (Complex z : {Complex(0.0, 2.0), Complex(0.5, 0.2)})
        two_route = std::max(two_route, livsic_two_route(m, z, e0, e0).rel_err);
    rep.add_check(make_check("two_route_identity", two_route, 0.0, tol.at("two_route")));

    double dirac = 0.0;
    for (const auto& s : bundled_dirac_functions(m.n))
        dirac = std::max(dirac,
                         std::abs(dirac_pairing(gv, s) - dirac_pairing_psi_route(m, gv, s)));
    rep.add_check(make_check("dirac_psi_route", dirac, 0.0, tol.at("dirac_psi")));

    CMatrix pw_amp = CMatrix::Ones(m.n, 1) / std::sqrt(static_cast<double>(m.n));
    const PaleyWienerCheck pw = paley_wiener_check(
        gv, TestFunction::rational_lower({Complex(0.0, -1.0)}, {2}, pw_amp));
    rep.add_check(make_check("paley_wiener", pw.rel_err, 0.0, tol.at("paley_wiener")));

    const HardyGrid grid;
    const double eigdef =
        evolution_eigen_defect(grid, res.zeta, gv.k0 / gv.k0.norm(), 1.0);
    rep.add_check(
        make_check("semigroup_eigen_defect", eigdef, 0.0, tol.at("semigroup_defect")));

    const SurvivalData d = run_survival(m, "");
    add_decay_checks(rep, m, d, &res, tol);

    rep.write_file(out + "/report.json");
    return rep.all_pass() ? kExitPass : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("RESONANCE_KIT_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"resonance-kit: Friedrichs-model resonance analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::vector<double> rect_vals;
    std::vector<std::string> tol_specs;

    const std::vector<std::string> names{"validate", "resonances", "smatrix",
                                         "gamov",    "decay",      "verify"};
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "model config file (JSON)")->required();
        sub->add_option("--rect", rect_vals,
                        "search rectangle re_min,re_max,im_min,im_max")
            ->delimiter(',')
            ->expected(4);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--tol", tol_specs, "tolerance override name=value");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    TolMap tol = default_tolerances();
    for (const auto& spec : tol_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            std::cerr << "bad --tol syntax: " << spec << "\n";
            return kExitUsage;
        }
        const std::string name = spec.substr(0, eq);
        if (tol.find(name) == tol.end()) {
            std::cerr << "unknown tolerance name: " << name << "\n";
            return kExitUsage;
        }
        try {
            tol[name] = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            std::cerr << "bad --tol value: " << spec << "\n";
            return kExitUsage;
        }
    }

    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        const ModelSpec m = load_model_file(config_path);

        Rectangle rect = default_search_rect(m);
        if (!rect_vals.empty())
            rect = Rectangle{rect_vals[0], rect_vals[1], rect_vals[2], rect_vals[3]};

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "validate") return cmd_validate(m, out_dir, tol);
        if (cmd == "resonances") return cmd_resonances(m, out_dir, rect, tol);
        if (cmd == "smatrix") return cmd_smatrix(m, out_dir, rect, tol);
        if (cmd == "gamov") return cmd_gamov(m, out_dir, rect, tol);
        if (cmd == "decay") return cmd_decay(m, out_dir, rect, tol);
        if (cmd == "verify") return cmd_verify(m, out_dir, rect, tol);
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const SearchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIncomplete;
    } catch (const KitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::string(e.what()).rfind("cannot write", 0) == 0 ? kExitUsage
                                                                   : kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
