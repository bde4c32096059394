// Command-line front end: verification reports for the tame supercuspidal
// formal-degree construction, in plain text or JSON.
//
//   verify     symbolic/concrete identity checks per instance
//   brute      explicit construction of the induced representation
//   factors    L / epsilon / gamma constituents of one parameter
//   conductor  ramification band table and total
//   sweep      identity verdict on every admissible cell up to bounds
//
// Exit codes: 0 all verdicts pass, 1 verdict failure, 2 invalid input,
// 3 enumeration budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tamedeg/report.hpp"

namespace {

using tamedeg::Report;
using tamedeg::ScenarioConfig;
using tamedeg::ScenarioInstance;
using tamedeg::TameParams;

struct CommonOpts {
    TameParams params;
    bool p_set = false, e_set = false, f_set = false, m_set = false;
    std::string config_path;
    std::optional<long> q_eval;
    bool symbolic = false;
    bool json = false;
    std::string out_path;
    long budget = 1000000;
    long n_max = 6;
    long r_extra = 3;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--p", o.params.p, "residue characteristic (0 keeps q symbolic)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--n", o.params.n, "rank: n = e * f");
    cmd->add_option("--e", o.params.e, "ramification index");
    cmd->add_option("--f", o.params.f, "inertia degree");
    cmd->add_option("--r", o.params.r, "level of the congruence quotient");
    cmd->add_option("--m", o.params.m, "conjugation exponent of the group relation");
    cmd->add_option("--c", o.params.c, "folding exponent of the group relation");
    cmd->add_option("--w", o.params.w, "unit twist selecting the ramified extension");
    cmd->add_option("--q", o.q_eval, "evaluate exact values at this q");
    cmd->add_flag("--symbolic", o.symbolic, "keep q formal even when p is given");
    cmd->add_flag("--json", o.json, "machine-readable report");
    cmd->add_option("--out", o.out_path, "write the report to this path");
    cmd->add_option("--budget", o.budget, "enumeration budget")
        ->envname("TAMEDEG_BUDGET");
    cmd->add_option("--config", o.config_path, "scenario file: [id] sections of key = value");
}

// Flags override scenario-file values; missing e/f are derived from n.
void finalize_params(TameParams& t, const CommonOpts& o, const CLI::App* cmd) {
    auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (given("--p")) t.p = o.params.p;
    if (given("--n")) t.n = o.params.n;
    if (given("--e")) t.e = o.params.e;
    if (given("--f")) t.f = o.params.f;
    if (given("--r")) t.r = o.params.r;
    if (given("--m")) t.m = o.params.m;
    if (given("--c")) t.c = o.params.c;
    if (given("--w")) t.w = o.params.w;
    if (t.n == 0 && t.e > 0 && t.f > 0) t.n = t.e * t.f;
    if (t.n > 0) {
        if (given("--e") && !given("--f") && t.e > 0 && t.n % t.e == 0)
            t.f = t.n / t.e;
        else if (given("--f") && !given("--e") && t.f > 0 && t.n % t.f == 0)
            t.e = t.n / t.f;
        else if (!given("--e") && !given("--f") && t.e == 1 && t.f == 1 && t.n != 1)
            t.f = t.n;  // unramified by default
    }
    // A concrete instance needs the conjugation exponent induced by the
    // residue Frobenius unless the caller pinned one explicitly.
    if (t.p != 0 && t.e > 1 && !given("--m")) t.m = t.p % t.e;
}

ScenarioConfig build_config(const CommonOpts& o, const CLI::App* cmd) {
    ScenarioConfig cfg;
    cfg.symbolic = o.symbolic;
    cfg.q_eval = o.q_eval;
    cfg.budget = o.budget;
    cfg.n_max = o.n_max;
    cfg.r_extra = o.r_extra;
    if (!o.config_path.empty()) {
        cfg.instances = tamedeg::parse_scenario_file(o.config_path);
        for (ScenarioInstance& si : cfg.instances) finalize_params(si.params, o, cmd);
    } else {
        ScenarioInstance si;
        si.params = o.params;
        finalize_params(si.params, o, cmd);
        cfg.instances.push_back(std::move(si));
    }
    return cfg;
}

int emit(const Report& rep, const CommonOpts& o) {
    const std::string body =
        o.json ? tamedeg::report_to_json(rep) : tamedeg::report_to_text(rep);
    if (o.out_path.empty()) {
        std::cout << body << "\n";
    } else {
        std::ofstream out(o.out_path);
        if (!out) {
            std::cerr << "cannot write " << o.out_path << "\n";
            return 2;
        }
        out << body << "\n";
    }
    if (rep.budget_exhausted) return 3;
    return tamedeg::report_all_pass(rep) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of the tame supercuspidal formal-degree identities"};
    app.require_subcommand(1);

    CommonOpts vo, bo, fo, co, so;
    bool verify_sweep = false;
    bool factors_principal = false;

    CLI::App* verify = app.add_subcommand("verify", "identity checks per instance");
    add_common(verify, vo);
    verify->add_flag("--sweep", verify_sweep, "run the admissible-cell sweep instead");
    verify->add_option("--n-max", vo.n_max, "largest rank in the sweep");
    verify->add_option("--r-extra", vo.r_extra, "levels beyond 2e in the sweep");

    CLI::App* brute = app.add_subcommand("brute", "construct the induced representation");
    add_common(brute, bo);

    CLI::App* factors = app.add_subcommand("factors", "L / epsilon / gamma constituents");
    add_common(factors, fo);
    factors->add_flag("--principal", factors_principal, "principal parameter of rank n");

    CLI::App* conductor = app.add_subcommand("conductor", "ramification band table");
    add_common(conductor, co);

    CLI::App* sweep = app.add_subcommand("sweep", "identity verdict on every admissible cell");
    add_common(sweep, so);
    sweep->add_option("--n-max", so.n_max, "largest rank in the sweep");
    sweep->add_option("--r-extra", so.r_extra, "levels beyond 2e in the sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            if (verify_sweep) return emit(tamedeg::run_sweep(build_config(vo, verify)), vo);
            return emit(tamedeg::run_verify(build_config(vo, verify)), vo);
        }
        if (brute->parsed()) return emit(tamedeg::run_brute(build_config(bo, brute)), bo);
        if (factors->parsed())
            return emit(tamedeg::run_factors(build_config(fo, factors), factors_principal), fo);
        if (conductor->parsed())
            return emit(tamedeg::run_conductor(build_config(co, conductor)), co);
        if (sweep->parsed()) return emit(tamedeg::run_sweep(build_config(so, sweep)), so);
    } catch (const std::domain_error& ex) {
        std::cerr << "invalid input: " << ex.what() << "\n";
        return 2;
    } catch (const std::length_error& ex) {
        std::cerr << "budget exhausted: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "verification failure: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
