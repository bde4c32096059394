#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamedeg/params.hpp"

namespace tamedeg {

// One verification record. Exact values travel as canonical strings so that
// symbolic runs (rational functions of q) and concrete runs (rationals) share
// a single shape; fields a command does not compute stay empty. Verdicts are
// always derived from the computed quantities, never set by hand.
struct InstanceReport {
    std::string id;
    TameParams params;
    std::optional<std::string> dim_delta_formula;
    std::optional<long> dim_delta_brute;
    std::optional<long> norm_index_ring;
    std::optional<long> norm_index_galois;
    std::optional<long> a_phi;
    std::optional<long> conductor;
    std::optional<std::string> thm2;
    std::optional<std::string> thm3_lhs;
    std::optional<std::string> thm3_rhs;
    std::optional<std::string> l_at_0;
    std::optional<std::string> l_at_1;
    std::optional<std::string> eps_abs;
    std::optional<std::string> gamma_abs;
    std::optional<bool> verdict;
    std::vector<std::string> notes;
    long ms = 0;

    bool operator==(const InstanceReport&) const = default;
};

struct Report {
    std::vector<InstanceReport> instances;
    bool budget_exhausted = false;

    bool operator==(const Report&) const = default;
};

// True when no instance carries a failed verdict (instances without a verdict
// do not count against the report).
bool report_all_pass(const Report& r);

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);  // exact inverse
std::string report_to_text(const Report& r);

// A named parameter tuple from a scenario file or the command line.
struct ScenarioInstance {
    std::string id;
    TameParams params;
};

// Flat config document: one [instance-id] section per instance with
// key = value pairs over p, n, e, f, r, m, c, w; '#' or ';' start comments.
std::vector<ScenarioInstance> parse_scenario_text(const std::string& text);
std::vector<ScenarioInstance> parse_scenario_file(const std::string& path);

// Everything a command run needs beyond the instance list.
struct ScenarioConfig {
    std::vector<ScenarioInstance> instances;
    bool symbolic = false;            // keep q formal even when p is given
    std::optional<long> q_eval;       // evaluate exact functions at this q
    long budget = 1000000;
    long n_max = 6;                   // sweep bounds
    long r_extra = 3;
};

// Symbolic identity checks and cross-module norm-index comparison.
Report run_verify(const ScenarioConfig& cfg);
// Explicit construction of the induced representation, dimension vs formula.
Report run_brute(const ScenarioConfig& cfg);
// L/epsilon/gamma constituents; principal = the Steinberg-type parameter.
Report run_factors(const ScenarioConfig& cfg, bool principal);
// Conductor band table and total.
Report run_conductor(const ScenarioConfig& cfg);
// Identity verdict on every admissible cell up to the sweep bounds.
Report run_sweep(const ScenarioConfig& cfg);

}  // namespace tamedeg
