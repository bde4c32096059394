#include "tamedeg/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tamedeg/beta.hpp"
#include "tamedeg/clifford.hpp"
#include "tamedeg/factors.hpp"
#include "tamedeg/residue.hpp"
#include "tamedeg/weil.hpp"

namespace tamedeg {

namespace {

using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

long elapsed_ms(clock_type::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock_type::now() - start)
        .count();
}

std::string rat_str(const Rational& x) { return x.get_str(); }

// Symbolic runs keep the rational function; a concrete q collapses it to an
// exact rational.
std::string value_str(const RationalFunctionQ& f, long q) {
    if (q == 0) return f.str("q");
    return rat_str(rf_eval(f, Rational(q)));
}

std::string make_id(const TameParams& t, bool with_mc) {
    std::ostringstream os;
    if (t.concrete()) os << "p" << t.p;
    os << "n" << t.n << "e" << t.e << "f" << t.f;
    if (with_mc) os << "m" << t.m << "c" << t.c;
    os << "r" << t.r;
    return os.str();
}

// Evaluation point used for value fields: 0 keeps q formal.
long eval_point(const ScenarioConfig& cfg, const TameParams& t) {
    if (cfg.q_eval) return *cfg.q_eval;
    if (t.concrete() && !cfg.symbolic) return t.p;
    return 0;
}

long galois_norm_index(const TameParams& t) {
    const long e = t.e;
    const long m = e == 1 ? 1 : ((t.m % e) + e) % e;
    const long c = e == 1 ? 0 : ((t.c % e) + e) % e;
    return abelianization(build_metacyclic(e, t.f, m, c)).normidx;
}

bool ring_fits_budget(const TameParams& t, long budget) {
    const double bits = static_cast<double>(t.n) * static_cast<double>(t.r) *
                        std::log2(static_cast<double>(t.p));
    return bits <= std::log2(static_cast<double>(budget));
}

void fill_norm_indices(InstanceReport& rep, const TameParams& t, long budget) {
    rep.norm_index_galois = galois_norm_index(t);
    if (!t.concrete()) return;
    if (!ring_fits_budget(t, budget)) {
        rep.notes.push_back("ring-side norm index skipped: ring larger than the budget");
        return;
    }
    const TameRing ring(BaseRing(t.p, t.r), t.f, t.e, t.w,
                        t.e > 1 ? derive_cprime_for(t) : 0);
    rep.norm_index_ring = norm_index(ring);
}

void validate_instance(const TameParams& t) {
    if (t.concrete())
        validate_concrete(t);
    else
        validate_group_relations(t);
}

}  // namespace

bool report_all_pass(const Report& r) {
    for (const InstanceReport& inst : r.instances)
        if (inst.verdict && !*inst.verdict) return false;
    return true;
}

Report run_verify(const ScenarioConfig& cfg) {
    Report out;
    for (const ScenarioInstance& si : cfg.instances) {
        const TameParams& t = si.params;
        validate_instance(t);
        const auto start = clock_type::now();
        InstanceReport rep;
        rep.id = si.id.empty() ? make_id(t, false) : si.id;
        rep.params = t;

        fill_norm_indices(rep, t, cfg.budget);
        bool indices_agree = true;
        if (rep.norm_index_ring && *rep.norm_index_ring != *rep.norm_index_galois) {
            indices_agree = false;
            rep.notes.push_back("ring-side and Galois-side norm indices disagree");
        }
        const long normidx = rep.norm_index_ring ? *rep.norm_index_ring : *rep.norm_index_galois;
        rep.a_phi = normidx * t.f;

        const long q = eval_point(cfg, t);
        const HiiVerdict hv = verify_hii(t, normidx);
        rep.thm3_lhs = value_str(hv.lhs, q);
        rep.thm3_rhs = value_str(hv.rhs, q);
        rep.thm2 = value_str(formal_degree(t, normidx), q);
        rep.dim_delta_formula = value_str(dim_delta_formula(t, normidx), q);
        rep.conductor = artin_conductor(t).total;
        if (!hv.notes.empty()) rep.notes.push_back(hv.notes);

        rep.verdict = hv.holds && indices_agree;
        rep.ms = elapsed_ms(start);
        out.instances.push_back(std::move(rep));
    }
    return out;
}

Report run_brute(const ScenarioConfig& cfg) {
    Report out;
    for (const ScenarioInstance& si : cfg.instances) {
        const TameParams& t = si.params;
        validate_concrete(t);
        const auto start = clock_type::now();
        InstanceReport rep;
        rep.id = si.id.empty() ? make_id(t, false) : si.id;
        rep.params = t;
        try {
            const BetaData bd = build_beta(t, cfg.budget);
            IsotropyData iso = isotropy_group(bd, t.r, cfg.budget);
            const std::vector<AbelianCharacter> thetas = theta_extensions(iso);
            std::ostringstream tn;
            tn << "level-character extensions: " << thetas.size()
               << "; the first in enumeration order is induced";
            rep.notes.push_back(tn.str());

            const SigmaRep sigma = t.r % 2 == 0 ? sigma_even(iso, thetas.front())
                                                : sigma_odd(iso, thetas.front());
            rep.notes.push_back(t.r % 2 == 0
                                    ? "even level: one-dimensional extension of the character"
                                    : "odd level: Heisenberg-model extension");
            const DeltaData delta = induce_delta(iso, sigma);

            rep.dim_delta_brute = delta.dim;
            rep.norm_index_ring = norm_index(bd.ext);
            rep.norm_index_galois = galois_norm_index(t);
            const long normidx = *rep.norm_index_ring;
            rep.a_phi = normidx * t.f;
            rep.dim_delta_formula = rat_str(Rational(dim_delta_at(t, normidx, t.p)));

            std::ostringstream on;
            on << "orbit size " << delta.orbit_size << ", restriction multiplicity b = "
               << delta.b;
            rep.notes.push_back(on.str());
            rep.notes.push_back(delta.irreducible
                                    ? "induced character has inner product 1: irreducible"
                                    : "induced character is NOT irreducible");

            const bool dims_match = dim_delta_at(t, normidx, t.p) == delta.dim;
            rep.verdict = delta.irreducible && dims_match &&
                          *rep.norm_index_ring == *rep.norm_index_galois;
        } catch (const std::length_error& ex) {
            out.budget_exhausted = true;
            rep.notes.push_back(std::string("enumeration budget exhausted: ") + ex.what());
        }
        rep.ms = elapsed_ms(start);
        out.instances.push_back(std::move(rep));
    }
    return out;
}

Report run_factors(const ScenarioConfig& cfg, bool principal) {
    Report out;
    for (const ScenarioInstance& si : cfg.instances) {
        const TameParams& t = si.params;
        const auto start = clock_type::now();
        InstanceReport rep;
        rep.params = t;
        LocalFactorReport fr;
        long q = 0;
        if (principal) {
            if (t.n < 2) throw std::domain_error("principal parameter needs n >= 2");
            rep.id = si.id.empty() ? "principal-n" + std::to_string(t.n) : si.id;
            fr = principal_parameter_factors(t.n);
            rep.notes.push_back("principal parameter: factors on the centralizer of a "
                                "regular nilpotent");
            q = cfg.q_eval ? *cfg.q_eval : 0;
        } else {
            validate_instance(t);
            rep.id = si.id.empty() ? make_id(t, false) : si.id;
            fr = tame_parameter_factors(t);
            q = eval_point(cfg, t);
        }
        rep.l_at_0 = value_str(fr.l_at_0, q);
        rep.l_at_1 = value_str(fr.l_at_1, q);
        rep.eps_abs = value_str(fr.eps_abs, q);
        rep.gamma_abs = value_str(fr.gamma_abs, q);
        rep.conductor = fr.conductor;
        rep.ms = elapsed_ms(start);
        out.instances.push_back(std::move(rep));
    }
    return out;
}

Report run_conductor(const ScenarioConfig& cfg) {
    Report out;
    for (const ScenarioInstance& si : cfg.instances) {
        const TameParams& t = si.params;
        validate_instance(t);
        const auto start = clock_type::now();
        InstanceReport rep;
        rep.id = si.id.empty() ? make_id(t, false) : si.id;
        rep.params = t;
        const ConductorBreakdown b = artin_conductor(t);
        rep.conductor = b.total;
        for (const ConductorBand& band : b.bands) {
            std::ostringstream os;
            if (band.k == 0)
                os << "band k=0 (t = 0): ";
            else
                os << "band k=" << band.k << " (q^" << t.f * (band.k - 1) << " - 1 < t <= q^"
                   << t.f * band.k << " - 1): ";
            os << "|D_t| = " << band.card.str("q") << ", fixed dim " << band.dim_fixed
               << ", weight " << band.weight.str("q");
            rep.notes.push_back(os.str());
        }
        for (long q : {3L, 5L, 7L}) {
            std::ostringstream os;
            os << "total at q=" << q << ": " << rat_str(conductor_total_at(b, q));
            rep.notes.push_back(os.str());
        }
        // The invariant the table must satisfy, derived on the spot.
        bool concrete_ok = true;
        for (long q : {3L, 5L, 7L})
            concrete_ok = concrete_ok && conductor_total_at(b, q) == Rational(b.total);
        rep.verdict = b.total == t.r * t.n * (t.n - 1) && concrete_ok;
        rep.ms = elapsed_ms(start);
        out.instances.push_back(std::move(rep));
    }
    return out;
}

Report run_sweep(const ScenarioConfig& cfg) {
    Report out;
    for (const HiiSweepCell& cell : hii_sweep(cfg.n_max, cfg.r_extra)) {
        InstanceReport rep;
        rep.id = make_id(cell.params, true);
        rep.params = cell.params;
        rep.norm_index_galois = cell.normidx;
        rep.a_phi = cell.normidx * cell.params.f;
        rep.thm3_lhs = cell.verdict.lhs.str("q");
        rep.thm3_rhs = cell.verdict.rhs.str("q");
        rep.verdict = cell.verdict.holds;
        if (!cell.verdict.notes.empty()) rep.notes.push_back(cell.verdict.notes);
        out.instances.push_back(std::move(rep));
    }
    return out;
}

namespace {

ordered_json opt_str(const std::optional<std::string>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}
ordered_json opt_long(const std::optional<long>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const ordered_json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

std::string report_to_json(const Report& r) {
    ordered_json root;
    root["instances"] = ordered_json::array();
    for (const InstanceReport& inst : r.instances) {
        ordered_json j;
        j["id"] = inst.id;
        j["params"] = {{"p", inst.params.p}, {"n", inst.params.n}, {"e", inst.params.e},
                       {"f", inst.params.f}, {"r", inst.params.r}, {"m", inst.params.m},
                       {"c", inst.params.c}, {"w", inst.params.w}};
        j["dim_delta_formula"] = opt_str(inst.dim_delta_formula);
        j["dim_delta_brute"] = opt_long(inst.dim_delta_brute);
        j["norm_index_ring"] = opt_long(inst.norm_index_ring);
        j["norm_index_galois"] = opt_long(inst.norm_index_galois);
        j["a_phi"] = opt_long(inst.a_phi);
        j["conductor"] = opt_long(inst.conductor);
        j["thm2"] = opt_str(inst.thm2);
        j["thm3_lhs"] = opt_str(inst.thm3_lhs);
        j["thm3_rhs"] = opt_str(inst.thm3_rhs);
        j["l_at_0"] = opt_str(inst.l_at_0);
        j["l_at_1"] = opt_str(inst.l_at_1);
        j["eps_abs"] = opt_str(inst.eps_abs);
        j["gamma_abs"] = opt_str(inst.gamma_abs);
        j["verdict"] = inst.verdict ? ordered_json(*inst.verdict) : ordered_json(nullptr);
        j["notes"] = inst.notes;
        j["ms"] = inst.ms;
        root["instances"].push_back(std::move(j));
    }
    root["budget_exhausted"] = r.budget_exhausted;
    return root.dump(2);
}

Report report_from_json(const std::string& text) {
    const ordered_json root = ordered_json::parse(text);
    Report out;
    out.budget_exhausted = root.value("budget_exhausted", false);
    for (const ordered_json& j : root.at("instances")) {
        InstanceReport inst;
        inst.id = j.at("id").get<std::string>();
        const ordered_json& p = j.at("params");
        inst.params.p = p.at("p").get<long>();
        inst.params.n = p.at("n").get<long>();
        inst.params.e = p.at("e").get<long>();
        inst.params.f = p.at("f").get<long>();
        inst.params.r = p.at("r").get<long>();
        inst.params.m = p.at("m").get<long>();
        inst.params.c = p.at("c").get<long>();
        inst.params.w = p.at("w").get<long>();
        inst.dim_delta_formula = get_opt<std::string>(j, "dim_delta_formula");
        inst.dim_delta_brute = get_opt<long>(j, "dim_delta_brute");
        inst.norm_index_ring = get_opt<long>(j, "norm_index_ring");
        inst.norm_index_galois = get_opt<long>(j, "norm_index_galois");
        inst.a_phi = get_opt<long>(j, "a_phi");
        inst.conductor = get_opt<long>(j, "conductor");
        inst.thm2 = get_opt<std::string>(j, "thm2");
        inst.thm3_lhs = get_opt<std::string>(j, "thm3_lhs");
        inst.thm3_rhs = get_opt<std::string>(j, "thm3_rhs");
        inst.l_at_0 = get_opt<std::string>(j, "l_at_0");
        inst.l_at_1 = get_opt<std::string>(j, "l_at_1");
        inst.eps_abs = get_opt<std::string>(j, "eps_abs");
        inst.gamma_abs = get_opt<std::string>(j, "gamma_abs");
        inst.verdict = get_opt<bool>(j, "verdict");
        inst.notes = j.at("notes").get<std::vector<std::string>>();
        inst.ms = j.at("ms").get<long>();
        out.instances.push_back(std::move(inst));
    }
    return out;
}

std::string report_to_text(const Report& r) {
    std::ostringstream os;
    for (const InstanceReport& inst : r.instances) {
        const TameParams& t = inst.params;
        os << "== " << inst.id << " (p=" << t.p << " n=" << t.n << " e=" << t.e
           << " f=" << t.f << " r=" << t.r << " m=" << t.m << " c=" << t.c << " w=" << t.w
           << ") [" << inst.ms << " ms]\n";
        auto line_s = [&os](const char* k, const std::optional<std::string>& v) {
            if (v) os << "  " << k << " = " << *v << "\n";
        };
        auto line_l = [&os](const char* k, const std::optional<long>& v) {
            if (v) os << "  " << k << " = " << *v << "\n";
        };
        line_s("dim_delta_formula", inst.dim_delta_formula);
        line_l("dim_delta_brute", inst.dim_delta_brute);
        line_l("norm_index_ring", inst.norm_index_ring);
        line_l("norm_index_galois", inst.norm_index_galois);
        line_l("a_phi", inst.a_phi);
        line_l("conductor", inst.conductor);
        line_s("thm2", inst.thm2);
        line_s("thm3_lhs", inst.thm3_lhs);
        line_s("thm3_rhs", inst.thm3_rhs);
        line_s("L(0)", inst.l_at_0);
        line_s("L(1)", inst.l_at_1);
        line_s("|eps|", inst.eps_abs);
        line_s("|gamma|", inst.gamma_abs);
        if (inst.verdict) os << "  verdict = " << (*inst.verdict ? "pass" : "FAIL") << "\n";
        for (const std::string& n : inst.notes) os << "  note: " << n << "\n";
    }
    if (r.budget_exhausted) os << "!! enumeration budget exhausted; report is partial\n";
    std::size_t pass = 0, fail = 0;
    for (const InstanceReport& inst : r.instances) {
        if (!inst.verdict) continue;
        (*inst.verdict ? pass : fail) += 1;
    }
    os << r.instances.size() << " instance(s), " << pass << " pass, " << fail << " fail\n";
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ScenarioInstance> parse_scenario_text(const std::string& text) {
    std::vector<ScenarioInstance> out;
    std::istringstream in(text);
    std::string line;
    ScenarioInstance* current = nullptr;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw std::domain_error("scenario line " + std::to_string(lineno) +
                                        ": unterminated section header");
            const std::string id = trim(s.substr(1, s.size() - 2));
            if (id.empty())
                throw std::domain_error("scenario line " + std::to_string(lineno) +
                                        ": empty instance id");
            out.push_back(ScenarioInstance{id, TameParams{}});
            current = &out.back();
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos || current == nullptr)
            throw std::domain_error("scenario line " + std::to_string(lineno) +
                                    ": expected [id] or key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        long num = 0;
        try {
            std::size_t used = 0;
            num = std::stol(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw std::domain_error("scenario line " + std::to_string(lineno) +
                                    ": value of " + key + " is not an integer");
        }
        TameParams& t = current->params;
        if (key == "p") t.p = num;
        else if (key == "n") t.n = num;
        else if (key == "e") t.e = num;
        else if (key == "f") t.f = num;
        else if (key == "r") t.r = num;
        else if (key == "m") t.m = num;
        else if (key == "c") t.c = num;
        else if (key == "w") t.w = num;
        else
            throw std::domain_error("scenario line " + std::to_string(lineno) +
                                    ": unknown key " + key);
    }
    return out;
}

std::vector<ScenarioInstance> parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

}  // namespace tamedeg
