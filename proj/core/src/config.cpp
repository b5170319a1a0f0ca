#include "sdlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdlab/errors.hpp"

namespace sdlab {

using nlohmann::json;

namespace {

const struct IdRow {
    ExperimentId id;
    const char* name;
    const char* blurb;
} kIds[] = {
    {ExperimentId::Thm41, "thm41", "low-frequency expansion of E0 u0^ (rate -n/8 - gamma/4)"},
    {ExperimentId::Thm42, "thm42", "low-frequency expansion of E1 u1^ (rate -n/8 + 1/4 - gamma/4)"},
    {ExperimentId::Thm43, "thm43", "two-sided solution norm on the low ball (sqrt t / sqrt log t / power)"},
    {ExperimentId::Thm44, "thm44", "optimality of the leading diffusion-wave profile (rate -n/8)"},
    {ExperimentId::Thm45, "thm45", "second-order profile optimality (rate -n/8 - 1/4)"},
    {ExperimentId::Thm46, "thm46", "high-shell regularity-loss expansion (rate -(l+3k+4)/2)"},
    {ExperimentId::Thm47, "thm47", "full-space case classification over (n, l)"},
    {ExperimentId::Thm61, "thm61", "threshold k*: two-sided full-space rate -n/8 + 1/4"},
    {ExperimentId::Thm62, "thm62", "threshold variant: full-space rate -n/8"},
    {ExperimentId::Thm63, "thm63", "threshold variant: full-space rate -n/8 - 1/4"},
    {ExperimentId::Lemma7, "lemma7", "growth laws of the oscillatory model integral (t, log t, power)"},
    {ExperimentId::SweepL, "sweep-l", "regularity sweep across l* = n/4 - 3/2"},
    {ExperimentId::SweepK, "sweep-k", "expansion-order sweep across k* = (n-18)/12"},
    {ExperimentId::KernelCheck, "kernel-check", "root identities, branch continuity, ODE residual"},
};

ExperimentId id_from_name(const std::string& name) {
    for (const auto& row : kIds)
        if (name == row.name) return row.id;
    throw ConfigError("config.id: unknown experiment '" + name + "'");
}

AngularMonomial beta_from_json(const json& j, int n, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": beta must be an array of exponents");
    AngularMonomial beta;
    int axis = 0;
    for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<int>() < 0)
            throw ConfigError(path + ": beta exponents must be nonnegative integers");
        const int p = e.get<int>();
        if (p > 0) beta.exps.emplace_back(axis, p);
        ++axis;
    }
    if (axis > n) throw ConfigError(path + ": beta has more axes than n");
    if (beta.degree() > 2) throw ConfigError(path + ": |beta| must be <= 2");
    return beta;
}

DatumComponent component_from_json(const json& j, int n, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": component must be an object");
    DatumComponent comp;
    const std::string kind = j.value("kind", "gaussian");
    const double parameter = j.value("parameter", 1.0);
    if (kind == "gaussian") {
        comp.envelope = Gaussian{parameter};
    } else if (kind == "power-tail") {
        comp.envelope = PowerTail{parameter};
    } else if (kind == "gauss-bump") {
        comp.envelope = GaussBump{parameter};
    } else {
        throw ConfigError(path + ".kind: unknown envelope '" + kind + "'");
    }
    comp.amplitude = j.value("amplitude", 1.0);
    if (j.contains("beta")) comp.beta = beta_from_json(j.at("beta"), n, path + ".beta");
    return comp;
}

void check_known_keys(const json& j) {
    static const char* known[] = {"id", "n", "l", "gamma", "k", "eps", "datum", "ladder",
                                  "quad", "l_values", "k_values", "jobs", "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* key : known)
            if (it.key() == key) ok = true;
        if (!ok) throw ConfigError("config." + it.key() + ": unknown field");
    }
}

void validate(ExperimentConfig& cfg) {
    if (cfg.n < 1) throw ConfigError("config.n: must be >= 1");
    if (cfg.jobs < 1) throw ConfigError("config.jobs: must be >= 1");
    if (!(cfg.eps > 0.0)) throw ConfigError("config.eps: must be > 0");
    switch (cfg.id) {
    case ExperimentId::Thm41:
    case ExperimentId::Thm42: {
        if (!cfg.gamma) cfg.gamma = 1.0;
        if (*cfg.gamma < 0.0) throw ConfigError("config.gamma: must be >= 0");
        if (*cfg.gamma >= 3.0)
            throw ConfigError("config.gamma: moment table caps gamma below 3");
        if (cfg.id == ExperimentId::Thm42) {
            const double g = *cfg.gamma;
            if ((cfg.n == 1 && !(g > 0.5)) || (cfg.n == 2 && !(g > 0.0)))
                throw ConfigError("config.gamma: admissibility needs gamma > 1/2 (n=1), > 0 (n=2)");
        }
        break;
    }
    case ExperimentId::Thm46:
        if (!cfg.l) throw ConfigError("config.l: required for thm46");
        if (!cfg.k) throw ConfigError("config.k: required for thm46");
        if (*cfg.l < 0.0) throw ConfigError("config.l: must be >= 0");
        if (*cfg.k < 0 || *cfg.k > 8) throw ConfigError("config.k: must be in 0..8");
        break;
    case ExperimentId::Thm47:
        if (!cfg.l) throw ConfigError("config.l: required for thm47");
        if (*cfg.l < 0.0) throw ConfigError("config.l: must be >= 0");
        break;
    case ExperimentId::Thm61:
    case ExperimentId::Thm62:
    case ExperimentId::Thm63: {
        if (cfg.n < 3) throw ConfigError("config.n: must be >= 3 for this experiment");
        if (!cfg.k) cfg.k = 0;
        const int shift = cfg.id == ExperimentId::Thm61 ? 18
                          : cfg.id == ExperimentId::Thm62 ? 16 : 14;
        const double k_min = (cfg.n - shift) / 12.0;
        if (*cfg.k < k_min)
            throw ConfigError("config.k: hypothesis needs k >= (n-" + std::to_string(shift) +
                              ")/12");
        if (*cfg.k > 8) throw ConfigError("config.k: must be <= 8");
        break;
    }
    case ExperimentId::SweepL:
        for (double l : cfg.l_values)
            if (l < 0.0) throw ConfigError("config.l_values: entries must be >= 0");
        if (cfg.l_values.size() < 2)
            throw ConfigError("config.l_values: need at least two values");
        break;
    case ExperimentId::SweepK:
        for (int k : cfg.k_values)
            if (k < 0 || k > 8) throw ConfigError("config.k_values: entries must be in 0..8");
        if (cfg.k_values.empty()) throw ConfigError("config.k_values: must not be empty");
        break;
    default:
        break;
    }
}

} // namespace

const char* experiment_name(ExperimentId id) {
    for (const auto& row : kIds)
        if (row.id == id) return row.name;
    return "?";
}

const char* experiment_blurb(ExperimentId id) {
    for (const auto& row : kIds)
        if (row.id == id) return row.blurb;
    return "";
}

std::vector<ExperimentId> all_experiments() {
    std::vector<ExperimentId> out;
    for (const auto& row : kIds) out.push_back(row.id);
    return out;
}

namespace {

ExperimentConfig parse_config_object(const json& j);

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    try {
        return parse_config_object(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

ExperimentConfig parse_config_object(const json& j) {
    check_known_keys(j);
    ExperimentConfig cfg;
    if (!j.contains("id")) throw ConfigError("config.id: required");
    cfg.id = id_from_name(j.at("id").get<std::string>());
    if (!j.contains("n")) throw ConfigError("config.n: required");
    cfg.n = j.at("n").get<int>();
    if (j.contains("l")) cfg.l = j.at("l").get<double>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("k")) cfg.k = j.at("k").get<int>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("ladder")) {
        const json& lj = j.at("ladder");
        cfg.ladder.t0 = lj.value("t0", cfg.ladder.t0);
        cfg.ladder.ratio = lj.value("ratio", cfg.ladder.ratio);
        cfg.ladder.steps = lj.value("steps", cfg.ladder.steps);
        if (!(cfg.ladder.t0 > 0.0) || !(cfg.ladder.ratio > 1.0) || cfg.ladder.steps < 4)
            throw ConfigError("config.ladder: need t0 > 0, ratio > 1, steps >= 4");
    }
    if (j.contains("quad")) {
        const json& qj = j.at("quad");
        cfg.quad.rel_tol = qj.value("rel_tol", cfg.quad.rel_tol);
        cfg.quad.panel_phase_cap = qj.value("panel_phase_cap", cfg.quad.panel_phase_cap);
        cfg.quad.gl_order = qj.value("gl_order", cfg.quad.gl_order);
        cfg.quad.tail_tol = qj.value("tail_tol", cfg.quad.tail_tol);
        cfg.quad.max_panels = qj.value("max_panels", cfg.quad.max_panels);
        if (!(cfg.quad.rel_tol > 0.0)) throw ConfigError("config.quad.rel_tol: must be > 0");
        if (!(cfg.quad.panel_phase_cap > 0.0) || cfg.quad.panel_phase_cap > M_PI / 2.0)
            throw ConfigError("config.quad.panel_phase_cap: must be in (0, pi/2]");
        if (cfg.quad.gl_order < 4 || cfg.quad.gl_order > 64)
            throw ConfigError("config.quad.gl_order: must be in 4..64");
    }
    if (j.contains("l_values")) {
        cfg.l_values.clear();
        for (const auto& e : j.at("l_values")) cfg.l_values.push_back(e.get<double>());
    }
    if (j.contains("k_values")) {
        cfg.k_values.clear();
        for (const auto& e : j.at("k_values")) cfg.k_values.push_back(e.get<int>());
    }
    if (j.contains("datum")) {
        const json& dj = j.at("datum");
        if (!dj.is_array()) throw ConfigError("config.datum: must be an array of components");
        int idx = 0;
        for (const auto& e : dj) {
            const std::string path = "config.datum[" + std::to_string(idx) + "]";
            const std::string side = e.value("side", "");
            if (side != "u0" && side != "u1")
                throw ConfigError(path + ".side: must be 'u0' or 'u1'");
            DatumComponent comp = component_from_json(e, cfg.n, path);
            (side == "u0" ? cfg.datum_u0 : cfg.datum_u1).push_back(std::move(comp));
            ++idx;
        }
        cfg.custom_datum = true;
    }
    validate(cfg);
    return cfg;
}

} // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

json component_to_json(const DatumComponent& comp) {
    json j;
    std::visit(
        [&j](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                j["kind"] = "gaussian";
                j["parameter"] = e.sigma;
            } else if constexpr (std::is_same_v<T, PowerTail>) {
                j["kind"] = "power-tail";
                j["parameter"] = e.s;
            } else {
                j["kind"] = "gauss-bump";
                j["parameter"] = e.sigma;
            }
        },
        comp.envelope);
    j["amplitude"] = comp.amplitude;
    json beta = json::array();
    int max_axis = -1;
    for (auto& [axis, p] : comp.beta.exps) max_axis = std::max(max_axis, axis);
    for (int a = 0; a <= max_axis; ++a) beta.push_back(0);
    for (auto& [axis, p] : comp.beta.exps) beta[static_cast<std::size_t>(axis)] = p;
    j["beta"] = beta;
    return j;
}

} // namespace

std::string canonical_config(const ExperimentConfig& cfg) {
    json j;
    j["id"] = experiment_name(cfg.id);
    j["n"] = cfg.n;
    if (cfg.l) j["l"] = *cfg.l;
    if (cfg.gamma) j["gamma"] = *cfg.gamma;
    if (cfg.k) j["k"] = *cfg.k;
    j["eps"] = cfg.eps;
    j["ladder"] = {{"t0", cfg.ladder.t0}, {"ratio", cfg.ladder.ratio}, {"steps", cfg.ladder.steps}};
    j["quad"] = {{"rel_tol", cfg.quad.rel_tol},
                 {"panel_phase_cap", cfg.quad.panel_phase_cap},
                 {"gl_order", cfg.quad.gl_order},
                 {"tail_tol", cfg.quad.tail_tol},
                 {"max_panels", cfg.quad.max_panels}};
    if (cfg.id == ExperimentId::SweepL) j["l_values"] = cfg.l_values;
    if (cfg.id == ExperimentId::SweepK) j["k_values"] = cfg.k_values;
    if (cfg.custom_datum) {
        json d = json::array();
        for (const auto& c : cfg.datum_u0) {
            json cj = component_to_json(c);
            cj["side"] = "u0";
            d.push_back(cj);
        }
        for (const auto& c : cfg.datum_u1) {
            json cj = component_to_json(c);
            cj["side"] = "u1";
            d.push_back(cj);
        }
        j["datum"] = d;
    }
    return j.dump();
}

std::string config_digest(const ExperimentConfig& cfg) {
    const std::string canon = canonical_config(cfg);
    // FNV-1a, 64-bit.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace sdlab
