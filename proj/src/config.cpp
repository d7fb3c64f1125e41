#include "ldgf/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ldgf/errors.hpp"

namespace ldgf {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::config_invalid, what); }

void check_keys(const json& obj, const std::string& block, const std::set<std::string>& allowed) {
    if (!obj.is_object()) invalid("'" + block + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) invalid("unknown key '" + block + "." + key + "'");
    }
}

template <class T>
T get(const json& obj, const std::string& block, const std::string& key) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        invalid("'" + block + "." + key + "' has the wrong type");
    }
}

template <class T>
void read(const json& obj, const std::string& block, const std::string& key, T& out) {
    if (obj.contains(key)) out = get<T>(obj, block, key);
}

template <class T>
void read(const json& obj, const std::string& block, const std::string& key, std::optional<T>& out) {
    if (obj.contains(key)) out = get<T>(obj, block, key);
}

template <class T>
void write(json& obj, const std::string& key, const std::optional<T>& v) {
    if (v) obj[key] = *v;
}

template <class T>
void write(json& obj, const std::string& key, const std::vector<T>& v) {
    if (!v.empty()) obj[key] = v;
}

json to_json(const ExperimentConfig& c) {
    json root = json::object();
    json land = {{"id", c.landscape.id}};
    if (!c.landscape.params.empty()) land["params"] = c.landscape.params;
    if (!c.landscape.arrays.empty()) land["arrays"] = c.landscape.arrays;
    root["landscape"] = land;

    json diss = {{"family", c.dissipation.family}};
    write(diss, "beta_list", c.dissipation.beta_list);
    write(diss, "M", c.dissipation.M);
    write(diss, "R", c.dissipation.R);
    root["dissipation"] = diss;

    json reg = json::object();
    const RegimeBlock& r = c.regime;
    write(reg, "n", r.n);
    write(reg, "n_list", r.n_list);
    write(reg, "alpha", r.alpha);
    write(reg, "beta", r.beta);
    write(reg, "omega", r.omega);
    write(reg, "A", r.A);
    write(reg, "h", r.h);
    write(reg, "delta", r.delta);
    write(reg, "radius", r.radius);
    write(reg, "amplitude", r.amplitude);
    root["regime"] = reg;

    json run = {{"T", c.run.T},           {"x0", c.run.x0},         {"tol", c.run.tol},
                {"replicas", c.run.replicas}, {"workers", c.run.workers}, {"record_every", c.run.record_every}};
    write(run, "dt", c.run.dt);
    write(run, "seed", c.run.seed);
    write(run, "curve", c.run.curve);
    root["run"] = run;

    root["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
    return root;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        invalid(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(root, "config", {"landscape", "dissipation", "regime", "run", "output"});
    ExperimentConfig c;

    if (!root.contains("landscape")) invalid("missing 'landscape' block");
    const json& land = root["landscape"];
    check_keys(land, "landscape", {"id", "params", "arrays"});
    c.landscape.id = get<std::string>(land, "landscape", "id");
    read(land, "landscape", "params", c.landscape.params);
    read(land, "landscape", "arrays", c.landscape.arrays);

    if (root.contains("dissipation")) {
        const json& d = root["dissipation"];
        check_keys(d, "dissipation", {"family", "beta_list", "M", "R"});
        read(d, "dissipation", "family", c.dissipation.family);
        read(d, "dissipation", "beta_list", c.dissipation.beta_list);
        read(d, "dissipation", "M", c.dissipation.M);
        read(d, "dissipation", "R", c.dissipation.R);
    }
    if (root.contains("regime")) {
        const json& g = root["regime"];
        check_keys(g, "regime", {"n", "n_list", "alpha", "beta", "omega", "A", "h", "delta", "radius", "amplitude"});
        RegimeBlock& r = c.regime;
        read(g, "regime", "n", r.n);
        read(g, "regime", "n_list", r.n_list);
        read(g, "regime", "alpha", r.alpha);
        read(g, "regime", "beta", r.beta);
        read(g, "regime", "omega", r.omega);
        read(g, "regime", "A", r.A);
        read(g, "regime", "h", r.h);
        read(g, "regime", "delta", r.delta);
        read(g, "regime", "radius", r.radius);
        read(g, "regime", "amplitude", r.amplitude);
    }
    if (root.contains("run")) {
        const json& u = root["run"];
        check_keys(u, "run", {"T", "x0", "dt", "tol", "replicas", "seed", "workers", "record_every", "curve"});
        read(u, "run", "T", c.run.T);
        read(u, "run", "x0", c.run.x0);
        read(u, "run", "dt", c.run.dt);
        read(u, "run", "tol", c.run.tol);
        read(u, "run", "replicas", c.run.replicas);
        read(u, "run", "seed", c.run.seed);
        read(u, "run", "workers", c.run.workers);
        read(u, "run", "record_every", c.run.record_every);
        read(u, "run", "curve", c.run.curve);
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        check_keys(o, "output", {"directory", "formats"});
        read(o, "output", "directory", c.output.directory);
        read(o, "output", "formats", c.output.formats);
        for (const auto& f : c.output.formats) {
            if (f != "csv" && f != "json") invalid("output format must be 'csv' or 'json', got '" + f + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io_error, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2); }

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"simulate", "sde",     "langevin", "flow",   "ri-flow", "action",
                                                "mosco-q",  "mosco-ri", "lln",     "bridge", "ldp",     "check-dissipation"};
    return names;
}

bool is_stochastic(std::string_view command) {
    return command == "simulate" || command == "sde" || command == "langevin" || command == "lln" ||
           command == "bridge" || command == "ldp";
}

void validate_config(const ExperimentConfig& c, std::string_view command) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        invalid("unknown command '" + std::string(command) + "'");
    }
    const std::string cmd(command);
    const RegimeBlock& r = c.regime;
    auto need = [&](bool present, const char* what) {
        if (!present) invalid(cmd + " requires " + what);
    };
    auto forbid = [&](bool present, const char* what) {
        if (present) invalid(cmd + " does not take " + what);
    };
    if (is_stochastic(command)) need(c.run.seed.has_value(), "run.seed");
    if (!(c.run.T > 0.0)) invalid("run.T must be positive");
    if (!(c.run.tol > 0.0)) invalid("run.tol must be positive");

    const std::string& fam = c.dissipation.family;
    auto family_params = [&] {
        if (fam == "cosh") {
            need(r.alpha && r.beta, "regime.alpha and regime.beta for the cosh family");
            forbid(r.omega || r.A, "regime.omega or regime.A with the cosh family");
        } else if (fam == "vanishing_viscosity") {
            need(r.A && r.beta, "regime.A and regime.beta for the vanishing_viscosity family");
            forbid(r.alpha || r.omega, "regime.alpha or regime.omega with vanishing_viscosity");
        } else if (fam == "quadratic_limit") {
            need(r.omega.has_value(), "regime.omega for the quadratic_limit family");
            forbid(r.alpha || r.beta || r.A, "regime.alpha, beta or A with quadratic_limit");
        } else if (fam == "rate_independent") {
            need(r.A.has_value(), "regime.A for the rate_independent family");
            forbid(r.alpha || r.beta || r.omega, "regime.alpha, beta or omega with rate_independent");
        } else {
            invalid("unknown dissipation family '" + fam + "'");
        }
    };

    if (cmd == "simulate" || cmd == "lln") {
        need(r.alpha && r.beta, "regime.alpha and regime.beta");
        forbid(r.omega || r.A, "regime.omega or regime.A");
        if (cmd == "simulate") need(r.n.has_value(), "regime.n");
        if (cmd == "lln") need(!r.n_list.empty(), "regime.n_list");
    } else if (cmd == "sde") {
        need(r.omega && r.h, "regime.omega and regime.h");
        need(c.run.dt.has_value(), "run.dt");
        forbid(r.alpha || r.beta || r.A, "regime.alpha, beta or A");
    } else if (cmd == "langevin") {
        need(r.n && r.beta && r.amplitude, "regime.n, regime.beta and regime.amplitude");
    } else if (cmd == "flow" || cmd == "action") {
        family_params();
        if (cmd == "flow" && fam == "rate_independent") invalid("flow needs a smooth family; use ri-flow");
        if (cmd == "action") need(c.run.curve.has_value(), "run.curve");
    } else if (cmd == "ri-flow") {
        need(r.A.has_value(), "regime.A");
        forbid(r.alpha || r.beta || r.omega, "regime.alpha, beta or omega");
    } else if (cmd == "mosco-q") {
        need(r.omega.has_value(), "regime.omega");
        forbid(r.alpha || r.A, "regime.alpha or regime.A (alpha is set to omega / beta)");
        need(!c.dissipation.beta_list.empty(), "dissipation.beta_list");
        need(c.run.curve.has_value(), "run.curve");
    } else if (cmd == "mosco-ri") {
        need(r.A.has_value(), "regime.A");
        forbid(r.alpha.has_value(), "regime.alpha (alpha is tied to exp(-beta A))");
        forbid(r.omega.has_value(), "regime.omega");
        need(!c.dissipation.beta_list.empty(), "dissipation.beta_list");
        if (fam != "cosh" && fam != "vanishing_viscosity") invalid("mosco-ri needs the cosh or vanishing_viscosity family");
    } else if (cmd == "bridge") {
        need(r.omega && r.delta, "regime.omega and regime.delta");
        need(!r.n_list.empty(), "regime.n_list");
        if (*r.delta == 1.0) need(r.h.has_value(), "regime.h when delta = 1");
        forbid(r.alpha || r.beta || r.A, "regime.alpha, beta or A (they follow from n and delta)");
    } else if (cmd == "ldp") {
        need(r.alpha && r.beta && r.radius, "regime.alpha, regime.beta and regime.radius");
        need(!r.n_list.empty(), "regime.n_list");
    } else if (cmd == "check-dissipation") {
        need(!c.dissipation.beta_list.empty(), "dissipation.beta_list");
        need(c.dissipation.M && c.dissipation.R, "dissipation.M and dissipation.R");
        need(r.A.has_value(), "regime.A");
        forbid(r.alpha.has_value(), "regime.alpha (alpha is tied to exp(-beta A))");
        if (fam != "cosh" && fam != "vanishing_viscosity") {
            invalid("check-dissipation needs the cosh or vanishing_viscosity family");
        }
    }
}

}  // namespace ldgf
