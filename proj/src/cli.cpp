#include "ldgf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldgf/convergence.hpp"
#include "ldgf/dissipation.hpp"
#include "ldgf/errors.hpp"
#include "ldgf/flows.hpp"
#include "ldgf/functionals.hpp"
#include "ldgf/io.hpp"
#include "ldgf/numerics.hpp"
#include "ldgf/stochastic.hpp"

namespace ldgf {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; both become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num(const ExtendedReal& v) { return v.is_finite() ? json(v.value()) : json(nullptr); }

struct Output {
    CsvTable table;
    std::string csv_override;  ///< preformatted CSV body (convergence tables)
    json result = json::object();
    bool domain_exit = false;
};

json action_json(const ActionReport& r, const std::string& functional) {
    return {{"functional", functional},
            {"total", num(r.total)},
            {"total_is_infinite", r.total.is_infinite()},
            {"part_psi", r.part_psi},
            {"part_psi_star", r.part_psi_star},
            {"part_work", r.part_work},
            {"part_jump", r.part_jump},
            {"part_var", r.part_var},
            {"quadrature_step", r.quadrature_step},
            {"violation_time", num(r.violation_time)}};
}

json table_json(const ConvergenceTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json values = json::object();
        for (std::size_t j = 0; j < t.value_names.size() && j < r.values.size(); ++j) {
            values[t.value_names[j]] = num(r.values[j]);
        }
        rows.push_back({{t.parameter_name, r.parameter},
                        {"values", values},
                        {t.reference_name, num(r.reference)},
                        {"gap", num(r.gap)},
                        {"abs_gap", num(r.abs_gap)},
                        {"rel_gap", num(r.rel_gap)},
                        {"flagged", r.flagged},
                        {"note", r.note}});
    }
    return {{"parameter", t.parameter_name}, {"reference", t.reference_name}, {"rows", rows}};
}

Output table_output(const ConvergenceTable& t) {
    Output o;
    o.csv_override = t.to_csv();
    o.result = table_json(t);
    return o;
}

json ensemble_json(const EnsembleStats& s) {
    return {{"replica_count", s.replica_count},
            {"truncated_count", s.truncated_count},
            {"tube_exit_count", s.tube_exit_count},
            {"replica_errors", s.replica_errors},
            {"median_sup_distance", s.sup_distance_samples.empty() ? json(nullptr)
                                                                   : num(median(s.sup_distance_samples))}};
}

CsvTable ensemble_table(const EnsembleStats& s) {
    CsvTable t{{"t", "mean", "variance"}, {}};
    for (std::size_t i = 0; i < s.grid.size(); ++i) t.rows.push_back({s.grid[i], s.mean[i], s.variance[i]});
    return t;
}

std::vector<double> uniform_grid(double T, int intervals) {
    std::vector<double> g;
    for (int i = 0; i <= intervals; ++i) g.push_back(T * i / intervals);
    return g;
}

EnsembleOptions ensemble_options(const ExperimentConfig& c) {
    EnsembleOptions o;
    o.replicas = c.run.replicas;
    o.seed = c.run.seed.value_or(0);
    o.workers = c.run.workers;
    return o;
}

DissipationFamily family_from(const ExperimentConfig& c, double beta_override = 0.0) {
    const RegimeBlock& r = c.regime;
    const FamilyTag tag = family_tag_from_string(c.dissipation.family);
    const double beta = beta_override > 0.0 ? beta_override : r.beta.value_or(1.0);
    switch (tag) {
        case FamilyTag::cosh:
            return r.alpha ? DissipationFamily::cosh(*r.alpha, beta) : DissipationFamily::cosh_threshold(r.A.value(), beta);
        case FamilyTag::vanishing_viscosity:
            return DissipationFamily::vanishing_viscosity(beta, r.A.value());
        case FamilyTag::quadratic_limit:
            return DissipationFamily::quadratic_limit(r.omega.value());
        case FamilyTag::rate_independent:
            return DissipationFamily::rate_independent(r.A.value());
    }
    fail(ErrorCode::config_invalid, "unknown dissipation family");
}

CsvTable read_input(const ExperimentConfig& c) { return parse_csv(read_text_file(c.run.curve.value())); }

Output cmd_simulate(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    Output o;
    if (c.run.replicas <= 1) {
        const JumpPath p = simulate_jump_process(E, *r.n, *r.alpha, *r.beta, c.run.x0, c.run.T, *c.run.seed);
        o.table = curve_table(p.event_curve());
        o.result = {{"events", p.events.size()},       {"candidates", p.candidates},
                    {"end_position", p.end_position()}, {"truncated", p.truncated},
                    {"exit_time", num(p.exit_time)}};
        o.domain_exit = p.truncated;
        return o;
    }
    const SampledCurve ref = solve_generalized_flow(E, *r.alpha, *r.beta, c.run.x0, c.run.T, c.run.tol);
    const auto grid = uniform_grid(c.run.T, 100);
    const auto s = run_ensemble(jump_process_replica(E, *r.n, *r.alpha, *r.beta, c.run.x0, c.run.T, ref, grid),
                                grid, ensemble_options(c));
    o.table = ensemble_table(s);
    o.result = ensemble_json(s);
    o.domain_exit = s.truncated_count > 0;
    return o;
}

Output cmd_sde(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    Output o;
    if (c.run.replicas <= 1) {
        const SamplePath p = simulate_sde(E, *r.omega, *r.h, c.run.x0, c.run.T, *c.run.dt, *c.run.seed);
        o.table = curve_table(p.curve());
        o.result = {{"dt", p.dt}, {"truncated", p.truncated}, {"exit_time", num(p.exit_time)}};
        o.domain_exit = p.truncated;
        return o;
    }
    const SampledCurve ref = solve_quadratic_flow(E, *r.omega, c.run.x0, c.run.T, c.run.tol);
    const auto grid = uniform_grid(c.run.T, 100);
    const auto s = run_ensemble(sde_replica(E, *r.omega, *r.h, c.run.x0, c.run.T, *c.run.dt, ref, grid), grid,
                                ensemble_options(c));
    o.table = ensemble_table(s);
    o.result = ensemble_json(s);
    o.domain_exit = s.truncated_count > 0;
    return o;
}

Output cmd_langevin(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    const WigglyLandscape W(E, *r.n, *r.amplitude);
    const SamplePath p = simulate_langevin_wiggly(W, *r.beta, c.run.x0, c.run.T, c.run.dt.value_or(0.0),
                                                  *c.run.seed, c.run.record_every);
    Output o;
    o.table = curve_table(p.curve());
    o.result = {{"dt", p.dt}, {"truncated", p.truncated}, {"exit_time", num(p.exit_time)}};
    try {
        const EscapeRates e = estimate_escape_rates(p, W);
        o.result["escape_rates"] = {{"rate_left", e.rate_left},
                                    {"rate_right", e.rate_right},
                                    {"transitions_left", e.transitions_left},
                                    {"transitions_right", e.transitions_right},
                                    {"residence_time", e.residence_time}};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::too_few_transitions) throw;
        o.result["escape_rates"] = nullptr;
        o.result["escape_rates_error"] = e.what();
    }
    o.domain_exit = p.truncated;
    return o;
}

Output cmd_flow(const ExperimentConfig& c, const EnergyLandscape& E) {
    const DissipationFamily f = family_from(c);
    FlowOptions opts;
    opts.tol = c.run.tol;
    if (f.tag == FamilyTag::quadratic_limit) opts.stiffness_cap = 0.0;
    const SampledCurve curve = solve_dissipative_flow(E, f, c.run.x0, c.run.T, opts);
    Output o;
    o.table = curve_table(curve);
    o.result = {{"family", c.dissipation.family}, {"points", curve.size()},
                {"x_end", curve.x.back()},         {"truncated", curve.truncated},
                {"exit_time", num(curve.exit_time)}};
    o.domain_exit = curve.truncated;
    return o;
}

Output cmd_ri_flow(const ExperimentConfig& c, const EnergyLandscape& E) {
    const BVCurve curve = solve_rate_independent(E, *c.regime.A, c.run.x0, c.run.T, c.run.dt.value_or(0.0));
    Output o;
    o.table = curve_table(curve);
    json jumps = json::array();
    for (const Jump& j : curve.jumps) {
        jumps.push_back({{"time", j.time}, {"x_left", j.x_left}, {"x_plateau", j.x_plateau}, {"x_right", j.x_right}});
    }
    o.result = {{"points", curve.size()}, {"jumps", jumps}, {"total_variation", curve.total_variation()}};
    return o;
}

Output cmd_action(const ExperimentConfig& c, const EnergyLandscape& E) {
    const CsvTable in = read_input(c);
    const DissipationFamily f = family_from(c);
    Output o;
    ActionReport rep;
    std::string name;
    switch (f.tag) {
        case FamilyTag::cosh:
            rep = f.alpha_from_threshold
                      ? action_J_beta(sampled_curve_from(in), E, f)
                      : action_J_alpha_beta(sampled_curve_from(in), E, f.alpha, f.beta);
            name = f.alpha_from_threshold ? "J_beta" : "J_alpha_beta";
            break;
        case FamilyTag::vanishing_viscosity:
            rep = action_J_beta(sampled_curve_from(in), E, f);
            name = "J_beta";
            break;
        case FamilyTag::quadratic_limit:
            rep = action_J_Q(sampled_curve_from(in), E, f.omega);
            name = "J_Q";
            break;
        case FamilyTag::rate_independent:
            rep = action_J_RI(bv_curve_from(in), E, f.threshold);
            name = "J_RI";
            break;
    }
    o.result = action_json(rep, name);
    o.table = CsvTable{{"total", "part_psi", "part_psi_star", "part_work", "part_jump", "part_var"},
                       {{rep.total.value_or(std::numeric_limits<double>::infinity()), rep.part_psi, rep.part_psi_star,
                         rep.part_work, rep.part_jump, rep.part_var}}};
    return o;
}

Output cmd_mosco_q(const ExperimentConfig& c, const EnergyLandscape& E) {
    const SampledCurve curve = sampled_curve_from(read_input(c));
    return table_output(mosco_quadratic_experiment(E, curve, *c.regime.omega, c.dissipation.beta_list));
}

Output cmd_mosco_ri(const ExperimentConfig& c, const EnergyLandscape& E) {
    const double A = *c.regime.A;
    const BVCurve curve = c.run.curve ? bv_curve_from(read_input(c))
                                      : solve_rate_independent(E, A, c.run.x0, c.run.T, c.run.dt.value_or(0.0));
    const double beta0 = c.dissipation.beta_list.front();
    const DissipationFamily tmpl = c.dissipation.family == "cosh" ? DissipationFamily::cosh_threshold(A, beta0)
                                                                  : DissipationFamily::vanishing_viscosity(beta0, A);
    return table_output(mosco_ri_experiment(E, curve, tmpl, c.dissipation.beta_list));
}

Output cmd_lln(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    Output o = table_output(lln_experiment(E, r.n_list, *r.alpha, *r.beta, c.run.x0, c.run.T, ensemble_options(c)));
    for (const auto& row : o.result["rows"]) {
        if (row["values"]["truncated"].get<double>() > 0) o.domain_exit = true;
    }
    return o;
}

Output cmd_bridge(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    BridgeOptions b;
    b.delta = *r.delta;
    b.omega = *r.omega;
    b.h_target = r.h.value_or(b.h_target);
    b.x0 = c.run.x0;
    b.T = c.run.T;
    b.sde_dt = c.run.dt.value_or(0.0);
    return table_output(bridge_experiment(E, r.n_list, b, ensemble_options(c)));
}

Output cmd_ldp(const ExperimentConfig& c, const EnergyLandscape& E) {
    const RegimeBlock& r = c.regime;
    SampledCurve ref;
    if (c.run.curve) {
        ref = sampled_curve_from(read_input(c));
    } else {
        // Default reference: the zero-action path plus a ramp reaching twice the radius at T.
        const SampledCurve sol = solve_generalized_flow(E, *r.alpha, *r.beta, c.run.x0, c.run.T, c.run.tol);
        for (double t : uniform_grid(c.run.T, 200)) {
            ref.t.push_back(t);
            ref.x.push_back(sol.value_at(t) + 2.0 * *r.radius * t / c.run.T);
        }
    }
    return table_output(ldp_tube_experiment(E, r.n_list, *r.alpha, *r.beta, ref, *r.radius, c.run.x0,
                                            ensemble_options(c)));
}

Output cmd_check_dissipation(const ExperimentConfig& c, const EnergyLandscape&) {
    const DissipationFamily f = family_from(c, c.dissipation.beta_list.front());
    const ConditionReport rep = check_conditions(f, c.dissipation.beta_list, *c.dissipation.M, *c.dissipation.R);
    Output o;
    o.table.header = {"beta", "delta", "K", "sup_ratio", "threshold_term", "eta_max", "eta_subthreshold_skipped"};
    json rows = json::array();
    for (const auto& row : rep.rows) {
        o.table.rows.push_back({row.beta, row.delta, row.K, row.sup_ratio, row.threshold_term, row.eta_max,
                                row.eta_subthreshold_skipped ? 1.0 : 0.0});
        rows.push_back({{"beta", row.beta},
                        {"delta", row.delta},
                        {"K", num(row.K)},
                        {"sup_ratio", num(row.sup_ratio)},
                        {"threshold_term", num(row.threshold_term)},
                        {"eta_max", num(row.eta_max)},
                        {"eta_subthreshold_skipped", row.eta_subthreshold_skipped}});
    }
    o.result = {{"family", to_string(rep.tag)},
                {"M", rep.M},
                {"R", rep.R},
                {"eta_bound", rep.eta_bound},
                {"K_decreasing", rep.K_decreasing},
                {"sup_ratio_decreasing", rep.sup_ratio_decreasing},
                {"threshold_term_decreasing", rep.threshold_term_decreasing},
                {"eta_bounded", rep.eta_bounded},
                {"pass", rep.pass},
                {"rows", rows}};
    return o;
}

using CommandFn = std::function<Output(const ExperimentConfig&, const EnergyLandscape&)>;

const std::map<std::string, CommandFn>& commands() {
    static const std::map<std::string, CommandFn> table{
        {"simulate", cmd_simulate}, {"sde", cmd_sde},           {"langevin", cmd_langevin},
        {"flow", cmd_flow},         {"ri-flow", cmd_ri_flow},   {"action", cmd_action},
        {"mosco-q", cmd_mosco_q},   {"mosco-ri", cmd_mosco_ri}, {"lln", cmd_lln},
        {"bridge", cmd_bridge},     {"ldp", cmd_ldp},           {"check-dissipation", cmd_check_dissipation},
    };
    return table;
}

std::string error_json(std::string_view code, const std::string& message) {
    return json{{"error", {{"code", code}, {"message", message}}}}.dump();
}

}  // namespace

RunResult run_command(const std::string& command, ExperimentConfig config, const CliOptions& options) {
    RunResult res;
    try {
        if (options.seed) config.run.seed = options.seed;
        if (options.out_dir) config.output.directory = *options.out_dir;
        validate_config(config, command);

        ExperimentConfig hashed = config;
        hashed.output = OutputBlock{};
        const std::string canonical = serialize_config(hashed);
        const std::string hash = hex64(fnv1a64(command + "\n" + canonical));

        const EnergyLandscape E = make_builtin(config.landscape);
        Output out = commands().at(command)(config, E);

        const json manifest = {{"command", command},
                               {"config_hash", hash},
                               {"seed", config.run.seed ? json(*config.run.seed) : json(nullptr)},
                               {"versions",
                                {{"ldgf", kVersion},
                                 {"compiler", __VERSION__},
                                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                               {"config", json::parse(canonical)}};

        std::filesystem::create_directories(config.output.directory);
        const std::filesystem::path base = std::filesystem::path(config.output.directory) / (command + "-" + hash);
        for (const auto& fmt : config.output.formats) {
            const std::string path = base.string() + "." + fmt;
            if (fmt == "csv") {
                const std::string stamp = "command=" + command + " config_hash=" + hash +
                                          " seed=" + (config.run.seed ? std::to_string(*config.run.seed) : "none");
                const std::string body = out.csv_override.empty() ? format_csv(out.table) : out.csv_override;
                write_text_file(path, "# " + stamp + "\n" + body);
            } else {
                write_text_file(path, json{{"manifest", manifest}, {"result", out.result}}.dump(2) + "\n");
            }
            res.files.push_back(path);
        }
        if (options.strict && out.domain_exit) {
            res.exit_code = exit_domain_exit;
            res.error_json = error_json(to_string(ErrorCode::domain_exit), command + ": a path left the domain");
        }
    } catch (const Error& e) {
        res.exit_code = e.code() == ErrorCode::config_invalid ? exit_config_error : exit_runtime_error;
        res.error_json = error_json(to_string(e.code()), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        res.exit_code = exit_runtime_error;
        res.error_json = error_json(to_string(ErrorCode::io_error), e.what());
    } catch (const std::exception& e) {
        res.exit_code = exit_runtime_error;
        res.error_json = error_json("internal", e.what());
    }
    return res;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Large-deviation gradient-flow laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "Run one command with a JSON config");
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    CliOptions options;
    run->add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
    run->add_option("config", config_path, "JSON config file")->required();
    auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    auto* seed_opt = run->add_option("--seed", seed, "Seed (overrides run.seed)");
    run->add_flag("--strict", options.strict, "Fail when a path leaves the domain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what()) << "\n";
        return exit_config_error;
    }
    if (*out_opt) options.out_dir = out_dir;
    if (*seed_opt) options.seed = seed;

    RunResult res;
    try {
        res = run_command(command, load_config(config_path), options);
    } catch (const Error& e) {
        res.exit_code = e.code() == ErrorCode::config_invalid ? exit_config_error : exit_runtime_error;
        res.error_json = error_json(to_string(e.code()), e.what());
    }
    for (const auto& f : res.files) out << f << "\n";
    if (!res.error_json.empty()) err << res.error_json << "\n";
    return res.exit_code;
}

}  // namespace ldgf
