#include "mdl/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mdl/errors.hpp"
#include "mdl/figures.hpp"
#include "mdl/fitters.hpp"
#include "mdl/formulas.hpp"
#include "mdl/verify.hpp"

namespace mdl {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> GridSpec::points() const {
    if (!(step_db > 0.0)) throw config_error("grid.step_db: must be > 0");
    if (stop_db < start_db) throw config_error("grid.stop_db: must be >= start_db");
    std::vector<double> out;
    for (double v = start_db; v <= stop_db + 1e-9; v += step_db) out.push_back(v);
    if (out.empty()) throw config_error("grid: empty SNR grid");
    return out;
}

namespace {

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw config_error(std::string(field) + ": missing required field");
    return *it;
}

double require_number(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number())
        throw config_error(std::string(field) + ": expected a number");
    return v.get<double>();
}

std::uint64_t count_field(const json& j, const char* field, std::uint64_t fallback) {
    auto it = j.find(field);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() && !it->is_number_unsigned())
        throw config_error(std::string(field) + ": expected a nonnegative integer");
    if (it->is_number_integer() && it->get<std::int64_t>() < 0)
        throw config_error(std::string(field) + ": expected a nonnegative integer");
    return it->get<std::uint64_t>();
}

SystemConfig parse_config(const json& j) {
    SystemConfig cfg;
    cfg.M = static_cast<int>(require_number(j, "M"));
    cfg.N = static_cast<int>(require_number(j, "N"));
    cfg.R = require_number(j, "R");
    cfg.scheme = scheme_from_string(require(j, "scheme").get<std::string>());
    cfg.K = static_cast<int>(j.value("K", 1.0));
    cfg.nu = static_cast<int>(j.value("nu", 0.0));
    cfg.L_d = static_cast<int>(j.value("L_d", 1.0));
    cfg.encoding = encoding_from_string(j.value("encoding", std::string("joint")));
    cfg.receiver = receiver_from_string(j.value("receiver", std::string("mmse")));
    cfg.cp_precode = j.value("cp_precode", false);
    cfg.validate();
    return cfg;
}

json config_json(const SystemConfig& cfg) {
    return json{{"M", cfg.M},
                {"N", cfg.N},
                {"K", cfg.K},
                {"nu", cfg.nu},
                {"L_d", cfg.L_d},
                {"scheme", to_string(cfg.scheme)},
                {"R", cfg.R},
                {"encoding", to_string(cfg.encoding)},
                {"receiver", to_string(cfg.receiver)},
                {"cp_precode", cfg.cp_precode}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("spec: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("spec: parse error in '" + path + "': " + e.what());
    }
    return j;
}

json diversity_json(const DiversityValue& d, const json& inputs) {
    json out{{"formula", d.formula}, {"value", d.value}, {"inputs", inputs}};
    if (!d.note.empty()) out["note"] = d.note;
    return out;
}

// All closed forms applicable to one configuration.
json formula_report(const SystemConfig& cfg) {
    json report;
    report["config"] = config_json(cfg);
    json list = json::array();
    const json base{{"R", cfg.R}, {"M", cfg.M}, {"N", cfg.N}};
    switch (cfg.scheme) {
        case Scheme::flat: {
            list.push_back(diversity_json(diversity_flat(cfg.R, cfg.M, cfg.N), base));
            list.push_back(diversity_json(
                diversity_flat_upper_at_integer_points(cfg.R, cfg.M, cfg.N), base));
            if (cfg.N >= cfg.M)
                list.push_back(diversity_json(diversity_separate(cfg.M, cfg.N),
                                              json{{"M", cfg.M}, {"N", cfg.N}}));
            report["threshold_rates"] = flat_threshold_rates(cfg.M, cfg.N);
            break;
        }
        case Scheme::mac: {
            json inputs = base;
            inputs["K"] = cfg.K;
            const auto [lo, hi] = diversity_mac_bounds(cfg.R, cfg.M, cfg.N, cfg.K);
            list.push_back(diversity_json(lo, inputs));
            list.push_back(diversity_json(hi, inputs));
            break;
        }
        case Scheme::zp: {
            json inputs = base;
            inputs["nu"] = cfg.nu;
            inputs["L_d"] = cfg.L_d;
            const auto [lo, hi] =
                diversity_zp_bounds(cfg.R, cfg.M, cfg.N, cfg.nu, cfg.L_d);
            list.push_back(diversity_json(lo, inputs));
            list.push_back(diversity_json(hi, inputs));
            if (cfg.M == 1 && cfg.N == 1)
                list.push_back(diversity_json(diversity_zp_siso(cfg.nu),
                                              json{{"nu", cfg.nu}}));
            break;
        }
        case Scheme::cp: {
            json inputs = base;
            inputs["nu"] = cfg.nu;
            inputs["L_d"] = cfg.L_d;
            list.push_back(
                diversity_json(diversity_cp(cfg.R, cfg.M, cfg.N, cfg.nu, cfg.L_d), inputs));
            if (cfg.M == 1)
                list.push_back(diversity_json(
                    diversity_cp_simo(cfg.R, cfg.N, cfg.nu, cfg.L_d),
                    json{{"R", cfg.R}, {"N", cfg.N}, {"nu", cfg.nu}, {"L_d", cfg.L_d}}));
            const long omega =
                ceil_snapped(static_cast<double>(cfg.M) * cfg.L_d * std::exp2(-cfg.R / cfg.M));
            const QipSolution qip = qip_solve(omega, cfg.L_d, cfg.M);
            json alloc{{"Omega", omega},
                       {"allocation", qip.allocation},
                       {"objective", qip.objective}};
            if (!qip.note.empty()) alloc["note"] = qip.note;
            report["qip"] = alloc;
            break;
        }
    }
    report["formulas"] = list;
    return report;
}

// Predicted diversity for a slope verdict, when the config pins one down.
DiversityValue predicted_for(const ExperimentSpec& spec) {
    if (spec.predicted) return {*spec.predicted, "explicit", ""};
    if (!spec.has_config)
        throw config_error("predicted: needs either a config or an explicit value");
    const SystemConfig& cfg = spec.config;
    if (cfg.receiver == ReceiverKind::zf || cfg.encoding == Encoding::separate)
        return diversity_separate(cfg.M, cfg.N);
    switch (cfg.scheme) {
        case Scheme::flat: return diversity_flat(cfg.R, cfg.M, cfg.N);
        case Scheme::zp:
            if (cfg.M == 1 && cfg.N == 1) return diversity_zp_siso(cfg.nu);
            throw config_error(
                "predicted: zp has only bounds for MIMO; set 'predicted' explicitly");
        case Scheme::cp:
            if (cfg.M == 1) return diversity_cp_simo(cfg.R, cfg.N, cfg.nu, cfg.L_d);
            if (cfg.L_d == cfg.nu + 1)
                return diversity_cp(cfg.R, cfg.M, cfg.N, cfg.nu, cfg.L_d);
            throw config_error(
                "predicted: cp with L_d > nu+1 is only bounded; set 'predicted' explicitly");
        case Scheme::mac:
            throw config_error(
                "predicted: mac has only bounds; set 'predicted' explicitly");
    }
    throw config_error("scheme: unknown value");
}

json sweep_json(const SweepResult& sweep) {
    json points = json::array();
    for (const SweepPoint& pt : sweep.points)
        points.push_back(json{{"snr_db", pt.snr_db},
                              {"rho", pt.rho},
                              {"trials", pt.trials},
                              {"hits", pt.hits},
                              {"p_hat", pt.p_hat},
                              {"ci_low", pt.ci_low},
                              {"ci_high", pt.ci_high}});
    return json{{"engine", sweep.engine},
                {"kind", sweep.kind},
                {"master_seed", sweep.master_seed},
                {"config", config_json(sweep.config)},
                {"points", points}};
}

} // namespace

ExperimentSpec load_spec(const std::string& path, const std::string& command) {
    const json j = load_json_file(path);
    ExperimentSpec spec;

    const bool needs_config =
        command == "formula" || command == "sweep" || command == "ser";
    if (needs_config || j.contains("config")) {
        spec.config = parse_config(require(j, "config"));
        spec.has_config = true;
    }
    if (command == "sweep" || command == "ser") {
        const json& g = require(j, "grid");
        spec.grid.start_db = require_number(g, "start_db");
        spec.grid.stop_db = require_number(g, "stop_db");
        spec.grid.step_db = require_number(g, "step_db");
        spec.grid.points(); // validate
        require(j, "trials");
        spec.trials = count_field(j, "trials", 0);
        if (spec.trials < 1) throw config_error("trials: must be >= 1");
    }
    if (command == "slope") {
        const json& w = require(j, "window");
        spec.window_lo_db = require_number(w, "lo_db");
        spec.window_hi_db = require_number(w, "hi_db");
        spec.tolerance = require_number(j, "tolerance");
        if (j.contains("predicted"))
            spec.predicted = static_cast<long>(require_number(j, "predicted"));
        spec.csv = j.value("csv", std::string());
    }
    if (command == "figure") {
        spec.figure = require(j, "figure").get<std::string>();
    }
    spec.master_seed = count_field(j, "master_seed", 1);
    spec.min_hits = count_field(j, "min_hits", 0);
    spec.max_trials = count_field(j, "max_trials", 0);
    if (spec.trials == 0) spec.trials = count_field(j, "trials", 0);
    return spec;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("cannot write '" + tmp + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

std::string sweep_csv_text(const SweepResult& sweep) {
    std::string text = "snr_db,trials,hits,p_hat,ci_low,ci_high\n";
    char line[192];
    for (const SweepPoint& pt : sweep.points) {
        std::snprintf(line, sizeof(line),
                      "%.6g,%" PRIu64 ",%" PRIu64 ",%.10g,%.10g,%.10g\n", pt.snr_db,
                      pt.trials, pt.hits, pt.p_hat, pt.ci_low, pt.ci_high);
        text += line;
    }
    return text;
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    write_text_atomic(path, sweep_csv_text(sweep));
}

void write_sweep_json(const std::string& path, const SweepResult& sweep) {
    write_text_atomic(path, sweep_json(sweep).dump(2) + "\n");
}

SweepResult read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("csv: cannot open '" + path + "'");
    SweepResult sweep;
    sweep.kind = "csv";
    std::string line;
    if (!std::getline(in, line) || line.rfind("snr_db,", 0) != 0)
        throw numeric_error("csv: '" + path + "' is not a sweep CSV");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SweepPoint pt;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        if (!(row >> pt.snr_db >> pt.trials >> pt.hits >> pt.p_hat >> pt.ci_low >>
              pt.ci_high))
            throw numeric_error("csv: malformed row '" + line + "'");
        pt.rho = std::pow(10.0, pt.snr_db / 10.0);
        sweep.points.push_back(pt);
    }
    return sweep;
}

int run_command(const std::string& command, const std::string& spec_path,
                const std::string& out_dir, int threads,
                std::optional<std::uint64_t> seed_override) {
    ExperimentSpec spec = load_spec(spec_path, command);
    if (seed_override) spec.master_seed = *seed_override;
    fs::create_directories(out_dir);

    SweepOptions opts;
    opts.threads = threads;
    opts.min_hits = spec.min_hits;
    opts.max_trials = spec.max_trials;

    if (command == "formula") {
        const json report = formula_report(spec.config);
        const std::string text = report.dump(2) + "\n";
        std::cout << text;
        write_text_atomic(out_dir + "/formulas.json", text);
        return 0;
    }
    if (command == "sweep" || command == "ser") {
        const SweepResult sweep =
            command == "sweep"
                ? outage_sweep(spec.config, spec.grid.points(), spec.trials,
                               spec.master_seed, opts)
                : ser_sweep(spec.config, spec.grid.points(), spec.trials,
                            spec.master_seed, opts);
        write_sweep_csv(out_dir + "/" + command + ".csv", sweep);
        write_sweep_json(out_dir + "/" + command + ".json", sweep);
        for (std::size_t i : monotonicity_violations(sweep))
            std::cerr << "warning: p_hat rises beyond CI between " << sweep.points[i].snr_db
                      << " and " << sweep.points[i + 1].snr_db << " dB\n";
        std::cout << command << ": " << sweep.points.size() << " points -> " << out_dir
                  << "/" << command << ".csv\n";
        return 0;
    }
    if (command == "slope") {
        const std::string csv = spec.csv.empty() ? out_dir + "/sweep.csv" : spec.csv;
        const SweepResult sweep = read_sweep_csv(csv);
        const SlopeEstimate est =
            estimate_slope(sweep, spec.window_lo_db, spec.window_hi_db);
        const DiversityValue pred = predicted_for(spec);
        const Verdict v = compare(est, pred, spec.tolerance);
        json out{{"d_hat", v.d_hat},
                 {"stderr", v.std_error},
                 {"predicted", v.predicted},
                 {"formula", pred.formula},
                 {"tolerance", v.tolerance},
                 {"delta", v.delta},
                 {"pass", v.pass},
                 {"window", {{"lo_db", v.window_lo_db}, {"hi_db", v.window_hi_db}}},
                 {"points_used", est.points_used}};
        const std::string text = out.dump(2) + "\n";
        std::cout << text;
        write_text_atomic(out_dir + "/verdict.json", text);
        return 0;
    }
    if (command == "verify") {
        VerifyOptions vo;
        vo.threads = threads;
        vo.master_seed = spec.master_seed == 1 ? vo.master_seed : spec.master_seed;
        if (spec.trials > 0) vo.sandwich_trials = spec.trials;
        bool all_pass = true;
        for (const SuiteResult& suite : run_verification(vo)) {
            std::cout << (suite.pass ? "ok   " : "FAIL ") << suite.name << ": "
                      << suite.detail << "\n";
            all_pass = all_pass && suite.pass;
        }
        return all_pass ? 0 : 3;
    }
    if (command == "figure") {
        return run_figure(spec, out_dir, threads);
    }
    throw config_error("command: unknown command '" + command + "'");
}

} // namespace mdl
