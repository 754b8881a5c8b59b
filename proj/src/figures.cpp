#include "mdl/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "mdl/errors.hpp"
#include "mdl/numkernel.hpp"
#include "mdl/receivers.hpp"
#include "mdl/simkit.hpp"

namespace mdl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Curve {
    SystemConfig cfg;
    std::string file_tag;
};

struct Recipe {
    std::vector<Curve> curves;
    GridSpec grid;
    bool jensen_bound = false; // also emit the trace-event bound curve
};

std::string rate_tag(double R) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "R%g", R);
    std::string tag = buf;
    std::replace(tag.begin(), tag.end(), '.', 'p');
    return tag;
}

SystemConfig flat_cfg(int M, int N, double R) {
    SystemConfig cfg;
    cfg.M = M;
    cfg.N = N;
    cfg.R = R;
    return cfg;
}

Recipe make_recipe(const std::string& name) {
    Recipe r;
    auto add_rates = [&r](int M, int N, std::initializer_list<double> rates,
                          const std::string& prefix) {
        for (double R : rates)
            r.curves.push_back({flat_cfg(M, N, R), prefix + rate_tag(R)});
    };
    if (name == "fig1") {
        add_rates(3, 3, {1.0, 1.5, 2.0, 3.0, 4.5, 4.8, 5.0, 10.0}, "");
        r.grid = {0.0, 39.0, 3.0};
        return r;
    }
    if (name == "fig2") {
        add_rates(2, 2, {1.0, 4.0, 10.0}, "");
        r.grid = {0.0, 42.0, 3.0};
        r.jensen_bound = true;
        return r;
    }
    if (name == "fig3") {
        add_rates(2, 3, {1.5, 2.5, 4.0}, "");
        r.grid = {0.0, 39.0, 3.0};
        return r;
    }
    if (name == "fig4") {
        add_rates(3, 2, {1.8, 4.0, 10.0}, "M3N2_");
        add_rates(2, 3, {1.8, 4.0, 10.0}, "M2N3_");
        r.grid = {0.0, 39.0, 3.0};
        return r;
    }
    if (name == "fig5") {
        add_rates(2, 2, {1.0, 4.0, 10.0}, "");
        r.grid = {0.0, 42.0, 3.0};
        return r;
    }
    throw config_error("figure: unknown recipe '" + name + "' (fig1..fig5)");
}

// Empirical probability of the trace bounding event
// sum_k 1/(1+rho*lambda_k) >= M*2^{-R/M} - (M-N)^+, per SNR point.
SweepResult jensen_bound_sweep(const SystemConfig& cfg,
                               const std::vector<double>& grid_db,
                               std::uint64_t trials, std::uint64_t master_seed,
                               int threads) {
    SweepResult result;
    result.config = cfg;
    result.master_seed = master_seed;
    result.kind = "jensen_upper";
    const int L = std::min(cfg.M, cfg.N);
    for (std::size_t p = 0; p < grid_db.size(); ++p) {
        const double rho = std::pow(10.0, grid_db[p] / 10.0);
        const std::uint64_t point_master = trial_seed(master_seed ^ 0x4a454e53ULL, p);
        auto trial = [&cfg, rho, L](std::uint64_t seed) -> std::uint64_t {
            SplitMix64 rng(seed);
            const ChannelRealization ch = sample_channel(cfg, rng);
            const Eigen::VectorXd lambda =
                gram_eig(ch.matrix.adjoint() * ch.matrix).eigenvalues.head(L);
            return jensen_upper_event(lambda, rho, cfg.R, cfg.M, cfg.N) ? 1 : 0;
        };
        SweepPoint pt;
        pt.snr_db = grid_db[p];
        pt.rho = rho;
        pt.trials = trials;
        pt.hits = detail::run_hits(point_master, 0, trials, threads, trial);
        pt.p_hat = static_cast<double>(pt.hits) / static_cast<double>(trials);
        const WilsonInterval ci = wilson(pt.hits, trials);
        pt.ci_low = ci.low;
        pt.ci_high = ci.high;
        result.points.push_back(pt);
    }
    return result;
}

} // namespace

int run_figure(const ExperimentSpec& spec, const std::string& out_dir, int threads) {
    const Recipe recipe = make_recipe(spec.figure);
    const std::uint64_t trials = spec.trials ? spec.trials : 100000;
    const std::vector<double> grid = recipe.grid.points();

    const std::string dir = out_dir + "/" + spec.figure;
    fs::create_directories(dir);

    SweepOptions opts;
    opts.threads = threads;

    json files = json::array();
    for (std::size_t c = 0; c < recipe.curves.size(); ++c) {
        const Curve& curve = recipe.curves[c];
        const std::uint64_t seed = trial_seed(spec.master_seed, c);
        const SweepResult sweep = outage_sweep(curve.cfg, grid, trials, seed, opts);
        const std::string csv =
            dir + "/" + spec.figure + "_" + curve.file_tag + ".csv";
        write_sweep_csv(csv, sweep);
        files.push_back(json{{"file", csv},
                             {"R", curve.cfg.R},
                             {"M", curve.cfg.M},
                             {"N", curve.cfg.N},
                             {"kind", "outage"},
                             {"master_seed", seed}});
        if (recipe.jensen_bound) {
            const SweepResult bound =
                jensen_bound_sweep(curve.cfg, grid, trials, seed, resolve_threads(threads));
            const std::string bound_csv =
                dir + "/" + spec.figure + "_" + curve.file_tag + "_jensen.csv";
            write_sweep_csv(bound_csv, bound);
            files.push_back(json{{"file", bound_csv},
                                 {"R", curve.cfg.R},
                                 {"M", curve.cfg.M},
                                 {"N", curve.cfg.N},
                                 {"kind", "jensen_upper"},
                                 {"master_seed", seed}});
        }
    }

    json prov{{"figure", spec.figure},
              {"engine", engine_version()},
              {"trials", trials},
              {"master_seed", spec.master_seed},
              {"grid", {{"start_db", recipe.grid.start_db},
                        {"stop_db", recipe.grid.stop_db},
                        {"step_db", recipe.grid.step_db}}},
              {"curves", files}};
    write_text_atomic(dir + "/" + spec.figure + "_provenance.json",
                      prov.dump(2) + "\n");
    std::cout << spec.figure << ": " << files.size() << " curves -> " << dir << "\n";
    return 0;
}

} // namespace mdl
