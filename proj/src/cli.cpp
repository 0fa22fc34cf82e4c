#include "sparse_rls/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "sparse_rls/config.hpp"
#include "sparse_rls/errors.hpp"
#include "sparse_rls/output.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls::cli {

namespace {

unsigned resolve_threads(std::optional<unsigned> flag, std::optional<unsigned> config) {
    if (flag) return *flag;
    if (config) return *config;
    if (const char* env = std::getenv(kThreadsEnv)) {
        const auto v = text::parse_uint(env);
        if (!v || *v < 1) throw ConfigError(kThreadsEnv, std::string("expected a positive integer, got '") + env + "'");
        return static_cast<unsigned>(*v);
    }
    return 1;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot open " + path.string() + " for writing");
    return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed) {
    write_json(manifest_path(out), manifest_json(command, config, seed, utc_timestamp()));
}

std::size_t resolve_window(std::optional<std::size_t> flag, const ExperimentConfig& cfg) {
    const auto w = flag.value_or(cfg.default_window());
    if (w < 1 || w > cfg.n_iters)
        throw ConfigError("window", "must lie in [1, n_iters=" + std::to_string(cfg.n_iters) + "]");
    return w;
}

/// Maps the error taxonomy onto exit codes.
template <class F>
int guarded(std::ostream& log, F&& body) {
    try {
        return body();
    } catch (const NumericFailure& e) {
        log << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        log << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        log << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& out) {
    auto p = out;
    p += ".manifest.json";
    return p;
}

std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = text::split(spec, ':');
    if (parts.size() != 3) throw ConfigError("grid", "expected start:step:stop, got '" + spec + "'");
    const auto start = text::parse_double(parts[0]);
    const auto step = text::parse_double(parts[1]);
    const auto stop = text::parse_double(parts[2]);
    if (!start || !step || !stop) throw ConfigError("grid", "non-numeric entry in '" + spec + "'");
    if (!(*step > 0.0) || !std::isfinite(*step)) throw ConfigError("grid", "step must be positive");
    if (!(*stop >= *start)) throw ConfigError("grid", "empty grid '" + spec + "'");
    if (*start < 0.0) throw ConfigError("grid", "gamma values must be nonnegative");

    const auto count = static_cast<std::size_t>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // round off the accumulated representation error of start + i * step
        const double v = *start + static_cast<double>(i) * *step;
        grid.push_back(std::round(v * 1e12) / 1e12);
    }
    return grid;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto cfg = load_experiment_config(opt.config);
        const auto window = resolve_window(opt.window, cfg);
        if (opt.every < 1) throw ConfigError("every", "must be at least 1");
        const auto threads = resolve_threads(opt.threads, cfg.threads);

        const auto curves = run_experiment(cfg, threads);
        if (opt.format == Format::Json) {
            write_json(opt.out, curves_json(curves, window, opt.every));
        } else {
            auto out = open_out(opt.out);
            write_curves_csv(out, curves, opt.every);
        }
        write_manifest(opt.out, "simulate", to_json(cfg), cfg.seed);

        for (const auto& c : curves)
            log << c.algorithm_id << ": steady-state MSE " << text::format_double(steady_state_mse(c, window))
                << " (" << text::format_double(10.0 * std::log10(steady_state_mse(c, window))) << " dB)\n";
        return kExitOk;
    });
}

int cmd_sweep(const SweepOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto cfg = load_experiment_config(opt.config);
        const auto grid = parse_grid(opt.grid);
        const auto window = resolve_window(opt.window, cfg);
        const auto threads = resolve_threads(opt.threads, cfg.threads);

        const auto res = sweep_gamma(cfg, opt.algorithm, grid, window, threads);
        if (opt.format == Format::Json) {
            write_json(opt.out, sweep_json(opt.algorithm, window, res));
        } else {
            auto out = open_out(opt.out);
            write_sweep_csv(out, opt.algorithm, window, res);
        }
        auto snapshot = to_json(cfg);
        snapshot["sweep"] = {{"algorithm", opt.algorithm}, {"grid", grid}, {"window", window}};
        write_manifest(opt.out, "sweep", snapshot, cfg.seed);

        log << opt.algorithm << ": best gamma " << text::format_double(res.best_gamma) << '\n';
        return kExitOk;
    });
}

int cmd_identify(const IdentifyOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto samples = load_samples(opt.samples);
        if (samples.empty()) throw FormatError(opt.samples.string() + " holds no samples", 0);
        const auto icfg = load_identify_config(opt.algo_config);
        const auto m = static_cast<std::size_t>(samples.front().x.size());

        auto filter = make_filter(icfg.algorithm, m, icfg.lambda);
        Identification id;
        id.algorithm_id = icfg.algorithm.id;
        id.xi.reserve(samples.size());
        for (std::size_t n = 0; n < samples.size(); ++n) {
            try {
                id.xi.push_back(filter->step(samples[n]).xi);
            } catch (const NumericFailure& e) {
                throw e.with_algorithm(icfg.algorithm.id);
            }
        }
        id.w_hat = filter->weights();

        const double alpha = icfg.algorithm.alpha_over_sigma * std::sqrt(icfg.noise_variance);
        id.alpha = check_alpha_condition(samples, icfg.lambda, alpha, icfg.noise_variance);
        write_json(opt.out, identification_json(id));

        nlohmann::json snapshot = {
            {"experiment", {{"lambda", icfg.lambda}, {"noise_variance", icfg.noise_variance}}},
            {"algorithm", to_json(icfg.algorithm)},
            {"samples", opt.samples.string()}};
        write_manifest(opt.out, "identify", snapshot, 0);

        log << id.algorithm_id << ": " << support_of(id.w_hat).size() << " nonzero taps of " << m
            << "; alpha condition " << (id.alpha.satisfied ? "holds" : "violated") << '\n';
        return kExitOk;
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse adaptive filtering: RLS, CR-RLS and EM p-norm-like RLS", "sparse-rls"};
    app.require_subcommand(1);

    const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo learning curves");
    simulate->add_option("--config", sim.config, "Experiment config (text or manifest JSON)")->required();
    simulate->add_option("--out", sim.out, "Curve output file")->required();
    simulate->add_option("--format", sim.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    simulate->add_option("--threads", sim.threads, "Worker threads")->check(CLI::PositiveNumber);
    simulate->add_option("--window", sim.window, "Steady-state window (default: last 10%)");
    simulate->add_option("--every", sim.every, "Write every k-th iteration")->check(CLI::PositiveNumber);

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "Steady-state MSE over a gamma grid");
    sweep->add_option("--config", sw.config, "Experiment config")->required();
    sweep->add_option("--algo", sw.algorithm, "Algorithm id from the config")->required();
    sweep->add_option("--grid", sw.grid, "start:step:stop")->required();
    sweep->add_option("--out", sw.out, "Sweep output file")->required();
    sweep->add_option("--format", sw.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sweep->add_option("--threads", sw.threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--window", sw.window, "Steady-state window (default: last 10%)");

    IdentifyOptions id;
    auto* identify = app.add_subcommand("identify", "Run one filter over recorded samples");
    identify->add_option("--samples", id.samples, "Sample CSV")->required();
    identify->add_option("--algo-config", id.algo_config, "Filter config")->required();
    identify->add_option("--out", id.out, "Result JSON")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*simulate) return cmd_simulate(sim, err);
    if (*sweep) return cmd_sweep(sw, err);
    return cmd_identify(id, err);
}

}  // namespace sparse_rls::cli
