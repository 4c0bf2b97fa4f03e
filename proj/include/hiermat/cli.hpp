#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hiermat/noise.hpp"
#include "hiermat/oracle.hpp"
#include "hiermat/params.hpp"
#include "hiermat/rng.hpp"
#include "hiermat/serialize.hpp"
#include "hiermat/spectra.hpp"

namespace hiermat {

enum class Command { Spectrum, Verify, Simulate, Sweep };

struct BetaGrid {
    double start = 0.1;
    double stop = 8.0;
    int points = 80;
    bool log_spacing = true;

    std::vector<double> values() const {
        if (points < 1) throw InvalidArgument("beta grid needs at least one point");
        if (points > 1 && !(start < stop))
            throw InvalidArgument("beta grid must be strictly increasing");
        if (log_spacing && !(start > 0.0))
            throw InvalidArgument("log-spaced beta grid requires start > 0");
        std::vector<double> v(static_cast<std::size_t>(points));
        if (points == 1) {
            v[0] = start;
            return v;
        }
        for (int i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / (points - 1);
            v[static_cast<std::size_t>(i)] =
                log_spacing ? start * std::pow(stop / start, t)
                            : start + (stop - start) * t;
        }
        return v;
    }
};

/// Parse "start:stop:points:spacing" (spacing = linear|log).
inline BetaGrid parse_beta_grid(const std::string& s) {
    BetaGrid grid;
    std::istringstream in(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 4)
        throw InvalidArgument("beta grid must be start:stop:points:spacing, got '" + s + "'");
    try {
        grid.start = std::stod(parts[0]);
        grid.stop = std::stod(parts[1]);
        grid.points = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw InvalidArgument("beta grid must be numeric start:stop:points:spacing");
    }
    if (parts[3] == "log") grid.log_spacing = true;
    else if (parts[3] == "linear") grid.log_spacing = false;
    else throw InvalidArgument("beta grid spacing must be 'linear' or 'log'");
    (void)grid.values();  // validate eagerly
    return grid;
}

/// Effective run configuration after merging defaults, a config file, and
/// command-line flags (flags win).
struct RunConfig {
    Command command = Command::Spectrum;
    int p = 2;
    int r = 3;
    Form form = Form::A;
    std::vector<double> coeffs;              // inline coefficient vector
    std::optional<double> boltzmann_beta;    // or Boltzmann weights
    WhichOperator which = WhichOperator::Q;
    std::uint64_t seed = 1;
    std::uint64_t n_trials = 10000;
    std::string output;                      // empty = stdout
    std::string format = "csv";              // sweep output: csv | json
    BetaGrid beta_grid;
    std::vector<int> initial;                // empty = all zeros
    bool show_config = false;
};

inline json run_config_json(const RunConfig& config) {
    const char* command = config.command == Command::Spectrum ? "spectrum"
                          : config.command == Command::Verify ? "verify"
                          : config.command == Command::Simulate ? "simulate"
                                                                : "sweep";
    json j{{"command", command},
           {"p", config.p},
           {"r", config.r},
           {"form", to_string(config.form)},
           {"coeffs", config.coeffs},
           {"which", to_string(config.which)},
           {"seed", config.seed},
           {"trials", config.n_trials},
           {"output", config.output},
           {"format", config.format},
           {"beta_grid",
            json{{"start", config.beta_grid.start},
                 {"stop", config.beta_grid.stop},
                 {"points", config.beta_grid.points},
                 {"spacing", config.beta_grid.log_spacing ? "log" : "linear"}}},
           {"initial", config.initial}};
    if (config.boltzmann_beta) j["boltzmann"] = *config.boltzmann_beta;
    return j;
}

namespace detail {

inline HierParams config_params(const RunConfig& config) {
    if (config.boltzmann_beta)
        return boltzmann_model(config.p, config.r, *config.boltzmann_beta).params();
    if (config.coeffs.empty())
        throw InvalidArgument("provide --coeffs or --boltzmann");
    return HierParams(config.p, config.r, config.form, config.coeffs);
}

inline NoiseModel config_model(const RunConfig& config) {
    if (config.boltzmann_beta)
        return boltzmann_model(config.p, config.r, *config.boltzmann_beta);
    if (config.coeffs.empty())
        throw InvalidArgument("provide --coeffs or --boltzmann");
    if (config.form != Form::A)
        throw InvalidArgument("noise weights must be given in A form");
    return NoiseModel(config.p, config.r, config.coeffs);
}

inline Word config_initial(const RunConfig& config) {
    if (config.initial.empty()) return Word(static_cast<std::size_t>(config.r), 0);
    return config.initial;
}

inline int emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (config.output.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open output file '" + config.output + "'");
    file << text;
    return 0;
}

} // namespace detail

/// Execute one command. Returns the process exit status (0 success; verify
/// returns 1 when any check fails).
inline int run(const RunConfig& config, std::ostream& out) {
    if (config.show_config) {
        out << run_config_json(config).dump(2) << "\n";
        return 0;
    }

    switch (config.command) {
        case Command::Spectrum: {
            const HierParams params = detail::config_params(config);
            std::vector<SpectralLine> lines;
            switch (config.which) {
                case WhichOperator::Q: lines = spectrum_Q(params); break;
                case WhichOperator::QrectPower: lines = spectrum_Qrect_power(params); break;
                case WhichOperator::Qrect: lines = spectrum_Qrect(params); break;
            }
            return detail::emit(config, spectrum_report_json(params, lines).dump(2) + "\n",
                                out);
        }
        case Command::Verify: {
            const HierParams params = detail::config_params(config);
            const VerificationReport report = verify_spectrum(params, config.which);
            detail::emit(config, verification_report_json(report).dump(2) + "\n", out);
            return report.all_pass() ? 0 : 1;
        }
        case Command::Simulate: {
            const NoiseModel model = detail::config_model(config);
            const MomentReport report = simulate_full_cycle(
                model, detail::config_initial(config), config.seed, config.n_trials);
            return detail::emit(config, moment_report_json(report).dump(2) + "\n", out);
        }
        case Command::Sweep: {
            std::vector<SweepRow> rows;
            const std::vector<double> betas = config.beta_grid.values();
            const bool with_exact = HierParams(config.p, config.r, Form::A,
                                               std::vector<double>(config.r + 1, 0.0))
                                        .dimension() <= kDefaultDenseCap;
            for (std::size_t i = 0; i < betas.size(); ++i) {
                const NoiseModel model = boltzmann_model(config.p, config.r, betas[i]);
                SweepRow row;
                row.beta = betas[i];
                row.r = config.r;
                row.p = config.p;
                row.seed = config.seed;
                if (config.p == 2) {
                    const MomentReport analytic = analytic_moments(model);
                    row.mean_analytic = analytic.mean;
                    row.var_analytic = analytic.variance;
                } else {
                    // closed forms exist for p = 2 only; Monte Carlo stands alone
                    row.mean_analytic = std::numeric_limits<double>::quiet_NaN();
                    row.var_analytic = std::numeric_limits<double>::quiet_NaN();
                }
                // decorrelate rows while keeping the base seed in the output
                std::uint64_t mix_state = config.seed ^ (0xA24BAED4963EE407ULL * (i + 1));
                const std::uint64_t row_seed = splitmix64(mix_state);
                const MomentReport mc = simulate_full_cycle(
                    model, Word(static_cast<std::size_t>(config.r), 0), row_seed,
                    config.n_trials);
                row.mean_mc = mc.mean;
                row.var_mc = mc.variance;
                row.stderr_mean = mc.std_error_mean;
                row.n_trials = mc.n_trials;
                if (with_exact && config.p == 2) {
                    const ExactMoments exact = exact_moments(
                        model.params(), config.r, Word(static_cast<std::size_t>(config.r), 0));
                    row.mean_exact = exact.mean;
                    row.var_exact = exact.variance;
                }
                rows.push_back(std::move(row));
            }
            std::string text;
            if (config.format == "json") {
                text = sweep_rows_json(rows).dump(2) + "\n";
            } else {
                std::ostringstream csv;
                write_sweep_csv(csv, rows);
                text = csv.str();
            }
            return detail::emit(config, text, out);
        }
    }
    return 0;
}

namespace detail {

inline void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream file(path);
    if (!file) throw InvalidArgument("cannot read config file '" + path + "'");
    json j;
    file >> j;
    if (j.contains("p")) config.p = j["p"].get<int>();
    if (j.contains("r")) config.r = j["r"].get<int>();
    if (j.contains("form")) config.form = form_from_string(j["form"].get<std::string>());
    if (j.contains("coeffs")) config.coeffs = j["coeffs"].get<std::vector<double>>();
    if (j.contains("boltzmann")) config.boltzmann_beta = j["boltzmann"].get<double>();
    if (j.contains("which")) config.which = which_from_string(j["which"].get<std::string>());
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) config.n_trials = j["trials"].get<std::uint64_t>();
    if (j.contains("output")) config.output = j["output"].get<std::string>();
    if (j.contains("format")) config.format = j["format"].get<std::string>();
    if (j.contains("beta")) config.beta_grid = parse_beta_grid(j["beta"].get<std::string>());
    if (j.contains("initial")) config.initial = j["initial"].get<std::vector<int>>();
}

} // namespace detail

/// Parse argv and run. Usage errors exit 2; domain errors exit 1 with the
/// error name on stderr.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"block-hierarchical operator spectra and the rotating-disc error model"};
    app.require_subcommand(1);

    // flag storage; only values the user actually set override the config file
    int p = 0, r = 0;
    std::string form_str, which_str, coeffs_str, config_path, output, format;
    double boltzmann = 0.0;
    std::string beta_str, initial_str;
    std::uint64_t seed = 0, trials = 0;
    bool show_config = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-p,--branching", p, "branching factor p (>= 2)");
        cmd->add_option("-r,--depth", r, "hierarchy depth r (>= 1)");
        cmd->add_option("--coeffs", coeffs_str, "comma-separated coefficients a_0..a_r");
        cmd->add_option("--form", form_str, "coefficient form: A|Q|B|C (default A)");
        cmd->add_option("--config", config_path, "JSON config file (flags win)");
        cmd->add_option("-o,--output", output, "write output to this file instead of stdout");
        cmd->add_flag("--show-config", show_config, "print the effective config and exit");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "print a closed-form spectrum report");
    add_common(spectrum);
    spectrum->add_option("--boltzmann", boltzmann, "Boltzmann weights with this beta");
    spectrum->add_option("--which", which_str, "operator: Q | Qr | Qrect");

    CLI::App* verify = app.add_subcommand("verify", "run the dense brute-force checks");
    add_common(verify);
    verify->add_option("--boltzmann", boltzmann, "Boltzmann weights with this beta");
    verify->add_option("--which", which_str, "operator: Q | Qr | Qrect");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo full-cycle moments");
    add_common(simulate);
    simulate->add_option("--boltzmann", boltzmann, "Boltzmann weights with this beta");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--trials", trials, "number of trials");
    simulate->add_option("--initial", initial_str, "comma-separated initial cell contents");

    CLI::App* sweep = app.add_subcommand("sweep", "beta sweep: analytic + Monte Carlo moments");
    add_common(sweep);
    sweep->add_option("--beta,--boltzmann", beta_str,
                      "beta grid start:stop:points:spacing (spacing: linear|log)");
    sweep->add_option("--seed", seed, "RNG seed");
    sweep->add_option("--trials", trials, "trials per grid point");
    sweep->add_option("--format", format, "output format: csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig config;
        CLI::App* active = app.get_subcommands().front();
        if (active == spectrum) config.command = Command::Spectrum;
        else if (active == verify) config.command = Command::Verify;
        else if (active == simulate) config.command = Command::Simulate;
        else config.command = Command::Sweep;

        const auto has = [&](const std::string& name) {
            const CLI::Option* opt = active->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };

        if (has("--config")) detail::apply_config_file(config, config_path);

        const auto parse_csv_doubles = [](const std::string& s) {
            std::vector<double> v;
            std::istringstream in(s);
            std::string tok;
            while (std::getline(in, tok, ',')) v.push_back(std::stod(tok));
            return v;
        };
        const auto parse_csv_ints = [](const std::string& s) {
            std::vector<int> v;
            std::istringstream in(s);
            std::string tok;
            while (std::getline(in, tok, ',')) v.push_back(std::stoi(tok));
            return v;
        };

        if (has("-p")) config.p = p;
        if (has("-r")) config.r = r;
        if (has("--form")) config.form = form_from_string(form_str);
        if (has("--coeffs")) {
            try {
                config.coeffs = parse_csv_doubles(coeffs_str);
            } catch (const std::exception&) {
                throw InvalidArgument("--coeffs must be a comma-separated number list");
            }
            config.boltzmann_beta.reset();
        }
        if (has("--boltzmann") && config.command != Command::Sweep) {
            config.boltzmann_beta = boltzmann;
            config.coeffs.clear();
        }
        if (has("--which")) config.which = which_from_string(which_str);
        if (has("--seed")) config.seed = seed;
        if (has("--trials")) config.n_trials = trials;
        if (has("--output")) config.output = output;
        if (has("--format")) config.format = format;
        if (config.command == Command::Sweep && has("--beta"))
            config.beta_grid = parse_beta_grid(beta_str);
        if (has("--initial")) {
            try {
                config.initial = parse_csv_ints(initial_str);
            } catch (const std::exception&) {
                throw InvalidArgument("--initial must be a comma-separated digit list");
            }
        }
        config.show_config = show_config;

        return run(config, out);
    } catch (const Error& e) {
        err << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "Error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace hiermat
