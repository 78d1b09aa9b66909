#include "varta/cli.hpp"

#include "varta/diagnostics.hpp"
#include "varta/errors.hpp"
#include "varta/forecasting.hpp"
#include "varta/io.hpp"
#include "varta/montecarlo.hpp"
#include "varta/simulation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace varta {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Family> parse_families(const std::string& spec, std::size_t p) {
    std::vector<Family> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = spec.find(',', start);
        const std::string item = spec.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        try {
            out.push_back(parse_family(item));
        } catch (const std::exception& e) {
            throw UsageError(fmt::format("--families: {}", e.what()));
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.size() == 1 && p > 1) out.assign(p, out.front());
    if (out.size() != p) {
        throw DataError(fmt::format("--families lists {} families but the data have {} columns", out.size(), p));
    }
    return out;
}

std::string section_row(const std::string& label, double est, double se, double t) {
    auto num = [](double v, int prec) { return std::isfinite(v) ? fmt::format("{:>12.{}f}", v, prec) : fmt::format("{:>12}", "NA"); };
    return fmt::format("  {:<14}{}{}{}\n", label, num(est, 4), num(se, 4), num(t, 2));
}

std::string series_label(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : fmt::format("x{}", i + 1);
}

void print_diagnostics(const ResidualReport& rep, const std::vector<std::string>& names) {
    fmt::print("{:<14}{:>10}{:>10}{:>10}{:>10}{:>10}  flags\n", "Series", "LB stat", "LB p", "mean", "skew", "ex.kurt");
    for (std::size_t i = 0; i < rep.whiteness.size(); ++i) {
        const auto& m = rep.moments[i];
        std::string flags;
        if (m.flag_mean) flags += " mean";
        if (m.flag_variance) flags += " variance";
        if (m.flag_skewness) flags += " skewness";
        if (m.flag_kurtosis) flags += " kurtosis";
        fmt::print("{:<14}{:>10.3f}{:>10.4f}{:>10.4f}{:>10.4f}{:>10.4f} {}\n", series_label(names, i),
                   rep.whiteness[i].statistic, rep.whiteness[i].p_value, m.mean, m.skewness, m.excess_kurtosis,
                   flags.empty() ? " none" : flags);
    }
    if (rep.residuals.cols() > 1) {
        fmt::print("Cross-correlation band violations (worst pair {}/{}): {} of {}\n",
                   series_label(names, rep.worst_pair.series_a), series_label(names, rep.worst_pair.series_b),
                   rep.worst_pair.violations, rep.worst_pair.tested);
    }
    fmt::print("Note: {}\n", rep.caveat);
}

}  // namespace

std::string format_fit_table(const FitResult& fr, const std::vector<std::string>& names) {
    std::string s = fmt::format("{:<16}{:>12}{:>12}{:>12}\n", "Parameter", "Estimate", "st.err", "t-value");
    s += "Multivariate relationships\n";
    for (std::size_t i = 0; i < fr.names.size(); ++i) {
        if (fr.groups[i] == ParamGroup::Marginal) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        s += section_row(fr.names[i], fr.estimates[ii], fr.se[ii], fr.tvalues[ii]);
    }
    const std::size_t p = fr.model.dim();
    for (std::size_t series = 0; series < p; ++series) {
        const std::string suffix = fmt::format("[{}]", series + 1);
        std::string block;
        for (std::size_t i = 0; i < fr.names.size(); ++i) {
            const auto& nm = fr.names[i];
            if (fr.groups[i] != ParamGroup::Marginal || nm.size() < suffix.size() ||
                nm.compare(nm.size() - suffix.size(), suffix.size(), suffix) != 0) {
                continue;
            }
            const auto ii = static_cast<Eigen::Index>(i);
            block += section_row(nm, fr.estimates[ii], fr.se[ii], fr.tvalues[ii]);
        }
        if (!block.empty()) {
            s += fmt::format("Marginal distribution: {} ({})\n", series_label(names, series),
                             family_name(fr.model.marginals[series].family()));
            s += block;
        }
    }
    s += fmt::format("log-likelihood {:.4f} ({} likelihood), {} iterations, {}\n", fr.loglik, kind_name(fr.kind),
                     fr.n_iter, fr.converged ? "converged" : "NOT converged");
    if (!fr.information_pd) s += "warning: observed information is not positive definite; standard errors unavailable\n";
    return s;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"VARTA: latent Gaussian VAR models with arbitrary marginals"};
    app.require_subcommand(1);

    std::string correlogram_path;
    std::string config, model_path, data_path, design_path, out, summary_path, families = "weibull", likelihood = "auto";
    std::size_t n = 0, k = 1, horizon = 0, paths = 0, burn_in = 0, lags = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    auto* sim = app.add_subcommand("simulate", "Simulate a series from a model file");
    sim->add_option("--config", config, "Model JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("-n,--n", n, "Number of observations")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "Random seed")->required();
    sim->add_option("--burn-in", burn_in, "Start from zero and discard this many steps");
    sim->add_option("--out", out, "Output CSV")->required();

    auto* fitc = app.add_subcommand("fit", "Maximum-likelihood fit");
    fitc->add_option("--data", data_path, "Input CSV")->required()->check(CLI::ExistingFile);
    fitc->add_option("-k,--order", k, "VAR order")->check(CLI::PositiveNumber);
    fitc->add_option("--families", families, "Marginal families, one or comma-separated per column");
    fitc->add_option("--likelihood", likelihood, "auto | exact | conditional");
    fitc->add_option("--out", out, "Output fit JSON")->required();

    auto* fc = app.add_subcommand("forecast", "Simulation-based forecast distribution");
    fc->add_option("--model", model_path, "Model or fit JSON")->required()->check(CLI::ExistingFile);
    fc->add_option("--data", data_path, "Observed CSV")->required()->check(CLI::ExistingFile);
    fc->add_option("-H,--horizon", horizon, "Forecast horizon")->required()->check(CLI::PositiveNumber);
    fc->add_option("-M,--paths", paths, "Number of simulated paths")->required()->check(CLI::PositiveNumber);
    fc->add_option("--seed", seed, "Random seed")->required();
    fc->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    fc->add_option("--out", out, "Output path CSV")->required();
    fc->add_option("--summary", summary_path, "Output summary JSON (default: <out>.summary.json)");

    auto* dg = app.add_subcommand("diagnose", "Residual diagnostics");
    dg->add_option("--model", model_path, "Model or fit JSON")->required()->check(CLI::ExistingFile);
    dg->add_option("--data", data_path, "Observed CSV")->required()->check(CLI::ExistingFile);
    dg->add_option("--lags", lags, "Maximum lag")->check(CLI::PositiveNumber);
    dg->add_option("--out", out, "Output report JSON")->required();
    dg->add_option("--correlogram", correlogram_path, "Also write residual auto/cross-correlations as CSV");

    auto* mc = app.add_subcommand("mc", "Monte Carlo coverage and RMSE study");
    mc->add_option("--design", design_path, "Design JSON")->required()->check(CLI::ExistingFile);
    auto* threads_opt = mc->add_option("--threads", threads, "Worker threads (overrides the design)")->check(CLI::PositiveNumber);
    mc->add_option("--out", out, "Output report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            const NamedModel nm = model_from_json(parse_json(read_text_file(config), config));
            SimulationOptions opt;
            opt.burn_in = burn_in;
            TimeSeriesData d = simulate_varta(nm.model, n, RngSpec{seed}, opt);
            d.names = nm.names;
            write_text_file(out, format_csv(d));
        } else if (fitc->parsed()) {
            const TimeSeriesData d = parse_csv(read_text_file(data_path));
            FitOptions opt;
            try {
                opt.kind = parse_kind(likelihood);
            } catch (const std::invalid_argument& e) {
                throw UsageError(fmt::format("--likelihood: {}", e.what()));
            }
            const FitResult fr = fit(d, k, parse_families(families, d.dim()), opt);
            const std::string json_text = fit_result_to_json(fr, d.names).dump(2) + "\n";
            write_text_file(out, json_text);
            fmt::print("{}", format_fit_table(fr, d.names));
            if (!fr.converged) return kExitNumerical;
        } else if (fc->parsed()) {
            const NamedModel nm = model_from_json(parse_json(read_text_file(model_path), model_path));
            TimeSeriesData d = parse_csv(read_text_file(data_path));
            if (d.dim() != nm.model.dim()) {
                throw DataError(fmt::format("data have {} columns but the model has {} series", d.dim(), nm.model.dim()));
            }
            d.names = nm.names;
            const ForecastResult fr = forecast(nm.model, d, horizon, paths, RngSpec{seed}, threads);
            const ForecastSummary summary = forecast_summary(fr, {0.025, 0.975});
            nlohmann::json sj = forecast_summary_to_json(summary, nm.names);
            sj["horizon"] = horizon;
            sj["paths"] = paths;
            sj["seed"] = seed;
            sj["rng"] = RngSpec::algorithm;
            const std::string csv = forecast_csv(fr);
            fs::path sp = summary_path;
            if (sp.empty()) {
                sp = fs::path(out);
                sp.replace_extension(".summary.json");
            }
            write_text_file(out, csv);
            write_text_file(sp, sj.dump(2) + "\n");
        } else if (dg->parsed()) {
            const NamedModel nm = model_from_json(parse_json(read_text_file(model_path), model_path));
            const TimeSeriesData d = parse_csv(read_text_file(data_path));
            if (d.dim() != nm.model.dim()) {
                throw DataError(fmt::format("data have {} columns but the model has {} series", d.dim(), nm.model.dim()));
            }
            validate_data(nm.model, d);
            const ResidualReport rep = diagnose(nm.model, d, lags);
            write_text_file(out, residual_report_to_json(rep, nm.names).dump(2) + "\n");
            if (!correlogram_path.empty()) write_text_file(correlogram_path, correlogram_csv(rep.correlogram, nm.names));
            print_diagnostics(rep, nm.names);
        } else if (mc->parsed()) {
            McDesign design = design_from_json(parse_json(read_text_file(design_path), design_path));
            if (threads_opt->count() > 0) design.threads = threads;
            const McReport rep = run_mc(design);
            write_text_file(out, mc_report_to_json(rep).dump(2) + "\n");
            fmt::print("{}", format_mc_table(rep));
        }
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const DataError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const NumericalError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        fmt::print(stderr, "failure: {}\n", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace varta
