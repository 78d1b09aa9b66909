#include "varta/montecarlo.hpp"

#include "varta/errors.hpp"
#include "varta/simulation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace varta {

namespace {

struct Replicate {
    enum class Status { Used, NotConverged, NotPd, Error } status = Status::Error;
    Eigen::VectorXd estimates;
    std::vector<bool> covered;
    Eigen::VectorXd se;
};

std::vector<Family> families_of(const VartaModel& m) {
    std::vector<Family> f;
    for (const auto& s : m.marginals) f.push_back(s.family());
    return f;
}

Replicate run_one(const McDesign& d, std::size_t n, std::uint64_t stream, const Eigen::VectorXd& truth) {
    Replicate rep;
    try {
        Xoshiro256 rng = Xoshiro256::stream(d.seed.seed, stream);
        const TimeSeriesData data = simulate_varta(d.truth, n, rng);
        FitOptions opt;
        opt.kind = d.kind;
        const FitResult fr = fit(data, d.truth.order(), families_of(d.truth), opt);
        if (!fr.converged) {
            rep.status = Replicate::Status::NotConverged;
            return rep;
        }
        if (!fr.information_pd || !fr.se.allFinite()) {
            rep.status = Replicate::Status::NotPd;
            return rep;
        }
        const auto ci = confidence_intervals(fr, d.ci_level);
        rep.estimates = fr.estimates;
        rep.se = fr.se;
        for (Eigen::Index j = 0; j < truth.size(); ++j) {
            const auto& c = ci[static_cast<std::size_t>(j)];
            rep.covered.push_back(c.lo <= truth[j] && truth[j] <= c.hi);
        }
        rep.status = Replicate::Status::Used;
    } catch (const std::exception&) {
        rep.status = Replicate::Status::Error;
    }
    return rep;
}

}  // namespace

void validate_design(const McDesign& d) {
    if (d.replications < 1) throw ConfigError("replications: must be at least 1");
    if (d.sample_sizes.empty()) throw ConfigError("sample_sizes: must not be empty");
    for (std::size_t n : d.sample_sizes) {
        if (n <= 10 * d.truth.dim()) {
            throw ConfigError(fmt::format("sample_sizes: n = {} must exceed 10 * p = {}", n, 10 * d.truth.dim()));
        }
    }
    if (!(d.ci_level > 0.0 && d.ci_level < 1.0)) throw ConfigError("ci_level: must lie in (0, 1)");
    for (const auto& m : d.truth.marginals) {
        if (m.family() == Family::Empirical) throw ConfigError("truth.marginals: empirical marginals are not estimable");
    }
}

McReport run_mc(const McDesign& d) {
    validate_design(d);
    const ParamLayout layout = ParamLayout::for_model(d.truth);
    McReport rep;
    rep.names = layout.names();
    rep.groups = layout.groups();
    rep.truth = layout.natural(d.truth);
    rep.ci_level = d.ci_level;
    rep.seed = d.seed.seed;
    rep.replications = d.replications;

    const std::size_t sizes = d.sample_sizes.size();
    const std::size_t total = sizes * d.replications;
    std::vector<Replicate> results(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const std::size_t n = d.sample_sizes[idx / d.replications];
            results[idx] = run_one(d, n, idx, rep.truth);
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(d.threads, static_cast<unsigned>(total)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const std::size_t np = rep.names.size();
    for (std::size_t i = 0; i < sizes; ++i) {
        McCell cell;
        cell.n = d.sample_sizes[i];
        cell.replications = d.replications;
        std::vector<double> cov(np, 0.0), err(np, 0.0), sq(np, 0.0), se(np, 0.0);
        for (std::size_t r = 0; r < d.replications; ++r) {
            const Replicate& x = results[i * d.replications + r];
            switch (x.status) {
                case Replicate::Status::NotConverged: ++cell.not_converged; continue;
                case Replicate::Status::NotPd: ++cell.information_not_pd; continue;
                case Replicate::Status::Error: ++cell.errors; continue;
                case Replicate::Status::Used: break;
            }
            ++cell.used;
            for (std::size_t j = 0; j < np; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                const double e = x.estimates[jj] - rep.truth[jj];
                cov[j] += x.covered[j] ? 1.0 : 0.0;
                err[j] += e;
                sq[j] += e * e;
                se[j] += x.se[jj];
            }
        }
        const double u = cell.used > 0 ? static_cast<double>(cell.used) : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < np; ++j) {
            cell.coverage.push_back(cov[j] / u);
            cell.bias.push_back(err[j] / u);
            cell.rmse.push_back(std::sqrt(sq[j] / u));
            cell.mean_se.push_back(se[j] / u);
        }
        rep.cells.push_back(std::move(cell));
    }
    return rep;
}

GroupSummary group_summary(const McReport& report) {
    GroupSummary out;
    for (const auto& c : report.cells) out.sample_sizes.push_back(c.n);
    struct Def {
        const char* label;
        ParamGroup g;
    };
    const Def defs[] = {{"A", ParamGroup::Dynamics}, {"marginal", ParamGroup::Marginal}, {"rho", ParamGroup::Correlation}};
    auto make_row = [&](const std::string& label, auto&& member) {
        GroupRow row;
        row.group = label;
        for (std::size_t j = 0; j < report.groups.size(); ++j) row.count += member(j) ? 1 : 0;
        for (const auto& c : report.cells) {
            double cov = 0.0, mse = 0.0;
            for (std::size_t j = 0; j < report.groups.size(); ++j) {
                if (!member(j)) continue;
                cov += c.coverage[j];
                mse += c.rmse[j] * c.rmse[j];
            }
            const double cnt = static_cast<double>(row.count);
            row.coverage.push_back(row.count > 0 ? cov / cnt : std::numeric_limits<double>::quiet_NaN());
            row.rmse.push_back(row.count > 0 ? std::sqrt(mse / cnt) : std::numeric_limits<double>::quiet_NaN());
        }
        return row;
    };
    for (const auto& def : defs) {
        GroupRow row = make_row(def.label, [&](std::size_t j) { return report.groups[j] == def.g; });
        if (row.count > 0) out.rows.push_back(std::move(row));
    }
    out.rows.push_back(make_row("overall", [](std::size_t) { return true; }));
    return out;
}

std::string format_mc_table(const McReport& report) {
    std::string s = fmt::format("Empirical coverage of {:g}% confidence intervals (R = {}, seed = {})\n",
                                100.0 * report.ci_level, report.replications, report.seed);
    s += fmt::format("{:<14}{:>10}", "Parameter", "True");
    for (const auto& c : report.cells) s += fmt::format("{:>10}", fmt::format("n={}", c.n));
    s += '\n';
    for (std::size_t j = 0; j < report.names.size(); ++j) {
        s += fmt::format("{:<14}{:>10.4f}", report.names[j], report.truth[static_cast<Eigen::Index>(j)]);
        for (const auto& c : report.cells) s += fmt::format("{:>10.3f}", c.coverage[j]);
        s += '\n';
    }
    const GroupSummary g = group_summary(report);
    s += fmt::format("\n{:<14}{:>10}", "Group", "Size");
    for (std::size_t n : g.sample_sizes) s += fmt::format("{:>10}", fmt::format("n={}", n));
    s += "\nCoverage\n";
    for (const auto& row : g.rows) {
        s += fmt::format("{:<14}{:>10}", row.group, row.count);
        for (double v : row.coverage) s += fmt::format("{:>10.3f}", v);
        s += '\n';
    }
    s += "RMSE\n";
    for (const auto& row : g.rows) {
        s += fmt::format("{:<14}{:>10}", row.group, row.count);
        for (double v : row.rmse) s += fmt::format("{:>10.4f}", v);
        s += '\n';
    }
    s += fmt::format("\n{:<14}{:>10}", "Excluded", "");
    for (const auto& c : report.cells) s += fmt::format("{:>10}", c.replications - c.used);
    s += '\n';
    return s;
}

}  // namespace varta
