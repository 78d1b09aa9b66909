#include "varta/forecasting.hpp"

#include "varta/gaussian.hpp"
#include "varta/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace varta {

std::vector<double> ForecastResult::cell(std::size_t step, std::size_t series) const {
    std::vector<double> out(paths);
    for (std::size_t j = 0; j < paths; ++j) out[j] = value(j, step, series);
    return out;
}

std::vector<double> ForecastResult::latent_cell(std::size_t step, std::size_t series) const {
    std::vector<double> out(paths);
    for (std::size_t j = 0; j < paths; ++j) out[j] = latent_value(j, step, series);
    return out;
}

ForecastResult forecast(const VartaModel& model, const TimeSeriesData& data, std::size_t horizon,
                        std::size_t paths, const RngSpec& rng, unsigned threads) {
    if (horizon == 0) throw std::invalid_argument("forecast horizon must be at least 1");
    if (paths == 0) throw std::invalid_argument("number of forecast paths must be at least 1");
    const std::size_t k = model.order();
    const std::size_t p = model.dim();
    if (data.length() < k) throw std::invalid_argument("need at least k observations to condition on");

    const Eigen::MatrixXd z_obs = latentize(model, data);
    const Eigen::MatrixXd tail = z_obs.bottomRows(static_cast<Eigen::Index>(k));  // oldest first
    const Eigen::MatrixXd omega_chol = cholesky(derive_omega(model.var));

    ForecastResult fr;
    fr.paths = paths;
    fr.horizon = horizon;
    fr.dim = p;
    fr.names = data.names;
    fr.samples.resize(paths * horizon * p);
    fr.latent.resize(paths * horizon * p);

    auto run_path = [&](std::size_t j, Xoshiro256 gen) {
        // history rows: k observed rows followed by simulated rows
        Eigen::MatrixXd hist(static_cast<Eigen::Index>(k + horizon), static_cast<Eigen::Index>(p));
        hist.topRows(static_cast<Eigen::Index>(k)) = tail;
        Eigen::VectorXd normals(static_cast<Eigen::Index>(p));
        for (std::size_t s = 0; s < horizon; ++s) {
            const auto t = static_cast<Eigen::Index>(k + s);
            Eigen::VectorXd zt = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
            for (std::size_t i = 1; i <= k; ++i) {
                zt.noalias() += model.var.a[i - 1] * hist.row(t - static_cast<Eigen::Index>(i)).transpose();
            }
            for (auto& v : normals) v = gen.normal();
            zt += omega_chol * normals;
            hist.row(t) = zt.transpose();
            for (std::size_t i = 0; i < p; ++i) {
                const std::size_t at = (j * horizon + s) * p + i;
                fr.latent[at] = zt[static_cast<Eigen::Index>(i)];
                fr.samples[at] = from_latent(model.marginals[i], zt[static_cast<Eigen::Index>(i)]);
            }
        }
    };

    // Stream for path j is the base generator after j jumps.
    std::vector<Xoshiro256> starts;
    starts.reserve(paths);
    Xoshiro256 base(rng.seed);
    for (std::size_t j = 0; j < paths; ++j) {
        starts.push_back(base);
        base.jump();
    }

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(paths)));
    if (workers == 1) {
        for (std::size_t j = 0; j < paths; ++j) run_path(j, starts[j]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < paths; j += workers) run_path(j, starts[j]);
            });
        }
        for (auto& th : pool) th.join();
    }
    return fr;
}

double sample_quantile(std::span<const double> sorted, double u) {
    if (sorted.empty()) throw std::invalid_argument("sample_quantile: empty sample");
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("sample_quantile: level must lie in [0, 1]");
    const double pos = u * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ForecastSummary forecast_summary(const ForecastResult& fr, const std::vector<double>& levels) {
    for (double l : levels) {
        if (!(l > 0.0 && l < 1.0)) throw std::domain_error("quantile levels must lie in (0, 1)");
    }
    ForecastSummary out;
    out.levels = levels;
    for (std::size_t s = 0; s < fr.horizon; ++s) {
        for (std::size_t i = 0; i < fr.dim; ++i) {
            std::vector<double> v = fr.cell(s, i);
            ForecastSummaryRow row;
            row.step = s + 1;
            row.series = i;
            // Shifted by the first draw so constant samples reproduce the constant exactly.
            double shifted = 0.0;
            for (double x : v) shifted += x - v.front();
            row.mean = v.front() + shifted / static_cast<double>(v.size());
            std::sort(v.begin(), v.end());
            row.median = sample_quantile(v, 0.5);
            for (double l : levels) row.quantiles.push_back(sample_quantile(v, l));
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace varta
