#pragma once

#include "varta/model.hpp"
#include "varta/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace varta {

/// M simulated future paths of h steps for p series, on both scales.
struct ForecastResult {
    std::size_t paths = 0;
    std::size_t horizon = 0;
    std::size_t dim = 0;
    std::vector<std::string> names;
    std::vector<double> samples;  ///< data scale, index (path * horizon + step) * dim + series
    std::vector<double> latent;   ///< latent scale, same layout

    [[nodiscard]] double value(std::size_t path, std::size_t step, std::size_t series) const {
        return samples[(path * horizon + step) * dim + series];
    }
    [[nodiscard]] double latent_value(std::size_t path, std::size_t step, std::size_t series) const {
        return latent[(path * horizon + step) * dim + series];
    }
    /// All M draws for one (step, series) cell, data scale.
    [[nodiscard]] std::vector<double> cell(std::size_t step, std::size_t series) const;
    [[nodiscard]] std::vector<double> latent_cell(std::size_t step, std::size_t series) const;
};

/**
 * @brief Simulation-based h-step forecast distribution with plug-in parameters.
 *
 * Conditions on the last k latentized observations. Path j uses the generator
 * seeded with rng.seed advanced by j jumps, so results do not depend on @p threads.
 */
[[nodiscard]] ForecastResult forecast(const VartaModel& model, const TimeSeriesData& data,
                                      std::size_t horizon, std::size_t paths, const RngSpec& rng,
                                      unsigned threads = 1);

/// Linear interpolation between order statistics at position (M - 1) u.
[[nodiscard]] double sample_quantile(std::span<const double> sorted, double u);

struct ForecastSummaryRow {
    std::size_t step = 0;  ///< 1-based horizon
    std::size_t series = 0;
    double mean = 0.0;
    double median = 0.0;
    std::vector<double> quantiles;  ///< one per requested level
};

struct ForecastSummary {
    std::vector<double> levels;
    std::vector<ForecastSummaryRow> rows;  ///< horizon-major, then series
};

/// Sample mean, median and quantiles per horizon and series.
/// @throws std::domain_error for levels outside (0, 1)
[[nodiscard]] ForecastSummary forecast_summary(const ForecastResult& fr, const std::vector<double>& levels);

}  // namespace varta
