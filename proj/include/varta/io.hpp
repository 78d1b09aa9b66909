#pragma once

#include "varta/diagnostics.hpp"
#include "varta/estimation.hpp"
#include "varta/forecasting.hpp"
#include "varta/model.hpp"
#include "varta/montecarlo.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace varta {

/// Comma-separated, header row of names, '.' decimals. @throws DataError naming line and column
[[nodiscard]] TimeSeriesData parse_csv(std::string_view text);
/// Shortest round-trip decimal for every value.
[[nodiscard]] std::string format_csv(const TimeSeriesData& data);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// @throws ConfigError with the line of a syntax error
[[nodiscard]] nlohmann::json parse_json(std::string_view text, std::string_view what);

struct NamedModel {
    VartaModel model;
    std::vector<std::string> names;
};

/**
 * Model file: {"p", "k", "A", "rho", "marginals", "names"}. "A" is a p x p
 * matrix for k = 1 or a list of k matrices. "rho" is the upper triangle of the
 * latent correlation matrix, row by row. A marginal is {"family": "weibull",
 * "shape", "scale"}, {"family": "gaussian", "mean", "sd"} or {"family":
 * "empirical", "support": [...]}. A fit result (an object with a "model" key)
 * is accepted as well.
 * @throws ConfigError naming the offending field
 */
[[nodiscard]] NamedModel model_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json model_to_json(const VartaModel& model, const std::vector<std::string>& names = {});

[[nodiscard]] nlohmann::json fit_result_to_json(const FitResult& fr, const std::vector<std::string>& names = {});

/// {"truth": model, "sample_sizes", "replications", "ci_level", "seed", "threads", "likelihood"}
[[nodiscard]] McDesign design_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json mc_report_to_json(const McReport& report);

[[nodiscard]] nlohmann::json residual_report_to_json(const ResidualReport& rep, const std::vector<std::string>& names);

/// Long format: lag,series,against,value,band.
[[nodiscard]] std::string correlogram_csv(const Correlogram& c, const std::vector<std::string>& names);

[[nodiscard]] nlohmann::json forecast_summary_to_json(const ForecastSummary& summary,
                                                      const std::vector<std::string>& names);
/// Long format: path,step,series,value,latent (step is 1-based).
[[nodiscard]] std::string forecast_csv(const ForecastResult& fr);

[[nodiscard]] std::string_view kind_name(LikelihoodKind k);
/// "auto" | "exact" | "conditional". @throws std::invalid_argument
[[nodiscard]] LikelihoodKind parse_kind(std::string_view s);

}  // namespace varta
