#pragma once

#include "varta/estimation.hpp"
#include "varta/model.hpp"
#include "varta/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace varta {

struct McDesign {
    VartaModel truth;
    std::vector<std::size_t> sample_sizes;
    std::size_t replications = 1;
    double ci_level = 0.95;
    RngSpec seed;
    unsigned threads = 1;
    LikelihoodKind kind = LikelihoodKind::Auto;
};

/// @throws ConfigError naming the violated field
void validate_design(const McDesign& design);

/// Aggregates for one sample size. Vectors are indexed like McReport::names.
struct McCell {
    std::size_t n = 0;
    std::size_t replications = 0;
    std::size_t used = 0;            ///< replications entering the aggregates
    std::size_t not_converged = 0;
    std::size_t information_not_pd = 0;
    std::size_t errors = 0;          ///< simulation or fit threw
    std::vector<double> coverage;
    std::vector<double> bias;
    std::vector<double> rmse;
    std::vector<double> mean_se;
};

struct McReport {
    std::vector<std::string> names;
    std::vector<ParamGroup> groups;
    Eigen::VectorXd truth;
    double ci_level = 0.95;
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    std::vector<McCell> cells;
};

/**
 * @brief Coverage / bias / RMSE study.
 *
 * Replication r at sample-size index i uses Xoshiro256::stream(seed, i * R + r)
 * for the simulated data. Fits start from initial_values, never from the truth.
 * Replications that fail, do not converge, or have a non-positive-definite
 * information matrix are excluded and tallied.
 */
[[nodiscard]] McReport run_mc(const McDesign& design);

struct GroupRow {
    std::string group;  ///< "A", "marginal", "rho", "overall"
    std::size_t count = 0;
    std::vector<double> coverage;  ///< one per sample size
    std::vector<double> rmse;      ///< sqrt(mean over the group of per-parameter MSE)
};

struct GroupSummary {
    std::vector<std::size_t> sample_sizes;
    std::vector<GroupRow> rows;
};

[[nodiscard]] GroupSummary group_summary(const McReport& report);

/// Text table: per-parameter coverage by n, then grouped coverage and RMSE.
[[nodiscard]] std::string format_mc_table(const McReport& report);

}  // namespace varta
