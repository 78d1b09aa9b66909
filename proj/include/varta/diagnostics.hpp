#pragma once

#include "varta/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace varta {

/// Latent residuals eta_t = Z_t - sum_i A_i Z_{t-i}, t = k+1..n ((n-k) x p).
[[nodiscard]] Eigen::MatrixXd residuals(const VartaModel& model, const TimeSeriesData& data);

/**
 * Sample auto- and cross-correlations. at(l)(i, j) is the correlation between
 * series i at time t and series j at time t - l, normalized by n (not n - l).
 */
struct Correlogram {
    std::size_t n = 0;
    std::size_t max_lag = 0;
    double band = 0.0;  ///< 1.96 / sqrt(n)
    std::vector<Eigen::MatrixXd> lags;

    [[nodiscard]] const Eigen::MatrixXd& at(std::size_t lag) const { return lags[lag]; }
    [[nodiscard]] double acf(std::size_t series, std::size_t lag) const {
        return lags[lag](static_cast<Eigen::Index>(series), static_cast<Eigen::Index>(series));
    }
};

/// @throws std::invalid_argument unless n > 4 * max_lag
[[nodiscard]] Correlogram correlogram(const Eigen::MatrixXd& series, std::size_t max_lag);

struct PortmanteauResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;
    std::size_t dof = 0;
};

/// Ljung-Box Q = n(n+2) sum_{l=1..L} r_l^2 / (n - l).
[[nodiscard]] double ljung_box_statistic(std::span<const double> x, std::size_t lags);

/// Per-series Ljung-Box test, chi-square reference with L degrees of freedom.
/// @throws std::invalid_argument unless rows > 4 * lags
[[nodiscard]] std::vector<PortmanteauResult> whiteness_test(const Eigen::MatrixXd& resid, std::size_t lags);

struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double se_mean = 0.0;
    double se_variance = 0.0;
    double se_skewness = 0.0;
    double se_kurtosis = 0.0;
    bool flag_mean = false;
    bool flag_variance = false;
    bool flag_skewness = false;
    bool flag_kurtosis = false;

    [[nodiscard]] bool any_flag() const noexcept {
        return flag_mean || flag_variance || flag_skewness || flag_kurtosis;
    }
};

/// Moments of each latent column against N(0, 1); flags beyond 3 standard errors.
/// @throws std::invalid_argument for fewer than 50 rows
[[nodiscard]] std::vector<MomentReport> gaussianity_check(const Eigen::MatrixXd& latent);

struct CrossCorrelationViolation {
    std::size_t series_a = 0;
    std::size_t series_b = 0;
    std::size_t violations = 0;  ///< lags 1..L outside the band, both directions
    std::size_t tested = 0;
};

struct ResidualReport {
    Eigen::MatrixXd residuals;
    Correlogram correlogram;           ///< of the residuals
    std::vector<MomentReport> moments;  ///< of the latentized data
    std::vector<PortmanteauResult> whiteness;
    CrossCorrelationViolation worst_pair;  ///< pair with most cross-correlation band violations
    std::string caveat;
};

[[nodiscard]] ResidualReport diagnose(const VartaModel& model, const TimeSeriesData& data, std::size_t max_lag);

}  // namespace varta
