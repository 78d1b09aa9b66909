#pragma once

#include "varta/model.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace varta {

/// Returned in place of the log-likelihood when (A, Sigma) is non-stationary or Omega is not PD.
inline constexpr double kBarrierLogLik = -1e30;

enum class LikelihoodKind {
    Auto,         ///< exact for k = 1, conditional for k >= 2
    Exact,        ///< stationary initial term plus conditionals (k = 1 only)
    Conditional,  ///< conditional on the first k observations
};

/// Z_it = Phi^{-1}(F_i(X_it)). @throws DataError naming (row, column) on support violations
[[nodiscard]] Eigen::MatrixXd latentize(const VartaModel& model, const TimeSeriesData& data);

/// X_it = F_i^{-1}(Phi(Z_it)).
[[nodiscard]] TimeSeriesData delatentize(const VartaModel& model, const Eigen::MatrixXd& latent,
                                         std::vector<std::string> names = {});

/// Sum of log-Jacobian terms over rows t >= first_row. Independent of (A, rho).
[[nodiscard]] double jacobian_part(const VartaModel& model, const TimeSeriesData& data,
                                   std::size_t first_row = 0);

/**
 * @brief Gaussian conditional log density sum_{t >= k} log N(z_t; sum_i A_i z_{t-i}, Omega).
 *
 * Rows of @p latent are time points (zero based, so the first k rows are conditioned on).
 * Returns kBarrierLogLik when Omega cannot be formed.
 */
[[nodiscard]] double gaussian_conditional_part(const VarParams& vp, const Eigen::MatrixXd& latent);

/// Conditional part plus log N(z_1; 0, Sigma). k = 1 only.
[[nodiscard]] double gaussian_exact_part(const VarParams& vp, const Eigen::MatrixXd& latent);

/// Exact VAR(1) log-likelihood: stationary initial density, conditionals, and all Jacobian terms.
[[nodiscard]] double loglik_exact_var1(const VartaModel& model, const TimeSeriesData& data);

/// Conditional log-likelihood given the first k observations.
[[nodiscard]] double loglik_conditional(const VartaModel& model, const TimeSeriesData& data);

[[nodiscard]] double loglik(const VartaModel& model, const TimeSeriesData& data,
                            LikelihoodKind kind = LikelihoodKind::Auto);

/// Auto resolved against the model order.
[[nodiscard]] LikelihoodKind resolve_kind(LikelihoodKind kind, std::size_t order);

}  // namespace varta
