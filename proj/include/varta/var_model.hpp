#pragma once

#include "varta/gaussian.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace varta {

/// Latent VAR(k) parameters: lag matrices A_1..A_k and the stationary correlation Sigma = Gamma_0.
struct VarParams {
    std::vector<Eigen::MatrixXd> a;
    CorrelationMatrix sigma;

    VarParams() = default;
    VarParams(std::vector<Eigen::MatrixXd> lags, CorrelationMatrix corr);

    [[nodiscard]] std::size_t dim() const noexcept { return sigma.dim(); }
    [[nodiscard]] std::size_t order() const noexcept { return a.size(); }
};

/// Gamma_0..Gamma_{k-1}, Gamma_s = Cov(Z_t, Z_{t-s}).
struct AutocovSequence {
    std::vector<Eigen::MatrixXd> gammas;
};

enum class VarStatus { Ok, NonStationary, OmegaNotPd, Singular };

/// kp x kp companion matrix: [A_1 .. A_k] on top, identity blocks on the subdiagonal.
[[nodiscard]] Eigen::MatrixXd companion(const VarParams& vp);

/// Largest eigenvalue modulus (dense Hessenberg + QR eigen solver).
/// @throws NumericalError if the eigen solver does not converge
[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& b);

/**
 * @brief Solve the Yule-Walker relations for Gamma_1..Gamma_{k-1} given Gamma_0 = Sigma.
 *
 * For s = 1..k-1, Gamma_s = sum_i A_i Gamma_{s-i} with Gamma_{-j} = Gamma_j'. The
 * (k-1)p^2 unknowns are solved jointly as one linear system.
 * @throws NonStationaryError, NumericalError (singular system)
 */
[[nodiscard]] AutocovSequence solve_autocov(const VarParams& vp);

/// Block-Toeplitz covariance of (Z_t', ..., Z_{t-k+1}')'.
[[nodiscard]] Eigen::MatrixXd companion_covariance(const VarParams& vp);
[[nodiscard]] Eigen::MatrixXd companion_covariance(const AutocovSequence& ac);

/**
 * @brief Innovation covariance Omega keeping all latent variances at one.
 *
 * k = 1: Sigma - A Sigma A'. k >= 2: upper-left p x p block of
 * Sigma_k - B Sigma_k B'.
 * @throws NonStationaryError, OmegaNotPdError
 */
[[nodiscard]] Eigen::MatrixXd derive_omega(const VarParams& vp);

/// Non-throwing derive_omega for optimizer use. On Ok, @p omega and @p omega_chol are set.
[[nodiscard]] VarStatus try_derive_omega(const VarParams& vp, Eigen::MatrixXd& omega,
                                         Eigen::MatrixXd& omega_chol);

/// Omega written out term by term from A_i and Gamma_s (cross-check of derive_omega).
[[nodiscard]] Eigen::MatrixXd omega_expansion(const VarParams& vp, const AutocovSequence& ac);

/// Lag-s autocovariance Gamma_s for any s >= 0, continuing the Yule-Walker recursion.
[[nodiscard]] Eigen::MatrixXd autocov_at(const VarParams& vp, const AutocovSequence& ac,
                                         std::size_t s);

}  // namespace varta
