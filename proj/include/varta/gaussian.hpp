#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace varta {

/// Probabilities returned by normal_cdf are clamped to [kProbClamp, 1 - kProbClamp].
inline constexpr double kProbClamp = 1e-15;

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

/// Standard normal CDF, clamped away from 0 and 1.
[[nodiscard]] double normal_cdf(double z);

/// Unclamped standard normal CDF (exact erfc evaluation).
[[nodiscard]] double normal_cdf_raw(double z);

/**
 * @brief Standard normal quantile function.
 *
 * Acklam's rational approximation followed by one Halley step against erfc,
 * giving close to full double precision over (DBL_MIN, 1).
 *
 * @throws std::domain_error unless 0 < u < 1
 */
[[nodiscard]] double normal_quantile(double u);

[[nodiscard]] double normal_pdf(double z);
[[nodiscard]] double normal_logpdf(double z);

/**
 * @brief Lower Cholesky factor L with L L' = cov.
 *
 * Only the lower triangle of @p cov is read.
 * @throws CholeskyError carrying the failing pivot index
 */
[[nodiscard]] Eigen::MatrixXd cholesky(const Eigen::MatrixXd& cov);

/// Log density of N(mean, cov) at x. Throws CholeskyError for non-PD cov.
[[nodiscard]] double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& cov);

/// Log of the determinant of L L' for a Cholesky factor L.
[[nodiscard]] double log_det_from_cholesky(const Eigen::MatrixXd& chol);

/**
 * @brief Correlation matrix: unit diagonal, symmetric, positive definite.
 *
 * Stored as the p(p-1)/2 upper-triangle correlations in row-major order
 * (rho_12, rho_13, ..., rho_1p, rho_23, ...).
 */
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;

    /// Identity correlation of dimension p.
    explicit CorrelationMatrix(std::size_t p);

    /// @throws std::invalid_argument for wrong length, |rho| >= 1 or a non-PD result
    CorrelationMatrix(std::size_t p, const Eigen::VectorXd& rho);

    /// @throws std::invalid_argument unless @p m is a valid correlation matrix
    static CorrelationMatrix from_matrix(const Eigen::MatrixXd& m, double tol = 1e-12);

    [[nodiscard]] std::size_t dim() const noexcept { return p_; }
    [[nodiscard]] const Eigen::VectorXd& rho() const noexcept { return rho_; }
    [[nodiscard]] Eigen::MatrixXd matrix() const;

    /// Index of rho_ij (i < j, zero based) inside rho().
    [[nodiscard]] static std::size_t pair_index(std::size_t p, std::size_t i, std::size_t j);
    [[nodiscard]] static std::size_t pair_count(std::size_t p) { return p * (p - 1) / 2; }

private:
    std::size_t p_ = 0;
    Eigen::VectorXd rho_;
};

/**
 * Hyperspherical parameterization of the Cholesky factor of a correlation
 * matrix. Row i of L is (cos t_i1, sin t_i1 cos t_i2, ..., prod sin t_ij) with
 * angles t in (0, pi) and t = pi / (1 + exp(-v)), so v = 0 is the identity.
 * Angles are packed row by row (row 2: t_21; row 3: t_31, t_32; ...).
 */
[[nodiscard]] Eigen::VectorXd corr_to_unconstrained(const CorrelationMatrix& c);
[[nodiscard]] CorrelationMatrix unconstrained_to_corr(const Eigen::VectorXd& v, std::size_t p);

}  // namespace varta
