#pragma once

#include "varta/likelihood.hpp"
#include "varta/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varta {

enum class ParamGroup { Dynamics, Correlation, Marginal };

[[nodiscard]] std::string_view group_name(ParamGroup g);

/**
 * @brief Flat parameter vector layout for a (p, k, families) model.
 *
 * Order: A_1..A_k column-major (A[1,1], A[2,1], ...), then rho_ij upper triangle
 * row-major, then the first marginal parameter of every parametric series
 * followed by the second (shape_1..shape_p, scale_1..scale_p for Weibull).
 *
 * The unconstrained vector uses the same order with correlations replaced by
 * hyperspherical angles (see corr_to_unconstrained) and positive marginal
 * parameters (Weibull shape/scale, Gaussian sd) replaced by their logs.
 */
class ParamLayout {
public:
    ParamLayout(std::size_t p, std::size_t k, std::vector<Family> families);
    static ParamLayout for_model(const VartaModel& model);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return p_; }
    [[nodiscard]] std::size_t order() const noexcept { return k_; }
    [[nodiscard]] const std::vector<Family>& families() const noexcept { return families_; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<ParamGroup>& groups() const noexcept { return groups_; }

    /// Natural-space values (A, rho, marginal parameters).
    [[nodiscard]] Eigen::VectorXd natural(const VartaModel& model) const;
    [[nodiscard]] Eigen::VectorXd pack(const VartaModel& model) const;
    /// Inverse of pack. Empirical marginals are copied from @p reference.
    /// @throws std::invalid_argument if the vector does not map to a valid model
    [[nodiscard]] VartaModel unpack(const Eigen::VectorXd& u, const VartaModel& reference) const;
    /// d natural / d unconstrained (size x size).
    [[nodiscard]] Eigen::MatrixXd natural_jacobian(const Eigen::VectorXd& u) const;

    /// Index of the first unconstrained slot owned by series i's marginal parameter j, if any.
    [[nodiscard]] std::optional<std::size_t> marginal_slot(std::size_t series, std::size_t j) const;
    [[nodiscard]] std::size_t dynamics_count() const noexcept { return k_ * p_ * p_; }
    [[nodiscard]] std::size_t correlation_count() const noexcept { return p_ * (p_ - 1) / 2; }

private:
    std::size_t p_, k_;
    std::vector<Family> families_;
    std::vector<std::string> names_;
    std::vector<ParamGroup> groups_;
    // (series, parameter index within the marginal) for each marginal slot, in layout order
    std::vector<std::pair<std::size_t, std::size_t>> marginal_slots_;
};

/**
 * @brief Negative-free log-likelihood over the unconstrained vector.
 *
 * Latentized columns are cached per series keyed by that series' marginal
 * parameters, so perturbing A or rho only re-evaluates the Gaussian part.
 * Not thread-safe; one instance per fit.
 */
class LikelihoodObjective {
public:
    LikelihoodObjective(const TimeSeriesData& data, ParamLayout layout, VartaModel reference,
                        LikelihoodKind kind);

    /// Log-likelihood at u, or kBarrierLogLik when u maps to an invalid model.
    [[nodiscard]] double loglik(const Eigen::VectorXd& u);
    /// Central-difference gradient of loglik (step 1e-6 * max(1, |u_i|)).
    [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& u);

    [[nodiscard]] const ParamLayout& layout() const noexcept { return layout_; }
    [[nodiscard]] LikelihoodKind kind() const noexcept { return kind_; }

private:
    struct ColumnEntry {
        std::vector<double> key;
        Eigen::VectorXd z;
        double jac_all = 0.0;   // sum over all rows
        double jac_cond = 0.0;  // sum over rows t >= k
        bool valid = false;
        unsigned long stamp = 0;
    };
    const ColumnEntry& column(std::size_t i, const MarginalSpec& m);

    const TimeSeriesData& data_;
    ParamLayout layout_;
    VartaModel reference_;
    LikelihoodKind kind_;
    std::vector<std::vector<ColumnEntry>> cache_;
    unsigned long clock_ = 0;
    Eigen::MatrixXd latent_;
};

struct FitOptions {
    LikelihoodKind kind = LikelihoodKind::Auto;
    /// Starting model; initial_values() when empty.
    std::optional<VartaModel> start;
    /// Layout indices held at their starting values.
    std::vector<std::size_t> fixed;
    double gradient_tolerance = 1e-6;
    double relative_tolerance = 1e-10;
    int max_iterations = 2000;
    /// Compute standard errors after fitting.
    bool compute_se = true;
};

struct StandardErrors {
    Eigen::VectorXd se;          ///< natural space; NaN when unavailable or fixed
    Eigen::MatrixXd covariance;  ///< natural space
    bool information_pd = false;
};

struct FitResult {
    VartaModel model;
    std::vector<std::string> names;
    std::vector<ParamGroup> groups;
    Eigen::VectorXd estimates;
    Eigen::VectorXd se;
    Eigen::VectorXd tvalues;
    Eigen::MatrixXd covariance;
    double loglik = 0.0;
    bool converged = false;
    bool information_pd = false;
    int n_iter = 0;
    double gradient_norm = 0.0;
    LikelihoodKind kind = LikelihoodKind::Auto;
    std::string message;
};

/// Least-squares VAR(k) without intercept: returns A_1..A_k.
[[nodiscard]] std::vector<Eigen::MatrixXd> ols_var(const Eigen::MatrixXd& z, std::size_t k);

/// Weibull maximum likelihood for one sample (moments fallback on failure).
[[nodiscard]] MarginalSpec fit_weibull(const Eigen::VectorXd& x);

/// Starting model: per-series marginal ML, OLS VAR on the latentized data,
/// sample correlation of the latent series, projected to stationarity and PD.
/// @throws DataError when n <= 10 p or data fall outside a family's support
[[nodiscard]] VartaModel initial_values(const TimeSeriesData& data, std::size_t k,
                                        const std::vector<Family>& families);

/// Maximum-likelihood fit. Returns best-so-far with converged = false on failure.
/// @throws DataError for invalid data
[[nodiscard]] FitResult fit(const TimeSeriesData& data, std::size_t k,
                            const std::vector<Family>& families, const FitOptions& options = {});

/// Observed-information standard errors at @p model (Hessian in the unconstrained space, delta method).
[[nodiscard]] StandardErrors standard_errors(const VartaModel& model, const TimeSeriesData& data,
                                             LikelihoodKind kind = LikelihoodKind::Auto,
                                             const std::vector<std::size_t>& fixed = {});

struct Interval {
    double lo;
    double hi;
};

/// estimate +/- z_{(1+level)/2} * se per parameter.
[[nodiscard]] std::vector<Interval> confidence_intervals(const FitResult& fr, double level);

}  // namespace varta
