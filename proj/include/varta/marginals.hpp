#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varta {

enum class Family { Weibull, Gaussian, Empirical };

[[nodiscard]] std::string_view family_name(Family f);
/// Parses "weibull" / "gaussian" / "empirical" (case-insensitive).
[[nodiscard]] Family parse_family(std::string_view name);

/**
 * @brief A continuous marginal distribution F.
 *
 * Weibull(shape, scale), Gaussian(mean, sd), or Empirical built from sample
 * values. The empirical CDF passes linearly through the plotting positions
 * r/(n+1) at the order statistics and is extended with the end-segment slopes
 * to reach 0 and 1, so it is continuous and strictly increasing on its support.
 */
class MarginalSpec {
public:
    static MarginalSpec weibull(double shape, double scale);
    static MarginalSpec gaussian(double mean, double sd);
    /// @throws std::invalid_argument for fewer than 10 values or ties
    static MarginalSpec empirical(std::vector<double> sample);

    [[nodiscard]] Family family() const noexcept { return family_; }

    /// Free (estimable) parameters: (shape, scale), (mean, sd), or none for Empirical.
    [[nodiscard]] std::size_t parameter_count() const noexcept;
    [[nodiscard]] std::vector<double> parameters() const;
    [[nodiscard]] static std::vector<std::string> parameter_names(Family f);
    /// Same family with new parameters (Empirical: ignored, returns *this).
    [[nodiscard]] MarginalSpec with_parameters(std::span<const double> params) const;

    [[nodiscard]] double shape() const noexcept { return a_; }
    [[nodiscard]] double scale() const noexcept { return b_; }
    [[nodiscard]] double mean() const noexcept { return a_; }
    [[nodiscard]] double sd() const noexcept { return b_; }
    [[nodiscard]] const std::vector<double>& support_points() const noexcept { return support_; }

    /// Open support interval (lower, upper); infinite ends where unbounded.
    [[nodiscard]] double support_lower() const;
    [[nodiscard]] double support_upper() const;
    [[nodiscard]] bool in_support(double x) const;

    friend bool operator==(const MarginalSpec&, const MarginalSpec&) = default;

private:
    Family family_ = Family::Gaussian;
    double a_ = 0.0;  // shape | mean
    double b_ = 1.0;  // scale | sd
    std::vector<double> support_;
};

[[nodiscard]] double cdf(const MarginalSpec& m, double x);
/// Survival function 1 - F(x), computed without cancellation in the upper tail.
[[nodiscard]] double survival(const MarginalSpec& m, double x);
/// F^{-1}(u). @throws std::domain_error unless 0 < u < 1
[[nodiscard]] double quantile(const MarginalSpec& m, double u);
/// F^{-1}(1 - s), evaluated from the upper-tail probability s.
[[nodiscard]] double upper_quantile(const MarginalSpec& m, double s);
/// log f(x); -inf outside the support.
[[nodiscard]] double log_pdf(const MarginalSpec& m, double x);

/// z = Phi^{-1}(F(x)). @throws DataError when x is outside the open support.
[[nodiscard]] double to_latent(const MarginalSpec& m, double x);
/// x = F^{-1}(Phi(z)).
[[nodiscard]] double from_latent(const MarginalSpec& m, double z);
/// log d/dx Phi^{-1}(F(x)) = log f(x) - log phi(Phi^{-1}(F(x))); -inf outside the support.
[[nodiscard]] double log_jacobian_term(const MarginalSpec& m, double x);

/// to_latent and log_jacobian_term in one pass. Returns false if x is outside the support.
bool latent_and_jacobian(const MarginalSpec& m, double x, double& z, double& log_jac);

}  // namespace varta
