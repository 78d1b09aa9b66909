#include "varta/gaussian.hpp"

#include "varta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace varta {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Acklam's rational approximation, relative error about 1.15e-9.
double acklam_quantile(double u) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;

    if (u < low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (u > 1.0 - low) {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = u - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Lower-half quantile (u <= 0.5) refined by one Halley step.
double lower_quantile(double u) {
    double x = acklam_quantile(u);
    const double e = normal_cdf_raw(x) - u;
    const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= step / (1.0 + 0.5 * x * step);
    return x;
}

}  // namespace

double normal_cdf_raw(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_cdf(double z) {
    return std::clamp(normal_cdf_raw(z), kProbClamp, 1.0 - kProbClamp);
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("normal_quantile: probability must lie in (0, 1)");
    }
    if (u == 0.5) return 0.0;
    // 1 - u is exact for u >= 0.5, so the symmetric evaluation loses nothing.
    return u < 0.5 ? lower_quantile(u) : -lower_quantile(1.0 - u);
}

double normal_pdf(double z) { return std::exp(normal_logpdf(z)); }

double normal_logpdf(double z) { return -kLogSqrt2Pi - 0.5 * z * z; }

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols()) {
        throw std::invalid_argument("cholesky: matrix must be square");
    }
    const Eigen::Index n = cov.rows();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double diag = cov(j, j);
        for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw CholeskyError(static_cast<std::size_t>(j));
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = cov(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

double log_det_from_cholesky(const Eigen::MatrixXd& chol) {
    return 2.0 * chol.diagonal().array().log().sum();
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov) {
    if (x.size() != mean.size() || x.size() != cov.rows()) {
        throw std::invalid_argument("mvn_logpdf: dimension mismatch");
    }
    const Eigen::MatrixXd l = cholesky(cov);
    const Eigen::VectorXd w = l.triangularView<Eigen::Lower>().solve(x - mean);
    const double p = static_cast<double>(x.size());
    return -p * kLogSqrt2Pi - 0.5 * log_det_from_cholesky(l) - 0.5 * w.squaredNorm();
}

// ---------------------------------------------------------------------------

CorrelationMatrix::CorrelationMatrix(std::size_t p)
    : p_(p), rho_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair_count(p)))) {}

CorrelationMatrix::CorrelationMatrix(std::size_t p, const Eigen::VectorXd& rho) : p_(p), rho_(rho) {
    if (static_cast<std::size_t>(rho.size()) != pair_count(p)) {
        throw std::invalid_argument("correlation vector must have p(p-1)/2 entries");
    }
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        if (!(std::abs(rho[i]) < 1.0)) {
            throw std::invalid_argument("correlations must lie strictly inside (-1, 1)");
        }
    }
    try {
        (void)cholesky(matrix());
    } catch (const CholeskyError& e) {
        throw std::invalid_argument(std::string("correlation matrix is not positive definite: ") +
                                    e.what());
    }
}

CorrelationMatrix CorrelationMatrix::from_matrix(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("correlation matrix must be square");
    const auto p = static_cast<std::size_t>(m.rows());
    Eigen::VectorXd rho(static_cast<Eigen::Index>(pair_count(p)));
    for (std::size_t i = 0; i < p; ++i) {
        if (std::abs(m(i, i) - 1.0) > tol) {
            throw std::invalid_argument("correlation matrix must have unit diagonal");
        }
        for (std::size_t j = i + 1; j < p; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol) {
                throw std::invalid_argument("correlation matrix must be symmetric");
            }
            rho[static_cast<Eigen::Index>(pair_index(p, i, j))] = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return CorrelationMatrix(p, rho);
}

std::size_t CorrelationMatrix::pair_index(std::size_t p, std::size_t i, std::size_t j) {
    // Row-major upper triangle: rows before i contribute (p-1) + ... + (p-i).
    return i * p - i * (i + 1) / 2 + (j - i - 1);
}

Eigen::MatrixXd CorrelationMatrix::matrix() const {
    const auto n = static_cast<Eigen::Index>(p_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t j = i + 1; j < p_; ++j) {
            const double r = rho_[static_cast<Eigen::Index>(pair_index(p_, i, j))];
            m(i, j) = r;
            m(j, i) = r;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd corr_to_unconstrained(const CorrelationMatrix& c) {
    const std::size_t p = c.dim();
    const Eigen::MatrixXd l = cholesky(c.matrix());
    Eigen::VectorXd v(static_cast<Eigen::Index>(CorrelationMatrix::pair_count(p)));
    Eigen::Index idx = 0;
    for (std::size_t i = 1; i < p; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < i; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            // remaining * sin(theta) is the norm of the rest of the row
            const double tail = l.row(ii).segment(jj + 1, ii - jj).norm();
            const double theta = std::atan2(tail, l(ii, jj));
            const double theta_c = std::atan2(tail, -l(ii, jj));  // pi - theta
            v[idx++] = std::log(theta) - std::log(theta_c);
        }
    }
    return v;
}

CorrelationMatrix unconstrained_to_corr(const Eigen::VectorXd& v, std::size_t p) {
    if (static_cast<std::size_t>(v.size()) != CorrelationMatrix::pair_count(p)) {
        throw std::invalid_argument("unconstrained_to_corr: wrong vector length");
    }
    const auto n = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    l(0, 0) = 1.0;
    Eigen::Index idx = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        double remaining = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double x = v[idx++];
            // Evaluate on the side of the logistic closest to the boundary so
            // sin(theta) stays strictly positive for large |x|.
            const double s = 1.0 / (1.0 + std::exp(std::abs(x)));
            const double cos_t = (x >= 0.0 ? -1.0 : 1.0) * std::cos(std::numbers::pi * s);
            const double sin_t = std::sin(std::numbers::pi * s);
            l(i, j) = remaining * cos_t;
            remaining *= sin_t;
        }
        l(i, i) = remaining;
    }
    Eigen::MatrixXd m = l * l.transpose();
    Eigen::VectorXd rho(static_cast<Eigen::Index>(CorrelationMatrix::pair_count(p)));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            rho[static_cast<Eigen::Index>(CorrelationMatrix::pair_index(p, i, j))] =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return CorrelationMatrix(p, rho);
}

}  // namespace varta
