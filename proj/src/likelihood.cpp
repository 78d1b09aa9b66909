#include "varta/likelihood.hpp"

#include "varta/errors.hpp"
#include "varta/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varta {

Eigen::MatrixXd latentize(const VartaModel& model, const TimeSeriesData& data) {
    validate_data(model, data);
    Eigen::MatrixXd z(data.values.rows(), data.values.cols());
    for (Eigen::Index i = 0; i < z.cols(); ++i) {
        const MarginalSpec& m = model.marginals[static_cast<std::size_t>(i)];
        for (Eigen::Index t = 0; t < z.rows(); ++t) z(t, i) = to_latent(m, data.values(t, i));
    }
    return z;
}

TimeSeriesData delatentize(const VartaModel& model, const Eigen::MatrixXd& latent,
                           std::vector<std::string> names) {
    if (static_cast<std::size_t>(latent.cols()) != model.dim()) {
        throw std::invalid_argument("delatentize: column count does not match the model");
    }
    Eigen::MatrixXd x(latent.rows(), latent.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        const MarginalSpec& m = model.marginals[static_cast<std::size_t>(i)];
        for (Eigen::Index t = 0; t < x.rows(); ++t) x(t, i) = from_latent(m, latent(t, i));
    }
    return TimeSeriesData(std::move(x), std::move(names));
}

double jacobian_part(const VartaModel& model, const TimeSeriesData& data, std::size_t first_row) {
    validate_data(model, data);
    double total = 0.0;
    for (Eigen::Index i = 0; i < data.values.cols(); ++i) {
        const MarginalSpec& m = model.marginals[static_cast<std::size_t>(i)];
        double col = 0.0;
        for (auto t = static_cast<Eigen::Index>(first_row); t < data.values.rows(); ++t) {
            col += log_jacobian_term(m, data.values(t, i));
        }
        total += col;
    }
    return total;
}

double gaussian_conditional_part(const VarParams& vp, const Eigen::MatrixXd& latent) {
    Eigen::MatrixXd omega, chol;
    if (try_derive_omega(vp, omega, chol) != VarStatus::Ok) return kBarrierLogLik;

    const auto k = static_cast<Eigen::Index>(vp.order());
    const Eigen::Index n = latent.rows();
    const Eigen::Index p = latent.cols();
    const Eigen::Index m = n - k;
    if (m <= 0) throw std::invalid_argument("series is too short for the VAR order");

    // Residual rows e_t = z_t - sum_i A_i z_{t-i}.
    Eigen::MatrixXd resid = latent.bottomRows(m);
    for (Eigen::Index i = 1; i <= k; ++i) {
        resid.noalias() -= latent.middleRows(k - i, m) * vp.a[static_cast<std::size_t>(i - 1)].transpose();
    }
    const Eigen::MatrixXd w = chol.triangularView<Eigen::Lower>().solve(resid.transpose());
    const double quad = w.squaredNorm();
    return -static_cast<double>(m) *
               (static_cast<double>(p) * kLogSqrt2Pi + 0.5 * log_det_from_cholesky(chol)) -
           0.5 * quad;
}

double gaussian_exact_part(const VarParams& vp, const Eigen::MatrixXd& latent) {
    if (vp.order() != 1) throw std::invalid_argument("exact likelihood is defined for k = 1 only");
    const double cond = gaussian_conditional_part(vp, latent);
    if (cond == kBarrierLogLik) return kBarrierLogLik;
    const Eigen::Index p = latent.cols();
    return cond + mvn_logpdf(latent.row(0).transpose(), Eigen::VectorXd::Zero(p), vp.sigma.matrix());
}

double loglik_exact_var1(const VartaModel& model, const TimeSeriesData& data) {
    const Eigen::MatrixXd z = latentize(model, data);
    const double g = gaussian_exact_part(model.var, z);
    if (g == kBarrierLogLik) return kBarrierLogLik;
    return g + jacobian_part(model, data, 0);
}

double loglik_conditional(const VartaModel& model, const TimeSeriesData& data) {
    const Eigen::MatrixXd z = latentize(model, data);
    const double g = gaussian_conditional_part(model.var, z);
    if (g == kBarrierLogLik) return kBarrierLogLik;
    return g + jacobian_part(model, data, model.order());
}

LikelihoodKind resolve_kind(LikelihoodKind kind, std::size_t order) {
    if (kind == LikelihoodKind::Auto) {
        return order == 1 ? LikelihoodKind::Exact : LikelihoodKind::Conditional;
    }
    if (kind == LikelihoodKind::Exact && order != 1) {
        throw std::invalid_argument("exact likelihood is only available for VAR(1)");
    }
    return kind;
}

double loglik(const VartaModel& model, const TimeSeriesData& data, LikelihoodKind kind) {
    return resolve_kind(kind, model.order()) == LikelihoodKind::Exact
               ? loglik_exact_var1(model, data)
               : loglik_conditional(model, data);
}

}  // namespace varta
