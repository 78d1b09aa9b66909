#include "varta/diagnostics.hpp"

#include "varta/likelihood.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace varta {

Eigen::MatrixXd residuals(const VartaModel& model, const TimeSeriesData& data) {
    const Eigen::MatrixXd z = latentize(model, data);
    const auto k = static_cast<Eigen::Index>(model.order());
    const Eigen::Index m = z.rows() - k;
    if (m <= 0) throw std::invalid_argument("series is too short for the VAR order");
    Eigen::MatrixXd e = z.bottomRows(m);
    for (Eigen::Index i = 1; i <= k; ++i) {
        e.noalias() -= z.middleRows(k - i, m) * model.var.a[static_cast<std::size_t>(i - 1)].transpose();
    }
    return e;
}

Correlogram correlogram(const Eigen::MatrixXd& series, std::size_t max_lag) {
    const Eigen::Index n = series.rows();
    if (!(static_cast<std::size_t>(n) > 4 * max_lag)) {
        throw std::invalid_argument("correlogram needs more than 4 * max_lag observations");
    }
    const Eigen::MatrixXd c = series.rowwise() - series.colwise().mean();
    const Eigen::VectorXd sd = (c.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
    Correlogram out;
    out.n = static_cast<std::size_t>(n);
    out.max_lag = max_lag;
    out.band = 1.96 / std::sqrt(static_cast<double>(n));
    for (std::size_t l = 0; l <= max_lag; ++l) {
        const auto lag = static_cast<Eigen::Index>(l);
        Eigen::MatrixXd r = c.bottomRows(n - lag).transpose() * c.topRows(n - lag) / static_cast<double>(n);
        r = sd.cwiseInverse().asDiagonal() * r * sd.cwiseInverse().asDiagonal();
        if (l == 0) r.diagonal().setOnes();
        out.lags.push_back(std::move(r));
    }
    return out;
}

double ljung_box_statistic(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    if (lags == 0 || lags >= n) throw std::invalid_argument("ljung_box: need 0 < lags < n");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t l = 1; l <= lags; ++l) {
        double num = 0.0;
        for (std::size_t t = l; t < n; ++t) num += (x[t] - mean) * (x[t - l] - mean);
        const double r = num / denom;
        q += r * r / static_cast<double>(n - l);
    }
    const auto nd = static_cast<double>(n);
    return nd * (nd + 2.0) * q;
}

std::vector<PortmanteauResult> whiteness_test(const Eigen::MatrixXd& resid, std::size_t lags) {
    if (!(static_cast<std::size_t>(resid.rows()) > 4 * lags) || lags == 0) {
        throw std::invalid_argument("whiteness test needs lags >= 1 and more than 4 * lags residuals");
    }
    std::vector<PortmanteauResult> out;
    for (Eigen::Index i = 0; i < resid.cols(); ++i) {
        const Eigen::VectorXd col = resid.col(i);
        PortmanteauResult r;
        r.lags = lags;
        r.dof = lags;
        r.statistic = ljung_box_statistic(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())), lags);
        r.p_value = boost::math::gamma_q(0.5 * static_cast<double>(lags), 0.5 * r.statistic);
        out.push_back(r);
    }
    return out;
}

std::vector<MomentReport> gaussianity_check(const Eigen::MatrixXd& latent) {
    const Eigen::Index n = latent.rows();
    if (n < 50) throw std::invalid_argument("gaussianity check needs at least 50 observations");
    const auto nd = static_cast<double>(n);
    std::vector<MomentReport> out;
    for (Eigen::Index i = 0; i < latent.cols(); ++i) {
        const Eigen::ArrayXd x = latent.col(i).array();
        MomentReport m;
        m.mean = x.mean();
        const Eigen::ArrayXd d = x - m.mean;
        const double m2 = d.square().mean();
        const double m3 = d.cube().mean();
        const double m4 = d.square().square().mean();
        m.variance = m2;
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        m.se_mean = std::sqrt(1.0 / nd);
        m.se_variance = std::sqrt(2.0 / nd);
        m.se_skewness = std::sqrt(6.0 / nd);
        m.se_kurtosis = std::sqrt(24.0 / nd);
        m.flag_mean = std::abs(m.mean) > 3.0 * m.se_mean;
        m.flag_variance = std::abs(m.variance - 1.0) > 3.0 * m.se_variance;
        m.flag_skewness = std::abs(m.skewness) > 3.0 * m.se_skewness;
        m.flag_kurtosis = std::abs(m.excess_kurtosis) > 3.0 * m.se_kurtosis;
        out.push_back(m);
    }
    return out;
}

ResidualReport diagnose(const VartaModel& model, const TimeSeriesData& data, std::size_t max_lag) {
    ResidualReport rep;
    rep.residuals = residuals(model, data);
    rep.correlogram = correlogram(rep.residuals, max_lag);
    rep.moments = gaussianity_check(latentize(model, data));
    rep.whiteness = whiteness_test(rep.residuals, max_lag);
    const std::size_t p = model.dim();
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            CrossCorrelationViolation v{a, b, 0, 2 * max_lag};
            for (std::size_t l = 1; l <= max_lag; ++l) {
                const Eigen::MatrixXd& r = rep.correlogram.at(l);
                const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
                if (std::abs(r(ia, ib)) > rep.correlogram.band) ++v.violations;
                if (std::abs(r(ib, ia)) > rep.correlogram.band) ++v.violations;
            }
            if ((a == 0 && b == 1) || v.violations > rep.worst_pair.violations) rep.worst_pair = v;
        }
    }
    rep.caveat =
        "Bands are nominal 1.96/sqrt(n) white-noise bands; residuals and latent values are computed at "
        "estimated parameters, so small-sample rejection rates can differ from nominal.";
    return rep;
}

}  // namespace varta
