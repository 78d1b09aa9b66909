#include "varta/marginals.hpp"

#include "varta/errors.hpp"
#include "varta/gaussian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double u, const char* what) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error(std::string(what) + ": probability must lie in (0, 1)");
    }
}

// Empirical CDF knots: extended support ends plus order statistics.
struct Knots {
    const std::vector<double>& x;
    double lower, upper;
    double n1;  // n + 1

    explicit Knots(const std::vector<double>& s)
        : x(s),
          lower(s.front() - (s[1] - s[0])),
          upper(s.back() + (s.back() - s[s.size() - 2])),
          n1(static_cast<double>(s.size() + 1)) {}

    // Knot value at extended index j in [0, n+1].
    [[nodiscard]] double at(std::size_t j) const {
        if (j == 0) return lower;
        if (j == x.size() + 1) return upper;
        return x[j - 1];
    }

    // Extended index of the segment [at(j), at(j+1)] containing v.
    [[nodiscard]] std::size_t segment(double v) const {
        auto it = std::upper_bound(x.begin(), x.end(), v);
        auto j = static_cast<std::size_t>(it - x.begin());  // at(j) <= v < at(j+1)
        return std::min(j, x.size());
    }

    [[nodiscard]] double cdf(double v) const {
        if (v <= lower) return 0.0;
        if (v >= upper) return 1.0;
        const std::size_t j = segment(v);
        const double x0 = at(j), x1 = at(j + 1);
        return (static_cast<double>(j) + (v - x0) / (x1 - x0)) / n1;
    }

    [[nodiscard]] double quantile(double u) const {
        const double pos = u * n1;
        auto j = static_cast<std::size_t>(std::floor(pos));
        j = std::min(j, x.size());
        const double frac = pos - static_cast<double>(j);
        return at(j) + frac * (at(j + 1) - at(j));
    }

    [[nodiscard]] double log_density(double v) const {
        const std::size_t j = segment(v);
        return -std::log(n1) - std::log(at(j + 1) - at(j));
    }
};

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Weibull: return "weibull";
        case Family::Gaussian: return "gaussian";
        case Family::Empirical: return "empirical";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "weibull") return Family::Weibull;
    if (lower == "gaussian" || lower == "normal") return Family::Gaussian;
    if (lower == "empirical") return Family::Empirical;
    throw std::invalid_argument("unknown marginal family '" + std::string(name) + "'");
}

MarginalSpec MarginalSpec::weibull(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
        throw std::invalid_argument("Weibull shape and scale must be positive and finite");
    }
    MarginalSpec m;
    m.family_ = Family::Weibull;
    m.a_ = shape;
    m.b_ = scale;
    return m;
}

MarginalSpec MarginalSpec::gaussian(double mean, double sd) {
    if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
        throw std::invalid_argument("Gaussian sd must be positive and finite");
    }
    MarginalSpec m;
    m.family_ = Family::Gaussian;
    m.a_ = mean;
    m.b_ = sd;
    return m;
}

MarginalSpec MarginalSpec::empirical(std::vector<double> sample) {
    if (sample.size() < 10) {
        throw std::invalid_argument("empirical marginal needs at least 10 support points");
    }
    for (double v : sample) {
        if (!std::isfinite(v)) throw std::invalid_argument("empirical support must be finite");
    }
    std::sort(sample.begin(), sample.end());
    if (std::adjacent_find(sample.begin(), sample.end()) != sample.end()) {
        throw std::invalid_argument("empirical support points must be distinct");
    }
    MarginalSpec m;
    m.family_ = Family::Empirical;
    m.a_ = 0.0;
    m.b_ = 0.0;
    m.support_ = std::move(sample);
    return m;
}

std::size_t MarginalSpec::parameter_count() const noexcept {
    return family_ == Family::Empirical ? 0 : 2;
}

std::vector<double> MarginalSpec::parameters() const {
    if (family_ == Family::Empirical) return {};
    return {a_, b_};
}

std::vector<std::string> MarginalSpec::parameter_names(Family f) {
    switch (f) {
        case Family::Weibull: return {"shape", "scale"};
        case Family::Gaussian: return {"mean", "sd"};
        case Family::Empirical: return {};
    }
    return {};
}

MarginalSpec MarginalSpec::with_parameters(std::span<const double> params) const {
    switch (family_) {
        case Family::Weibull: return weibull(params[0], params[1]);
        case Family::Gaussian: return gaussian(params[0], params[1]);
        case Family::Empirical: return *this;
    }
    return *this;
}

double MarginalSpec::support_lower() const {
    switch (family_) {
        case Family::Weibull: return 0.0;
        case Family::Gaussian: return -kInf;
        case Family::Empirical: return Knots(support_).lower;
    }
    return -kInf;
}

double MarginalSpec::support_upper() const {
    if (family_ == Family::Empirical) return Knots(support_).upper;
    return kInf;
}

bool MarginalSpec::in_support(double x) const {
    return std::isfinite(x) && x > support_lower() && x < support_upper();
}

// ---------------------------------------------------------------------------

double cdf(const MarginalSpec& m, double x) {
    switch (m.family()) {
        case Family::Weibull:
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / m.scale(), m.shape()));
        case Family::Gaussian: return normal_cdf_raw((x - m.mean()) / m.sd());
        case Family::Empirical: return Knots(m.support_points()).cdf(x);
    }
    return 0.0;
}

double survival(const MarginalSpec& m, double x) {
    switch (m.family()) {
        case Family::Weibull:
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / m.scale(), m.shape()));
        case Family::Gaussian: return normal_cdf_raw(-(x - m.mean()) / m.sd());
        case Family::Empirical: return 1.0 - Knots(m.support_points()).cdf(x);
    }
    return 1.0;
}

double quantile(const MarginalSpec& m, double u) {
    require_probability(u, "quantile");
    switch (m.family()) {
        case Family::Weibull: return m.scale() * std::pow(-std::log1p(-u), 1.0 / m.shape());
        case Family::Gaussian: return m.mean() + m.sd() * normal_quantile(u);
        case Family::Empirical: return Knots(m.support_points()).quantile(u);
    }
    return 0.0;
}

double upper_quantile(const MarginalSpec& m, double s) {
    require_probability(s, "upper_quantile");
    switch (m.family()) {
        case Family::Weibull: return m.scale() * std::pow(-std::log(s), 1.0 / m.shape());
        case Family::Gaussian: return m.mean() - m.sd() * normal_quantile(s);
        case Family::Empirical: return Knots(m.support_points()).quantile(1.0 - s);
    }
    return 0.0;
}

double log_pdf(const MarginalSpec& m, double x) {
    if (!m.in_support(x)) return -kInf;
    switch (m.family()) {
        case Family::Weibull: {
            const double r = x / m.scale();
            return std::log(m.shape() / m.scale()) + (m.shape() - 1.0) * std::log(r) -
                   std::pow(r, m.shape());
        }
        case Family::Gaussian: return normal_logpdf((x - m.mean()) / m.sd()) - std::log(m.sd());
        case Family::Empirical: return Knots(m.support_points()).log_density(x);
    }
    return -kInf;
}

bool latent_and_jacobian(const MarginalSpec& m, double x, double& z, double& log_jac) {
    if (!m.in_support(x)) return false;
    if (m.family() == Family::Gaussian) {
        z = (x - m.mean()) / m.sd();
        log_jac = -std::log(m.sd());
        return true;
    }
    if (m.family() == Family::Weibull) {
        // Shares (x/scale)^shape between F, S and the density.
        const double r = x / m.scale();
        const double h = std::pow(r, m.shape());
        if (h <= std::log(2.0)) {
            z = normal_quantile(std::max(-std::expm1(-h), kProbClamp));
        } else {
            z = -normal_quantile(std::max(std::exp(-h), kProbClamp));
        }
        log_jac = std::log(m.shape() / m.scale()) + (m.shape() - 1.0) * std::log(r) - h -
                  normal_logpdf(z);
        return true;
    }
    const double u = cdf(m, x);
    z = u <= 0.5 ? normal_quantile(std::max(u, kProbClamp))
                 : -normal_quantile(std::max(1.0 - u, kProbClamp));
    log_jac = log_pdf(m, x) - normal_logpdf(z);
    return true;
}

double to_latent(const MarginalSpec& m, double x) {
    double z = 0.0, lj = 0.0;
    if (!latent_and_jacobian(m, x, z, lj)) {
        throw DataError("value " + std::to_string(x) + " lies outside the support of the " +
                        std::string(family_name(m.family())) + " marginal");
    }
    return z;
}

double from_latent(const MarginalSpec& m, double z) {
    if (m.family() == Family::Gaussian) return m.mean() + m.sd() * z;
    return z <= 0.0 ? quantile(m, normal_cdf(z)) : upper_quantile(m, normal_cdf(-z));
}

double log_jacobian_term(const MarginalSpec& m, double x) {
    double z = 0.0, lj = 0.0;
    if (!latent_and_jacobian(m, x, z, lj)) return -kInf;
    return lj;
}

}  // namespace varta
