#include "varta/estimation.hpp"

#include "varta/errors.hpp"
#include "varta/gaussian.hpp"
#include "varta/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace varta {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kCacheEntries = 4;

// Whether marginal parameter j of family f is optimized on the log scale.
bool log_scaled(Family f, std::size_t j) {
    return f == Family::Weibull || (f == Family::Gaussian && j == 1);
}

Eigen::VectorXd embed(const Eigen::VectorXd& base, const std::vector<std::size_t>& free,
                      const Eigen::VectorXd& v) {
    Eigen::VectorXd u = base;
    for (std::size_t i = 0; i < free.size(); ++i) u[static_cast<Eigen::Index>(free[i])] = v[static_cast<Eigen::Index>(i)];
    return u;
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& u, const std::vector<std::size_t>& free) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(free.size()));
    for (std::size_t i = 0; i < free.size(); ++i) v[static_cast<Eigen::Index>(i)] = u[static_cast<Eigen::Index>(free[i])];
    return v;
}

std::vector<std::size_t> free_indices(std::size_t size, const std::vector<std::size_t>& fixed) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < size; ++i) {
        if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) free.push_back(i);
    }
    return free;
}

}  // namespace

std::string_view group_name(ParamGroup g) {
    switch (g) {
        case ParamGroup::Dynamics: return "A";
        case ParamGroup::Correlation: return "rho";
        case ParamGroup::Marginal: return "marginal";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// ParamLayout

ParamLayout::ParamLayout(std::size_t p, std::size_t k, std::vector<Family> families)
    : p_(p), k_(k), families_(std::move(families)) {
    if (p == 0 || k == 0) throw std::invalid_argument("dimension and order must be positive");
    if (families_.size() != p) throw std::invalid_argument("one marginal family per series is required");
    for (std::size_t lag = 0; lag < k; ++lag) {
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < p; ++i) {
                names_.push_back(lag_parameter_name(lag, k, i, j));
                groups_.push_back(ParamGroup::Dynamics);
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            names_.push_back("rho[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
            groups_.push_back(ParamGroup::Correlation);
        }
    }
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < p; ++i) {
            const auto pnames = MarginalSpec::parameter_names(families_[i]);
            if (j >= pnames.size()) continue;
            names_.push_back(pnames[j] + "[" + std::to_string(i + 1) + "]");
            groups_.push_back(ParamGroup::Marginal);
            marginal_slots_.emplace_back(i, j);
        }
    }
}

ParamLayout ParamLayout::for_model(const VartaModel& model) {
    std::vector<Family> fam;
    for (const auto& m : model.marginals) fam.push_back(m.family());
    return ParamLayout(model.dim(), model.order(), fam);
}

std::optional<std::size_t> ParamLayout::marginal_slot(std::size_t series, std::size_t j) const {
    const std::size_t base = dynamics_count() + correlation_count();
    for (std::size_t s = 0; s < marginal_slots_.size(); ++s) {
        if (marginal_slots_[s] == std::make_pair(series, j)) return base + s;
    }
    return std::nullopt;
}

Eigen::VectorXd ParamLayout::natural(const VartaModel& model) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    Eigen::Index idx = 0;
    for (std::size_t lag = 0; lag < k_; ++lag) {
        const Eigen::MatrixXd& a = model.var.a[lag];
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i) out[idx++] = a(i, j);
    }
    out.segment(idx, static_cast<Eigen::Index>(correlation_count())) = model.var.sigma.rho();
    idx += static_cast<Eigen::Index>(correlation_count());
    for (const auto& [series, j] : marginal_slots_) out[idx++] = model.marginals[series].parameters()[j];
    return out;
}

Eigen::VectorXd ParamLayout::pack(const VartaModel& model) const {
    if (model.dim() != p_ || model.order() != k_) throw std::invalid_argument("model does not match layout");
    for (std::size_t i = 0; i < p_; ++i) {
        if (model.marginals[i].family() != families_[i]) {
            throw std::invalid_argument("model marginal family does not match layout");
        }
    }
    Eigen::VectorXd u = natural(model);
    const auto nc = static_cast<Eigen::Index>(correlation_count());
    const auto base = static_cast<Eigen::Index>(dynamics_count());
    u.segment(base, nc) = corr_to_unconstrained(model.var.sigma);
    Eigen::Index idx = base + nc;
    for (const auto& [series, j] : marginal_slots_) {
        if (log_scaled(families_[series], j)) u[idx] = std::log(u[idx]);
        ++idx;
    }
    return u;
}

VartaModel ParamLayout::unpack(const Eigen::VectorXd& u, const VartaModel& reference) const {
    if (static_cast<std::size_t>(u.size()) != size()) throw std::invalid_argument("parameter vector has wrong length");
    const auto p = static_cast<Eigen::Index>(p_);
    std::vector<Eigen::MatrixXd> lags;
    Eigen::Index idx = 0;
    for (std::size_t lag = 0; lag < k_; ++lag) {
        lags.emplace_back(Eigen::Map<const Eigen::MatrixXd>(u.data() + idx, p, p));
        idx += p * p;
    }
    const auto nc = static_cast<Eigen::Index>(correlation_count());
    CorrelationMatrix corr = unconstrained_to_corr(u.segment(idx, nc), p_);
    idx += nc;

    std::vector<std::vector<double>> params(p_);
    for (std::size_t i = 0; i < p_; ++i) params[i] = reference.marginals[i].parameters();
    for (const auto& [series, j] : marginal_slots_) {
        const double v = u[idx++];
        params[series][j] = log_scaled(families_[series], j) ? std::exp(v) : v;
    }
    std::vector<MarginalSpec> margins;
    for (std::size_t i = 0; i < p_; ++i) margins.push_back(reference.marginals[i].with_parameters(params[i]));
    return VartaModel(VarParams(std::move(lags), std::move(corr)), std::move(margins));
}

Eigen::MatrixXd ParamLayout::natural_jacobian(const Eigen::VectorXd& u) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    const auto nd = static_cast<Eigen::Index>(dynamics_count());
    const auto nc = static_cast<Eigen::Index>(correlation_count());
    jac.topLeftCorner(nd, nd).setIdentity();
    if (nc > 0) {
        Eigen::VectorXd v = u.segment(nd, nc);
        for (Eigen::Index c = 0; c < nc; ++c) {
            const double h = 1e-6 * std::max(1.0, std::abs(v[c]));
            Eigen::VectorXd vp = v, vm = v;
            vp[c] += h;
            vm[c] -= h;
            jac.block(nd, nd + c, nc, 1) =
                (unconstrained_to_corr(vp, p_).rho() - unconstrained_to_corr(vm, p_).rho()) / (2.0 * h);
        }
    }
    Eigen::Index idx = nd + nc;
    for (const auto& [series, j] : marginal_slots_) {
        jac(idx, idx) = log_scaled(families_[series], j) ? std::exp(u[idx]) : 1.0;
        ++idx;
    }
    return jac;
}

// ---------------------------------------------------------------------------
// LikelihoodObjective

LikelihoodObjective::LikelihoodObjective(const TimeSeriesData& data, ParamLayout layout,
                                         VartaModel reference, LikelihoodKind kind)
    : data_(data),
      layout_(std::move(layout)),
      reference_(std::move(reference)),
      kind_(resolve_kind(kind, layout_.order())),
      cache_(layout_.dim()),
      latent_(data.values.rows(), data.values.cols()) {
    validate_data(reference_, data_);
}

const LikelihoodObjective::ColumnEntry& LikelihoodObjective::column(std::size_t i, const MarginalSpec& m) {
    auto& entries = cache_[i];
    const std::vector<double> key = m.parameters();
    ++clock_;
    for (auto& e : entries) {
        if (e.key == key) {
            e.stamp = clock_;
            return e;
        }
    }
    ColumnEntry* slot = nullptr;
    if (entries.size() < kCacheEntries) {
        slot = &entries.emplace_back();
    } else {
        slot = &*std::min_element(entries.begin(), entries.end(),
                                  [](const ColumnEntry& a, const ColumnEntry& b) { return a.stamp < b.stamp; });
    }
    slot->key = key;
    slot->stamp = clock_;
    slot->z.resize(data_.values.rows());
    slot->valid = true;
    const auto k = static_cast<Eigen::Index>(layout_.order());
    double all = 0.0, cond = 0.0;
    for (Eigen::Index t = 0; t < data_.values.rows(); ++t) {
        double z = 0.0, lj = 0.0;
        if (!latent_and_jacobian(m, data_.values(t, static_cast<Eigen::Index>(i)), z, lj)) {
            slot->valid = false;
            break;
        }
        slot->z[t] = z;
        all += lj;
        if (t >= k) cond += lj;
    }
    slot->jac_all = all;
    slot->jac_cond = cond;
    return *slot;
}

double LikelihoodObjective::loglik(const Eigen::VectorXd& u) {
    if (!u.allFinite()) return kBarrierLogLik;
    VartaModel model;
    try {
        model = layout_.unpack(u, reference_);
    } catch (const std::exception&) {
        return kBarrierLogLik;
    }
    double jac = 0.0;
    for (std::size_t i = 0; i < layout_.dim(); ++i) {
        const ColumnEntry& e = column(i, model.marginals[i]);
        if (!e.valid) return kBarrierLogLik;
        latent_.col(static_cast<Eigen::Index>(i)) = e.z;
        jac += kind_ == LikelihoodKind::Exact ? e.jac_all : e.jac_cond;
    }
    const double g = kind_ == LikelihoodKind::Exact ? gaussian_exact_part(model.var, latent_)
                                                    : gaussian_conditional_part(model.var, latent_);
    if (g == kBarrierLogLik || !std::isfinite(g)) return kBarrierLogLik;
    return g + jac;
}

Eigen::VectorXd LikelihoodObjective::gradient(const Eigen::VectorXd& u) {
    return central_difference_gradient([this](const Eigen::VectorXd& x) { return loglik(x); }, u, 1e-6);
}

// ---------------------------------------------------------------------------
// Starting values

std::vector<Eigen::MatrixXd> ols_var(const Eigen::MatrixXd& z, std::size_t k) {
    const Eigen::Index p = z.cols();
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::Index m = z.rows() - kk;
    if (m <= kk * p) throw DataError("series too short for a least-squares VAR fit");
    Eigen::MatrixXd x(m, kk * p);
    for (Eigen::Index i = 1; i <= kk; ++i) x.middleCols((i - 1) * p, p) = z.middleRows(kk - i, m);
    const Eigen::MatrixXd y = z.bottomRows(m);
    const Eigen::MatrixXd b = x.colPivHouseholderQr().solve(y);
    std::vector<Eigen::MatrixXd> lags;
    for (Eigen::Index i = 0; i < kk; ++i) lags.emplace_back(b.middleRows(i * p, p).transpose());
    return lags;
}

MarginalSpec fit_weibull(const Eigen::VectorXd& x) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || (x.array() <= 0.0).any()) throw DataError("Weibull fit needs positive data");
    const Eigen::ArrayXd lx = x.array().log();
    const double lmax = lx.maxCoeff();
    const double mean_lx = lx.mean();

    // Profile score in the shape: increasing in alpha, root is the MLE.
    auto score = [&](double alpha) {
        const Eigen::ArrayXd w = (alpha * (lx - lmax)).exp();
        return (w * lx).sum() / w.sum() - 1.0 / alpha - mean_lx;
    };
    auto scale_for = [&](double alpha) {
        const Eigen::ArrayXd w = (alpha * (lx - lmax)).exp();
        return std::exp(lmax) * std::pow(w.sum() / n, 1.0 / alpha);
    };

    double lo = std::log(1e-3), hi = std::log(1e3);
    if (score(std::exp(lo)) < 0.0 && score(std::exp(hi)) > 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            (score(std::exp(mid)) < 0.0 ? lo : hi) = mid;
        }
        const double alpha = std::exp(0.5 * (lo + hi));
        const double lambda = scale_for(alpha);
        if (std::isfinite(alpha) && std::isfinite(lambda) && lambda > 0.0) {
            return MarginalSpec::weibull(alpha, lambda);
        }
    }

    // Method of moments: Gamma(1+2/a)/Gamma(1+1/a)^2 - 1 = cv^2.
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / n;
    const double cv2 = var / (mean * mean);
    auto excess = [](double a) {
        const double g1 = std::tgamma(1.0 + 1.0 / a);
        return std::tgamma(1.0 + 2.0 / a) / (g1 * g1) - 1.0;
    };
    lo = std::log(0.05);
    hi = std::log(200.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(std::exp(mid)) > cv2 ? lo : hi) = mid;
    }
    const double alpha = std::exp(0.5 * (lo + hi));
    return MarginalSpec::weibull(alpha, mean / std::tgamma(1.0 + 1.0 / alpha));
}

VartaModel initial_values(const TimeSeriesData& data, std::size_t k, const std::vector<Family>& families) {
    const std::size_t p = data.dim();
    const std::size_t n = data.length();
    if (families.size() != p) throw DataError("number of families does not match the number of series");
    if (k == 0) throw std::invalid_argument("VAR order must be at least 1");
    if (n <= 10 * p) throw DataError("need more than 10 observations per series (n > 10p)");

    std::vector<MarginalSpec> margins;
    for (std::size_t i = 0; i < p; ++i) {
        const Eigen::VectorXd col = data.values.col(static_cast<Eigen::Index>(i));
        if (!col.allFinite()) throw DataError("series " + data.names[i] + " contains non-finite values");
        switch (families[i]) {
            case Family::Weibull: {
                for (Eigen::Index t = 0; t < col.size(); ++t) {
                    if (!(col[t] > 0.0)) {
                        throw DataError("observation at row " + std::to_string(t + 1) + ", column " +
                                        std::to_string(i + 1) + " (" + data.names[i] +
                                        ") is not inside the Weibull support (0, inf)");
                    }
                }
                margins.push_back(fit_weibull(col));
                break;
            }
            case Family::Gaussian: {
                const double mean = col.mean();
                const double sd = std::sqrt((col.array() - mean).square().mean());
                if (!(sd > 0.0)) throw DataError("series " + data.names[i] + " is constant");
                margins.push_back(MarginalSpec::gaussian(mean, sd));
                break;
            }
            case Family::Empirical: {
                try {
                    margins.push_back(MarginalSpec::empirical(std::vector<double>(col.data(), col.data() + col.size())));
                } catch (const std::invalid_argument& e) {
                    throw DataError("series " + data.names[i] + ": " + e.what());
                }
                break;
            }
        }
    }

    VartaModel marg_only(VarParams({Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))},
                                   CorrelationMatrix(p)),
                         margins);
    const Eigen::MatrixXd z = latentize(marg_only, data);

    std::vector<Eigen::MatrixXd> lags = ols_var(z, k);

    // Sample correlation ignoring time order, shrunk toward I until PD.
    const Eigen::MatrixXd centered = z.rowwise() - z.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered;
    const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    const auto pi = static_cast<Eigen::Index>(p);
    CorrelationMatrix sigma(p);
    for (double shrink = 0.0; shrink < 1.0; shrink += 0.05) {
        Eigen::MatrixXd c = (1.0 - shrink) * corr + shrink * Eigen::MatrixXd::Identity(pi, pi);
        c.diagonal().setOnes();
        try {
            sigma = CorrelationMatrix::from_matrix(c, 1e-9);
            if ((sigma.rho().array().abs() < 0.995).all()) break;
        } catch (const std::invalid_argument&) {
        }
        sigma = CorrelationMatrix(p);
    }

    VarParams vp(lags, sigma);
    Eigen::MatrixXd omega, chol;
    for (int it = 0; it < 400; ++it) {
        double radius = 1.0;
        try {
            radius = spectral_radius(companion(vp));
        } catch (const NumericalError&) {
        }
        if (radius <= 0.98 && try_derive_omega(vp, omega, chol) == VarStatus::Ok) break;
        for (auto& a : vp.a) a *= 0.95;
    }
    if (try_derive_omega(vp, omega, chol) != VarStatus::Ok) {
        for (auto& a : vp.a) a.setZero();
    }
    return VartaModel(std::move(vp), std::move(margins));
}

// ---------------------------------------------------------------------------
// Standard errors

namespace {

StandardErrors standard_errors_impl(LikelihoodObjective& obj, const Eigen::VectorXd& u,
                                    const std::vector<std::size_t>& fixed) {
    const ParamLayout& layout = obj.layout();
    const auto n = static_cast<Eigen::Index>(layout.size());
    const std::vector<std::size_t> free = free_indices(layout.size(), fixed);

    StandardErrors out;
    out.se = Eigen::VectorXd::Constant(n, kNaN);
    out.covariance = Eigen::MatrixXd::Constant(n, n, kNaN);

    auto f = [&](const Eigen::VectorXd& v) { return obj.loglik(embed(u, free, v)); };
    const Eigen::MatrixXd hess = central_difference_hessian(f, restrict_to(u, free), 1e-4);
    if (!hess.allFinite()) return out;
    const Eigen::MatrixXd info = -hess;

    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) return out;
    const auto nf = static_cast<Eigen::Index>(free.size());
    const Eigen::MatrixXd cov_free = llt.solve(Eigen::MatrixXd::Identity(nf, nf));
    Eigen::MatrixXd cov_u = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nf; ++b)
            cov_u(static_cast<Eigen::Index>(free[static_cast<std::size_t>(a)]),
                  static_cast<Eigen::Index>(free[static_cast<std::size_t>(b)])) = cov_free(a, b);

    const Eigen::MatrixXd jac = layout.natural_jacobian(u);
    out.covariance = jac * cov_u * jac.transpose();
    out.information_pd = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool is_fixed = std::find(fixed.begin(), fixed.end(), static_cast<std::size_t>(i)) != fixed.end();
        const double var = out.covariance(i, i);
        out.se[i] = (!is_fixed && var > 0.0) ? std::sqrt(var) : kNaN;
    }
    return out;
}

}  // namespace

StandardErrors standard_errors(const VartaModel& model, const TimeSeriesData& data, LikelihoodKind kind,
                               const std::vector<std::size_t>& fixed) {
    LikelihoodObjective obj(data, ParamLayout::for_model(model), model, kind);
    return standard_errors_impl(obj, obj.layout().pack(model), fixed);
}

// ---------------------------------------------------------------------------
// Fit

namespace {

// Damped Newton steps on a finite-difference Hessian, accepted only on decrease.
void polish_newton(const Objective& target, LbfgsResult& best, double gradient_tolerance) {
    for (int it = 0; it < 4; ++it) {
        if (best.gradient.lpNorm<Eigen::Infinity>() <= gradient_tolerance) return;
        const Eigen::MatrixXd hess = central_difference_hessian(target.value, best.x, 1e-4);
        if (!hess.allFinite()) return;
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        if (llt.info() != Eigen::Success) return;
        const Eigen::VectorXd d = -llt.solve(best.gradient);
        bool moved = false;
        for (double t = 1.0; t > 1e-3; t *= 0.5) {
            const Eigen::VectorXd x = best.x + t * d;
            const double f = target.value(x);
            if (std::isfinite(f) && f < best.value) {
                best.x = x;
                best.value = f;
                best.gradient = target.gradient(x, f);
                moved = true;
                break;
            }
        }
        if (!moved) return;
    }
}

}  // namespace

FitResult fit(const TimeSeriesData& data, std::size_t k, const std::vector<Family>& families,
              const FitOptions& options) {
    const std::size_t p = data.dim();
    if (families.size() != p) throw DataError("number of families does not match the number of series");
    if (k == 0) throw std::invalid_argument("VAR order must be at least 1");
    if (data.length() < k + 2) throw DataError("series is too short for the VAR order");

    VartaModel start = options.start ? *options.start : initial_values(data, k, families);
    ParamLayout layout(p, k, families);
    validate_data(start, data);
    for (std::size_t idx : options.fixed) {
        if (idx >= layout.size()) throw std::invalid_argument("fixed parameter index out of range");
    }

    LikelihoodObjective obj(data, layout, start, options.kind);
    const Eigen::VectorXd u0 = layout.pack(start);
    const std::vector<std::size_t> free = free_indices(layout.size(), options.fixed);

    Objective target;
    target.value = [&](const Eigen::VectorXd& v) { return -obj.loglik(embed(u0, free, v)); };
    target.gradient = [&](const Eigen::VectorXd& v, double) {
        return central_difference_gradient(target.value, v, 1e-6);
    };

    LbfgsOptions lopt;
    lopt.gradient_tolerance = options.gradient_tolerance;
    lopt.relative_tolerance = options.relative_tolerance;
    lopt.max_iterations = options.max_iterations;

    const Eigen::VectorXd v0 = restrict_to(u0, free);
    LbfgsResult best = minimize_lbfgs(target, v0, lopt);
    int total_iter = best.iterations;
    if (!best.converged) {
        Eigen::VectorXd v1 = best.x;
        if (!std::isfinite(best.value) || best.value >= 1e20) v1 = v0;
        for (Eigen::Index i = 0; i < v1.size(); ++i) v1[i] += (i % 2 == 0 ? 0.05 : -0.05);
        LbfgsResult retry = minimize_lbfgs(target, v1, lopt);
        total_iter += retry.iterations;
        if (retry.converged || retry.value < best.value) best = std::move(retry);
    }

    if (best.converged) polish_newton(target, best, lopt.gradient_tolerance);

    FitResult fr;
    const Eigen::VectorXd u_hat = embed(u0, free, best.x);
    fr.model = layout.unpack(u_hat, start);
    fr.names = layout.names();
    fr.groups = layout.groups();
    fr.estimates = layout.natural(fr.model);
    fr.kind = obj.kind();
    fr.loglik = varta::loglik(fr.model, data, fr.kind);
    fr.converged = best.converged;
    fr.n_iter = total_iter;
    fr.gradient_norm = best.gradient.size() > 0 ? best.gradient.lpNorm<Eigen::Infinity>() : 0.0;
    fr.message = best.message;

    const auto n = static_cast<Eigen::Index>(layout.size());
    if (options.compute_se) {
        StandardErrors se = standard_errors_impl(obj, u_hat, options.fixed);
        fr.se = se.se;
        fr.covariance = se.covariance;
        fr.information_pd = se.information_pd;
    } else {
        fr.se = Eigen::VectorXd::Constant(n, kNaN);
        fr.covariance = Eigen::MatrixXd::Constant(n, n, kNaN);
    }
    fr.tvalues = fr.estimates.cwiseQuotient(fr.se);
    return fr;
}

std::vector<Interval> confidence_intervals(const FitResult& fr, double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("confidence level must lie in (0, 1)");
    const double z = normal_quantile(0.5 * (1.0 + level));
    std::vector<Interval> out;
    for (Eigen::Index i = 0; i < fr.estimates.size(); ++i) {
        out.push_back({fr.estimates[i] - z * fr.se[i], fr.estimates[i] + z * fr.se[i]});
    }
    return out;
}

}  // namespace varta
