#include "varta/var_model.hpp"

#include "varta/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace varta {

namespace {

constexpr double kStationarityMargin = 1.0 - 1e-10;

// Cov(Z_{t-i}, Z_{t-j}) from Gamma_0..Gamma_{k-1} (zero-based block indices i, j < k).
Eigen::MatrixXd block(const std::vector<Eigen::MatrixXd>& g, std::size_t i, std::size_t j) {
    return j >= i ? g[j - i] : Eigen::MatrixXd(g[i - j].transpose());
}

}  // namespace

VarParams::VarParams(std::vector<Eigen::MatrixXd> lags, CorrelationMatrix corr)
    : a(std::move(lags)), sigma(std::move(corr)) {
    if (a.empty()) throw std::invalid_argument("VAR order must be at least 1");
    const auto p = static_cast<Eigen::Index>(sigma.dim());
    for (const auto& m : a) {
        if (m.rows() != p || m.cols() != p) {
            throw std::invalid_argument("lag matrices must be p x p");
        }
    }
}

Eigen::MatrixXd companion(const VarParams& vp) {
    const auto p = static_cast<Eigen::Index>(vp.dim());
    const auto k = static_cast<Eigen::Index>(vp.order());
    for (const auto& m : vp.a) {
        if (m.rows() != p || m.cols() != p) throw std::invalid_argument("companion: shape mismatch");
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k * p, k * p);
    for (Eigen::Index i = 0; i < k; ++i) b.block(0, i * p, p, p) = vp.a[static_cast<std::size_t>(i)];
    if (k > 1) b.block(p, 0, (k - 1) * p, (k - 1) * p).setIdentity();
    return b;
}

double spectral_radius(const Eigen::MatrixXd& b) {
    if (b.rows() != b.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
    if (b.size() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(b, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("spectral_radius: eigenvalue iteration did not converge");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

AutocovSequence solve_autocov(const VarParams& vp) {
    const std::size_t k = vp.order();
    const auto p = static_cast<Eigen::Index>(vp.dim());
    if (!(spectral_radius(companion(vp)) < kStationarityMargin)) {
        throw NonStationaryError("VAR coefficients are not covariance stationary");
    }
    AutocovSequence out;
    out.gammas.push_back(vp.sigma.matrix());
    if (k == 1) return out;

    // Unknown x = [vec(Gamma_1); ...; vec(Gamma_{k-1})], column-major vec.
    // Equation s: Gamma_s - sum_{i<s} A_i Gamma_{s-i} - sum_{i>s} A_i Gamma_{i-s}' = A_s Gamma_0.
    const Eigen::Index pp = p * p;
    const auto m = static_cast<Eigen::Index>(k - 1);
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m * pp, m * pp);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m * pp);
    const Eigen::MatrixXd& g0 = out.gammas[0];

    // vec(A X) = (I kron A) vec(X); vec(A X') = (I kron A) K vec(X), K the commutation matrix.
    auto add_term = [&](Eigen::Index eq, Eigen::Index unknown, const Eigen::MatrixXd& ai,
                        bool transposed) {
        for (Eigen::Index c = 0; c < p; ++c) {
            for (Eigen::Index r = 0; r < p; ++r) {
                // (A X)(r, c) = sum_l A(r, l) X(l, c);  (A X')(r, c) = sum_l A(r, l) X(c, l)
                for (Eigen::Index l = 0; l < p; ++l) {
                    const Eigen::Index xi = transposed ? (l * p + c) : (c * p + l);
                    lhs(eq * pp + c * p + r, unknown * pp + xi) -= ai(r, l);
                }
            }
        }
    };

    for (std::size_t s = 1; s < k; ++s) {
        const auto eq = static_cast<Eigen::Index>(s - 1);
        for (std::size_t i = 1; i <= k; ++i) {
            const Eigen::MatrixXd& ai = vp.a[i - 1];
            if (i == s) {
                const Eigen::MatrixXd t = ai * g0;
                rhs.segment(eq * pp, pp) += Eigen::Map<const Eigen::VectorXd>(t.data(), pp);
            } else if (i < s) {
                add_term(eq, static_cast<Eigen::Index>(s - i - 1), ai, false);
            } else {
                add_term(eq, static_cast<Eigen::Index>(i - s - 1), ai, true);
            }
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
    if (!lu.isInvertible()) throw NumericalError("Yule-Walker system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);
    for (Eigen::Index s = 0; s < m; ++s) {
        out.gammas.emplace_back(Eigen::Map<const Eigen::MatrixXd>(x.data() + s * pp, p, p));
    }
    return out;
}

Eigen::MatrixXd companion_covariance(const AutocovSequence& ac) {
    const std::size_t k = ac.gammas.size();
    const Eigen::Index p = ac.gammas.front().rows();
    Eigen::MatrixXd s(static_cast<Eigen::Index>(k) * p, static_cast<Eigen::Index>(k) * p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            s.block(static_cast<Eigen::Index>(i) * p, static_cast<Eigen::Index>(j) * p, p, p) =
                block(ac.gammas, i, j);
        }
    }
    return s;
}

Eigen::MatrixXd companion_covariance(const VarParams& vp) {
    return companion_covariance(solve_autocov(vp));
}

VarStatus try_derive_omega(const VarParams& vp, Eigen::MatrixXd& omega, Eigen::MatrixXd& omega_chol) {
    const auto p = static_cast<Eigen::Index>(vp.dim());
    const Eigen::MatrixXd b = companion(vp);
    double radius = 0.0;
    try {
        radius = spectral_radius(b);
    } catch (const NumericalError&) {
        return VarStatus::NonStationary;
    }
    if (!(radius < kStationarityMargin)) return VarStatus::NonStationary;

    if (vp.order() == 1) {
        const Eigen::MatrixXd sig = vp.sigma.matrix();
        omega = sig - vp.a[0] * sig * vp.a[0].transpose();
    } else {
        AutocovSequence ac;
        try {
            ac = solve_autocov(vp);
        } catch (const NonStationaryError&) {
            return VarStatus::NonStationary;
        } catch (const NumericalError&) {
            return VarStatus::Singular;
        }
        const Eigen::MatrixXd sk = companion_covariance(ac);
        const Eigen::MatrixXd theta = sk - b * sk * b.transpose();
        omega = theta.topLeftCorner(p, p);
    }
    omega = 0.5 * (omega + omega.transpose()).eval();
    try {
        omega_chol = cholesky(omega);
    } catch (const CholeskyError&) {
        return VarStatus::OmegaNotPd;
    }
    return VarStatus::Ok;
}

Eigen::MatrixXd derive_omega(const VarParams& vp) {
    Eigen::MatrixXd omega, chol;
    switch (try_derive_omega(vp, omega, chol)) {
        case VarStatus::Ok: return omega;
        case VarStatus::NonStationary:
            throw NonStationaryError("VAR coefficients are not covariance stationary");
        case VarStatus::OmegaNotPd:
            throw OmegaNotPdError("implied innovation covariance is not positive definite");
        case VarStatus::Singular: throw NumericalError("Yule-Walker system is singular");
    }
    return omega;
}

Eigen::MatrixXd omega_expansion(const VarParams& vp, const AutocovSequence& ac) {
    const std::size_t k = vp.order();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ac.gammas[0].rows(), ac.gammas[0].cols());
    for (std::size_t r = 1; r <= k; ++r) {
        Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(acc.rows(), acc.cols());
        for (std::size_t i = 1; i <= r; ++i) inner += vp.a[i - 1] * ac.gammas[r - i];
        for (std::size_t i = r + 1; i <= k; ++i) inner += vp.a[i - 1] * ac.gammas[i - r].transpose();
        acc += inner * vp.a[r - 1].transpose();
    }
    return ac.gammas[0] - acc;
}

Eigen::MatrixXd autocov_at(const VarParams& vp, const AutocovSequence& ac, std::size_t s) {
    std::vector<Eigen::MatrixXd> g = ac.gammas;
    const std::size_t k = vp.order();
    while (g.size() <= s) {
        const std::size_t t = g.size();
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(g[0].rows(), g[0].cols());
        for (std::size_t i = 1; i <= k; ++i) {
            next += vp.a[i - 1] * (t >= i ? g[t - i] : Eigen::MatrixXd(g[i - t].transpose()));
        }
        g.push_back(std::move(next));
    }
    return g[s];
}

}  // namespace varta
