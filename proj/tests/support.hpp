#pragma once

#include "varta/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

inline varta::VartaModel trivariate_truth() {
    Eigen::MatrixXd a(3, 3);
    a << 0.7, 0.2, 0.1, 0.3, 0.5, 0.2, 0.1, 0.7, -0.2;
    Eigen::VectorXd rho(3);
    rho << 0.5, 0.3, 0.7;
    return varta::VartaModel(varta::VarParams({a}, varta::CorrelationMatrix(3, rho)),
                             {varta::MarginalSpec::weibull(2, 3), varta::MarginalSpec::weibull(2, 5),
                              varta::MarginalSpec::weibull(3, 1)});
}

inline varta::VartaModel six_dim_truth() {
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(6, 6, 0.1);
    Eigen::VectorXd rho = Eigen::VectorXd::Constant(15, 0.1);
    rho[varta::CorrelationMatrix::pair_index(6, 1, 2)] = 0.4;
    rho[varta::CorrelationMatrix::pair_index(6, 1, 5)] = 0.4;
    rho[varta::CorrelationMatrix::pair_index(6, 2, 3)] = 0.4;
    const double alpha[] = {2, 2, 3, 2, 2, 3};
    const double beta[] = {3, 5, 1, 2, 4, 6};
    std::vector<varta::MarginalSpec> m;
    for (int i = 0; i < 6; ++i) m.push_back(varta::MarginalSpec::weibull(alpha[i], beta[i]));
    return varta::VartaModel(varta::VarParams({a}, varta::CorrelationMatrix(6, rho)), m);
}

/// Stationary covariance by fixed-point iteration G = A G A' + Omega.
inline Eigen::MatrixXd lyapunov_iterate(const Eigen::MatrixXd& a, const Eigen::MatrixXd& omega) {
    Eigen::MatrixXd g = omega;
    for (int it = 0; it < 100000; ++it) {
        Eigen::MatrixXd next = a * g * a.transpose() + omega;
        const double diff = (next - g).cwiseAbs().maxCoeff();
        g = next;
        if (diff < 1e-15) break;
    }
    return g;
}

/// Plain Gaussian VAR(1) exact log-likelihood from the joint density of the stacked vector.
inline double joint_gaussian_var1_loglik(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                                         const Eigen::MatrixXd& z) {
    const Eigen::Index n = z.rows(), p = z.cols();
    const Eigen::Index d = n * p;
    std::vector<Eigen::MatrixXd> pw{Eigen::MatrixXd::Identity(p, p)};
    for (Eigen::Index l = 1; l < n; ++l) pw.push_back(a * pw.back());
    Eigen::MatrixXd big(d, d);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index s = 0; s <= t; ++s) {
            const Eigen::MatrixXd c = pw[static_cast<std::size_t>(t - s)] * sigma;
            big.block(t * p, s * p, p, p) = c;
            big.block(s * p, t * p, p, p) = c.transpose();
        }
    }
    Eigen::VectorXd x(d);
    for (Eigen::Index t = 0; t < n; ++t) x.segment(t * p, p) = z.row(t).transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(big);
    const double logdet = ldlt.vectorD().array().log().sum();
    const double quad = x.dot(ldlt.solve(x));
    return -0.5 * (static_cast<double>(d) * std::log(2.0 * M_PI) + logdet + quad);
}

/// Random stable A with spectral radius below @p max_radius.
inline Eigen::MatrixXd random_stable(std::mt19937_64& g, int p, double max_radius) {
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    Eigen::MatrixXd a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = u(g);
    const double r = Eigen::EigenSolver<Eigen::MatrixXd>(a).eigenvalues().cwiseAbs().maxCoeff();
    if (r > max_radius) a *= max_radius / r;
    return a;
}

/// Random correlation matrix from a random factor model.
inline Eigen::MatrixXd random_correlation(std::mt19937_64& g, int p) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd f(p, p + 2);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p + 2; ++j) f(i, j) = nd(g);
    Eigen::MatrixXd c = f * f.transpose();
    const Eigen::VectorXd s = c.diagonal().cwiseSqrt().cwiseInverse();
    c = s.asDiagonal() * c * s.asDiagonal();
    c.diagonal().setOnes();
    return c;
}

}  // namespace testsupport
