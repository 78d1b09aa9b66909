#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace varta {

struct LbfgsOptions {
    int memory = 10;
    int max_iterations = 2000;
    double gradient_tolerance = 1e-6;   ///< stop when max |g_i| <= this
    double relative_tolerance = 1e-10;  ///< stop when |f_k - f_{k+1}| <= this * max(1, |f|)
    double c1 = 1e-4;                   ///< sufficient decrease
    double c2 = 0.9;                    ///< curvature (strong Wolfe)
    int max_line_search = 40;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
};

/// Objective to minimize. The gradient callback receives the value already computed at x.
struct Objective {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> gradient;
};

/**
 * Limited-memory BFGS with a strong-Wolfe line search (bracketing followed by
 * zoom with safeguarded cubic interpolation). Values >= 1e20 are treated as
 * infeasible and only ever shrink the step.
 */
[[nodiscard]] LbfgsResult minimize_lbfgs(const Objective& obj, const Eigen::VectorXd& x0,
                                         const LbfgsOptions& options = {});

/// Central-difference gradient with step h_i = rel_step * max(1, |x_i|).
[[nodiscard]] Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double rel_step = 1e-6);

/// Central-difference Hessian with step h_i = rel_step * max(1, |x_i|).
[[nodiscard]] Eigen::MatrixXd central_difference_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double rel_step = 1e-4);

}  // namespace varta
