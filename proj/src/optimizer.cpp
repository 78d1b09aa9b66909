#include "varta/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace varta {

namespace {

constexpr double kInfeasible = 1e20;

bool feasible(double f) { return std::isfinite(f) && f < kInfeasible; }

struct Point {
    double alpha = 0.0;
    double f = 0.0;
    std::optional<double> slope;  // directional derivative, when the gradient was evaluated
    Eigen::VectorXd g;
};

class LineSearch {
public:
    LineSearch(const Objective& obj, const LbfgsOptions& opt, const Eigen::VectorXd& x,
               const Eigen::VectorXd& d, double f0, double slope0, int& evals)
        : obj_(obj), opt_(opt), x_(x), d_(d), f0_(f0), slope0_(slope0), evals_(evals) {}

    std::optional<Point> run(double alpha0) {
        Point prev{0.0, f0_, slope0_, {}};
        double alpha = alpha0;
        for (int i = 0; i < opt_.max_line_search; ++i) {
            Point cur = probe(alpha);
            if (!sufficient(cur) || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
            with_gradient(cur);
            if (std::abs(*cur.slope) <= -opt_.c2 * slope0_) return cur;
            if (*cur.slope >= 0.0) return zoom(cur, prev);
            prev = cur;
            alpha = std::min(alpha * 2.0, 1e8);
        }
        return std::nullopt;
    }

private:
    Point probe(double alpha) {
        Point pt;
        pt.alpha = alpha;
        pt.f = obj_.value(x_ + alpha * d_);
        ++evals_;
        if (!std::isfinite(pt.f)) pt.f = std::numeric_limits<double>::max();
        return pt;
    }

    void with_gradient(Point& pt) {
        pt.g = obj_.gradient(x_ + pt.alpha * d_, pt.f);
        pt.slope = pt.g.dot(d_);
    }

    [[nodiscard]] bool sufficient(const Point& pt) const {
        return feasible(pt.f) && pt.f <= f0_ + opt_.c1 * pt.alpha * slope0_;
    }

    // Trial step between lo and hi; lo always has a slope.
    static double interpolate(const Point& lo, const Point& hi) {
        const double a = lo.alpha, b = hi.alpha;
        const double lo_edge = std::min(a, b), width = std::abs(b - a);
        double trial = 0.5 * (a + b);
        if (feasible(hi.f) && hi.slope) {
            const double d1 = *lo.slope + *hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
            const double disc = d1 * d1 - *lo.slope * *hi.slope;
            if (disc >= 0.0) {
                const double d2 = std::copysign(std::sqrt(disc), b - a);
                const double denom = *hi.slope - *lo.slope + 2.0 * d2;
                if (denom != 0.0) trial = b - (b - a) * (*hi.slope + d2 - d1) / denom;
            }
        } else if (feasible(hi.f)) {
            const double w = b - a;
            const double curv = hi.f - lo.f - *lo.slope * w;
            if (curv > 0.0) trial = a - *lo.slope * w * w / (2.0 * curv);
        }
        if (!std::isfinite(trial)) trial = 0.5 * (a + b);
        return std::clamp(trial, lo_edge + 0.1 * width, lo_edge + 0.9 * width);
    }

    std::optional<Point> zoom(Point lo, Point hi) {
        if (!lo.slope) lo.slope = slope0_;  // lo is the origin
        for (int j = 0; j < opt_.max_line_search; ++j) {
            const double alpha = interpolate(lo, hi);
            Point cur = probe(alpha);
            if (!sufficient(cur) || cur.f >= lo.f) {
                hi = cur;
            } else {
                with_gradient(cur);
                if (std::abs(*cur.slope) <= -opt_.c2 * slope0_) return cur;
                if (*cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                lo = cur;
            }
            if (std::abs(hi.alpha - lo.alpha) <= 1e-14 * std::max(1.0, lo.alpha)) break;
        }
        // Accept a step that achieved sufficient decrease even without the curvature condition.
        if (lo.alpha > 0.0) return lo;
        return std::nullopt;
    }

    const Objective& obj_;
    const LbfgsOptions& opt_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& d_;
    double f0_;
    double slope0_;
    int& evals_;
};

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& obj, const Eigen::VectorXd& x0, const LbfgsOptions& opt) {
    LbfgsResult res;
    res.x = x0;
    res.value = obj.value(x0);
    res.evaluations = 1;
    if (!feasible(res.value)) {
        res.message = "objective is infeasible at the starting point";
        res.gradient = Eigen::VectorXd::Zero(x0.size());
        return res;
    }
    res.gradient = obj.gradient(x0, res.value);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        if (res.gradient.lpNorm<Eigen::Infinity>() <= opt.gradient_tolerance) {
            res.converged = true;
            res.message = "gradient tolerance reached";
            return res;
        }

        // Two-loop recursion.
        Eigen::VectorXd q = res.gradient;
        std::vector<double> alphas(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alphas[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alphas[i] * y_hist[i];
        }
        if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alphas[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd d = -q;
        double slope = d.dot(res.gradient);
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = -res.gradient;
            slope = d.dot(res.gradient);
        }
        const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / res.gradient.norm()) : 1.0;

        LineSearch ls(obj, opt, res.x, d, res.value, slope, res.evaluations);
        std::optional<Point> step = ls.run(alpha0);
        if (!step && !s_hist.empty()) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = -res.gradient;
            slope = d.dot(res.gradient);
            LineSearch retry(obj, opt, res.x, d, res.value, slope, res.evaluations);
            step = retry.run(std::min(1.0, 1.0 / res.gradient.norm()));
        }
        if (!step) {
            res.message = "line search failed to find a decreasing step";
            return res;
        }

        const Eigen::VectorXd s = step->alpha * d;
        const double f_old = res.value;
        const Eigen::VectorXd y = step->g - res.gradient;
        res.x += s;
        res.value = step->f;
        res.gradient = step->g;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        if (std::abs(f_old - res.value) <= opt.relative_tolerance * std::max(1.0, std::abs(res.value))) {
            ++res.iterations;
            res.converged = true;
            res.message = "relative objective change below tolerance";
            return res;
        }
    }
    res.message = "iteration limit reached";
    return res;
}

Eigen::VectorXd central_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                            const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd central_difference_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double rel_step) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h[i] = rel_step * std::max(1.0, std::abs(x[i]));
    const double f0 = f(x);
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        xp[i] = x[i] + h[i];
        const double fp = f(xp);
        xp[i] = x[i] - h[i];
        const double fm = f(xp);
        xp[i] = x[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (Eigen::Index j = 0; j < i; ++j) {
            xp[i] = x[i] + h[i];
            xp[j] = x[j] + h[j];
            const double fpp = f(xp);
            xp[j] = x[j] - h[j];
            const double fpm = f(xp);
            xp[i] = x[i] - h[i];
            const double fmm = f(xp);
            xp[j] = x[j] + h[j];
            const double fmp = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
        }
    }
    return hess;
}

}  // namespace varta
