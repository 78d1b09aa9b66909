#include "support.hpp"

#include "varta/errors.hpp"
#include "varta/estimation.hpp"
#include "varta/simulation.hpp"

#include <doctest.h>

#include <random>

using namespace varta;

TEST_CASE("parameter layout sizes and names") {
    const ParamLayout tri = ParamLayout::for_model(testsupport::trivariate_truth());
    CHECK(tri.size() == 18);
    CHECK(tri.names()[0] == "A[1,1]");
    CHECK(tri.names()[1] == "A[2,1]");
    CHECK(tri.names()[9] == "rho[1,2]");
    CHECK(tri.names()[12] == "shape[1]");
    CHECK(tri.names()[15] == "scale[1]");

    const ParamLayout six = ParamLayout::for_model(testsupport::six_dim_truth());
    std::size_t a = 0, r = 0, m = 0;
    for (auto g : six.groups()) (g == ParamGroup::Dynamics ? a : g == ParamGroup::Correlation ? r : m)++;
    CHECK(a == 36);
    CHECK(r == 15);
    CHECK(m == 12);
    CHECK(six.size() == 63);

    const ParamLayout var2(2, 2, {Family::Gaussian, Family::Weibull});
    CHECK(var2.names()[4] == "A2[1,1]");
    CHECK(var2.names()[9] == "mean[1]");
    CHECK(var2.names()[10] == "shape[2]");
}

TEST_CASE("pack and unpack are inverse") {
    const auto model = testsupport::trivariate_truth();
    const ParamLayout layout = ParamLayout::for_model(model);
    const Eigen::VectorXd u = layout.pack(model);
    const VartaModel back = layout.unpack(u, model);
    CHECK((layout.natural(back) - layout.natural(model)).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::MatrixXd jac = layout.natural_jacobian(u);
    // Weibull shape enters through its log: d shape / d log shape = shape.
    CHECK(jac(12, 12) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(jac(0, 0) == 1.0);
}

TEST_CASE("Weibull MLE solves the profile score equation") {
    Xoshiro256 rng(31);
    const auto w = MarginalSpec::weibull(1.7, 4.0);
    Eigen::VectorXd x(3000);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = quantile(w, rng.uniform());
    const MarginalSpec fitted = fit_weibull(x);
    const double a = fitted.shape();
    const Eigen::ArrayXd lx = x.array().log();
    const Eigen::ArrayXd xa = x.array().pow(a);
    CHECK(std::abs((xa * lx).sum() / xa.sum() - 1.0 / a - lx.mean()) < 1e-10);
    CHECK(fitted.scale() == doctest::Approx(std::pow(xa.mean(), 1.0 / a)).epsilon(1e-10));
    CHECK(a == doctest::Approx(1.7).epsilon(0.05));
}

TEST_CASE("least-squares VAR recovers the normal-equation solution") {
    const auto model = testsupport::trivariate_truth();
    const Eigen::MatrixXd z = simulate_latent(model.var, 400, RngSpec{3});
    const auto lags = ols_var(z, 1);
    const Eigen::MatrixXd x = z.topRows(399), y = z.bottomRows(399);
    const Eigen::MatrixXd b = (x.transpose() * x).ldlt().solve(x.transpose() * y).transpose();
    CHECK((lags[0] - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("all-Gaussian conditional fit matches least squares with intercept") {
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.2, -0.1, 0.3;
    const VartaModel truth(VarParams({a}, CorrelationMatrix(2, Eigen::VectorXd::Constant(1, 0.4))),
                           {MarginalSpec::gaussian(1.0, 2.0), MarginalSpec::gaussian(-3.0, 0.5)});
    const TimeSeriesData data = simulate_varta(truth, 800, RngSpec{77});

    FitOptions opt;
    opt.kind = LikelihoodKind::Conditional;
    opt.gradient_tolerance = 1e-8;
    const FitResult fr = fit(data, 1, {Family::Gaussian, Family::Gaussian}, opt);
    REQUIRE(fr.converged);

    // Independent oracle: regress X_t on (1, X_{t-1}) and map back.
    const Eigen::Index n = data.values.rows();
    Eigen::MatrixXd reg(n - 1, 3);
    reg.col(0).setOnes();
    reg.rightCols(2) = data.values.topRows(n - 1);
    const Eigen::MatrixXd y = data.values.bottomRows(n - 1);
    const Eigen::MatrixXd coef = (reg.transpose() * reg).ldlt().solve(reg.transpose() * y);
    const Eigen::VectorXd c = coef.row(0).transpose();
    const Eigen::MatrixXd ax = coef.bottomRows(2).transpose();
    const Eigen::MatrixXd resid = y - reg * coef;
    const Eigen::MatrixXd omega_x = resid.transpose() * resid / static_cast<double>(n - 1);
    const Eigen::MatrixXd gam = testsupport::lyapunov_iterate(ax, omega_x);
    const Eigen::VectorXd sd = gam.diagonal().cwiseSqrt();
    const Eigen::VectorXd mu = (Eigen::MatrixXd::Identity(2, 2) - ax).lu().solve(c);
    const Eigen::MatrixXd a_hat = sd.cwiseInverse().asDiagonal() * ax * sd.asDiagonal();
    const double rho_hat = gam(0, 1) / (sd[0] * sd[1]);

    const Eigen::VectorXd& e = fr.estimates;  // A11 A21 A12 A22 rho mean1 mean2 sd1 sd2
    CHECK(e[0] == doctest::Approx(a_hat(0, 0)).epsilon(1e-4));
    CHECK(e[1] == doctest::Approx(a_hat(1, 0)).epsilon(1e-4));
    CHECK(e[2] == doctest::Approx(a_hat(0, 1)).epsilon(1e-4));
    CHECK(e[3] == doctest::Approx(a_hat(1, 1)).epsilon(1e-4));
    CHECK(e[4] == doctest::Approx(rho_hat).epsilon(1e-4));
    CHECK(e[5] == doctest::Approx(mu[0]).epsilon(1e-4));
    CHECK(e[6] == doctest::Approx(mu[1]).epsilon(1e-4));
    CHECK(e[7] == doctest::Approx(sd[0]).epsilon(1e-4));
    CHECK(e[8] == doctest::Approx(sd[1]).epsilon(1e-4));
}

TEST_CASE("standard error of an AR(1) coefficient matches the asymptotic formula") {
    const double a = 0.6;
    const VartaModel truth(VarParams({Eigen::MatrixXd::Constant(1, 1, a)}, CorrelationMatrix(1)),
                           {MarginalSpec::gaussian(0.0, 1.0)});
    const TimeSeriesData data = simulate_varta(truth, 4000, RngSpec{5});
    const FitResult fr = fit(data, 1, {Family::Gaussian});
    REQUIRE(fr.converged);
    REQUIRE(fr.information_pd);
    CHECK(fr.se[0] == doctest::Approx(std::sqrt((1 - a * a) / 4000.0)).epsilon(0.1));
    const auto ci = confidence_intervals(fr, 0.95);
    CHECK(ci[0].hi - ci[0].lo == doctest::Approx(2 * 1.959963984540054 * fr.se[0]).epsilon(1e-12));
}

TEST_CASE("fixed parameters keep their starting values") {
    const auto truth = testsupport::trivariate_truth();
    const TimeSeriesData data = simulate_varta(truth, 600, RngSpec{12});
    FitOptions opt;
    opt.start = truth;
    opt.fixed = {12, 15};  // shape[1], scale[1]
    const FitResult fr = fit(data, 1, {Family::Weibull, Family::Weibull, Family::Weibull}, opt);
    CHECK(fr.estimates[12] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr.estimates[15] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::isnan(fr.se[12]));
    CHECK(std::isfinite(fr.se[0]));
}

TEST_CASE("starting values are admissible") {
    const auto truth = testsupport::trivariate_truth();
    const TimeSeriesData data = simulate_varta(truth, 300, RngSpec{6});
    const VartaModel start = initial_values(data, 1, {Family::Weibull, Family::Weibull, Family::Weibull});
    Eigen::MatrixXd o, l;
    CHECK(try_derive_omega(start.var, o, l) == VarStatus::Ok);

    const TimeSeriesData tiny(data.values.topRows(30));
    CHECK_THROWS_AS((void)initial_values(tiny, 1, {Family::Weibull, Family::Weibull, Family::Weibull}), DataError);
    CHECK_THROWS_AS((void)fit(data, 1, {Family::Weibull}), DataError);
}

TEST_CASE("negative data are rejected for Weibull marginals") {
    const auto truth = testsupport::trivariate_truth();
    TimeSeriesData data = simulate_varta(truth, 300, RngSpec{6});
    data.values(10, 2) = -0.5;
    CHECK_THROWS_AS((void)fit(data, 1, {Family::Weibull, Family::Weibull, Family::Weibull}), DataError);
}

TEST_CASE("i.i.d. mean has standard error sigma / sqrt(n) when A is held at zero") {
    const VartaModel truth(VarParams({Eigen::MatrixXd::Zero(1, 1)}, CorrelationMatrix(1)),
                           {MarginalSpec::gaussian(3.0, 2.0)});
    const TimeSeriesData data = simulate_varta(truth, 1000, RngSpec{15});
    FitOptions opt;
    opt.start = truth;
    opt.fixed = {0};
    const FitResult fr = fit(data, 1, {Family::Gaussian}, opt);
    REQUIRE(fr.converged);
    const double n = 1000.0;
    const double mean = data.values.mean();
    const double sd = std::sqrt((data.values.array() - mean).square().sum() / n);
    CHECK(fr.estimates[1] == doctest::Approx(mean).epsilon(1e-6));
    CHECK(fr.estimates[2] == doctest::Approx(sd).epsilon(1e-6));
    CHECK(fr.se[1] == doctest::Approx(sd / std::sqrt(n)).epsilon(1e-3));
    const auto ci = confidence_intervals(fr, 0.5);
    CHECK((ci[1].hi - ci[1].lo) / 2 == doctest::Approx(0.6744897501960817 * fr.se[1]).epsilon(1e-12));
    CHECK(ci[1].lo <= fr.estimates[1]);
    CHECK(fr.estimates[1] <= ci[1].hi);
}

TEST_CASE("initial values are close to the truth") {
    const auto truth = testsupport::trivariate_truth();
    const TimeSeriesData data = simulate_varta(truth, 5000, RngSpec{16});
    const VartaModel start = initial_values(data, 1, {Family::Weibull, Family::Weibull, Family::Weibull});
    CHECK((start.var.a[0] - truth.var.a[0]).cwiseAbs().maxCoeff() < 0.1);

    const VartaModel iid(VarParams({Eigen::MatrixXd::Zero(3, 3)}, CorrelationMatrix(3)), truth.marginals);
    const TimeSeriesData d2 = simulate_varta(iid, 2000, RngSpec{17});
    const VartaModel s2 = initial_values(d2, 1, {Family::Weibull, Family::Weibull, Family::Weibull});
    CHECK(s2.var.a[0].cwiseAbs().maxCoeff() <= 3.0 / std::sqrt(2000.0));
}

TEST_CASE("fit is deterministic, improves on the start and is a fixed point") {
    const auto truth = testsupport::trivariate_truth();
    const std::vector<Family> fam(3, Family::Weibull);
    const TimeSeriesData data = simulate_varta(truth, 800, RngSpec{18});
    const FitResult a = fit(data, 1, fam);
    const FitResult b = fit(data, 1, fam);
    REQUIRE(a.converged);
    CHECK(a.estimates == b.estimates);
    CHECK(a.se == b.se);
    CHECK(std::abs(a.loglik - loglik(a.model, data)) <= 1e-9);
    CHECK(a.loglik >= loglik(initial_values(data, 1, fam), data));
    CHECK((a.tvalues - a.estimates.cwiseQuotient(a.se)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.se.array() > 0.0).all());

    FitOptions opt;
    opt.start = a.model;
    const FitResult again = fit(data, 1, fam, opt);
    CHECK(std::abs(again.loglik - a.loglik) <= 1e-8);
}

TEST_CASE("doubling the sample size shrinks standard errors by about 1/sqrt(2)") {
    const auto truth = testsupport::trivariate_truth();
    const std::vector<Family> fam(3, Family::Weibull);
    const FitResult small = fit(simulate_varta(truth, 2000, RngSpec{19}), 1, fam);
    const FitResult large = fit(simulate_varta(truth, 4000, RngSpec{20}), 1, fam);
    REQUIRE(small.information_pd);
    REQUIRE(large.information_pd);
    const Eigen::ArrayXd ratio = large.se.array() / small.se.array();
    CHECK(ratio.minCoeff() >= 0.6);
    CHECK(ratio.maxCoeff() <= 0.8);
}
