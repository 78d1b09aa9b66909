#include "support.hpp"

#include "varta/rng.hpp"
#include "varta/simulation.hpp"
#include "varta/var_model.hpp"

#include <doctest.h>

using namespace varta;

TEST_CASE("xoshiro256** reference stream") {
    Xoshiro256 g(42);
    CHECK(g() == 0x15780b2e0c2ec716ULL);
    CHECK(g() == 0x6104d9866d113a7eULL);
    CHECK(g() == 0xae17533239e499a1ULL);

    Xoshiro256 j = Xoshiro256::stream(42, 1);
    CHECK(j() == 0x50086ef83cbf4f4aULL);
    CHECK(j() == 0xba285ec21347d703ULL);
}

TEST_CASE("uniform draws stay inside the open unit interval") {
    Xoshiro256 g(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = g.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("latent path follows the recursion with the recorded innovations") {
    const auto model = testsupport::trivariate_truth();
    Xoshiro256 g(9);
    const LatentPath path = simulate_latent_path(model.var, 200, g);
    CHECK(path.z.rows() == 200);
    const Eigen::MatrixXd& a = model.var.a[0];
    for (Eigen::Index t = 1; t < 200; ++t) {
        const Eigen::VectorXd rec = a * path.z.row(t - 1).transpose() + path.eta.row(t).transpose();
        CHECK((rec - path.z.row(t).transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("latent moments match the stationary structure") {
    const auto model = testsupport::trivariate_truth();
    const Eigen::MatrixXd z = simulate_latent(model.var, 200000, RngSpec{2024});
    const Eigen::MatrixXd c = z.transpose() * z / static_cast<double>(z.rows());
    const Eigen::MatrixXd sigma = model.var.sigma.matrix();
    CHECK((c - sigma).cwiseAbs().maxCoeff() < 0.05);
    const Eigen::MatrixXd g1 = z.bottomRows(z.rows() - 1).transpose() * z.topRows(z.rows() - 1) / static_cast<double>(z.rows());
    CHECK((g1 - model.var.a[0] * sigma).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("VAR(2) stationary start has the right covariance from the first rows") {
    Eigen::MatrixXd a1(2, 2), a2(2, 2);
    a1 << 0.3, 0.1, 0.0, 0.2;
    a2 << 0.2, 0.0, 0.1, 0.1;
    const VarParams vp({a1, a2}, CorrelationMatrix(2, Eigen::VectorXd::Constant(1, 0.3)));
    REQUIRE(spectral_radius(companion(vp)) < 1.0);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
    const int reps = 20000;
    Xoshiro256 g(5);
    for (int r = 0; r < reps; ++r) {
        const LatentPath p = simulate_latent_path(vp, 3, g);
        s += p.z.row(0).transpose() * p.z.row(1);
    }
    s /= reps;
    const Eigen::MatrixXd g1 = autocov_at(vp, solve_autocov(vp), 1);
    // row 1 is one step after row 0: E[z_0 z_1'] = Gamma_1'
    CHECK((s - g1.transpose()).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("Weibull marginals have the right mean and support") {
    const auto model = testsupport::trivariate_truth();
    const TimeSeriesData d = simulate_varta(model, 100000, RngSpec{77});
    CHECK((d.values.array() > 0.0).all());
    CHECK(d.values.col(0).mean() == doctest::Approx(2.658680776358274).epsilon(0.02));
    CHECK(d.names == std::vector<std::string>{"x1", "x2", "x3"});
}

TEST_CASE("simulation is deterministic and burn-in mode returns n rows") {
    const auto model = testsupport::trivariate_truth();
    const TimeSeriesData a = simulate_varta(model, 50, RngSpec{3});
    const TimeSeriesData b = simulate_varta(model, 50, RngSpec{3});
    CHECK(a.values == b.values);
    SimulationOptions opt;
    opt.burn_in = 100;
    const TimeSeriesData c = simulate_varta(model, 50, RngSpec{3}, opt);
    CHECK(c.values.rows() == 50);
    CHECK(c.values != a.values);
    CHECK_THROWS_AS((void)simulate_varta(model, 0, RngSpec{3}), std::invalid_argument);
}
