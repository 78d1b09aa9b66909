#include "varta/simulation.hpp"

#include "varta/gaussian.hpp"
#include "varta/likelihood.hpp"

#include <algorithm>
#include <stdexcept>

namespace varta {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

Eigen::VectorXd standard_normal_vector(Xoshiro256& rng, Eigen::Index p) {
    Eigen::VectorXd v(p);
    for (Eigen::Index i = 0; i < p; ++i) v[i] = rng.normal();
    return v;
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
}

Xoshiro256 Xoshiro256::stream(std::uint64_t seed, std::uint64_t index) {
    Xoshiro256 g(seed);
    for (std::uint64_t i = 0; i < index; ++i) g.jump();
    return g;
}

Xoshiro256::result_type Xoshiro256::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

void Xoshiro256::jump() {
    static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                              0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
        for (int b = 0; b < 64; ++b) {
            if (word & (std::uint64_t{1} << b)) {
                for (int i = 0; i < 4; ++i) acc[static_cast<std::size_t>(i)] ^= s_[static_cast<std::size_t>(i)];
            }
            (void)(*this)();
        }
    }
    s_ = acc;
}

double Xoshiro256::uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Xoshiro256::normal() { return normal_quantile(uniform()); }

// ---------------------------------------------------------------------------

LatentPath simulate_latent_path(const VarParams& vp, std::size_t n, Xoshiro256& rng,
                                const SimulationOptions& opt) {
    if (n == 0) throw std::invalid_argument("path length must be at least 1");
    const auto p = static_cast<Eigen::Index>(vp.dim());
    const auto k = static_cast<Eigen::Index>(vp.order());
    const Eigen::MatrixXd omega_chol = cholesky(derive_omega(vp));

    const bool stationary_start = opt.burn_in == 0;
    const Eigen::Index rows = stationary_start ? std::max(static_cast<Eigen::Index>(n), k)
                                               : static_cast<Eigen::Index>(opt.burn_in + n) + k;
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(rows, p);
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(rows, p);
    if (stationary_start) {
        // W = (z_k', ..., z_1')' ~ N(0, Sigma_k); the first block is the most recent row.
        const Eigen::MatrixXd sk_chol = cholesky(companion_covariance(vp));
        const Eigen::VectorXd w = sk_chol * standard_normal_vector(rng, k * p);
        for (Eigen::Index b = 0; b < k; ++b) z.row(k - 1 - b) = w.segment(b * p, p).transpose();
    }
    for (Eigen::Index t = k; t < rows; ++t) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
        for (Eigen::Index i = 1; i <= k; ++i) {
            mean.noalias() += vp.a[static_cast<std::size_t>(i - 1)] * z.row(t - i).transpose();
        }
        const Eigen::VectorXd e = omega_chol * standard_normal_vector(rng, p);
        eta.row(t) = e.transpose();
        z.row(t) = (mean + e).transpose();
    }

    LatentPath out;
    const auto len = static_cast<Eigen::Index>(n);
    out.z = stationary_start ? z.topRows(len) : z.bottomRows(len);
    out.eta = stationary_start ? eta.topRows(len) : eta.bottomRows(len);
    return out;
}

Eigen::MatrixXd simulate_latent(const VarParams& vp, std::size_t n, const RngSpec& rng,
                                const SimulationOptions& opt) {
    Xoshiro256 gen(rng.seed);
    return simulate_latent_path(vp, n, gen, opt).z;
}

TimeSeriesData simulate_varta(const VartaModel& model, std::size_t n, Xoshiro256& rng,
                              const SimulationOptions& opt) {
    const LatentPath path = simulate_latent_path(model.var, n, rng, opt);
    return delatentize(model, path.z);
}

TimeSeriesData simulate_varta(const VartaModel& model, std::size_t n, const RngSpec& rng,
                              const SimulationOptions& opt) {
    Xoshiro256 gen(rng.seed);
    return simulate_varta(model, n, gen, opt);
}

}  // namespace varta
