#pragma once

#include "varta/model.hpp"
#include "varta/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace varta {

struct SimulationOptions {
    /// Discard this many steps started from zero instead of drawing the first k rows from N(0, Sigma_k).
    std::size_t burn_in = 0;
};

/// Latent path and the innovations that produced it.
struct LatentPath {
    Eigen::MatrixXd z;    ///< n x p
    Eigen::MatrixXd eta;  ///< n x p; rows before k (stationary start) are zero
};

/// n x p latent VAR(k) path, stationary from the first row (or after burn-in).
[[nodiscard]] LatentPath simulate_latent_path(const VarParams& vp, std::size_t n, Xoshiro256& rng,
                                              const SimulationOptions& opt = {});

[[nodiscard]] Eigen::MatrixXd simulate_latent(const VarParams& vp, std::size_t n, const RngSpec& rng,
                                              const SimulationOptions& opt = {});

/// simulate_latent mapped through from_latent per series.
[[nodiscard]] TimeSeriesData simulate_varta(const VartaModel& model, std::size_t n, const RngSpec& rng,
                                            const SimulationOptions& opt = {});

/// Same as above with a caller-owned generator (used for parallel streams).
[[nodiscard]] TimeSeriesData simulate_varta(const VartaModel& model, std::size_t n, Xoshiro256& rng,
                                            const SimulationOptions& opt = {});

}  // namespace varta
