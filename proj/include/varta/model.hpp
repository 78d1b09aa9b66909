#pragma once

#include "varta/marginals.hpp"
#include "varta/var_model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace varta {

/// Latent VAR(k) plus one marginal per series.
struct VartaModel {
    VarParams var;
    std::vector<MarginalSpec> marginals;

    VartaModel() = default;
    /// @throws std::invalid_argument if marginals.size() != var.dim()
    VartaModel(VarParams v, std::vector<MarginalSpec> m);

    [[nodiscard]] std::size_t dim() const noexcept { return var.dim(); }
    [[nodiscard]] std::size_t order() const noexcept { return var.order(); }
};

/// n x p observations (row = time) with series names.
struct TimeSeriesData {
    Eigen::MatrixXd values;
    std::vector<std::string> names;

    TimeSeriesData() = default;
    /// Names default to x1..xp when empty.
    explicit TimeSeriesData(Eigen::MatrixXd v, std::vector<std::string> n = {});

    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(values.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

/// Throws DataError naming the first (row, column) outside a marginal's support.
void validate_data(const VartaModel& model, const TimeSeriesData& data);

/// Names in the layout "A[i,j]" (k = 1) or "A2[i,j]", one-based.
[[nodiscard]] std::string lag_parameter_name(std::size_t lag, std::size_t order, std::size_t i,
                                             std::size_t j);

}  // namespace varta
