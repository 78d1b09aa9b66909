#include "varta/model.hpp"

#include "varta/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace varta {

VartaModel::VartaModel(VarParams v, std::vector<MarginalSpec> m)
    : var(std::move(v)), marginals(std::move(m)) {
    if (marginals.size() != var.dim()) {
        throw std::invalid_argument("model needs exactly one marginal per series");
    }
}

TimeSeriesData::TimeSeriesData(Eigen::MatrixXd v, std::vector<std::string> n)
    : values(std::move(v)), names(std::move(n)) {
    if (names.empty()) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    }
    if (names.size() != static_cast<std::size_t>(values.cols())) {
        throw std::invalid_argument("one name per column is required");
    }
}

void validate_data(const VartaModel& model, const TimeSeriesData& data) {
    if (data.dim() != model.dim()) {
        throw DataError("data has " + std::to_string(data.dim()) + " columns but the model has " +
                        std::to_string(model.dim()) + " series");
    }
    for (Eigen::Index t = 0; t < data.values.rows(); ++t) {
        for (Eigen::Index i = 0; i < data.values.cols(); ++i) {
            const double x = data.values(t, i);
            if (!model.marginals[static_cast<std::size_t>(i)].in_support(x)) {
                throw DataError("observation at row " + std::to_string(t + 1) + ", column " +
                                std::to_string(i + 1) + " (" + data.names[static_cast<std::size_t>(i)] +
                                ") = " + std::to_string(x) + " is outside the " +
                                std::string(family_name(model.marginals[static_cast<std::size_t>(i)].family())) +
                                " support");
            }
        }
    }
}

std::string lag_parameter_name(std::size_t lag, std::size_t order, std::size_t i, std::size_t j) {
    std::string prefix = order == 1 ? "A" : "A" + std::to_string(lag + 1);
    return prefix + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

}  // namespace varta
