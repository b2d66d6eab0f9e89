#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fsem/loss.hpp"
#include "fsem/network.hpp"

namespace fsem {

/// Scalar objective of the network output, returning its value and the
/// gradient with respect to that output.
using Objective = std::function<LossValue<double>(const Tensor<double>&)>;

struct LayerGradCheck {
    std::size_t layer = 0;
    bool frozen = false;
    std::size_t parameters = 0;
    double max_relative_error = 0.0;
    double analytic_abs_sum = 0.0;  ///< stays 0 for frozen layers
};

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::vector<LayerGradCheck> layers;
};

/// Compares backprop gradients to central differences for every parameter
/// of every non-frozen layer. Relative error per entry is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
/// Networks above 10^4 parameters are rejected.
GradCheckReport grad_check(Network<double>& net, const Tensor<double>& input, const Objective& objective,
                           double eps = 1e-5);

/// Classification form: cross-entropy on the output, or negative
/// log-likelihood when the network ends in a softmax layer.
GradCheckReport grad_check(Network<double>& net, const Tensor<double>& input, std::span<const std::size_t> labels,
                           double eps = 1e-5);

}  // namespace fsem
