#pragma once

#include <cstdint>
#include <vector>

#include "fsem/network.hpp"

namespace fsem {

/// SGD with optional heavy-ball momentum. Velocity buffers are created on
/// the first step and mirror the parameter shapes layer by layer.
template <typename T>
struct OptimizerState {
    T learning_rate = T(0.01);
    T momentum = T(0);
    std::vector<std::vector<Tensor<T>>> velocity;
    std::uint64_t step_count = 0;
};

/// Applies one update to every non-frozen parameter from the gradients left
/// by backward(), then zeroes the gradients. Throws std::logic_error when no
/// backward() has run since the previous step.
template <typename T>
void optimize_step(Network<T>& net, OptimizerState<T>& state);

}  // namespace fsem
