#include "fsem/optimizer.hpp"

#include <stdexcept>

namespace fsem {

template <typename T>
void optimize_step(Network<T>& net, OptimizerState<T>& state) {
    if (!net.has_gradients()) throw std::logic_error("optimize_step: no gradients; call backward first");
    if (!(state.learning_rate >= T{0})) throw std::invalid_argument("optimize_step: negative learning rate");

    if (state.velocity.size() != net.size()) {
        state.velocity.assign(net.size(), {});
        for (std::size_t i = 0; i < net.size(); ++i) {
            for (const Tensor<T>* p : std::as_const(net.layer(i)).parameters()) {
                state.velocity[i].emplace_back(p->shape());
            }
        }
    }

    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.frozen(i)) continue;
        auto params = net.layer(i).parameters();
        auto grads = net.layer(i).gradients();
        for (std::size_t p = 0; p < params.size(); ++p) {
            Tensor<T>& param = *params[p];
            const Tensor<T>& grad = *grads[p];
            if (state.momentum > T{0}) {
                Tensor<T>& v = state.velocity[i][p];
                for (std::size_t k = 0; k < param.size(); ++k) {
                    v[k] = state.momentum * v[k] + grad[k];
                    param[k] -= state.learning_rate * v[k];
                }
            } else {
                for (std::size_t k = 0; k < param.size(); ++k) param[k] -= state.learning_rate * grad[k];
            }
        }
    }
    ++state.step_count;
    net.zero_grad();
}

template void optimize_step(Network<float>&, OptimizerState<float>&);
template void optimize_step(Network<double>&, OptimizerState<double>&);

}  // namespace fsem
