#include "fsem/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fsem {

namespace {

constexpr std::size_t kMaxParameters = 10000;

}  // namespace

GradCheckReport grad_check(Network<double>& net, const Tensor<double>& input, const Objective& objective, double eps) {
    if (net.parameter_count() > kMaxParameters) {
        throw std::invalid_argument("grad_check: network has " + std::to_string(net.parameter_count()) +
                                    " parameters; limit is " + std::to_string(kMaxParameters));
    }
    if (!(eps > 0.0)) throw std::invalid_argument("grad_check: eps must be positive");

    net.zero_grad();
    const Tensor<double> out = net.forward(input);
    const LossValue<double> base = objective(out);
    if (!std::isfinite(base.loss)) throw std::domain_error("grad_check: non-finite loss at the unperturbed point");
    net.backward(base.grad);

    auto evaluate = [&](std::size_t layer, std::size_t param, std::size_t k) {
        const double loss = objective(net.infer(input)).loss;
        if (!std::isfinite(loss)) {
            throw std::domain_error("grad_check: non-finite loss perturbing layer " + std::to_string(layer) +
                                    " parameter " + std::to_string(param) + " entry " + std::to_string(k));
        }
        return loss;
    };

    GradCheckReport report;
    for (std::size_t i = 0; i < net.size(); ++i) {
        auto params = net.layer(i).parameters();
        if (params.empty()) continue;
        auto grads = net.layer(i).gradients();
        LayerGradCheck entry;
        entry.layer = i;
        entry.frozen = net.frozen(i);
        for (std::size_t p = 0; p < params.size(); ++p) {
            entry.parameters += params[p]->size();
            for (double g : grads[p]->values()) entry.analytic_abs_sum += std::abs(g);
            if (entry.frozen) continue;
            Tensor<double>& param = *params[p];
            for (std::size_t k = 0; k < param.size(); ++k) {
                const double saved = param[k];
                param[k] = saved + eps;
                const double plus = evaluate(i, p, k);
                param[k] = saved - eps;
                const double minus = evaluate(i, p, k);
                param[k] = saved;
                const double numeric = (plus - minus) / (2.0 * eps);
                const double analytic = (*grads[p])[k];
                const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                entry.max_relative_error = std::max(entry.max_relative_error, std::abs(analytic - numeric) / denom);
            }
        }
        report.max_relative_error = std::max(report.max_relative_error, entry.max_relative_error);
        report.layers.push_back(entry);
    }
    net.zero_grad();
    return report;
}

GradCheckReport grad_check(Network<double>& net, const Tensor<double>& input, std::span<const std::size_t> labels,
                           double eps) {
    const bool ends_in_softmax = net.size() > 0 && net.layer(net.size() - 1).kind() == LayerKind::softmax;
    std::vector<std::size_t> owned(labels.begin(), labels.end());
    Objective objective = [owned, ends_in_softmax](const Tensor<double>& out) {
        return ends_in_softmax ? negative_log_likelihood(out, owned) : cross_entropy(out, owned);
    };
    return grad_check(net, input, objective, eps);
}

}  // namespace fsem
