#include "g3ad/adam.hpp"

#include <cmath>

#include "g3ad/errors.hpp"

namespace g3ad {

AdamState::AdamState(const std::vector<NamedParam>& params, AdamConfig cfg) : cfg_(cfg) {
    first_moment_.reserve(params.size());
    second_moment_.reserve(params.size());
    for (const auto& [name, p] : params) {
        (void)name;
        first_moment_.emplace_back(p->rows(), p->cols());
        second_moment_.emplace_back(p->rows(), p->cols());
    }
}

void AdamState::step(const std::vector<NamedParam>& params) {
    if (params.size() != first_moment_.size())
        throw ContractError("adam: parameter list size changed since construction");
    ++step_count_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
    for (size_t k = 0; k < params.size(); ++k) {
        const auto& [name, p] = params[k];
        if (!p->grad.same_shape(p->value))
            throw TrainingError("adam: gradient missing for parameter '" + name + "'");
        Matrix& m = first_moment_[k];
        Matrix& v = second_moment_[k];
        for (int i = 0; i < p->rows(); ++i)
            for (int j = 0; j < p->cols(); ++j) {
                const double g = p->grad(i, j);
                if (!std::isfinite(g))
                    throw TrainingError("adam: non-finite gradient in parameter '" + name + "'");
                m(i, j) = cfg_.beta1 * m(i, j) + (1.0 - cfg_.beta1) * g;
                v(i, j) = cfg_.beta2 * v(i, j) + (1.0 - cfg_.beta2) * g * g;
                const double m_hat = m(i, j) / bc1;
                const double v_hat = v(i, j) / bc2;
                p->value(i, j) -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
            }
    }
}

}  // namespace g3ad
