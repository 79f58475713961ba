#include "rome/optim.hpp"

#include <cmath>

namespace rome {

void GradientAccumulator::add(const std::string& name, const std::vector<double>& grad) {
    auto it = buffers_.find(name);
    if (it == buffers_.end()) {
        buffers_.emplace(name, grad);
    } else {
        if (it->second.size() != grad.size()) {
            throw ContractError("GradientAccumulator: size mismatch for " + name);
        }
        for (std::size_t i = 0; i < grad.size(); ++i) it->second[i] += grad[i];
    }
    ++count_;
}

void GradientAccumulator::scale(double factor) {
    for (auto& [name, buf] : buffers_)
        for (double& v : buf) v *= factor;
}

void GradientAccumulator::clear() {
    buffers_.clear();
    count_ = 0;
}

void SgdMomentum::step(const ParamRefs& params, const GradMap& grads, double lr_override) {
    const double lr = lr_override < 0.0 ? lr_ : lr_override;
    for (const auto& [name, param] : params) {
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        auto& vel = velocity_[name];
        if (vel.empty()) vel.assign(param->size(), 0.0);
        for (std::size_t i = 0; i < param->size(); ++i) {
            vel[i] = momentum_ * vel[i] + git->second[i];
            param->data[i] -= lr * vel[i];
        }
    }
}

void Adam::step(const ParamRefs& params, const GradMap& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (const auto& [name, param] : params) {
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        auto& m = m_[name];
        auto& v = v_[name];
        if (m.empty()) m.assign(param->size(), 0.0);
        if (v.empty()) v.assign(param->size(), 0.0);
        for (std::size_t i = 0; i < param->size(); ++i) {
            const double gi = git->second[i];
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
            param->data[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_);
        }
    }
}

double cosine_lr(double base, int step, int total) {
    if (total <= 1) return base;
    double t = static_cast<double>(step) / static_cast<double>(total);
    return 0.5 * base * (1.0 + std::cos(3.141592653589793 * t));
}

}  // namespace rome
