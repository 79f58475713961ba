#include "rome/gumbel.hpp"

#include <algorithm>
#include <cmath>

namespace rome {

double gumbel_variate(Rng& rng) {
    double u = rng.uniform();
    u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    return -std::log(-std::log(u));
}

std::vector<double> sample_gumbel(std::size_t n, Rng& rng) {
    if (n < 1) throw ContractError("sample_gumbel: n must be >= 1");
    std::vector<double> g(n);
    for (double& v : g) v = gumbel_variate(rng);
    return g;
}

double TemperatureSchedule::tau(int epoch) const {
    if (epoch < 0 || epoch >= total_epochs) {
        throw ContractError("TemperatureSchedule::tau: epoch out of range");
    }
    if (total_epochs == 1) return tau_end;
    double t = static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
    return tau_start + (tau_end - tau_start) * t;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

std::pair<std::size_t, std::size_t> top2_lowest(const std::vector<double>& v) {
    if (v.size() < 2) throw ContractError("top2_lowest: need at least 2 entries");
    std::size_t first = argmax_lowest(v);
    std::size_t second = first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == first) continue;
        if (v[i] > v[second]) second = i;
    }
    return {first, second};
}

std::vector<double> softmax_probs(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        denom += p[i];
    }
    for (double& v : p) v /= denom;
    return p;
}

std::vector<double> log_softmax_vals(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v - mx);
    double lse = mx + std::log(denom);
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = logits[i] - lse;
    return out;
}

std::size_t gumbel_max(const std::vector<double>& logp, Rng& rng) {
    std::vector<double> perturbed(logp.size());
    for (std::size_t i = 0; i < logp.size(); ++i) perturbed[i] = logp[i] + gumbel_variate(rng);
    return argmax_lowest(perturbed);
}

std::pair<std::size_t, std::size_t> gumbel_top2_hard(const std::vector<double>& logp, Rng& rng) {
    if (logp.size() < 2) throw ContractError("gumbel_top2_hard: need n >= 2");
    std::vector<double> perturbed(logp.size());
    for (std::size_t i = 0; i < logp.size(); ++i) perturbed[i] = logp[i] + gumbel_variate(rng);
    return top2_lowest(perturbed);
}

namespace {

// soft = softmax((log softmax(params) + g) / tau) on the tape, then hard
// selection from the soft values and the straight-through coupling
// st = soft + stop_gradient(hard - soft).
Tensor relaxed_sample(Tensor params, double tau, const std::vector<double>& noise) {
    if (!(tau > 0.0)) throw ContractError("relaxed sample: tau must be positive");
    Graph& g = *params.graph();
    if (noise.size() != params.value().size()) {
        throw ContractError("relaxed sample: noise length mismatch");
    }
    Tensor logp = g.log_softmax(params);
    Tensor perturbed = g.add(logp, g.constant(params.shape(), noise));
    return g.softmax(perturbed, tau);
}

Tensor straight_through(Tensor soft, const std::vector<double>& hard) {
    Graph& g = *soft.graph();
    Tensor hard_t = g.constant(soft.shape(), hard);
    return g.add(soft, g.stop_gradient(g.sub(hard_t, soft)));
}

}  // namespace

CategoricalSample gumbel_softmax_with_noise(Tensor alpha, double tau,
                                            const std::vector<double>& noise) {
    CategoricalSample s;
    s.soft = relaxed_sample(alpha, tau, noise);
    s.index = argmax_lowest(s.soft.value());
    s.hard.assign(s.soft.value().size(), 0.0);
    s.hard[s.index] = 1.0;
    s.st = straight_through(s.soft, s.hard);
    return s;
}

CategoricalSample gumbel_softmax(Tensor alpha, double tau, Rng& rng) {
    return gumbel_softmax_with_noise(alpha, tau, sample_gumbel(alpha.value().size(), rng));
}

Top2Sample gumbel_top2_with_noise(Tensor beta, double tau, const std::vector<double>& noise) {
    if (beta.value().size() < 2) throw ContractError("gumbel_top2: need n >= 2");
    Top2Sample s;
    s.soft = relaxed_sample(beta, tau, noise);
    s.indices = top2_lowest(s.soft.value());
    s.hard.assign(s.soft.value().size(), 0.0);
    s.hard[s.indices.first] = 1.0;
    s.hard[s.indices.second] = 1.0;
    s.st = straight_through(s.soft, s.hard);
    return s;
}

Top2Sample gumbel_top2(Tensor beta, double tau, Rng& rng) {
    return gumbel_top2_with_noise(beta, tau, sample_gumbel(beta.value().size(), rng));
}

double top2_marginal_closed_form(const std::vector<double>& p, std::size_t j) {
    if (p.size() < 2 || j >= p.size()) throw ContractError("top2_marginal: bad arguments");
    double total = 0.0;
    for (double v : p) total += v;
    if (std::abs(total - 1.0) > 1e-9) throw NumericError("top2_marginal: p is not a simplex");
    for (double v : p) {
        if (v >= 1.0) throw NumericError("top2_marginal: some p_i = 1 (degenerate)");
    }
    double m = p[j];
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i == j) continue;
        m += p[i] * p[j] / (1.0 - p[i]);
    }
    return m;
}

}  // namespace rome
