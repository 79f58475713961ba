#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rome/rng.hpp"
#include "rome/tensor.hpp"

namespace rome {

// g = -log(-log(u)), u uniform on (0,1) clamped to [1e-12, 1-1e-12].
double gumbel_variate(Rng& rng);
std::vector<double> sample_gumbel(std::size_t n, Rng& rng);

struct TemperatureSchedule {
    double tau_start = 10.0;
    double tau_end = 0.1;
    int total_epochs = 50;

    // Linear interpolation, tau(0) = tau_start, tau(total_epochs-1) = tau_end.
    double tau(int epoch) const;
};

// One categorical draw. `st` is the straight-through handle: its forward
// value equals the hard one-hot, its gradient path equals the soft relaxation.
struct CategoricalSample {
    std::size_t index = 0;
    std::vector<double> hard;
    Tensor soft;
    Tensor st;
};

struct Top2Sample {
    std::pair<std::size_t, std::size_t> indices;  // ordered, distinct
    std::vector<double> hard;                     // exactly two ones
    Tensor soft;
    Tensor st;
};

// Hard Gumbel-Max draw over plain log-probabilities (no tape). The index is
// distributed as softmax(logp). Ties break toward the lowest index.
std::size_t gumbel_max(const std::vector<double>& logp, Rng& rng);

// Hard Gumbel-Top2 over plain log-probabilities (no tape); returns the two
// largest perturbed logits' indices, ordered by rank.
std::pair<std::size_t, std::size_t> gumbel_top2_hard(const std::vector<double>& logp, Rng& rng);

// Differentiable Gumbel-Softmax on alpha (a rank-1 tensor on some graph):
// soft = softmax((log softmax(alpha) + g) / tau).
CategoricalSample gumbel_softmax(Tensor alpha, double tau, Rng& rng);
// Same with caller-supplied noise; used for frozen-noise gradient checks.
CategoricalSample gumbel_softmax_with_noise(Tensor alpha, double tau,
                                            const std::vector<double>& noise);

// Differentiable Gumbel-Top2 on beta (length >= 2). When n == 2 both
// categories are always selected.
Top2Sample gumbel_top2(Tensor beta, double tau, Rng& rng);
Top2Sample gumbel_top2_with_noise(Tensor beta, double tau, const std::vector<double>& noise);

// Marginal inclusion probability of category j when drawing two categories
// without replacement from simplex p: p_j + sum_{i != j} p_i * p_j / (1 - p_i).
double top2_marginal_closed_form(const std::vector<double>& p, std::size_t j);

// argmax with ties broken toward the lowest index.
std::size_t argmax_lowest(const std::vector<double>& v);
// Top-2 indices (by value, ties toward the lowest index), ordered by rank.
std::pair<std::size_t, std::size_t> top2_lowest(const std::vector<double>& v);

std::vector<double> softmax_probs(const std::vector<double>& logits);
std::vector<double> log_softmax_vals(const std::vector<double>& logits);

}  // namespace rome
