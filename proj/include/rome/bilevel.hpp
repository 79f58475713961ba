#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rome/dataset.hpp"
#include "rome/genotype.hpp"
#include "rome/network.hpp"
#include "rome/optim.hpp"

namespace rome {

struct SearchConfig {
    SearchMethod method = SearchMethod::RomeV2;
    int K = 7;
    int epochs = 50;
    int batch_size = 64;
    double theta_lr = 0.05;  // cosine-decayed to 0 over the search
    double theta_momentum = 0.9;
    double arch_lr = 3e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double tau_start = 10.0;
    double tau_end = 0.1;
    double grad_clip = 5.0;  // global-norm clip on the summed theta gradient; 0 disables
    std::uint64_t seed = 0;

    TemperatureSchedule schedule() const { return {tau_start, tau_end, epochs}; }
    void validate() const;
};

struct TraceRecord {
    int epoch = 0;
    int iter = 0;  // cumulative iteration count at end of the epoch
    double tau = 0.0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double parameterless_fraction = 0.0;
    int skip_count = 0;
};

struct SearchTrace {
    std::vector<TraceRecord> records;
    std::string to_csv() const;
};

struct SearchResult {
    Genotype genotype;
    SearchTrace trace;
    ArchParams arch;
    WeightMap weights;
};

// K-sample averaged gradient of the validation loss with respect to the
// architecture parameters; theta stays frozen. Also reports the mean loss.
struct ArchGradient {
    GradMap grads;  // keyed like ArchParams::named(), scaled by 1/K
    double mean_loss = 0.0;
};
ArchGradient arch_gradient(const NetworkSpec& spec, const ArchParams& arch,
                           const WeightMap& weights, const Batch& val_batch, int K, double tau,
                           Rng& rng);

// K-sample summed (not averaged) gradient of the training loss with respect
// to the supernet weights; alpha/beta stay frozen.
struct WeightsGradient {
    GradMap grads;
    double mean_loss = 0.0;
};
WeightsGradient weights_gradient(const NetworkSpec& spec, const ArchParams& arch,
                                 const WeightMap& weights, const Batch& train_batch, int K,
                                 double tau, Rng& rng);

// One architecture step: arch_gradient applied through the Adam optimizer.
double update_arch(const NetworkSpec& spec, ArchParams& arch, const WeightMap& weights,
                   Adam& opt, const Batch& val_batch, int K, double tau, Rng& rng);

// One weight step: weights_gradient, clipped to `grad_clip` by global norm
// (0 disables), applied through SGD with momentum.
double update_weights(const NetworkSpec& spec, const ArchParams& arch, WeightMap& weights,
                      SgdMomentum& opt, double lr, const Batch& train_batch, int K, double tau,
                      double grad_clip, Rng& rng);

// Scales all gradients in place so their global L2 norm is at most max_norm.
// max_norm <= 0 disables clipping.
void clip_grad_norm(GradMap& grads, double max_norm);

SearchResult run_search(const NetworkSpec& spec, const SearchConfig& config,
                        const DataSplits& data);

struct EvalConfig {
    int epochs = 60;
    int batch_size = 64;
    double lr = 0.05;
    double momentum = 0.9;
    double grad_clip = 5.0;  // global-norm clip; 0 disables
    std::uint64_t seed = 0;
};

struct EvalResult {
    double test_accuracy = 0.0;
    double final_train_loss = 0.0;
};

// Train the discrete genotype network from scratch and report held-out
// accuracy on the test split.
EvalResult train_genotype(const NetworkSpec& spec, const Genotype& genotype,
                          const DataSplits& data, const EvalConfig& config);

// Accuracy of a fixed discrete network on a dataset.
double evaluate_genotype_network(const NetworkSpec& spec, const Genotype& genotype,
                                 const WeightMap& weights, const Dataset& data,
                                 std::uint64_t noise_seed);

ParamRefs weight_refs(WeightMap& weights);

}  // namespace rome
