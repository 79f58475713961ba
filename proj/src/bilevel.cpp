#include "rome/bilevel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rome {

void SearchConfig::validate() const {
    if (K < 1) throw ConfigError("SearchConfig: K must be >= 1");
    if (epochs < 1) throw ConfigError("SearchConfig: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("SearchConfig: batch_size must be >= 1");
    if (!(tau_start > 0.0) || !(tau_end > 0.0)) {
        throw ConfigError("SearchConfig: temperatures must be positive");
    }
    if (grad_clip < 0.0) throw ConfigError("SearchConfig: grad_clip must be >= 0");
}

std::string SearchTrace::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,iter,tau,train_loss,val_loss,parameterless_fraction,skip_count\n";
    for (const TraceRecord& r : records) {
        out << r.epoch << ',' << r.iter << ',' << r.tau << ',' << r.train_loss << ','
            << r.val_loss << ',' << r.parameterless_fraction << ',' << r.skip_count << '\n';
    }
    return out.str();
}

namespace {

struct SampleLoss {
    double loss = 0.0;
};

// Builds one tape: bind, sample, forward, cross-entropy, backward.
// arch_grad selects which side of the bi-level problem receives gradients.
template <typename Collect>
double one_sample_backward(const NetworkSpec& spec, const ArchParams& arch,
                           const WeightMap& weights, const Batch& batch, double tau, Rng& rng,
                           bool grad_to_arch, int k, Collect&& collect) {
    Graph g;
    BoundArchParams bound_arch = bind_arch_params(g, arch, grad_to_arch);
    TensorMap bound_w = bind_weights(g, weights, !grad_to_arch);
    SampledArchitecture sampled;
    Tensor loss;
    try {
        sampled = sample_architecture(arch.spec, arch.method, bound_arch, tau, rng);
        Tensor x = g.constant({static_cast<std::size_t>(batch.batch_size),
                               static_cast<std::size_t>(spec.input_dim)},
                              batch.features);
        ForwardResult fwd = forward_network(g, spec, bound_w,
                                            plan_from_sample(arch.spec, sampled.normal),
                                            plan_from_sample(arch.spec, sampled.reduce), x, rng);
        loss = g.cross_entropy(fwd.logits, batch.labels);
    } catch (const NumericError& e) {
        throw NumericError("non-finite loss at sample k=" + std::to_string(k) +
                           " (rng counter=" + std::to_string(rng.counter()) + "): " + e.what());
    }
    g.backward(loss);
    collect(g, bound_arch, bound_w);
    return loss.scalar();
}

void collect_cell_grads(GradMap& grads, const std::string& prefix, const BoundCellParams& cell) {
    for (std::size_t e = 0; e < cell.alpha.size(); ++e) {
        const auto& g = cell.alpha[e].grad();
        auto& buf = grads[prefix + ".alpha.e" + std::to_string(e)];
        if (buf.empty()) buf.assign(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
    }
    auto collect_beta = [&](const std::vector<Tensor>& betas, const std::string& tag) {
        for (std::size_t j = 0; j < betas.size(); ++j) {
            const auto& g = betas[j].grad();
            auto& buf = grads[prefix + "." + tag + ".n" + std::to_string(j)];
            if (buf.empty()) buf.assign(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
        }
    };
    collect_beta(cell.beta_pairs, "beta_pairs");
    collect_beta(cell.beta_edges, "beta_edges");
}

}  // namespace

ArchGradient arch_gradient(const NetworkSpec& spec, const ArchParams& arch,
                           const WeightMap& weights, const Batch& val_batch, int K, double tau,
                           Rng& rng) {
    if (K < 1) throw ContractError("arch_gradient: K must be >= 1");
    ArchGradient out;
    for (int k = 0; k < K; ++k) {
        out.mean_loss += one_sample_backward(
            spec, arch, weights, val_batch, tau, rng, /*grad_to_arch=*/true, k,
            [&](Graph&, const BoundArchParams& bound, const TensorMap&) {
                collect_cell_grads(out.grads, "normal", bound.normal);
                collect_cell_grads(out.grads, "reduce", bound.reduce);
            });
    }
    out.mean_loss /= K;
    for (auto& [name, buf] : out.grads)
        for (double& v : buf) v /= static_cast<double>(K);
    return out;
}

WeightsGradient weights_gradient(const NetworkSpec& spec, const ArchParams& arch,
                                 const WeightMap& weights, const Batch& train_batch, int K,
                                 double tau, Rng& rng) {
    if (K < 1) throw ContractError("weights_gradient: K must be >= 1");
    WeightsGradient out;
    for (int k = 0; k < K; ++k) {
        out.mean_loss += one_sample_backward(
            spec, arch, weights, train_batch, tau, rng, /*grad_to_arch=*/false, k,
            [&](Graph&, const BoundArchParams&, const TensorMap& bound_w) {
                // Eq. for theta is an unnormalized sum over the K samples.
                for (const auto& [name, tensor] : bound_w) {
                    const auto& g = tensor.grad();
                    auto& buf = out.grads[name];
                    if (buf.empty()) buf.assign(g.size(), 0.0);
                    for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
                }
            });
    }
    out.mean_loss /= K;
    return out;
}

double update_arch(const NetworkSpec& spec, ArchParams& arch, const WeightMap& weights,
                   Adam& opt, const Batch& val_batch, int K, double tau, Rng& rng) {
    ArchGradient g = arch_gradient(spec, arch, weights, val_batch, K, tau, rng);
    opt.step(arch.named(), g.grads);
    return g.mean_loss;
}

ParamRefs weight_refs(WeightMap& weights) {
    ParamRefs refs;
    for (auto& [name, value] : weights) refs[name] = &value;
    return refs;
}

void clip_grad_norm(GradMap& grads, double max_norm) {
    if (max_norm <= 0.0) return;
    double sq = 0.0;
    for (const auto& [name, g] : grads)
        for (double v : g) sq += v * v;
    double norm = std::sqrt(sq);
    if (norm <= max_norm) return;
    double scale = max_norm / norm;
    for (auto& [name, g] : grads)
        for (double& v : g) v *= scale;
}

double update_weights(const NetworkSpec& spec, const ArchParams& arch, WeightMap& weights,
                      SgdMomentum& opt, double lr, const Batch& train_batch, int K, double tau,
                      double grad_clip, Rng& rng) {
    WeightsGradient g = weights_gradient(spec, arch, weights, train_batch, K, tau, rng);
    clip_grad_norm(g.grads, grad_clip);
    opt.step(weight_refs(weights), g.grads, lr);
    return g.mean_loss;
}

SearchResult run_search(const NetworkSpec& spec, const SearchConfig& config,
                        const DataSplits& data) {
    config.validate();
    spec.validate();
    Rng master(config.seed);
    Rng init_rng = master.split(1);
    Rng weight_rng = master.split(2);
    Rng sample_rng = master.split(3);
    Rng shuffle_rng = master.split(4);

    ArchParams arch = ArchParams::init(spec.cell, config.method, init_rng);
    WeightMap weights = init_supernet_weights(spec, weight_rng);
    Adam arch_opt(config.arch_lr, config.adam_beta1, config.adam_beta2, config.adam_eps);
    SgdMomentum theta_opt(config.theta_lr, config.theta_momentum);

    TemperatureSchedule schedule = config.schedule();
    const std::size_t bs = static_cast<std::size_t>(config.batch_size);
    const std::size_t iters_per_epoch =
        std::max<std::size_t>(1, std::min(data.train.size(), data.val.size()) / bs);
    const int total_steps = config.epochs * static_cast<int>(iters_per_epoch);

    SearchResult result;
    int iter = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double tau = schedule.tau(epoch);
        auto train_order = shuffled_indices(data.train.size(), shuffle_rng);
        auto val_order = shuffled_indices(data.val.size(), shuffle_rng);
        double train_loss = 0.0, val_loss = 0.0;
        for (std::size_t it = 0; it < iters_per_epoch; ++it) {
            std::size_t tb = std::min(bs, data.train.size() - it * bs);
            std::size_t vb = std::min(bs, data.val.size() - it * bs);
            Batch val_batch = take_batch(data.val, val_order, it * bs, vb);
            Batch train_batch = take_batch(data.train, train_order, it * bs, tb);
            // Alg. order: alpha/beta first on the validation batch, then theta.
            val_loss += update_arch(spec, arch, weights, arch_opt, val_batch, config.K, tau,
                                    sample_rng);
            double lr = cosine_lr(config.theta_lr, iter, total_steps);
            train_loss += update_weights(spec, arch, weights, theta_opt, lr, train_batch,
                                         config.K, tau, config.grad_clip, sample_rng);
            ++iter;
        }
        Genotype current = derive_genotype(spec.cell, arch);
        CollapseMetrics cm = collapse_metrics(current);
        result.trace.records.push_back({epoch, iter, tau,
                                        train_loss / static_cast<double>(iters_per_epoch),
                                        val_loss / static_cast<double>(iters_per_epoch),
                                        cm.parameterless_fraction, cm.skip_count});
    }
    result.genotype = derive_genotype(spec.cell, arch);
    result.arch = std::move(arch);
    result.weights = std::move(weights);
    return result;
}

namespace {

double dataset_accuracy(const NetworkSpec& spec, const Genotype& genotype,
                        const WeightMap& weights, const Dataset& data, Rng& noise_rng) {
    if (data.size() == 0) return 0.0;
    Graph g;
    TensorMap bound = bind_weights(g, weights, false);
    Tensor x = g.constant({data.size(), static_cast<std::size_t>(data.feature_dim)},
                          data.features);
    CellPlan normal = plan_from_genotype_cell(spec.cell, genotype.cells.at(0));
    CellPlan reduce = plan_from_genotype_cell(spec.cell, genotype.cells.at(1));
    ForwardResult fwd = forward_network(g, spec, bound, normal, reduce, x, noise_rng);
    const auto& logits = fwd.logits.value();
    const std::size_t classes = static_cast<std::size_t>(spec.num_classes);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < classes; ++c)
            if (logits[i * classes + c] > logits[i * classes + best]) best = c;
        if (static_cast<int>(best) == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace

double evaluate_genotype_network(const NetworkSpec& spec, const Genotype& genotype,
                                 const WeightMap& weights, const Dataset& data,
                                 std::uint64_t noise_seed) {
    Rng noise_rng(noise_seed, 0xE7A1);
    return dataset_accuracy(spec, genotype, weights, data, noise_rng);
}

EvalResult train_genotype(const NetworkSpec& spec, const Genotype& genotype,
                          const DataSplits& data, const EvalConfig& config) {
    spec.validate();
    Rng master(config.seed, 0xE7A1);
    Rng weight_rng = master.split(1);
    Rng shuffle_rng = master.split(2);
    Rng noise_rng = master.split(3);

    WeightMap weights = init_genotype_weights(spec, genotype, weight_rng);
    SgdMomentum opt(config.lr, config.momentum);
    CellPlan normal = plan_from_genotype_cell(spec.cell, genotype.cells.at(0));
    CellPlan reduce = plan_from_genotype_cell(spec.cell, genotype.cells.at(1));

    const std::size_t bs = static_cast<std::size_t>(config.batch_size);
    const std::size_t iters_per_epoch = std::max<std::size_t>(1, data.train.size() / bs);
    const int total_steps = config.epochs * static_cast<int>(iters_per_epoch);

    EvalResult result;
    int step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        auto order = shuffled_indices(data.train.size(), shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t it = 0; it < iters_per_epoch; ++it) {
            std::size_t nb = std::min(bs, data.train.size() - it * bs);
            Batch batch = take_batch(data.train, order, it * bs, nb);
            Graph g;
            TensorMap bound = bind_weights(g, weights, true);
            Tensor x = g.constant({static_cast<std::size_t>(batch.batch_size),
                                   static_cast<std::size_t>(spec.input_dim)},
                                  batch.features);
            ForwardResult fwd = forward_network(g, spec, bound, normal, reduce, x, noise_rng);
            Tensor loss = g.cross_entropy(fwd.logits, batch.labels);
            g.backward(loss);
            GradMap grads;
            for (const auto& [name, tensor] : bound) grads[name] = tensor.grad();
            clip_grad_norm(grads, config.grad_clip);
            opt.step(weight_refs(weights), grads, cosine_lr(config.lr, step, total_steps));
            epoch_loss += loss.scalar();
            ++step;
        }
        result.final_train_loss = epoch_loss / static_cast<double>(iters_per_epoch);
    }
    result.test_accuracy =
        dataset_accuracy(spec, genotype, weights, data.test, noise_rng);
    return result;
}

}  // namespace rome
