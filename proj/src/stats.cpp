#include "rome/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <json.hpp>

namespace rome {

std::map<PairKey, double> enumerate_without_replacement(const std::vector<double>& p) {
    if (p.size() < 2) throw ContractError("enumerate_without_replacement: need n >= 2");
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw NumericError("enumerate_without_replacement: negative probability");
        if (v >= 1.0) throw NumericError("enumerate_without_replacement: degenerate simplex");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw NumericError("enumerate_without_replacement: probabilities do not sum to 1");
    }
    std::map<PairKey, double> dist;
    for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            dist[{a, b}] = p[a] * p[b] / (1.0 - p[a]) + p[b] * p[a] / (1.0 - p[b]);
        }
    }
    return dist;
}

DistributionTestResult compare_counts(std::vector<std::string> support,
                                      std::vector<double> expected, std::vector<long> counts) {
    if (support.size() != expected.size() || support.size() != counts.size()) {
        throw ContractError("compare_counts: size mismatch");
    }
    DistributionTestResult r;
    r.support = std::move(support);
    r.expected = std::move(expected);
    r.counts = std::move(counts);
    for (long c : r.counts) r.draws += c;
    double tv = 0.0, chi = 0.0;
    for (std::size_t i = 0; i < r.expected.size(); ++i) {
        double emp = static_cast<double>(r.counts[i]) / static_cast<double>(r.draws);
        tv += std::abs(emp - r.expected[i]);
        double e = r.expected[i] * static_cast<double>(r.draws);
        if (e > 0.0) {
            double d = static_cast<double>(r.counts[i]) - e;
            chi += d * d / e;
        }
    }
    r.tv_distance = 0.5 * tv;
    r.chi_square = chi;
    r.dof = static_cast<int>(r.expected.size()) - 1;
    return r;
}

DistributionTestResult test_gumbel_top2_equivalence(const std::vector<double>& beta, long draws,
                                                    Rng& rng) {
    auto p = softmax_probs(beta);
    auto oracle = enumerate_without_replacement(p);
    auto logp = log_softmax_vals(beta);

    std::map<PairKey, long> counts;
    for (const auto& [key, prob] : oracle) counts[key] = 0;
    for (long d = 0; d < draws; ++d) {
        auto [a, b] = gumbel_top2_hard(logp, rng);
        PairKey key = a < b ? PairKey{a, b} : PairKey{b, a};
        counts[key] += 1;
    }

    std::vector<std::string> support;
    std::vector<double> expected;
    std::vector<long> observed;
    for (const auto& [key, prob] : oracle) {
        support.push_back("{" + std::to_string(key.first) + "," + std::to_string(key.second) + "}");
        expected.push_back(prob);
        observed.push_back(counts[key]);
    }
    return compare_counts(std::move(support), std::move(expected), std::move(observed));
}

DistributionTestResult test_gumbel_max_law(const std::vector<double>& logits, long draws,
                                           Rng& rng) {
    auto p = softmax_probs(logits);
    auto logp = log_softmax_vals(logits);
    std::vector<long> counts(p.size(), 0);
    for (long d = 0; d < draws; ++d) counts[gumbel_max(logp, rng)] += 1;
    std::vector<std::string> support;
    for (std::size_t i = 0; i < p.size(); ++i) support.push_back(std::to_string(i));
    return compare_counts(std::move(support), std::move(p), std::move(counts));
}

std::string DistributionTestResult::to_json() const {
    nlohmann::ordered_json j;
    j["support"] = support;
    j["expected"] = expected;
    j["counts"] = counts;
    j["draws"] = draws;
    j["tv_distance"] = tv_distance;
    j["chi_square"] = chi_square;
    j["dof"] = dof;
    return j.dump(2);
}

VarianceReport gradient_variance_study(const NetworkSpec& spec, const ArchParams& arch,
                                       const WeightMap& weights, const Batch& batch,
                                       const std::vector<int>& k_values, int replicates,
                                       double tau, Rng& rng) {
    if (replicates < 2) throw ContractError("gradient_variance_study: need >= 2 replicates");
    VarianceReport report;
    report.k_values = k_values;
    report.replicates = replicates;

    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        const int K = k_values[ki];
        std::vector<double> mean, m2;  // Welford over flattened gradients
        for (int r = 0; r < replicates; ++r) {
            ArchGradient g = arch_gradient(spec, arch, weights, batch, K, tau, rng);
            std::vector<double> flat;
            for (const auto& [name, buf] : g.grads)
                flat.insert(flat.end(), buf.begin(), buf.end());
            if (mean.empty()) {
                mean.assign(flat.size(), 0.0);
                m2.assign(flat.size(), 0.0);
            }
            for (std::size_t i = 0; i < flat.size(); ++i) {
                double delta = flat[i] - mean[i];
                mean[i] += delta / static_cast<double>(r + 1);
                m2[i] += delta * (flat[i] - mean[i]);
            }
        }
        double agg = 0.0;
        for (double v : m2) agg += v / static_cast<double>(replicates - 1);
        agg /= static_cast<double>(m2.size());
        report.aggregate_variance.push_back(agg);
        double norm = 0.0;
        for (double v : mean) norm += v * v;
        report.mean_gradient_norm.push_back(std::sqrt(norm));
        report.mean_gradient.push_back(std::move(mean));
    }
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        report.ratio_to_k1.push_back(report.aggregate_variance[ki] /
                                     report.aggregate_variance[0]);
    }
    return report;
}

std::string VarianceReport::to_json() const {
    nlohmann::ordered_json j;
    j["k_values"] = k_values;
    j["replicates"] = replicates;
    j["aggregate_variance"] = aggregate_variance;
    j["ratio_to_k1"] = ratio_to_k1;
    j["mean_gradient_norm"] = mean_gradient_norm;
    return j.dump(2);
}

CollapseReport collapse_study(const NetworkSpec& spec, const SearchConfig& base_config,
                              const DataSplits& data, const std::vector<std::uint64_t>& seeds,
                              const std::vector<SearchMethod>& methods, int eval_epochs,
                              int threads) {
    struct Job {
        std::uint64_t seed;
        SearchMethod method;
    };
    std::vector<Job> jobs;
    for (SearchMethod m : methods)
        for (std::uint64_t s : seeds) jobs.push_back({s, m});

    std::vector<CollapseRun> runs(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    auto run_one = [&](std::size_t i) {
        SearchConfig cfg = base_config;
        cfg.seed = jobs[i].seed;
        cfg.method = jobs[i].method;
        SearchResult res = run_search(spec, cfg, data);
        CollapseMetrics cm = collapse_metrics(res.genotype);
        EvalConfig eval;
        eval.epochs = eval_epochs;
        eval.seed = jobs[i].seed;
        EvalResult ev = train_genotype(spec, res.genotype, data, eval);
        runs[i] = {jobs[i].seed, method_name(jobs[i].method), cm.parameterless_fraction,
                   cm.skip_count, ev.test_accuracy};
    };
    // Exceptions must not escape worker threads (std::terminate); capture and
    // rethrow the first one on the calling thread.
    auto worker = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < jobs.size(); i += step) {
            try {
                run_one(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker, static_cast<std::size_t>(t),
                              static_cast<std::size_t>(threads));
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    CollapseReport report;
    report.runs = std::move(runs);
    std::map<std::string, std::pair<double, int>> frac, acc;
    for (const CollapseRun& r : report.runs) {
        frac[r.method].first += r.parameterless_fraction;
        frac[r.method].second += 1;
        acc[r.method].first += r.test_accuracy;
        acc[r.method].second += 1;
    }
    for (const auto& [m, fa] : frac) report.mean_fraction[m] = fa.first / fa.second;
    for (const auto& [m, aa] : acc) report.mean_accuracy[m] = aa.first / aa.second;
    return report;
}

std::string CollapseReport::to_json() const {
    nlohmann::ordered_json j;
    j["runs"] = nlohmann::ordered_json::array();
    for (const CollapseRun& r : runs) {
        nlohmann::ordered_json jr;
        jr["seed"] = r.seed;
        jr["method"] = r.method;
        jr["parameterless_fraction"] = r.parameterless_fraction;
        jr["skip_count"] = r.skip_count;
        jr["test_accuracy"] = r.test_accuracy;
        j["runs"].push_back(jr);
    }
    j["mean_parameterless_fraction"] = mean_fraction;
    j["mean_test_accuracy"] = mean_accuracy;
    return j.dump(2);
}

}  // namespace rome
