#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rome/bilevel.hpp"
#include "rome/space.hpp"

namespace rome {

using PairKey = std::pair<std::size_t, std::size_t>;  // a < b

// Exact distribution over unordered pairs when drawing two categories
// without replacement from simplex p:
// P{a,b} = p_a * p_b / (1 - p_a) + p_b * p_a / (1 - p_b).
std::map<PairKey, double> enumerate_without_replacement(const std::vector<double>& p);

struct DistributionTestResult {
    std::vector<std::string> support;
    std::vector<double> expected;  // probabilities, sum to 1
    std::vector<long> counts;
    long draws = 0;
    double tv_distance = 0.0;
    double chi_square = 0.0;
    int dof = 0;

    std::string to_json() const;
};

DistributionTestResult compare_counts(std::vector<std::string> support,
                                      std::vector<double> expected, std::vector<long> counts);

// Empirical pair distribution of hard Gumbel-Top2 draws against the
// without-replacement enumeration oracle.
DistributionTestResult test_gumbel_top2_equivalence(const std::vector<double>& beta, long draws,
                                                    Rng& rng);

// Empirical argmax frequencies of Gumbel-Max against softmax probabilities.
DistributionTestResult test_gumbel_max_law(const std::vector<double>& logits, long draws,
                                           Rng& rng);

struct VarianceReport {
    std::vector<int> k_values;
    std::vector<double> aggregate_variance;  // mean over parameters of per-coord variance
    std::vector<double> ratio_to_k1;
    std::vector<double> mean_gradient_norm;  // for the unbiasedness check
    std::vector<std::vector<double>> mean_gradient;  // flattened per K
    int replicates = 0;

    std::string to_json() const;
};

// Variance of the K-averaged architecture gradient with theta, alpha, beta
// and the batch all frozen; only sampling noise remains.
VarianceReport gradient_variance_study(const NetworkSpec& spec, const ArchParams& arch,
                                       const WeightMap& weights, const Batch& batch,
                                       const std::vector<int>& k_values, int replicates,
                                       double tau, Rng& rng);

struct CollapseRun {
    std::uint64_t seed = 0;
    std::string method;
    double parameterless_fraction = 0.0;
    int skip_count = 0;
    double test_accuracy = 0.0;
};

struct CollapseReport {
    std::vector<CollapseRun> runs;
    std::map<std::string, double> mean_fraction;
    std::map<std::string, double> mean_accuracy;

    std::string to_json() const;
};

// Paired search runs (same seeds, same data) for each method, reporting the
// collapse metrics and from-scratch accuracy of every derived genotype.
CollapseReport collapse_study(const NetworkSpec& spec, const SearchConfig& base_config,
                              const DataSplits& data, const std::vector<std::uint64_t>& seeds,
                              const std::vector<SearchMethod>& methods, int eval_epochs,
                              int threads = 1);

}  // namespace rome
