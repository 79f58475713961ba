#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rome/rng.hpp"

namespace rome {

struct Dataset {
    int feature_dim = 0;
    int num_classes = 0;
    std::vector<double> features;  // row-major, size * feature_dim
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
};

struct DatasetSpec {
    std::string kind = "spirals";  // blobs | spirals | xor-grid
    int classes = 3;
    int samples = 600;
    double noise = 0.1;
    int feature_dim = 8;
    std::uint64_t split_seed = 0;
};

// train and val are the disjoint halves of the search pool; test is held out
// for evaluating derived genotypes.
struct DataSplits {
    Dataset train;
    Dataset val;
    Dataset test;
};

DataSplits make_dataset(const DatasetSpec& spec);

struct Batch {
    std::vector<double> features;
    std::vector<int> labels;
    int batch_size = 0;
};

// Deterministic batching over a fixed permutation.
Batch take_batch(const Dataset& d, const std::vector<std::size_t>& order, std::size_t start,
                 std::size_t count);
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

}  // namespace rome
