#include "rome/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rome/errors.hpp"

namespace rome {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Fixed near-orthogonal lift from 2-d structure into feature_dim dims.
std::vector<double> random_lift(int rows, int cols, Rng& rng) {
    std::vector<double> m(static_cast<std::size_t>(rows) * cols);
    for (double& v : m) v = rng.gaussian() / std::sqrt(static_cast<double>(rows));
    return m;
}

void lift_point(const double* p2, const std::vector<double>& lift, int dim, double* out) {
    for (int d = 0; d < dim; ++d) out[d] = p2[0] * lift[d] + p2[1] * lift[dim + d];
}

}  // namespace

DataSplits make_dataset(const DatasetSpec& spec) {
    if (spec.classes < 2) throw ConfigError("dataset: need at least 2 classes");
    if (spec.samples < 10 * spec.classes) {
        throw ConfigError("dataset: samples must be >= 10 * classes");
    }
    if (spec.feature_dim < 2) throw ConfigError("dataset: feature_dim must be >= 2");
    if (spec.kind != "blobs" && spec.kind != "spirals" && spec.kind != "xor-grid") {
        throw ConfigError("dataset: unknown kind '" + spec.kind + "'");
    }

    Rng rng(spec.split_seed, /*stream=*/0xDA7A);
    const int n = spec.samples;
    const int dim = spec.feature_dim;
    std::vector<double> X(static_cast<std::size_t>(n) * dim);
    std::vector<int> y(static_cast<std::size_t>(n));

    if (spec.kind == "blobs") {
        std::vector<double> centers(static_cast<std::size_t>(spec.classes) * dim);
        for (double& c : centers) c = 3.0 * rng.gaussian();
        for (int i = 0; i < n; ++i) {
            int cls = i % spec.classes;
            y[static_cast<std::size_t>(i)] = cls;
            for (int d = 0; d < dim; ++d) {
                X[static_cast<std::size_t>(i) * dim + d] =
                    centers[static_cast<std::size_t>(cls) * dim + d] + spec.noise * rng.gaussian();
            }
        }
    } else {
        auto lift = random_lift(2, dim, rng);
        for (int i = 0; i < n; ++i) {
            double p2[2];
            int cls;
            if (spec.kind == "spirals") {
                cls = i % spec.classes;
                double t = rng.uniform();  // position along the arm
                double r = 0.2 + 1.8 * t;
                double phi = kTwoPi * (1.25 * t + static_cast<double>(cls) / spec.classes);
                p2[0] = r * std::cos(phi) + spec.noise * rng.gaussian();
                p2[1] = r * std::sin(phi) + spec.noise * rng.gaussian();
            } else {  // xor-grid: 4x4 checkerboard, labels cycle through classes
                p2[0] = rng.uniform(-1.0, 1.0);
                p2[1] = rng.uniform(-1.0, 1.0);
                int cx = std::min(3, static_cast<int>((p2[0] + 1.0) * 2.0));
                int cy = std::min(3, static_cast<int>((p2[1] + 1.0) * 2.0));
                cls = (cx + cy) % spec.classes;
                p2[0] += spec.noise * rng.gaussian();
                p2[1] += spec.noise * rng.gaussian();
            }
            y[static_cast<std::size_t>(i)] = cls;
            lift_point(p2, lift, dim, &X[static_cast<std::size_t>(i) * dim]);
        }
    }

    // Shuffle, then carve test (1/4) and the disjoint train/val halves.
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::size_t j = rng.next_u64() % i;
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t n_test = static_cast<std::size_t>(n) / 4;
    const std::size_t n_pool = static_cast<std::size_t>(n) - n_test;
    const std::size_t n_train = n_pool / 2;

    auto slice = [&](std::size_t begin, std::size_t end) {
        Dataset d;
        d.feature_dim = dim;
        d.num_classes = spec.classes;
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t src = order[i];
            d.features.insert(d.features.end(), X.begin() + static_cast<std::ptrdiff_t>(src * dim),
                              X.begin() + static_cast<std::ptrdiff_t>((src + 1) * dim));
            d.labels.push_back(y[src]);
        }
        return d;
    };

    DataSplits splits;
    splits.train = slice(0, n_train);
    splits.val = slice(n_train, n_pool);
    splits.test = slice(n_pool, static_cast<std::size_t>(n));
    return splits;
}

Batch take_batch(const Dataset& d, const std::vector<std::size_t>& order, std::size_t start,
                 std::size_t count) {
    Batch b;
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t i = order.at(start + k);
        b.features.insert(b.features.end(),
                          d.features.begin() + static_cast<std::ptrdiff_t>(i * d.feature_dim),
                          d.features.begin() + static_cast<std::ptrdiff_t>((i + 1) * d.feature_dim));
        b.labels.push_back(d.labels.at(i));
    }
    b.batch_size = static_cast<int>(count);
    return b;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.next_u64() % i;
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

}  // namespace rome
