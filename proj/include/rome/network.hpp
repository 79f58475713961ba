#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rome/genotype.hpp"
#include "rome/space.hpp"

namespace rome {

// Stacked-cell classifier over feature vectors. The middle cell is the
// reduction analog: it and everything after it run at half width.
struct NetworkSpec {
    int input_dim = 2;
    int num_classes = 3;
    int hidden_dim = 8;  // must be even
    int num_cells = 4;
    CellSpec cell;  // num_inputs/num_intermediate/op_set; feature_dim unused here

    int reduction_index() const { return num_cells / 2; }
    bool is_reduce_cell(int c) const { return c == reduction_index(); }
    int cell_width(int c) const { return c >= reduction_index() ? hidden_dim / 2 : hidden_dim; }
    int cell_output_width(int c) const { return cell.num_intermediate * cell_width(c); }
    void validate() const;
};

using WeightMap = std::map<std::string, Value>;
using TensorMap = std::map<std::string, Tensor>;

// Fresh supernet weights: stem, per-cell input projections, one weight set
// per (cell, edge, parametric op), classifier. Deterministic given rng.
WeightMap init_supernet_weights(const NetworkSpec& spec, Rng& rng);

// Weights for a fixed genotype only (used to train derived architectures).
WeightMap init_genotype_weights(const NetworkSpec& spec, const Genotype& g, Rng& rng);

TensorMap bind_weights(Graph& g, const WeightMap& weights, bool requires_grad);

// One in-edge of one intermediate node in a concrete forward plan. The gates
// are rank-0 straight-through handles; absent for discrete networks.
struct EdgePlan {
    int pred = 0;
    OpKind op = OpKind::Skip;
    int op_index = 0;  // position in op_set (names weight keys)
    std::optional<Tensor> edge_gate;
    std::optional<Tensor> op_gate;
};

struct CellPlan {
    std::vector<std::vector<EdgePlan>> nodes;  // per intermediate node
};

CellPlan plan_from_sample(const CellSpec& spec, const CellSampleHandles& sample);
CellPlan plan_from_genotype_cell(const CellSpec& spec, const Genotype::Cell& cell);

struct ForwardResult {
    Tensor logits;
    std::vector<int> ops_evaluated_per_cell;  // candidate-op executions
};

// Single-path forward: only planned operations are ever evaluated; nothing
// else is recorded on the tape.
ForwardResult forward_network(Graph& g, const NetworkSpec& spec, const TensorMap& weights,
                              const CellPlan& normal_plan, const CellPlan& reduce_plan, Tensor x,
                              Rng& noise_rng);

}  // namespace rome
