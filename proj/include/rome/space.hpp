#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rome/gumbel.hpp"
#include "rome/tensor.hpp"

namespace rome {

enum class OpKind { Skip, Zero, Avg, Noise, LinSmall, LinLarge };

bool op_is_parametric(OpKind k);
const std::string& op_name(OpKind k);
OpKind op_from_name(const std::string& name);
// Named sets: S0 (all six), S2 {lin_small, skip}, S3 {lin_small, skip, zero},
// S4 {lin_small, noise}.
std::vector<OpKind> op_set_by_name(const std::string& name);

enum class SearchMethod { RomeV1, RomeV2, GdasBaseline };
const std::string& method_name(SearchMethod m);
SearchMethod method_from_name(const std::string& name);

struct Edge {
    int src = 0;  // predecessor node id
    int dst = 0;  // intermediate node id
    bool operator==(const Edge&) const = default;
};

// DAG cell: nodes 0..num_inputs-1 are inputs, the next num_intermediate are
// intermediate. Every intermediate node may connect to any earlier node.
struct CellSpec {
    int num_inputs = 2;
    int num_intermediate = 4;
    std::vector<OpKind> op_set;
    int feature_dim = 8;

    int num_nodes() const { return num_inputs + num_intermediate; }
    int first_intermediate() const { return num_inputs; }
    // j predecessors for node id j.
    int num_predecessors(int node_id) const { return node_id; }
    // Edges ordered by (dst, src); 14 edges for the default cell.
    std::vector<Edge> edges() const;
    int num_edges() const;
    int edge_index(int src, int dst) const;
    // Unordered predecessor pairs (a, b), a < b, for one node; lexicographic.
    std::vector<std::array<int, 2>> predecessor_pairs(int node_id) const;
};

// Architecture distribution parameters for one cell type. alpha is one
// vector of |O| logits per edge; exactly one of the beta layouts is
// populated depending on the method (none for the baseline).
struct CellArchParams {
    std::vector<Value> alpha;       // [num_edges][|O|]
    std::vector<Value> beta_pairs;  // v1: [num_intermediate][j*(j-1)/2]
    std::vector<Value> beta_edges;  // v2: [num_intermediate][j]

    std::size_t num_topology_scalars() const;
};

struct ArchParams {
    SearchMethod method = SearchMethod::RomeV2;
    CellSpec spec;
    CellArchParams normal;
    CellArchParams reduce;

    static ArchParams init(const CellSpec& spec, SearchMethod method, Rng& rng,
                           double init_scale = 1e-3);

    // Deterministic flat view used by optimizers and serialization.
    std::map<std::string, Value*> named();
    std::map<std::string, const Value*> named() const;
};

// One hard architecture for one cell type: selected predecessors per
// intermediate node (sorted) and the chosen op index per selected edge.
struct DiscreteCell {
    std::vector<std::vector<int>> node_preds;  // [num_intermediate]
    std::map<int, int> edge_op;                // edge index -> op index

    int num_selected_edges() const;
};

struct DiscreteArch {
    SearchMethod method = SearchMethod::RomeV2;
    DiscreteCell normal;
    DiscreteCell reduce;
};

// Differentiable handles attached to one hard sample of one cell type. The
// gate tensors are rank-0 straight-through values (forward exactly 1) whose
// gradients flow to beta; op_gate likewise flows to alpha.
struct CellSampleHandles {
    DiscreteCell hard;
    // Parallel to hard.node_preds: one gate per selected edge (empty for the
    // baseline, whose edges are always on).
    std::vector<std::vector<Tensor>> edge_gates;
    std::map<int, Tensor> op_gates;  // edge index -> rank-0 gate
};

struct SampledArchitecture {
    SearchMethod method = SearchMethod::RomeV2;
    CellSampleHandles normal;
    CellSampleHandles reduce;
    std::uint64_t seed = 0;  // provenance
    int sample_index = 0;
};

// Tensors for one cell type's parameters bound onto a graph.
struct BoundCellParams {
    std::vector<Tensor> alpha;
    std::vector<Tensor> beta_pairs;
    std::vector<Tensor> beta_edges;
};

struct BoundArchParams {
    BoundCellParams normal;
    BoundCellParams reduce;
};

BoundArchParams bind_arch_params(Graph& g, const ArchParams& params, bool requires_grad);

// Per-edge Gumbel-Softmax operation samples for the given edges.
std::map<int, CategoricalSample> sample_ops(const std::vector<Tensor>& alpha,
                                            const std::vector<int>& edge_indices, double tau,
                                            Rng& rng);

// Topology for one cell. v1 samples one predecessor pair per node via
// Gumbel-Softmax over pair categories; v2 uses Gumbel-Top2 over predecessor
// edges; the baseline selects every edge.
CellSampleHandles sample_cell(const CellSpec& spec, SearchMethod method,
                              const BoundCellParams& bound, double tau, Rng& rng);

SampledArchitecture sample_architecture(const CellSpec& spec, SearchMethod method,
                                        const BoundArchParams& bound, double tau, Rng& rng);

// Hard-only sampling on plain doubles (no tape); the induced distribution is
// identical to the relaxed sampler's hard component.
DiscreteCell sample_cell_hard(const CellSpec& spec, SearchMethod method,
                              const CellArchParams& params, Rng& rng);
DiscreteArch sample_architecture_hard(const CellSpec& spec, SearchMethod method,
                                      const ArchParams& params, Rng& rng);

// log p(z; alpha, beta): product over nodes of the topology law times one
// operation softmax factor per selected edge.
double cell_log_prob(const CellSpec& spec, SearchMethod method, const CellArchParams& params,
                     const DiscreteCell& cell);
double architecture_log_prob(const CellSpec& spec, const ArchParams& params,
                             const DiscreteArch& arch);

}  // namespace rome
