#include "rome/network.hpp"

#include <cmath>

namespace rome {

void NetworkSpec::validate() const {
    if (hidden_dim < 2 || hidden_dim % 2 != 0) {
        throw ConfigError("NetworkSpec: hidden_dim must be even and >= 2");
    }
    if (num_cells < 1) throw ConfigError("NetworkSpec: num_cells must be >= 1");
    if (input_dim < 1 || num_classes < 2) throw ConfigError("NetworkSpec: bad input/class dims");
    if (cell.op_set.empty()) throw ConfigError("NetworkSpec: empty op set");
    if (cell.num_inputs != 2) throw ConfigError("NetworkSpec: cells take exactly 2 inputs");
}

namespace {

Value gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::vector<double> w(rows * cols);
    const double scale = std::sqrt(2.0 / static_cast<double>(rows));
    for (double& v : w) v = scale * rng.gaussian();
    return Value({rows, cols}, std::move(w));
}

void add_op_weights(WeightMap& w, const std::string& prefix, OpKind op, int width, Rng& rng) {
    const auto d = static_cast<std::size_t>(width);
    if (op == OpKind::LinSmall) {
        w[prefix + ".W"] = gaussian_matrix(d, d, rng);
    } else if (op == OpKind::LinLarge) {
        w[prefix + ".W1"] = gaussian_matrix(d, 2 * d, rng);
        w[prefix + ".W2"] = gaussian_matrix(2 * d, d, rng);
    }
}

// Widths of the two cell inputs (outputs of cells c-2 and c-1, or the stem).
std::pair<int, int> cell_input_widths(const NetworkSpec& spec, int c) {
    int w0 = c >= 2 ? spec.cell_output_width(c - 2) : spec.hidden_dim;
    int w1 = c >= 1 ? spec.cell_output_width(c - 1) : spec.hidden_dim;
    return {w0, w1};
}

void add_shared_weights(WeightMap& w, const NetworkSpec& spec, Rng& rng) {
    w["stem.W"] = gaussian_matrix(static_cast<std::size_t>(spec.input_dim),
                                  static_cast<std::size_t>(spec.hidden_dim), rng);
    w["stem.b"] = Value::zeros({static_cast<std::size_t>(spec.hidden_dim)});
    for (int c = 0; c < spec.num_cells; ++c) {
        auto [w0, w1] = cell_input_widths(spec, c);
        int d = spec.cell_width(c);
        std::string prefix = "cell" + std::to_string(c);
        w[prefix + ".pre0.W"] =
            gaussian_matrix(static_cast<std::size_t>(w0), static_cast<std::size_t>(d), rng);
        w[prefix + ".pre1.W"] =
            gaussian_matrix(static_cast<std::size_t>(w1), static_cast<std::size_t>(d), rng);
    }
    int last = spec.num_cells - 1;
    w["classifier.W"] = gaussian_matrix(static_cast<std::size_t>(spec.cell_output_width(last)),
                                        static_cast<std::size_t>(spec.num_classes), rng);
    w["classifier.b"] = Value::zeros({static_cast<std::size_t>(spec.num_classes)});
}

std::string edge_op_prefix(int cell, int edge, int op) {
    return "cell" + std::to_string(cell) + ".e" + std::to_string(edge) + ".op" +
           std::to_string(op);
}

}  // namespace

WeightMap init_supernet_weights(const NetworkSpec& spec, Rng& rng) {
    spec.validate();
    WeightMap w;
    add_shared_weights(w, spec, rng);
    for (int c = 0; c < spec.num_cells; ++c) {
        int d = spec.cell_width(c);
        for (int e = 0; e < spec.cell.num_edges(); ++e) {
            for (std::size_t o = 0; o < spec.cell.op_set.size(); ++o) {
                add_op_weights(w, edge_op_prefix(c, e, static_cast<int>(o)), spec.cell.op_set[o],
                               d, rng);
            }
        }
    }
    return w;
}

WeightMap init_genotype_weights(const NetworkSpec& spec, const Genotype& g, Rng& rng) {
    spec.validate();
    WeightMap w;
    add_shared_weights(w, spec, rng);
    for (int c = 0; c < spec.num_cells; ++c) {
        const auto& cell_geno = spec.is_reduce_cell(c) ? g.cells.at(1) : g.cells.at(0);
        int d = spec.cell_width(c);
        for (std::size_t t = 0; t < cell_geno.nodes.size(); ++t) {
            int j = spec.cell.first_intermediate() + static_cast<int>(t);
            for (const auto& choice : cell_geno.nodes[t]) {
                OpKind op = op_from_name(choice.op);
                int e = spec.cell.edge_index(choice.pred, j);
                int o = 0;
                while (spec.cell.op_set.at(static_cast<std::size_t>(o)) != op) ++o;
                add_op_weights(w, edge_op_prefix(c, e, o), op, d, rng);
            }
        }
    }
    return w;
}

TensorMap bind_weights(Graph& g, const WeightMap& weights, bool requires_grad) {
    TensorMap out;
    for (const auto& [name, value] : weights) out.emplace(name, g.leaf(value, requires_grad));
    return out;
}

CellPlan plan_from_sample(const CellSpec& spec, const CellSampleHandles& sample) {
    CellPlan plan;
    for (std::size_t t = 0; t < sample.hard.node_preds.size(); ++t) {
        int j = spec.first_intermediate() + static_cast<int>(t);
        std::vector<EdgePlan> edges;
        const auto& preds = sample.hard.node_preds[t];
        for (std::size_t k = 0; k < preds.size(); ++k) {
            EdgePlan ep;
            ep.pred = preds[k];
            int e = spec.edge_index(ep.pred, j);
            ep.op_index = sample.hard.edge_op.at(e);
            ep.op = spec.op_set.at(static_cast<std::size_t>(ep.op_index));
            if (!sample.edge_gates.empty() && !sample.edge_gates[t].empty()) {
                ep.edge_gate = sample.edge_gates[t].at(k);
            }
            auto it = sample.op_gates.find(e);
            if (it != sample.op_gates.end()) ep.op_gate = it->second;
            edges.push_back(ep);
        }
        plan.nodes.push_back(std::move(edges));
    }
    return plan;
}

CellPlan plan_from_genotype_cell(const CellSpec& spec, const Genotype::Cell& cell) {
    CellPlan plan;
    for (const auto& node : cell.nodes) {
        std::vector<EdgePlan> edges;
        for (const auto& choice : node) {
            EdgePlan ep;
            ep.pred = choice.pred;
            ep.op = op_from_name(choice.op);
            int o = 0;
            while (spec.op_set.at(static_cast<std::size_t>(o)) != ep.op) ++o;
            ep.op_index = o;
            edges.push_back(ep);
        }
        plan.nodes.push_back(std::move(edges));
    }
    return plan;
}

namespace {

Tensor op_forward(Graph& g, OpKind op, Tensor x, const TensorMap& w, const std::string& prefix,
                  Rng& noise_rng) {
    const std::size_t m = x.shape()[0], d = x.shape()[1];
    switch (op) {
        case OpKind::Skip:
            return x;
        case OpKind::Zero:
            return g.constant({m, d}, std::vector<double>(m * d, 0.0));
        case OpKind::Avg: {
            // mean over a fixed partition of the features into adjacent pairs
            std::vector<double> p(d * d, 0.0);
            for (std::size_t i = 0; i < d; ++i) p[i * d + (i ^ 1)] = p[i * d + i] = 0.5;
            return g.matmul(x, g.constant({d, d}, std::move(p)));
        }
        case OpKind::Noise: {
            std::vector<double> n(m * d);
            for (double& v : n) v = noise_rng.gaussian();
            return g.add(x, g.constant({m, d}, std::move(n)));
        }
        case OpKind::LinSmall:
            return g.relu(g.matmul(x, w.at(prefix + ".W")));
        case OpKind::LinLarge:
            return g.relu(g.matmul(g.relu(g.matmul(x, w.at(prefix + ".W1"))),
                                   w.at(prefix + ".W2")));
    }
    throw ContractError("op_forward: unknown op kind");
}

}  // namespace

ForwardResult forward_network(Graph& g, const NetworkSpec& spec, const TensorMap& weights,
                              const CellPlan& normal_plan, const CellPlan& reduce_plan, Tensor x,
                              Rng& noise_rng) {
    spec.validate();
    ForwardResult result;
    Tensor stem = g.add_rowvec(g.matmul(x, weights.at("stem.W")), weights.at("stem.b"));
    Tensor prev_prev = stem, prev = stem;
    for (int c = 0; c < spec.num_cells; ++c) {
        const CellPlan& plan = spec.is_reduce_cell(c) ? reduce_plan : normal_plan;
        std::string cp = "cell" + std::to_string(c);
        std::vector<Tensor> node_out;
        node_out.push_back(g.matmul(prev_prev, weights.at(cp + ".pre0.W")));
        node_out.push_back(g.matmul(prev, weights.at(cp + ".pre1.W")));
        int evaluated = 0;
        for (std::size_t t = 0; t < plan.nodes.size(); ++t) {
            int j = spec.cell.first_intermediate() + static_cast<int>(t);
            Tensor acc;
            if (plan.nodes[t].empty()) throw ContractError("forward_network: node with no in-edges");
            for (const EdgePlan& ep : plan.nodes[t]) {
                int e = spec.cell.edge_index(ep.pred, j);
                Tensor y = op_forward(g, ep.op, node_out.at(static_cast<std::size_t>(ep.pred)), weights,
                                      edge_op_prefix(c, e, ep.op_index), noise_rng);
                ++evaluated;
                if (ep.op_gate) y = g.mul_scalar(y, *ep.op_gate);
                if (ep.edge_gate) y = g.mul_scalar(y, *ep.edge_gate);
                acc = acc.defined() ? g.add(acc, y) : y;
            }
            node_out.push_back(acc);
        }
        std::vector<Tensor> intermediates(node_out.begin() + spec.cell.num_inputs, node_out.end());
        Tensor cell_out = g.concat_cols(intermediates);
        prev_prev = prev;
        prev = cell_out;
        result.ops_evaluated_per_cell.push_back(evaluated);
    }
    result.logits =
        g.add_rowvec(g.matmul(prev, weights.at("classifier.W")), weights.at("classifier.b"));
    return result;
}

}  // namespace rome
