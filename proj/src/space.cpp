#include "rome/space.hpp"

#include <algorithm>
#include <cmath>

namespace rome {

bool op_is_parametric(OpKind k) { return k == OpKind::LinSmall || k == OpKind::LinLarge; }

const std::string& op_name(OpKind k) {
    static const std::string names[] = {"skip", "zero", "avg", "noise", "lin_small", "lin_large"};
    return names[static_cast<int>(k)];
}

OpKind op_from_name(const std::string& name) {
    for (OpKind k : {OpKind::Skip, OpKind::Zero, OpKind::Avg, OpKind::Noise, OpKind::LinSmall,
                     OpKind::LinLarge}) {
        if (op_name(k) == name) return k;
    }
    throw ConfigError("unknown operation name: " + name);
}

std::vector<OpKind> op_set_by_name(const std::string& name) {
    if (name == "S0")
        return {OpKind::Skip, OpKind::Zero, OpKind::Avg, OpKind::Noise, OpKind::LinSmall,
                OpKind::LinLarge};
    if (name == "S2") return {OpKind::LinSmall, OpKind::Skip};
    if (name == "S3") return {OpKind::LinSmall, OpKind::Skip, OpKind::Zero};
    if (name == "S4") return {OpKind::LinSmall, OpKind::Noise};
    throw ConfigError("unknown op set: " + name + " (expected S0, S2, S3 or S4)");
}

const std::string& method_name(SearchMethod m) {
    static const std::string names[] = {"rome_v1", "rome_v2", "gdas_baseline"};
    return names[static_cast<int>(m)];
}

SearchMethod method_from_name(const std::string& name) {
    for (SearchMethod m : {SearchMethod::RomeV1, SearchMethod::RomeV2, SearchMethod::GdasBaseline}) {
        if (method_name(m) == name) return m;
    }
    throw ConfigError("unknown method: " + name);
}

std::vector<Edge> CellSpec::edges() const {
    std::vector<Edge> out;
    for (int j = first_intermediate(); j < num_nodes(); ++j)
        for (int i = 0; i < j; ++i) out.push_back({i, j});
    return out;
}

int CellSpec::num_edges() const {
    int n = 0;
    for (int j = first_intermediate(); j < num_nodes(); ++j) n += j;
    return n;
}

int CellSpec::edge_index(int src, int dst) const {
    if (dst < first_intermediate() || dst >= num_nodes() || src < 0 || src >= dst) {
        throw ContractError("edge_index: no such edge");
    }
    int idx = 0;
    for (int j = first_intermediate(); j < dst; ++j) idx += j;
    return idx + src;
}

std::vector<std::array<int, 2>> CellSpec::predecessor_pairs(int node_id) const {
    std::vector<std::array<int, 2>> pairs;
    for (int a = 0; a < node_id; ++a)
        for (int b = a + 1; b < node_id; ++b) pairs.push_back({a, b});
    return pairs;
}

std::size_t CellArchParams::num_topology_scalars() const {
    std::size_t n = 0;
    for (const Value& v : beta_pairs) n += v.size();
    for (const Value& v : beta_edges) n += v.size();
    return n;
}

namespace {

CellArchParams init_cell_params(const CellSpec& spec, SearchMethod method, Rng& rng,
                                double scale) {
    CellArchParams p;
    const std::size_t num_ops = spec.op_set.size();
    if (num_ops == 0) throw ConfigError("CellSpec: empty op set");
    for (int e = 0; e < spec.num_edges(); ++e) {
        std::vector<double> a(num_ops);
        for (double& v : a) v = scale * rng.gaussian();
        p.alpha.emplace_back(Shape{num_ops}, std::move(a));
    }
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        if (method == SearchMethod::RomeV1) {
            std::size_t n = static_cast<std::size_t>(j) * (j - 1) / 2;
            std::vector<double> b(n);
            for (double& v : b) v = scale * rng.gaussian();
            p.beta_pairs.emplace_back(Shape{n}, std::move(b));
        } else if (method == SearchMethod::RomeV2) {
            std::vector<double> b(static_cast<std::size_t>(j));
            for (double& v : b) v = scale * rng.gaussian();
            p.beta_edges.emplace_back(Shape{b.size()}, std::move(b));
        }
    }
    return p;
}

}  // namespace

ArchParams ArchParams::init(const CellSpec& spec, SearchMethod method, Rng& rng,
                            double init_scale) {
    ArchParams p;
    p.method = method;
    p.spec = spec;
    p.normal = init_cell_params(spec, method, rng, init_scale);
    p.reduce = init_cell_params(spec, method, rng, init_scale);
    return p;
}

namespace {

template <typename Self, typename V>
std::map<std::string, V*> named_impl(Self& self) {
    std::map<std::string, V*> out;
    auto add_cell = [&](const std::string& prefix, auto& cell) {
        for (std::size_t e = 0; e < cell.alpha.size(); ++e)
            out[prefix + ".alpha.e" + std::to_string(e)] = &cell.alpha[e];
        for (std::size_t j = 0; j < cell.beta_pairs.size(); ++j)
            out[prefix + ".beta_pairs.n" + std::to_string(j)] = &cell.beta_pairs[j];
        for (std::size_t j = 0; j < cell.beta_edges.size(); ++j)
            out[prefix + ".beta_edges.n" + std::to_string(j)] = &cell.beta_edges[j];
    };
    add_cell("normal", self.normal);
    add_cell("reduce", self.reduce);
    return out;
}

}  // namespace

std::map<std::string, Value*> ArchParams::named() { return named_impl<ArchParams, Value>(*this); }
std::map<std::string, const Value*> ArchParams::named() const {
    return named_impl<const ArchParams, const Value>(*this);
}

namespace {

BoundCellParams bind_cell(Graph& g, const CellArchParams& p, bool requires_grad) {
    BoundCellParams b;
    for (const Value& v : p.alpha) b.alpha.push_back(g.leaf(v, requires_grad));
    for (const Value& v : p.beta_pairs) b.beta_pairs.push_back(g.leaf(v, requires_grad));
    for (const Value& v : p.beta_edges) b.beta_edges.push_back(g.leaf(v, requires_grad));
    return b;
}

}  // namespace

BoundArchParams bind_arch_params(Graph& g, const ArchParams& params, bool requires_grad) {
    return {bind_cell(g, params.normal, requires_grad), bind_cell(g, params.reduce, requires_grad)};
}

int DiscreteCell::num_selected_edges() const {
    int n = 0;
    for (const auto& preds : node_preds) n += static_cast<int>(preds.size());
    return n;
}

std::map<int, CategoricalSample> sample_ops(const std::vector<Tensor>& alpha,
                                            const std::vector<int>& edge_indices, double tau,
                                            Rng& rng) {
    if (edge_indices.empty()) throw ContractError("sample_ops: empty edge list");
    std::map<int, CategoricalSample> out;
    for (int e : edge_indices) {
        out.emplace(e, gumbel_softmax(alpha.at(static_cast<std::size_t>(e)), tau, rng));
    }
    return out;
}

CellSampleHandles sample_cell(const CellSpec& spec, SearchMethod method,
                              const BoundCellParams& bound, double tau, Rng& rng) {
    CellSampleHandles s;
    Graph* graph = nullptr;
    if (!bound.alpha.empty()) graph = bound.alpha.front().graph();
    std::vector<int> selected_edges;
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        const int t = j - spec.first_intermediate();
        std::vector<int> preds;
        std::vector<Tensor> gates;
        if (method == SearchMethod::GdasBaseline) {
            for (int i = 0; i < j; ++i) preds.push_back(i);
        } else if (method == SearchMethod::RomeV1) {
            auto pairs = spec.predecessor_pairs(j);
            CategoricalSample pick =
                gumbel_softmax(bound.beta_pairs.at(static_cast<std::size_t>(t)), tau, rng);
            const auto& chosen = pairs.at(pick.index);
            preds = {chosen[0], chosen[1]};
            // B_{i,j} = sum of indicators over pairs containing i
            for (int i : preds) {
                Tensor gate;
                for (std::size_t p = 0; p < pairs.size(); ++p) {
                    if (pairs[p][0] != i && pairs[p][1] != i) continue;
                    Tensor term = graph->element(pick.st, p);
                    gate = gate.defined() ? graph->add(gate, term) : term;
                }
                gates.push_back(gate);
            }
        } else {  // RomeV2
            if (j < 2) throw ContractError("sample_cell: v2 needs >= 2 predecessors per node");
            Top2Sample pick =
                gumbel_top2(bound.beta_edges.at(static_cast<std::size_t>(t)), tau, rng);
            preds = {static_cast<int>(pick.indices.first), static_cast<int>(pick.indices.second)};
            std::sort(preds.begin(), preds.end());
            for (int i : preds) gates.push_back(graph->element(pick.st, static_cast<std::size_t>(i)));
        }
        for (int i : preds) selected_edges.push_back(spec.edge_index(i, j));
        s.hard.node_preds.push_back(std::move(preds));
        s.edge_gates.push_back(std::move(gates));
    }
    auto op_samples = sample_ops(bound.alpha, selected_edges, tau, rng);
    for (auto& [e, sample] : op_samples) {
        s.hard.edge_op[e] = static_cast<int>(sample.index);
        s.op_gates.emplace(e, graph->element(sample.st, sample.index));
    }
    return s;
}

SampledArchitecture sample_architecture(const CellSpec& spec, SearchMethod method,
                                        const BoundArchParams& bound, double tau, Rng& rng) {
    SampledArchitecture arch;
    arch.method = method;
    arch.normal = sample_cell(spec, method, bound.normal, tau, rng);
    arch.reduce = sample_cell(spec, method, bound.reduce, tau, rng);
    return arch;
}

DiscreteCell sample_cell_hard(const CellSpec& spec, SearchMethod method,
                              const CellArchParams& params, Rng& rng) {
    DiscreteCell cell;
    std::vector<int> selected_edges;
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        const int t = j - spec.first_intermediate();
        std::vector<int> preds;
        if (method == SearchMethod::GdasBaseline) {
            for (int i = 0; i < j; ++i) preds.push_back(i);
        } else if (method == SearchMethod::RomeV1) {
            auto pairs = spec.predecessor_pairs(j);
            std::size_t idx = gumbel_max(
                log_softmax_vals(params.beta_pairs.at(static_cast<std::size_t>(t)).data), rng);
            preds = {pairs.at(idx)[0], pairs.at(idx)[1]};
        } else {
            auto [a, b] = gumbel_top2_hard(
                log_softmax_vals(params.beta_edges.at(static_cast<std::size_t>(t)).data), rng);
            preds = {static_cast<int>(a), static_cast<int>(b)};
            std::sort(preds.begin(), preds.end());
        }
        for (int i : preds) selected_edges.push_back(spec.edge_index(i, j));
        cell.node_preds.push_back(std::move(preds));
    }
    for (int e : selected_edges) {
        cell.edge_op[e] = static_cast<int>(
            gumbel_max(log_softmax_vals(params.alpha.at(static_cast<std::size_t>(e)).data), rng));
    }
    return cell;
}

DiscreteArch sample_architecture_hard(const CellSpec& spec, SearchMethod method,
                                      const ArchParams& params, Rng& rng) {
    DiscreteArch arch;
    arch.method = method;
    arch.normal = sample_cell_hard(spec, method, params.normal, rng);
    arch.reduce = sample_cell_hard(spec, method, params.reduce, rng);
    return arch;
}

double cell_log_prob(const CellSpec& spec, SearchMethod method, const CellArchParams& params,
                     const DiscreteCell& cell) {
    double logp = 0.0;
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        const int t = j - spec.first_intermediate();
        const auto& preds = cell.node_preds.at(static_cast<std::size_t>(t));
        if (method == SearchMethod::RomeV1) {
            auto pairs = spec.predecessor_pairs(j);
            auto probs = softmax_probs(params.beta_pairs.at(static_cast<std::size_t>(t)).data);
            std::size_t idx = 0;
            for (; idx < pairs.size(); ++idx)
                if (pairs[idx][0] == preds.at(0) && pairs[idx][1] == preds.at(1)) break;
            if (idx == pairs.size()) throw ContractError("cell_log_prob: pair not found");
            logp += std::log(probs[idx]);
        } else if (method == SearchMethod::RomeV2) {
            auto q = softmax_probs(params.beta_edges.at(static_cast<std::size_t>(t)).data);
            double pa = q.at(static_cast<std::size_t>(preds.at(0)));
            double pb = q.at(static_cast<std::size_t>(preds.at(1)));
            // unordered-pair law of sampling twice without replacement
            logp += std::log(pa * pb / (1.0 - pa) + pb * pa / (1.0 - pb));
        }
        // baseline topology is deterministic: probability 1
    }
    for (const auto& [e, op] : cell.edge_op) {
        auto probs = softmax_probs(params.alpha.at(static_cast<std::size_t>(e)).data);
        logp += std::log(probs.at(static_cast<std::size_t>(op)));
    }
    return logp;
}

double architecture_log_prob(const CellSpec& spec, const ArchParams& params,
                             const DiscreteArch& arch) {
    return cell_log_prob(spec, arch.method, params.normal, arch.normal) +
           cell_log_prob(spec, arch.method, params.reduce, arch.reduce);
}

}  // namespace rome
