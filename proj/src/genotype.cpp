#include "rome/genotype.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace rome {

namespace {

using ordered_json = nlohmann::ordered_json;

int argmax_op(const std::vector<double>& probs, const std::vector<OpKind>& op_set,
              bool exclude_zero) {
    int best = -1;
    for (std::size_t o = 0; o < probs.size(); ++o) {
        if (exclude_zero && op_set[o] == OpKind::Zero) continue;
        if (best < 0 || probs[o] > probs[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(o);
        }
    }
    if (best < 0) throw ContractError("derive_genotype: op set has only the zero op");
    return best;
}

Genotype::Cell derive_cell(const CellSpec& spec, SearchMethod method,
                           const CellArchParams& params, const std::string& type) {
    Genotype::Cell cell;
    cell.type = type;
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        const int t = j - spec.first_intermediate();
        std::vector<int> preds;
        if (method == SearchMethod::RomeV1) {
            auto pairs = spec.predecessor_pairs(j);
            const auto& beta = params.beta_pairs.at(static_cast<std::size_t>(t)).data;
            std::size_t best = argmax_lowest(beta);
            preds = {pairs.at(best)[0], pairs.at(best)[1]};
        } else if (method == SearchMethod::RomeV2) {
            const auto& beta = params.beta_edges.at(static_cast<std::size_t>(t)).data;
            auto [a, b] = top2_lowest(beta);
            preds = {static_cast<int>(a), static_cast<int>(b)};
            std::sort(preds.begin(), preds.end());
        } else {
            // DARTS rule: rank predecessors by max-over-ops alpha, zero excluded.
            std::vector<std::pair<double, int>> scored;
            for (int i = 0; i < j; ++i) {
                const auto& a = params.alpha.at(static_cast<std::size_t>(spec.edge_index(i, j)));
                auto probs = softmax_probs(a.data);
                int o = argmax_op(probs, spec.op_set, /*exclude_zero=*/true);
                scored.emplace_back(probs[static_cast<std::size_t>(o)], i);
            }
            // stable: equal scores keep predecessor order, i.e. lowest index first
            std::stable_sort(scored.begin(), scored.end(),
                             [](const auto& x, const auto& y) { return x.first > y.first; });
            preds = {scored[0].second, scored[1].second};
            std::sort(preds.begin(), preds.end());
        }
        std::array<Genotype::Choice, 2> choices;
        for (std::size_t c = 0; c < 2; ++c) {
            int i = preds.at(c);
            const auto& a = params.alpha.at(static_cast<std::size_t>(spec.edge_index(i, j)));
            auto probs = softmax_probs(a.data);
            bool exclude_zero = (method == SearchMethod::GdasBaseline);
            int o = argmax_op(probs, spec.op_set, exclude_zero);
            choices[c] = {i, op_name(spec.op_set.at(static_cast<std::size_t>(o)))};
        }
        cell.nodes.push_back(choices);
    }
    return cell;
}

}  // namespace

Genotype derive_genotype(const CellSpec& spec, const ArchParams& params) {
    Genotype g;
    g.version = method_name(params.method);
    g.cells.push_back(derive_cell(spec, params.method, params.normal, "normal"));
    g.cells.push_back(derive_cell(spec, params.method, params.reduce, "reduce"));
    return g;
}

Genotype genotype_from_arch(const CellSpec& spec, const DiscreteArch& arch) {
    Genotype g;
    g.version = method_name(arch.method);
    for (const auto& [cell, type] :
         {std::pair{&arch.normal, "normal"}, std::pair{&arch.reduce, "reduce"}}) {
        Genotype::Cell c;
        c.type = type;
        for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
            const auto& preds = cell->node_preds.at(static_cast<std::size_t>(j - spec.first_intermediate()));
            if (preds.size() != 2) {
                throw ContractError("genotype_from_arch: node does not have exactly 2 in-edges");
            }
            std::array<Genotype::Choice, 2> choices;
            for (std::size_t k = 0; k < 2; ++k) {
                int op = cell->edge_op.at(spec.edge_index(preds[k], j));
                choices[k] = {preds[k], op_name(spec.op_set.at(static_cast<std::size_t>(op)))};
            }
            c.nodes.push_back(choices);
        }
        g.cells.push_back(std::move(c));
    }
    return g;
}

CollapseMetrics collapse_metrics(const Genotype& g) {
    CollapseMetrics m;
    int total = 0, parameterless = 0;
    for (const auto& cell : g.cells) {
        for (const auto& node : cell.nodes) {
            for (const auto& choice : node) {
                ++total;
                m.op_histogram[choice.op] += 1;
                OpKind k = op_from_name(choice.op);
                if (!op_is_parametric(k)) ++parameterless;
                if (k == OpKind::Skip) ++m.skip_count;
            }
        }
    }
    m.parameterless_fraction = total ? static_cast<double>(parameterless) / total : 0.0;
    return m;
}

std::string genotype_to_json(const Genotype& g) {
    ordered_json j;
    j["version"] = g.version;
    j["cells"] = ordered_json::array();
    for (const auto& cell : g.cells) {
        ordered_json jc;
        jc["type"] = cell.type;
        jc["nodes"] = ordered_json::array();
        for (const auto& node : cell.nodes) {
            ordered_json jn = ordered_json::array();
            for (const auto& choice : node) jn.push_back({choice.pred, choice.op});
            jc["nodes"].push_back(jn);
        }
        j["cells"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

Genotype genotype_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    Genotype g;
    g.version = j.at("version").get<std::string>();
    for (const auto& jc : j.at("cells")) {
        Genotype::Cell cell;
        cell.type = jc.at("type").get<std::string>();
        for (const auto& jn : jc.at("nodes")) {
            if (jn.size() != 2) throw ConfigError("genotype: node must have exactly 2 choices");
            std::array<Genotype::Choice, 2> choices;
            for (std::size_t k = 0; k < 2; ++k) {
                choices[k].pred = jn[k][0].get<int>();
                choices[k].op = jn[k][1].get<std::string>();
            }
            cell.nodes.push_back(choices);
        }
        g.cells.push_back(std::move(cell));
    }
    return g;
}

std::string genotype_to_dot(const Genotype::Cell& cell) {
    std::ostringstream out;
    out << "digraph " << cell.type << " {\n";
    out << "  rankdir=LR;\n";
    out << "  \"c_{k-2}\" [shape=box];\n";
    out << "  \"c_{k-1}\" [shape=box];\n";
    auto node_label = [&](int id) -> std::string {
        if (id == 0) return "c_{k-2}";
        if (id == 1) return "c_{k-1}";
        return std::to_string(id - 2);
    };
    for (std::size_t t = 0; t < cell.nodes.size(); ++t) {
        out << "  \"" << t << "\";\n";
        for (const auto& choice : cell.nodes[t]) {
            out << "  \"" << node_label(choice.pred) << "\" -> \"" << t << "\" [label=\""
                << choice.op << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace rome
