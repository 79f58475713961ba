#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rome/space.hpp"

namespace rome {

// Discrete derived architecture: two (predecessor, op) choices per
// intermediate node, one cell entry per cell type.
struct Genotype {
    struct Choice {
        int pred = 0;
        std::string op;
        bool operator==(const Choice&) const = default;
    };
    struct Cell {
        std::string type;  // "normal" or "reduce"
        std::vector<std::array<Choice, 2>> nodes;
        bool operator==(const Cell&) const = default;
    };

    std::string version;  // rome_v1 | rome_v2 | gdas_baseline
    std::vector<Cell> cells;
    bool operator==(const Genotype&) const = default;
};

// Factor-wise most probable architecture: each factor of the law is
// maximized independently (per-node topology term, per-edge op softmax). v1
// picks the argmax predecessor pair per node, v2 the top-2 edges by softmax(beta);
// the baseline applies the DARTS retention rule (two in-edges with the
// largest max-over-ops alpha, zero op excluded from the maximization).
// All ties break toward the lowest index.
Genotype derive_genotype(const CellSpec& spec, const ArchParams& params);

// Genotype of one concrete sample (used for traces and enumeration tests).
Genotype genotype_from_arch(const CellSpec& spec, const DiscreteArch& arch);

struct CollapseMetrics {
    double parameterless_fraction = 0.0;
    int skip_count = 0;
    std::map<std::string, int> op_histogram;
};

CollapseMetrics collapse_metrics(const Genotype& g);

// Canonical persistence: {version, cells:[{type, nodes:[[[pred,op],...]]}]}.
std::string genotype_to_json(const Genotype& g);
Genotype genotype_from_json(const std::string& text);

// One digraph per cell; input nodes labelled c_{k-2}, c_{k-1}.
std::string genotype_to_dot(const Genotype::Cell& cell);

}  // namespace rome
