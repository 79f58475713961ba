#pragma once

#include <string>

#include "rome/bilevel.hpp"
#include "rome/dataset.hpp"

namespace rome {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Everything a run needs, serializable; a run directory always carries the
// exact config that produced it. Unknown JSON keys are errors.
struct ExperimentConfig {
    SearchConfig search;
    DatasetSpec dataset;
    std::string op_set_name = "S0";
    int hidden_dim = 8;
    int num_cells = 4;
    int num_intermediate = 4;
    EvalConfig eval;
    std::string output_dir = "run";

    NetworkSpec network_spec() const;
    void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Architecture-parameter persistence (params.json), shape-checked on load
// against the config's cell spec and method.
std::string arch_params_to_json(const ArchParams& params);
ArchParams arch_params_from_json(const std::string& text);

// Writes config.json, params.json, genotype.json, genotype_<type>.dot,
// trace.csv and report.json into cfg.output_dir.
void write_run_artifacts(const ExperimentConfig& cfg, const SearchResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rome
