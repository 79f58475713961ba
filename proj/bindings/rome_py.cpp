#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "rome/config.hpp"
#include "rome/stats.hpp"

namespace py = pybind11;
using namespace rome;

namespace {

// Flat dict-friendly views of the core operations; heavier structures cross
// the boundary as JSON strings so the schemas stay identical to the CLI's.

std::string run_search_json(const std::string& config_json) {
    ExperimentConfig cfg = config_from_json(config_json);
    DataSplits data = make_dataset(cfg.dataset);
    SearchResult result = run_search(cfg.network_spec(), cfg.search, data);
    return genotype_to_json(result.genotype);
}

double eval_genotype_json(const std::string& config_json, const std::string& genotype_json) {
    ExperimentConfig cfg = config_from_json(config_json);
    DataSplits data = make_dataset(cfg.dataset);
    Genotype g = genotype_from_json(genotype_json);
    return train_genotype(cfg.network_spec(), g, data, cfg.eval).test_accuracy;
}

std::vector<double> sample_gumbel_py(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_gumbel(n, rng);
}

std::vector<std::size_t> gumbel_max_draws(const std::vector<double>& logits, long draws,
                                          std::uint64_t seed) {
    Rng rng(seed);
    auto logp = log_softmax_vals(logits);
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(draws));
    for (long i = 0; i < draws; ++i) out.push_back(gumbel_max(logp, rng));
    return out;
}

std::map<std::pair<std::size_t, std::size_t>, double> enumerate_pairs(
    const std::vector<double>& p) {
    return enumerate_without_replacement(p);
}

std::string gumbel_top2_test(const std::vector<double>& beta, long draws, std::uint64_t seed) {
    Rng rng(seed);
    return test_gumbel_top2_equivalence(beta, draws, rng).to_json();
}

std::string dot_from_genotype(const std::string& genotype_json) {
    Genotype g = genotype_from_json(genotype_json);
    std::string out;
    for (const auto& cell : g.cells) out += genotype_to_dot(cell);
    return out;
}

std::string collapse_metrics_json(const std::string& genotype_json) {
    CollapseMetrics m = collapse_metrics(genotype_from_json(genotype_json));
    nlohmann::ordered_json j;
    j["parameterless_fraction"] = m.parameterless_fraction;
    j["skip_count"] = m.skip_count;
    j["op_histogram"] = m.op_histogram;
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_rome, m) {
    m.doc() = "Single-path differentiable architecture search core";
    m.attr("__version__") = kLibraryVersion;

    m.def("sample_gumbel", &sample_gumbel_py, py::arg("n"), py::arg("seed"),
          "n i.i.d. Gumbel(0,1) variates, reproducible from the seed");
    m.def("gumbel_max_draws", &gumbel_max_draws, py::arg("logits"), py::arg("draws"),
          py::arg("seed"), "Hard Gumbel-Max category indices");
    m.def("top2_marginal_closed_form", &top2_marginal_closed_form, py::arg("p"), py::arg("j"));
    m.def("enumerate_without_replacement", &enumerate_pairs, py::arg("p"),
          "Exact unordered-pair distribution of two draws without replacement");
    m.def("test_gumbel_top2_equivalence", &gumbel_top2_test, py::arg("beta"), py::arg("draws"),
          py::arg("seed"), "JSON distribution-test report");
    m.def("run_search", &run_search_json, py::arg("config_json"),
          "Run a full search; returns the genotype as JSON");
    m.def("eval_genotype", &eval_genotype_json, py::arg("config_json"), py::arg("genotype_json"),
          "Train a genotype from scratch; returns test accuracy");
    m.def("genotype_to_dot", &dot_from_genotype, py::arg("genotype_json"));
    m.def("collapse_metrics", &collapse_metrics_json, py::arg("genotype_json"));
    m.def("default_config", []() {
        return config_to_json(ExperimentConfig{});
    });
}
