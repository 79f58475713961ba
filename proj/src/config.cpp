#include "rome/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rome {

namespace {

using ordered_json = nlohmann::ordered_json;

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> known,
                         const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) found = true;
        if (!found) throw ConfigError("config: unknown key '" + key + "' in " + context);
    }
}

template <typename T>
void maybe(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

NetworkSpec ExperimentConfig::network_spec() const {
    NetworkSpec spec;
    spec.input_dim = dataset.feature_dim;
    spec.num_classes = dataset.classes;
    spec.hidden_dim = hidden_dim;
    spec.num_cells = num_cells;
    spec.cell.num_inputs = 2;
    spec.cell.num_intermediate = num_intermediate;
    spec.cell.op_set = op_set_by_name(op_set_name);
    spec.cell.feature_dim = hidden_dim;
    return spec;
}

void ExperimentConfig::validate() const {
    search.validate();
    network_spec().validate();
    if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
    // make_dataset validates the dataset spec on use; run it early for loud errors
    if (dataset.samples < 10 * dataset.classes) {
        throw ConfigError("config: dataset.samples must be >= 10 * classes");
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    reject_unknown_keys(j, {"method", "op_set", "seed", "search", "network", "dataset", "eval",
                            "output_dir"},
                        "top level");
    ExperimentConfig cfg;
    if (j.contains("method")) cfg.search.method = method_from_name(j.at("method").get<std::string>());
    maybe(j, "op_set", cfg.op_set_name);
    if (j.contains("seed")) cfg.search.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("search")) {
        const auto& js = j.at("search");
        reject_unknown_keys(js,
                            {"K", "epochs", "batch_size", "theta_lr", "theta_momentum", "arch_lr",
                             "adam_beta1", "adam_beta2", "adam_eps", "tau_start", "tau_end",
                             "grad_clip"},
                            "search");
        maybe(js, "K", cfg.search.K);
        maybe(js, "epochs", cfg.search.epochs);
        maybe(js, "batch_size", cfg.search.batch_size);
        maybe(js, "theta_lr", cfg.search.theta_lr);
        maybe(js, "theta_momentum", cfg.search.theta_momentum);
        maybe(js, "arch_lr", cfg.search.arch_lr);
        maybe(js, "adam_beta1", cfg.search.adam_beta1);
        maybe(js, "adam_beta2", cfg.search.adam_beta2);
        maybe(js, "adam_eps", cfg.search.adam_eps);
        maybe(js, "tau_start", cfg.search.tau_start);
        maybe(js, "tau_end", cfg.search.tau_end);
        maybe(js, "grad_clip", cfg.search.grad_clip);
    }
    if (j.contains("network")) {
        const auto& jn = j.at("network");
        reject_unknown_keys(jn, {"hidden_dim", "num_cells", "num_intermediate"}, "network");
        maybe(jn, "hidden_dim", cfg.hidden_dim);
        maybe(jn, "num_cells", cfg.num_cells);
        maybe(jn, "num_intermediate", cfg.num_intermediate);
    }
    if (j.contains("dataset")) {
        const auto& jd = j.at("dataset");
        reject_unknown_keys(jd, {"kind", "classes", "samples", "noise", "feature_dim", "split_seed"},
                            "dataset");
        maybe(jd, "kind", cfg.dataset.kind);
        maybe(jd, "classes", cfg.dataset.classes);
        maybe(jd, "samples", cfg.dataset.samples);
        maybe(jd, "noise", cfg.dataset.noise);
        maybe(jd, "feature_dim", cfg.dataset.feature_dim);
        maybe(jd, "split_seed", cfg.dataset.split_seed);
    }
    if (j.contains("eval")) {
        const auto& je = j.at("eval");
        reject_unknown_keys(je, {"epochs", "batch_size", "lr", "momentum", "grad_clip"}, "eval");
        maybe(je, "epochs", cfg.eval.epochs);
        maybe(je, "batch_size", cfg.eval.batch_size);
        maybe(je, "lr", cfg.eval.lr);
        maybe(je, "momentum", cfg.eval.momentum);
        maybe(je, "grad_clip", cfg.eval.grad_clip);
    }
    maybe(j, "output_dir", cfg.output_dir);
    cfg.eval.seed = cfg.search.seed;
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["method"] = method_name(cfg.search.method);
    j["op_set"] = cfg.op_set_name;
    j["seed"] = cfg.search.seed;
    j["search"] = {{"K", cfg.search.K},
                   {"epochs", cfg.search.epochs},
                   {"batch_size", cfg.search.batch_size},
                   {"theta_lr", cfg.search.theta_lr},
                   {"theta_momentum", cfg.search.theta_momentum},
                   {"arch_lr", cfg.search.arch_lr},
                   {"adam_beta1", cfg.search.adam_beta1},
                   {"adam_beta2", cfg.search.adam_beta2},
                   {"adam_eps", cfg.search.adam_eps},
                   {"tau_start", cfg.search.tau_start},
                   {"tau_end", cfg.search.tau_end},
                   {"grad_clip", cfg.search.grad_clip}};
    j["network"] = {{"hidden_dim", cfg.hidden_dim},
                    {"num_cells", cfg.num_cells},
                    {"num_intermediate", cfg.num_intermediate}};
    j["dataset"] = {{"kind", cfg.dataset.kind},      {"classes", cfg.dataset.classes},
                    {"samples", cfg.dataset.samples}, {"noise", cfg.dataset.noise},
                    {"feature_dim", cfg.dataset.feature_dim},
                    {"split_seed", cfg.dataset.split_seed}};
    j["eval"] = {{"epochs", cfg.eval.epochs},
                 {"batch_size", cfg.eval.batch_size},
                 {"lr", cfg.eval.lr},
                 {"momentum", cfg.eval.momentum},
                 {"grad_clip", cfg.eval.grad_clip}};
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_text_file(path));
}

std::string arch_params_to_json(const ArchParams& params) {
    ordered_json j;
    j["method"] = method_name(params.method);
    j["cell"] = {{"num_inputs", params.spec.num_inputs},
                 {"num_intermediate", params.spec.num_intermediate},
                 {"feature_dim", params.spec.feature_dim}};
    std::vector<std::string> ops;
    for (OpKind k : params.spec.op_set) ops.push_back(op_name(k));
    j["cell"]["op_set"] = ops;
    ordered_json jp;
    for (const auto& [name, value] : params.named()) jp[name] = value->data;
    j["params"] = jp;
    return j.dump(2) + "\n";
}

ArchParams arch_params_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    CellSpec spec;
    spec.num_inputs = j.at("cell").at("num_inputs").get<int>();
    spec.num_intermediate = j.at("cell").at("num_intermediate").get<int>();
    spec.feature_dim = j.at("cell").at("feature_dim").get<int>();
    for (const auto& name : j.at("cell").at("op_set")) {
        spec.op_set.push_back(op_from_name(name.get<std::string>()));
    }
    SearchMethod method = method_from_name(j.at("method").get<std::string>());
    Rng dummy(0);
    ArchParams params = ArchParams::init(spec, method, dummy, 0.0);
    auto named = params.named();
    const auto& jp = j.at("params");
    if (jp.size() != named.size()) throw ConfigError("params.json: parameter count mismatch");
    for (auto& [name, value] : named) {
        auto data = jp.at(name).get<std::vector<double>>();
        if (data.size() != value->size()) {
            throw ConfigError("params.json: size mismatch for " + name);
        }
        value->data = std::move(data);
    }
    return params;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

void write_run_artifacts(const ExperimentConfig& cfg, const SearchResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const std::string dir = cfg.output_dir + "/";
    write_text_file(dir + "config.json", config_to_json(cfg));
    write_text_file(dir + "params.json", arch_params_to_json(result.arch));
    write_text_file(dir + "genotype.json", genotype_to_json(result.genotype));
    for (const auto& cell : result.genotype.cells) {
        write_text_file(dir + "genotype_" + cell.type + ".dot", genotype_to_dot(cell));
    }
    write_text_file(dir + "trace.csv", result.trace.to_csv());

    CollapseMetrics cm = collapse_metrics(result.genotype);
    ordered_json report;
    report["library_version"] = kLibraryVersion;
    report["seed"] = cfg.search.seed;
    report["method"] = method_name(cfg.search.method);
    report["final_train_loss"] =
        result.trace.records.empty() ? 0.0 : result.trace.records.back().train_loss;
    report["final_val_loss"] =
        result.trace.records.empty() ? 0.0 : result.trace.records.back().val_loss;
    report["parameterless_fraction"] = cm.parameterless_fraction;
    report["skip_count"] = cm.skip_count;
    report["op_histogram"] = cm.op_histogram;
    write_text_file(dir + "report.json", report.dump(2) + "\n");
}

}  // namespace rome
