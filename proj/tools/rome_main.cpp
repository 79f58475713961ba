#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rome/config.hpp"
#include "rome/stats.hpp"

namespace {

using namespace rome;

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

int cmd_search(const std::string& config_path, std::optional<std::uint64_t> seed_override) {
    ExperimentConfig cfg = load_config(config_path);
    if (seed_override) {
        cfg.search.seed = *seed_override;
        cfg.eval.seed = *seed_override;
    }
    DataSplits data = make_dataset(cfg.dataset);
    SearchResult result = run_search(cfg.network_spec(), cfg.search, data);
    write_run_artifacts(cfg, result);
    std::cout << "run written to " << cfg.output_dir << "\n"
              << genotype_to_json(result.genotype);
    return 0;
}

int cmd_derive(const std::string& run_dir) {
    ArchParams params = arch_params_from_json(read_text_file(run_dir + "/params.json"));
    Genotype g = derive_genotype(params.spec, params);
    std::string json = genotype_to_json(g);
    write_text_file(run_dir + "/genotype.json", json);
    std::cout << json;
    return 0;
}

int cmd_eval(const std::string& run_dir, std::optional<std::uint64_t> seed_override) {
    ExperimentConfig cfg = config_from_json(read_text_file(run_dir + "/config.json"));
    if (seed_override) cfg.eval.seed = *seed_override;
    Genotype g = genotype_from_json(read_text_file(run_dir + "/genotype.json"));
    DataSplits data = make_dataset(cfg.dataset);
    EvalResult res = train_genotype(cfg.network_spec(), g, data, cfg.eval);
    nlohmann::ordered_json j;
    j["test_accuracy"] = res.test_accuracy;
    j["final_train_loss"] = res.final_train_loss;
    std::string out = j.dump(2) + "\n";
    write_text_file(run_dir + "/eval.json", out);
    std::cout << out;
    return 0;
}

int cmd_verify_gumbel(int n, long draws, std::uint64_t seed) {
    Rng rng(seed, 0x6B);
    bool ok = true;
    std::cout << "{ \"tests\": [\n";
    for (int t = 0; t < 20; ++t) {
        std::vector<double> beta(static_cast<std::size_t>(n));
        for (double& b : beta) b = rng.uniform(-2.0, 2.0);
        DistributionTestResult r = test_gumbel_top2_equivalence(beta, draws, rng);
        bool pass = r.tv_distance < 0.01;
        ok = ok && pass;
        std::cout << "  {\"n\": " << n << ", \"tv\": " << r.tv_distance
                  << ", \"chi_square\": " << r.chi_square << ", \"pass\": " << (pass ? "true" : "false")
                  << "}" << (t + 1 < 20 ? "," : "") << "\n";
    }
    std::cout << "], \"pass\": " << (ok ? "true" : "false") << " }\n";
    return ok ? 0 : 1;
}

int cmd_variance_study(const std::string& k_list, int replicates, std::uint64_t seed) {
    // Frozen snapshot of a small supernet on a fixed synthetic batch.
    DatasetSpec dspec;
    dspec.kind = "spirals";
    dspec.split_seed = seed;
    DataSplits data = make_dataset(dspec);

    ExperimentConfig cfg;
    cfg.op_set_name = "S3";
    NetworkSpec spec = cfg.network_spec();
    Rng rng(seed, 0x5D);
    ArchParams arch = ArchParams::init(spec.cell, SearchMethod::RomeV2, rng, 0.5);
    WeightMap weights = init_supernet_weights(spec, rng);
    std::vector<std::size_t> order(data.val.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Batch batch = take_batch(data.val, order, 0, std::min<std::size_t>(64, data.val.size()));

    std::vector<int> ks = parse_int_list(k_list);
    VarianceReport report = gradient_variance_study(spec, arch, weights, batch, ks, replicates,
                                                    1.0, rng);
    std::cout << report.to_json() << "\n";
    bool ok = true;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] == 1) continue;
        double expect = 1.0 / ks[i];
        if (report.ratio_to_k1[i] < 0.7 * expect || report.ratio_to_k1[i] > 1.3 * expect) ok = false;
    }
    return ok ? 0 : 1;
}

int cmd_collapse_study(const std::string& config_path, const std::string& seeds_csv, int threads) {
    ExperimentConfig cfg = load_config(config_path);
    DataSplits data = make_dataset(cfg.dataset);
    std::vector<std::uint64_t> seeds = parse_u64_list(seeds_csv);
    CollapseReport report =
        collapse_study(cfg.network_spec(), cfg.search, data, seeds,
                       {SearchMethod::GdasBaseline, SearchMethod::RomeV2}, cfg.eval.epochs,
                       threads);
    std::string out = report.to_json() + "\n";
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/collapse_report.json", out);
    std::cout << out;
    return 0;
}

int cmd_export_dot(const std::string& genotype_path, const std::string& out_dir) {
    Genotype g = genotype_from_json(read_text_file(genotype_path));
    for (const auto& cell : g.cells) {
        std::string dot = genotype_to_dot(cell);
        if (out_dir.empty()) {
            std::cout << dot;
        } else {
            std::filesystem::create_directories(out_dir);
            write_text_file(out_dir + "/genotype_" + cell.type + ".dot", dot);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robustified single-path differentiable architecture search"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool deterministic = false;
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--threads", threads, "Seed/replicate-level parallelism");
    app.add_flag("--deterministic", deterministic, "Force single-threaded, fixed-order runs");

    std::string config_path, run_dir, genotype_path, out_dir;
    std::string k_list = "1,2,4,8", seeds_csv = "1,2,3,4,5";
    int n = 5, replicates = 500;
    long draws = 1000000;

    auto* search = app.add_subcommand("search", "Run architecture search from a config file");
    search->add_option("config", config_path, "Path to config JSON")->required();

    auto* derive = app.add_subcommand("derive", "Re-derive the genotype from saved parameters");
    derive->add_option("run_dir", run_dir, "Run directory")->required();

    auto* eval = app.add_subcommand("eval", "Train the derived genotype from scratch");
    eval->add_option("run_dir", run_dir, "Run directory")->required();

    auto* verify = app.add_subcommand("verify-gumbel", "Top-2 sampling distribution tests");
    verify->add_option("--n", n, "Categories per simplex");
    verify->add_option("--draws", draws, "Monte Carlo draws per test");

    auto* variance = app.add_subcommand("variance-study", "Gradient variance vs sample count K");
    variance->add_option("--k-list", k_list, "Comma-separated K values (must start with 1)");
    variance->add_option("--replicates", replicates, "Replicates per K");

    auto* collapse = app.add_subcommand("collapse-study", "Paired collapse comparison");
    collapse->add_option("config", config_path, "Path to config JSON")->required();
    collapse->add_option("--seeds", seeds_csv, "Comma-separated seeds");

    auto* export_dot = app.add_subcommand("export-dot", "Render a genotype as Graphviz DOT");
    export_dot->add_option("genotype", genotype_path, "Path to genotype.json")->required();
    export_dot->add_option("--out", out_dir, "Output directory (default: stdout)");

    CLI11_PARSE(app, argc, argv);
    if (deterministic) threads = 1;

    try {
        if (search->parsed()) return cmd_search(config_path, seed);
        if (derive->parsed()) return cmd_derive(run_dir);
        if (eval->parsed()) return cmd_eval(run_dir, seed);
        if (verify->parsed()) return cmd_verify_gumbel(n, draws, seed.value_or(0));
        if (variance->parsed()) return cmd_variance_study(k_list, replicates, seed.value_or(0));
        if (collapse->parsed()) return cmd_collapse_study(config_path, seeds_csv, threads);
        if (export_dot->parsed()) return cmd_export_dot(genotype_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
