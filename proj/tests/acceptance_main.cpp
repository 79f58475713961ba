// Acceptance gate: every release-blocking property checked in one binary,
// one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rome/bilevel.hpp"
#include "rome/config.hpp"
#include "rome/stats.hpp"

using namespace rome;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = 0.05 + rng.uniform();
        total += v;
    }
    for (double& v : p) v /= total;
    return p;
}

NetworkSpec make_spec(const std::string& op_set, int num_cells, int num_intermediate,
                      int input_dim = 8, int classes = 3, int hidden = 8) {
    NetworkSpec spec;
    spec.input_dim = input_dim;
    spec.num_classes = classes;
    spec.hidden_dim = hidden;
    spec.num_cells = num_cells;
    spec.cell.op_set = op_set_by_name(op_set);
    spec.cell.num_intermediate = num_intermediate;
    spec.validate();
    return spec;
}

// --- criterion 1: Gumbel-Top2 sampling is exactly "two without replacement"
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xA001);
    const long draws = 1000000;
    const double tv_tol = 0.01;      // pinned
    const double marg_tol = 1e-2;    // pinned
    double worst_tv = 0.0, worst_marg = 0.0;
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 3 + static_cast<std::size_t>(rep % 4);  // 3..6
        auto p = random_simplex(n, rng);
        std::vector<double> beta(n);
        for (std::size_t i = 0; i < n; ++i) beta[i] = std::log(p[i]);
        auto r = test_gumbel_top2_equivalence(beta, draws, rng);
        worst_tv = std::max(worst_tv, r.tv_distance);
        if (r.tv_distance >= tv_tol) ok = false;
        // empirical inclusion marginals against the closed form
        auto oracle = enumerate_without_replacement(softmax_probs(beta));
        std::map<std::size_t, double> emp;
        std::size_t idx = 0;
        for (const auto& [key, prob] : oracle) {
            double freq = static_cast<double>(r.counts[idx]) / static_cast<double>(r.draws);
            emp[key.first] += freq;
            emp[key.second] += freq;
            ++idx;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double err = std::abs(emp[j] - top2_marginal_closed_form(softmax_probs(beta), j));
            worst_marg = std::max(worst_marg, err);
            if (err >= marg_tol) ok = false;
        }
    }
    double secs = seconds_since(t0);
    if (secs > 120.0) ok = false;
    std::ostringstream d;
    d << "20 simplices (n=3..6) x 1e6 draws; worst TV " << worst_tv << " (tol " << tv_tol
      << "), worst marginal err " << worst_marg << " (tol " << marg_tol << "), " << secs << "s";
    report(1, "Gumbel-Top2 equals sampling twice without replacement", ok, d.str());
}

// --- criterion 2: Gumbel-Max reproduces the softmax law
void criterion_2() {
    Rng rng(0xA002);
    const long draws = 100000;
    bool ok = true;
    double worst_z = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 2 + static_cast<std::size_t>(rep % 5);  // 2..6
        std::vector<double> logits(n);
        for (double& v : logits) v = rng.uniform(-2.0, 2.0);
        auto r = test_gumbel_max_law(logits, draws, rng);
        auto p = softmax_probs(logits);
        for (std::size_t i = 0; i < n; ++i) {
            double emp = static_cast<double>(r.counts[i]) / static_cast<double>(draws);
            double sigma = std::sqrt(p[i] * (1.0 - p[i]) / static_cast<double>(draws));
            double z = std::abs(emp - p[i]) / sigma;
            worst_z = std::max(worst_z, z);
            if (z >= 3.0) ok = false;
        }
    }
    std::ostringstream d;
    d << "20 logit vectors x 1e5 draws; worst |z| " << worst_z << " (tol 3 sigma)";
    report(2, "Gumbel-Max argmax frequencies match softmax probabilities", ok, d.str());
}

// --- criterion 3: every sampled topology has exactly 2 in-edges per node
void criterion_3() {
    CellSpec spec;
    spec.op_set = op_set_by_name("S0");
    bool ok = true;
    long violations = 0;
    for (SearchMethod m : {SearchMethod::RomeV1, SearchMethod::RomeV2}) {
        Rng init(0xA003 + static_cast<std::uint64_t>(m));
        ArchParams params = ArchParams::init(spec, m, init, 0.8);
        Rng rng(0xA013);
        for (long rep = 0; rep < 100000; ++rep) {
            DiscreteCell cell = sample_cell_hard(spec, m, params.normal, rng);
            for (int t = 0; t < spec.num_intermediate; ++t) {
                const auto& preds = cell.node_preds[static_cast<std::size_t>(t)];
                bool good = preds.size() == 2 && preds[0] < preds[1] && preds[0] >= 0 &&
                            preds[1] < t + spec.first_intermediate();
                if (!good) ++violations;
            }
            if (cell.num_selected_edges() != 8) ++violations;
        }
    }
    if (violations != 0) ok = false;
    std::ostringstream d;
    d << "1e5 samples per version; " << violations << " violations (tol 0)";
    report(3, "sampled cells always have exactly 2 in-edges per node", ok, d.str());
}

// --- criterion 4: structural constants of the search space
void criterion_4() {
    CellSpec spec;
    spec.op_set = op_set_by_name("S0");
    Rng rng(0xA004);
    ArchParams v1 = ArchParams::init(spec, SearchMethod::RomeV1, rng);
    ArchParams v2 = ArchParams::init(spec, SearchMethod::RomeV2, rng);
    std::size_t pairs = 0;
    for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
        pairs += spec.predecessor_pairs(j).size();
    }
    DiscreteCell cell = sample_cell_hard(spec, SearchMethod::RomeV2, v2.normal, rng);
    bool ok = spec.num_edges() == 14 && cell.num_selected_edges() == 8 && pairs == 20 &&
              v1.normal.num_topology_scalars() + v1.reduce.num_topology_scalars() == 40 &&
              v2.normal.num_topology_scalars() + v2.reduce.num_topology_scalars() == 28;
    std::ostringstream d;
    d << "edges " << spec.num_edges() << "/14, retained " << cell.num_selected_edges()
      << "/8, pairs " << pairs << "/20, scalars "
      << v1.normal.num_topology_scalars() + v1.reduce.num_topology_scalars() << "/40 vs "
      << v2.normal.num_topology_scalars() + v2.reduce.num_topology_scalars() << "/28";
    report(4, "structural constants are exact", ok, d.str());
}

// --- criterion 5: reverse-mode gradients match central finite differences
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xA005);
    const double tol = 1e-4;  // pinned relative error
    double worst = 0.0;
    bool ok = true;
    for (int point = 0; point < 100; ++point) {
        // random composite: x -> relu(x W1) W2 -> softmax/cross-entropy-like
        const std::size_t n = 3 + static_cast<std::size_t>(point % 3);
        std::vector<double> x0(n * n);
        for (double& v : x0) v = rng.uniform(-1.5, 1.5);
        std::vector<double> w2(n);
        for (double& v : w2) v = rng.uniform(-1.0, 1.0);
        auto loss_fn = [&](const std::vector<double>& flat) {
            Graph g;
            Tensor W = g.leaf({n, n}, flat, false);
            Tensor x = g.constant({1, n}, std::vector<double>(w2.begin(), w2.end()));
            Tensor h = g.relu(g.matmul(x, W));
            Tensor logits = g.matmul(h, g.constant({n, 1}, w2));
            Tensor out = g.log(g.add(g.exp(g.sum(logits)), g.scalar_constant(1.0)));
            return out.scalar();
        };
        Graph g;
        Tensor W = g.leaf({n, n}, x0, true);
        Tensor x = g.constant({1, n}, std::vector<double>(w2.begin(), w2.end()));
        Tensor h = g.relu(g.matmul(x, W));
        Tensor logits = g.matmul(h, g.constant({n, 1}, w2));
        Tensor out = g.log(g.add(g.exp(g.sum(logits)), g.scalar_constant(1.0)));
        g.backward(out);
        const auto& ad = W.grad();
        std::vector<double> flat = x0;
        for (std::size_t i = 0; i < flat.size(); ++i) {
            const double hstep = 1e-5;
            double orig = flat[i];
            flat[i] = orig + hstep;
            double fp = loss_fn(flat);
            flat[i] = orig - hstep;
            double fm = loss_fn(flat);
            flat[i] = orig;
            double fd = (fp - fm) / (2.0 * hstep);
            double err = std::abs(ad[i] - fd) / (1.0 + std::abs(ad[i]) + std::abs(fd));
            worst = std::max(worst, err);
            if (err >= tol) ok = false;
        }
    }
    double secs = seconds_since(t0);
    if (secs > 30.0) ok = false;
    std::ostringstream d;
    d << "100 random points; worst relative error " << worst << " (tol " << tol << "), " << secs
      << "s";
    report(5, "autodiff gradients match finite differences", ok, d.str());
}

}  // namespace

// remaining criteria are defined in a second block to keep functions short
namespace {

// --- criterion 6: straight-through forward is one-hot; gradient equals soft path
void criterion_6() {
    Rng rng(0xA006);
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 3 + static_cast<std::size_t>(rep % 4);
        std::vector<double> alpha(n), w(n);
        for (double& v : alpha) v = rng.uniform(-1.0, 1.0);
        for (double& v : w) v = rng.uniform(-1.0, 1.0);
        std::vector<double> noise = sample_gumbel(n, rng);

        Graph g1;
        Tensor a1 = g1.leaf({n}, alpha, true);
        CategoricalSample s1 = gumbel_softmax_with_noise(a1, 0.7, noise);
        double ones = 0.0;
        for (double v : s1.st.value()) {
            if (v != 0.0 && v != 1.0) ok = false;
            ones += v;
        }
        if (ones != 1.0) ok = false;
        g1.backward(g1.sum(g1.mul(s1.st, g1.constant({n}, w))));

        Graph g2;
        Tensor a2 = g2.leaf({n}, alpha, true);
        CategoricalSample s2 = gumbel_softmax_with_noise(a2, 0.7, noise);
        g2.backward(g2.sum(g2.mul(s2.soft, g2.constant({n}, w))));
        if (a1.grad() != a2.grad()) ok = false;  // bitwise
    }
    report(6, "straight-through: one-hot forward, soft gradient (bitwise)", ok,
           "20 cases, tau 0.7, frozen noise");
}

// --- criterion 7: K-sample gradient variance scales as 1/K
void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    NetworkSpec spec = make_spec("S2", 2, 2);
    DatasetSpec dspec;
    dspec.samples = 120;
    DataSplits data = make_dataset(dspec);
    Rng init(0xA007);
    ArchParams arch = ArchParams::init(spec.cell, SearchMethod::RomeV2, init, 0.3);
    Rng wrng(0xA017);
    WeightMap weights = init_supernet_weights(spec, wrng);
    Batch batch = take_batch(data.val, shuffled_indices(data.val.size(), wrng), 0, 32);
    Rng rng(0xA027);
    const int replicates = 500;  // pinned minimum
    VarianceReport rep =
        gradient_variance_study(spec, arch, weights, batch, {1, 2, 4, 8}, replicates, 1.0, rng);
    bool ok = true;
    std::ostringstream d;
    d << replicates << " replicates;";
    for (std::size_t i = 1; i < rep.k_values.size(); ++i) {
        int K = rep.k_values[i];
        double lo = 0.7 / K, hi = 1.3 / K;  // pinned band
        d << " K=" << K << " ratio " << rep.ratio_to_k1[i] << " in [" << lo << "," << hi << "]";
        if (!(rep.ratio_to_k1[i] >= lo && rep.ratio_to_k1[i] <= hi)) ok = false;
    }
    double secs = seconds_since(t0);
    d << ", " << secs << "s";
    if (secs > 600.0) ok = false;
    report(7, "architecture-gradient variance scales as 1/K", ok, d.str());
}

// --- criterion 8: alpha update averages over K; theta update sums over K
void criterion_8() {
    NetworkSpec spec = make_spec("S3", 2, 4);
    DatasetSpec dspec;
    dspec.samples = 120;
    DataSplits data = make_dataset(dspec);
    Rng init(0xA008);
    ArchParams arch = ArchParams::init(spec.cell, SearchMethod::RomeV2, init, 0.5);
    Rng wrng(0xA018);
    WeightMap weights = init_supernet_weights(spec, wrng);
    Batch batch = take_batch(data.train, shuffled_indices(data.train.size(), wrng), 0, 32);
    const int K = 3;
    bool ok = true;

    Rng ra(0xA028), rb(0xA028);
    WeightsGradient wk = weights_gradient(spec, arch, weights, batch, K, 1.0, ra);
    GradMap wsum;
    for (int k = 0; k < K; ++k) {
        WeightsGradient w1 = weights_gradient(spec, arch, weights, batch, 1, 1.0, rb);
        for (const auto& [name, buf] : w1.grads) {
            auto& acc = wsum[name];
            if (acc.empty()) acc.assign(buf.size(), 0.0);
            for (std::size_t i = 0; i < buf.size(); ++i) acc[i] += buf[i];
        }
    }
    for (const auto& [name, buf] : wk.grads) {
        if (buf != wsum.at(name)) ok = false;  // unnormalized sum, bitwise
    }

    Rng rc(0xA038), rd(0xA038);
    ArchGradient ak = arch_gradient(spec, arch, weights, batch, K, 1.0, rc);
    GradMap asum;
    for (int k = 0; k < K; ++k) {
        ArchGradient a1 = arch_gradient(spec, arch, weights, batch, 1, 1.0, rd);
        for (const auto& [name, buf] : a1.grads) {
            auto& acc = asum[name];
            if (acc.empty()) acc.assign(buf.size(), 0.0);
            for (std::size_t i = 0; i < buf.size(); ++i) acc[i] += buf[i];
        }
    }
    bool any_scaled = false;
    for (auto& [name, buf] : asum) {
        for (double& v : buf) v /= static_cast<double>(K);
    }
    for (const auto& [name, buf] : ak.grads) {
        if (buf != asum.at(name)) ok = false;  // mean, bitwise after the same division
        for (double v : buf) {
            if (v != 0.0) any_scaled = true;
        }
    }
    if (!any_scaled) ok = false;
    report(8, "1/K-averaged alpha gradient vs unnormalized-summed theta gradient", ok,
           "K=3 replayed as 3 sequential single-sample passes on a frozen stream");
}

// --- criterion 9: single-path evaluation and zero gradients off the path
void criterion_9() {
    NetworkSpec spec = make_spec("S3", 4, 4);
    DatasetSpec dspec;
    dspec.samples = 120;
    DataSplits data = make_dataset(dspec);
    Rng init(0xA009);
    ArchParams arch = ArchParams::init(spec.cell, SearchMethod::RomeV2, init, 0.5);
    Rng wrng(0xA019);
    WeightMap weights = init_supernet_weights(spec, wrng);
    Batch batch = take_batch(data.train, shuffled_indices(data.train.size(), wrng), 0, 16);
    bool ok = true;
    std::ostringstream d;

    Rng rng(0xA029);
    Graph g;
    BoundArchParams bound_arch = bind_arch_params(g, arch, false);
    TensorMap bound_w = bind_weights(g, weights, true);
    SampledArchitecture live = sample_architecture(spec.cell, arch.method, bound_arch, 1.0, rng);
    Tensor x = g.constant({16, 8}, batch.features);
    Rng noise(0);
    ForwardResult fwd =
        forward_network(g, spec, bound_w, plan_from_sample(spec.cell, live.normal),
                        plan_from_sample(spec.cell, live.reduce), x, noise);
    for (int c = 0; c < spec.num_cells; ++c) {
        if (fwd.ops_evaluated_per_cell[c] != 8) ok = false;
    }
    g.backward(g.cross_entropy(fwd.logits, batch.labels));

    long unselected_nonzero = 0, unselected_total = 0;
    for (int c = 0; c < spec.num_cells; ++c) {
        const DiscreteCell& hard = spec.is_reduce_cell(c) ? live.reduce.hard : live.normal.hard;
        for (int e = 0; e < spec.cell.num_edges(); ++e) {
            for (std::size_t o = 0; o < spec.cell.op_set.size(); ++o) {
                bool selected =
                    hard.edge_op.count(e) && hard.edge_op.at(e) == static_cast<int>(o);
                if (selected) continue;
                std::string prefix = "cell" + std::to_string(c) + ".e" + std::to_string(e) +
                                     ".op" + std::to_string(o) + ".";
                for (const auto& [name, tensor] : bound_w) {
                    if (name.rfind(prefix, 0) != 0) continue;
                    ++unselected_total;
                    for (double v : tensor.grad()) {
                        if (v != 0.0) ++unselected_nonzero;
                    }
                }
            }
        }
    }
    if (unselected_total == 0 || unselected_nonzero != 0) ok = false;

    // baseline contrast: 14 candidate edges evaluated
    Rng binit(0xA039);
    ArchParams base = ArchParams::init(spec.cell, SearchMethod::GdasBaseline, binit, 0.5);
    Graph gb;
    BoundArchParams bb = bind_arch_params(gb, base, false);
    TensorMap bwb = bind_weights(gb, weights, false);
    Rng brng(0xA049);
    SampledArchitecture bs = sample_architecture(spec.cell, base.method, bb, 1.0, brng);
    Tensor xb = gb.constant({16, 8}, batch.features);
    ForwardResult bf = forward_network(gb, spec, bwb, plan_from_sample(spec.cell, bs.normal),
                                       plan_from_sample(spec.cell, bs.reduce), xb, noise);
    int baseline_edges = bf.ops_evaluated_per_cell[0];
    if (baseline_edges != 14) ok = false;
    d << "single-path evaluates 8 edges/cell (baseline " << baseline_edges << "/14); "
      << unselected_total << " unselected weight tensors, " << unselected_nonzero
      << " nonzero gradients (tol 0)";
    report(9, "only sampled operations are evaluated; off-path weights get zero gradient", ok,
           d.str());
}

// --- criterion 10: robustification reduces collapse without losing accuracy
void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    NetworkSpec spec = make_spec("S3", 2, 4, /*input_dim=*/8, /*classes=*/3, /*hidden=*/16);
    DatasetSpec dspec;
    dspec.samples = 1200;
    DataSplits data = make_dataset(dspec);
    SearchConfig cfg;
    cfg.K = 7;
    cfg.epochs = 300;
    cfg.batch_size = 32;
    CollapseReport rep = collapse_study(spec, cfg, data, {1, 2, 3, 4, 5},
                                        {SearchMethod::RomeV2, SearchMethod::GdasBaseline},
                                        /*eval_epochs=*/80, /*threads=*/2);
    double rome_frac = rep.mean_fraction.at("rome_v2");
    double base_frac = rep.mean_fraction.at("gdas_baseline");
    double rome_acc = rep.mean_accuracy.at("rome_v2");
    double base_acc = rep.mean_accuracy.at("gdas_baseline");
    double secs = seconds_since(t0);
    bool ok = rome_frac <= base_frac && rome_acc >= base_acc && secs <= 1800.0;
    std::ostringstream d;
    d << "5 paired seeds on S3: parameterless fraction " << rome_frac << " (rome_v2) vs "
      << base_frac << " (baseline); accuracy " << rome_acc << " vs " << base_acc << "; " << secs
      << "s";
    report(10, "rome_v2 collapses no more than the baseline at equal or better accuracy", ok,
           d.str());
}

// --- criterion 11: reruns are byte-identical
void criterion_11() {
    namespace fs = std::filesystem;
    ExperimentConfig cfg;
    cfg.op_set_name = "S3";
    cfg.num_cells = 2;
    cfg.dataset.samples = 120;
    cfg.search.K = 2;
    cfg.search.epochs = 3;
    cfg.search.batch_size = 32;
    cfg.search.seed = 7;
    cfg.eval.seed = 7;
    DataSplits data = make_dataset(cfg.dataset);

    std::string geno[2], trace[2];
    for (int run = 0; run < 2; ++run) {
        cfg.output_dir =
            (fs::temp_directory_path() / ("rome_accept_run" + std::to_string(run))).string();
        fs::remove_all(cfg.output_dir);
        SearchResult res = run_search(cfg.network_spec(), cfg.search, data);
        write_run_artifacts(cfg, res);
        geno[run] = read_text_file(cfg.output_dir + "/genotype.json");
        trace[run] = read_text_file(cfg.output_dir + "/trace.csv");
        fs::remove_all(cfg.output_dir);
    }
    bool ok = geno[0] == geno[1] && trace[0] == trace[1] && !geno[0].empty() && !trace[0].empty();
    report(11, "genotype.json and trace.csv are byte-identical across reruns", ok,
           "same config and seed, two independent searches");
}

// --- criterion 12: tiny-cell distribution sanity
void criterion_12() {
    CellSpec spec;
    spec.num_intermediate = 2;
    spec.op_set = op_set_by_name("S2");
    bool ok = true;
    std::ostringstream d;
    for (SearchMethod m : {SearchMethod::RomeV1, SearchMethod::RomeV2}) {
        Rng init(0xA00C + static_cast<std::uint64_t>(m));
        ArchParams params = ArchParams::init(spec, m, init, 0.6);

        // enumerate every discrete cell
        std::vector<DiscreteCell> topo{DiscreteCell{}};
        for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
            std::vector<DiscreteCell> next;
            for (const auto& base : topo) {
                for (const auto& pair : spec.predecessor_pairs(j)) {
                    DiscreteCell c = base;
                    c.node_preds.push_back({pair[0], pair[1]});
                    next.push_back(std::move(c));
                }
            }
            topo = std::move(next);
        }
        std::vector<DiscreteCell> cells;
        for (const auto& t : topo) {
            std::vector<int> sel;
            for (int j = spec.first_intermediate(); j < spec.num_nodes(); ++j) {
                for (int i :
                     t.node_preds[static_cast<std::size_t>(j - spec.first_intermediate())]) {
                    sel.push_back(spec.edge_index(i, j));
                }
            }
            std::vector<int> assign(sel.size(), 0);
            while (true) {
                DiscreteCell c = t;
                for (std::size_t k = 0; k < sel.size(); ++k) c.edge_op[sel[k]] = assign[k];
                cells.push_back(std::move(c));
                std::size_t k = 0;
                for (; k < assign.size(); ++k) {
                    if (++assign[k] < static_cast<int>(spec.op_set.size())) break;
                    assign[k] = 0;
                }
                if (k == assign.size()) break;
            }
        }

        auto key = [&](const DiscreteCell& c) {
            std::ostringstream s;
            for (const auto& preds : c.node_preds) {
                for (int p : preds) s << p << ',';
                s << '|';
            }
            for (const auto& [e, op] : c.edge_op) s << e << ':' << op << ';';
            return s.str();
        };
        double total = 0.0;
        std::map<std::string, double> expected;
        for (const auto& c : cells) {
            double p = std::exp(cell_log_prob(spec, m, params.normal, c));
            total += p;
            expected[key(c)] = p;
        }
        if (std::abs(total - 1.0) > 1e-9) ok = false;

        const long draws = 200000;
        Rng rng(0xA01C);
        std::map<std::string, long> counts;
        for (long dd = 0; dd < draws; ++dd) {
            counts[key(sample_cell_hard(spec, m, params.normal, rng))] += 1;
        }
        double tv = 0.0;
        for (const auto& [k2, p] : expected) {
            tv += std::abs(static_cast<double>(counts[k2]) / draws - p);
        }
        tv *= 0.5;
        if (tv >= 0.01) ok = false;
        d << method_name(m) << ": sum(p) - 1 = " << total - 1.0 << ", TV " << tv << "; ";
    }
    report(12, "tiny-cell law: probabilities sum to 1 and match sampling", ok, d.str());
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<void()>>> criteria = {
        {1, criterion_1},  {2, criterion_2},   {3, criterion_3},   {4, criterion_4},
        {5, criterion_5},  {6, criterion_6},   {7, criterion_7},   {8, criterion_8},
        {9, criterion_9},  {10, criterion_10}, {11, criterion_11}, {12, criterion_12}};
    for (const auto& [number, fn] : criteria) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(number, "uncaught exception", false, e.what());
        }
    }
    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures;
}
