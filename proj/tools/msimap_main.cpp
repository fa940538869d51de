// msimap command-line tool: dataset generation, embedding, evaluation,
// feature importance, wavelet dumps, edge sampling, and theory checks.

#include "msimap/pipeline.hpp"
#include "msimap/pw_verify.hpp"
#include "msimap/sampling.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitParameter = 4;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> method, k, bands, epochs, order, negatives;
    std::optional<double> lr;
    std::optional<std::string> sampler, laplacian, bandwidth;
    bool deterministic = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key=value settings file");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--method", method, "encoding method")->check(CLI::IsMember({1, 2}));
        cmd->add_option("--k", k, "kNN neighbor count");
        cmd->add_option("--bands", bands, "filter bank size");
        cmd->add_option("--epochs", epochs, "optimizer epochs");
        cmd->add_option("--order", order, "Chebyshev order");
        cmd->add_option("--negatives", negatives, "negatives per positive");
        cmd->add_option("--lr", lr, "initial learning rate");
        cmd->add_option("--sampler", sampler, "positive sampler")
            ->check(CLI::IsMember({"weight", "ebc"}));
        cmd->add_option("--laplacian", laplacian, "Laplacian kind")
            ->check(CLI::IsMember({"combinatorial", "normalized"}));
        cmd->add_option("--bandwidth", bandwidth, "kernel bandwidth mode")
            ->check(CLI::IsMember({"perpoint", "global"}));
        cmd->add_flag("--deterministic", deterministic, "single-threaded, bit-reproducible run");
    }

    msimap::RunConfig build() const {
        msimap::RunConfig cfg;
        if (!config_path.empty()) cfg.apply(msimap::read_config_file(config_path));
        std::map<std::string, std::string> kv;  // flags override the file
        if (seed) kv["seed"] = std::to_string(*seed);
        if (method) kv["method"] = std::to_string(*method);
        if (k) kv["k"] = std::to_string(*k);
        if (bands) kv["bands"] = std::to_string(*bands);
        if (epochs) kv["epochs"] = std::to_string(*epochs);
        if (order) kv["order"] = std::to_string(*order);
        if (negatives) kv["negatives"] = std::to_string(*negatives);
        if (lr) kv["lr"] = std::to_string(*lr);
        if (sampler) kv["sampler"] = *sampler;
        if (laplacian) kv["laplacian"] = *laplacian;
        if (bandwidth) kv["bandwidth"] = *bandwidth;
        if (deterministic) kv["deterministic"] = "1";
        cfg.apply(kv);
        cfg.validate();
        return cfg;
    }
};

struct InputFlags {
    std::string path;
    bool has_header = false;
    std::optional<int> label_column;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", path, "input CSV")->required();
        cmd->add_flag("--has-header", has_header, "skip the first non-comment row");
        cmd->add_option("--label-column", label_column,
                        "0-based label column, excluded from features (-1 = last)");
    }

    msimap::CsvTable read() const {
        std::optional<int> col = label_column;
        if (col && *col == -1) {
            // Resolve "last" against the actual width of the first pass.
            const msimap::CsvTable probe = msimap::read_csv(path, has_header);
            col = static_cast<int>(probe.values.cols()) - 1;
        }
        return msimap::read_csv(path, has_header, col);
    }
};

std::vector<int> read_label_file(const std::string& path, bool has_header, int label_column) {
    if (label_column == -1) {
        const msimap::CsvTable probe = msimap::read_csv(path, has_header);
        label_column = static_cast<int>(probe.values.cols()) - 1;
    }
    const msimap::CsvTable t = msimap::read_csv(path, has_header, label_column);
    return t.labels;
}

int run_generate(const std::string& dataset, int n, double noise, std::uint64_t seed,
                 const std::string& output) {
    msimap::LabeledDataset data = dataset == "moons"
                                      ? msimap::generate_two_moons(n, noise, seed)
                                      : msimap::generate_dense_sparse(seed);
    std::ostringstream header;
    header << "dataset=" << dataset << ", n=" << data.points.rows() << ", noise=" << noise
           << ", seed=" << seed;
    msimap::write_csv(output, data.points, header.str(), &data.labels);
    std::cout << "wrote " << data.points.rows() << " samples to " << output << "\n";
    return 0;
}

int run_embed(const InputFlags& in, const CommonFlags& common, const std::string& output) {
    const msimap::RunConfig cfg = common.build();
    const msimap::CsvTable table = in.read();
    const msimap::PointCloud points(table.values);
    const msimap::PipelineResult result = msimap::run_embed(points, cfg);
    msimap::write_csv(output, result.embedding.coords.transpose(), cfg.header());
    std::cout << "wrote " << result.embedding.coords.cols() << " x "
              << result.embedding.coords.rows() << " embedding to " << output << "\n";
    return 0;
}

int run_evaluate(const InputFlags& in, const CommonFlags& common,
                 const std::string& embedding_path, const std::string& labels_path) {
    double ari = 0.0, ami = 0.0;
    if (!embedding_path.empty()) {
        if (labels_path.empty()) {
            throw msimap::ParameterError("--embedding requires --labels");
        }
        const msimap::CsvTable emb = msimap::read_csv(embedding_path);
        const std::vector<int> labels =
            read_label_file(labels_path, in.has_header, in.label_column.value_or(0));
        if (static_cast<Eigen::Index>(labels.size()) != emb.values.rows()) {
            throw msimap::ParameterError("label count must match embedding rows");
        }
        const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
        std::uint64_t seed = 0;
        if (!emb.header_comment.empty()) {
            seed = msimap::RunConfig::from_header(emb.header_comment).optimizer.seed;
        }
        const std::vector<int> pred = msimap::kmeans(emb.values, n_classes, seed);
        ari = msimap::adjusted_rand_index(labels, pred);
        ami = msimap::adjusted_mutual_information(labels, pred);
    } else {
        const msimap::RunConfig cfg = common.build();
        const msimap::CsvTable table = in.read();
        if (table.labels.empty()) {
            throw msimap::ParameterError("evaluate needs --label-column or --embedding/--labels");
        }
        const int n_classes =
            *std::max_element(table.labels.begin(), table.labels.end()) + 1;
        const msimap::EvalMetrics m = msimap::run_pipeline_eval(
            msimap::PointCloud(table.values), table.labels, n_classes, cfg);
        ari = m.ari;
        ami = m.ami;
    }
    std::cout << "ari=" << ari << " ami=" << ami << "\n";
    return 0;
}

int run_importance(const InputFlags& in, const CommonFlags& common, const std::string& output,
                   bool use_original_graph) {
    const msimap::RunConfig cfg = common.build();
    const msimap::CsvTable table = in.read();
    const msimap::PointCloud points(table.values);
    const msimap::PipelineResult result = msimap::run_embed(points, cfg);

    msimap::LaplacianScoreOptions opts;
    opts.use_original_graph = use_original_graph;
    opts.k_neighbors = cfg.k_neighbors;
    const msimap::FeatureImportance ranked = msimap::rank_features(
        msimap::laplacian_score(result.embedding, result.graph, opts), result.embedding);

    std::ofstream os(output);
    if (!os) throw msimap::ParseError("cannot open output file: " + output);
    os << "# " << cfg.header() << "\n";
    os << "rank,feature_id,name,score,degenerate\n";
    os.precision(17);
    for (std::size_t r = 0; r < ranked.entries.size(); ++r) {
        const auto& e = ranked.entries[r];
        os << r << "," << e.feature_id << "," << e.name << "," << e.score << ","
           << (e.degenerate ? 1 : 0) << "\n";
    }
    std::cout << "wrote " << ranked.entries.size() << " feature ranks to " << output << "\n";
    return 0;
}

int run_sgw(const InputFlags& in, const CommonFlags& common, const std::string& output) {
    const msimap::RunConfig cfg = common.build();
    const msimap::CsvTable table = in.read();
    const msimap::PointCloud points(table.values);

    const msimap::SparseGraph graph =
        msimap::build_knn_graph(points, cfg.k_neighbors, std::nullopt, cfg.bandwidth);
    const msimap::Laplacian L = msimap::build_laplacian(graph, cfg.laplacian_kind);
    const msimap::SpectrumBound bound = msimap::estimate_lambda_max(L);
    const msimap::FilterBank bank = msimap::design_filter_bank(bound.lambda_max, cfg.n_bands);
    const msimap::SgwTensor tensor = msimap::sgw_transform_all(points, L, bank, cfg.cheb_order);

    // One row per (band, feature) pair, N columns.
    msimap::Matrix flat(tensor.n_bands() * tensor.n_features(), tensor.n_nodes());
    for (int j = 0; j < tensor.n_bands(); ++j) {
        flat.middleRows(j * tensor.n_features(), tensor.n_features()) = tensor.slice(j);
    }
    msimap::write_csv(output, flat, cfg.header());

    std::ofstream meta(output + ".meta.json");
    if (!meta) throw msimap::ParseError("cannot open sidecar file: " + output + ".meta.json");
    meta.precision(17);
    meta << "{\n  \"n_bands\": " << tensor.n_bands()
         << ",\n  \"n_features\": " << tensor.n_features()
         << ",\n  \"n_nodes\": " << tensor.n_nodes() << ",\n  \"lambda_max\": " << bound.lambda_max
         << ",\n  \"scales\": [";
    for (std::size_t s = 0; s < tensor.scales().size(); ++s) {
        if (s) meta << ", ";
        meta << tensor.scales()[s];
    }
    meta << "]\n}\n";
    std::cout << "wrote " << flat.rows() << " coefficient rows to " << output << "\n";
    return 0;
}

int run_sample(const InputFlags& in, const CommonFlags& common, const std::string& output,
               int n_draws) {
    const msimap::RunConfig cfg = common.build();
    const msimap::CsvTable table = in.read();
    const msimap::PointCloud points(table.values);
    const msimap::SparseGraph graph =
        msimap::build_knn_graph(points, cfg.k_neighbors, std::nullopt, cfg.bandwidth);

    const msimap::EdgeSamplePlan plan =
        msimap::sample_edges_ebc(graph, n_draws, cfg.optimizer.seed);
    std::vector<int> counts(graph.edges().size(), 0);
    for (int e : plan.edge_ids) ++counts[e];

    std::ofstream os(output);
    if (!os) throw msimap::ParseError("cannot open output file: " + output);
    os << "# " << cfg.header() << "\n";
    os << "i,j,count\n";
    for (std::size_t e = 0; e < counts.size(); ++e) {
        if (counts[e] > 0) {
            os << graph.edges()[e].i << "," << graph.edges()[e].j << "," << counts[e] << "\n";
        }
    }
    std::cout << "wrote sample plan (" << n_draws << " draws, "
              << (plan.uniform_fallback ? "uniform fallback" : "density-weighted") << ") to "
              << output << "\n";
    return 0;
}

msimap::SparseGraph make_family_graph(const std::string& family, int n, std::uint64_t seed) {
    std::vector<msimap::Edge> edges;
    if (family == "path") {
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    } else if (family == "star") {
        for (int i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
    } else {  // random connected: spanning chain plus extra edges
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
        for (int i = 0; i < n; ++i) {
            for (int j = i + 2; j < n; ++j) {
                if (unit(rng) < 2.0 / n) edges.push_back({i, j, 1.0});
            }
        }
    }
    return msimap::SparseGraph(n, std::move(edges));
}

int run_verify_theory(const std::string& family, int size, int trials, std::uint64_t seed,
                      const std::string& counterexample_path) {
    const msimap::SparseGraph graph = make_family_graph(family, size, seed);
    const msimap::LambdaSet ls = msimap::find_lambda_set(graph);
    std::cout << "graph: family=" << family << " n=" << size << " edges=" << graph.edges().size()
              << "\n";
    std::cout << "lambda-set: |S|=" << ls.S.size() << " lambda=" << ls.lambda
              << " cond1=" << (ls.cond1 ? "pass" : "FAIL")
              << " cond2=" << (ls.cond2 ? "pass" : "FAIL") << "\n";
    if (!ls.valid()) {
        std::cout << "no valid lambda-set on this graph; nothing further to test\n";
        return ls.S.empty() ? 0 : 1;
    }

    bool all_pass = true;
    const msimap::PoincareReport lap =
        msimap::verify_poincare_laplacian(graph, ls, trials, seed);
    std::cout << "poincare-laplacian: bound=" << lap.bound << " max_ratio=" << lap.max_ratio
              << " violations=" << lap.violations << "/" << lap.trials << " "
              << (lap.pass() ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && lap.pass();
    if (!lap.pass() && !counterexample_path.empty()) {
        msimap::write_counterexample(counterexample_path, graph, ls, lap.worst_phi);
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    msimap::PolynomialOperator op;
    op.coeffs = {coeff(rng), coeff(rng), coeff(rng)};
    if (op.coeffs[0] == 0.0 && op.coeffs[1] == 0.0 && op.coeffs[2] == 0.0) op.coeffs[1] = 1.0;
    const msimap::PoincareReport sgw = msimap::verify_poincare_sgw(graph, ls, op, trials, seed);
    std::cout << "poincare-sgw: a=(" << op.coeffs[0] << "," << op.coeffs[1] << "," << op.coeffs[2]
              << ") bound=" << sgw.bound << " max_ratio=" << sgw.max_ratio
              << " violations=" << sgw.violations << "/" << sgw.trials << " "
              << (sgw.pass() ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && sgw.pass();
    if (!sgw.pass() && !counterexample_path.empty()) {
        msimap::write_counterexample(counterexample_path, graph, ls, sgw.worst_phi);
    }

    const double omega = 0.5 / sgw.bound;
    bool unique = false;
    try {
        unique = msimap::uniqueness_rank_check(graph, omega, ls.U);
        std::cout << "uniqueness: omega=" << omega << " " << (unique ? "pass" : "FAIL") << "\n";
        all_pass = all_pass && unique;
    } catch (const msimap::ParameterError&) {
        std::cout << "uniqueness: omega=" << omega << " skipped (empty bandlimited space)\n";
    }

    std::cout << (all_pass ? "all checks passed" : "THEORY VIOLATION DETECTED") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-scale graph embedding toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic labeled dataset CSV");
    std::string gen_dataset = "moons", gen_output;
    int gen_n = 600;
    double gen_noise = 0.12;
    std::uint64_t gen_seed = 0;
    gen->add_option("--dataset", gen_dataset, "dataset family")
        ->check(CLI::IsMember({"moons", "dense-sparse"}));
    gen->add_option("--n", gen_n, "sample count (moons)");
    gen->add_option("--noise", gen_noise, "noise std (moons)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--output", gen_output, "output CSV")->required();

    // embed
    auto* embed = app.add_subcommand("embed", "run the full embedding pipeline");
    InputFlags embed_in;
    CommonFlags embed_common;
    std::string embed_output;
    embed_in.attach(embed);
    embed_common.attach(embed);
    embed->add_option("--output", embed_output, "embedding CSV")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "cluster and score against labels");
    InputFlags eval_in;
    CommonFlags eval_common;
    std::string eval_embedding, eval_labels;
    eval->add_option("--input", eval_in.path, "dataset CSV (runs the pipeline)");
    eval->add_flag("--has-header", eval_in.has_header, "skip the first non-comment row");
    eval->add_option("--label-column", eval_in.label_column,
                     "0-based label column (-1 = last)");
    eval_common.attach(eval);
    eval->add_option("--embedding", eval_embedding, "precomputed embedding CSV");
    eval->add_option("--labels", eval_labels, "label CSV (with --embedding)");

    // importance
    auto* imp = app.add_subcommand("importance", "rank features by Laplacian score");
    InputFlags imp_in;
    CommonFlags imp_common;
    std::string imp_output;
    bool imp_original = false;
    imp_in.attach(imp);
    imp_common.attach(imp);
    imp->add_option("--output", imp_output, "report CSV")->required();
    imp->add_flag("--original-graph", imp_original, "score against the input graph");

    // sgw
    auto* sgw = app.add_subcommand("sgw", "dump the wavelet coefficient tensor");
    InputFlags sgw_in;
    CommonFlags sgw_common;
    std::string sgw_output;
    sgw_in.attach(sgw);
    sgw_common.attach(sgw);
    sgw->add_option("--output", sgw_output, "tensor CSV (+ .meta.json sidecar)")->required();

    // sample
    auto* sample = app.add_subcommand("sample", "draw a centrality-density edge sample plan");
    InputFlags sample_in;
    CommonFlags sample_common;
    std::string sample_output;
    int sample_draws = 10000;
    sample_in.attach(sample);
    sample_common.attach(sample);
    sample->add_option("--output", sample_output, "plan CSV")->required();
    sample->add_option("--draws", sample_draws, "number of edge draws");

    // verify-theory
    auto* verify = app.add_subcommand("verify-theory", "numeric checks of the sampling theory");
    std::string verify_family = "path", verify_counter;
    int verify_size = 10, verify_trials = 1000;
    std::uint64_t verify_seed = 0;
    verify->add_option("--family", verify_family, "graph family")
        ->check(CLI::IsMember({"path", "star", "random"}));
    verify->add_option("--size", verify_size, "node count")->check(CLI::Range(2, 1000));
    verify->add_option("--trials", verify_trials, "random trials per inequality");
    verify->add_option("--seed", verify_seed, "random seed");
    verify->add_option("--counterexample", verify_counter, "file for any violating trial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitParse;
    }

    try {
        if (*gen) return run_generate(gen_dataset, gen_n, gen_noise, gen_seed, gen_output);
        if (*embed) return run_embed(embed_in, embed_common, embed_output);
        if (*eval) return run_evaluate(eval_in, eval_common, eval_embedding, eval_labels);
        if (*imp) return run_importance(imp_in, imp_common, imp_output, imp_original);
        if (*sgw) return run_sgw(sgw_in, sgw_common, sgw_output);
        if (*sample) return run_sample(sample_in, sample_common, sample_output, sample_draws);
        if (*verify) {
            return run_verify_theory(verify_family, verify_size, verify_trials, verify_seed,
                                     verify_counter);
        }
    } catch (const msimap::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const msimap::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const msimap::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
