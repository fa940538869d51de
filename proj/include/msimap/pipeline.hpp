#ifndef MSIMAP_PIPELINE_HPP
#define MSIMAP_PIPELINE_HPP

#include "msimap/encode.hpp"
#include "msimap/eval.hpp"
#include "msimap/filter_bank.hpp"
#include "msimap/graph.hpp"
#include "msimap/interpret.hpp"
#include "msimap/io.hpp"
#include "msimap/optimize.hpp"
#include "msimap/sgw.hpp"

#include <map>
#include <sstream>
#include <string>

namespace msimap {

/// Effective run settings; serializes to the provenance header written on
/// every output file and parses back losslessly.
struct RunConfig {
    int method = 2;
    int k_neighbors = 15;
    int n_bands = 5;
    int cheb_order = 40;
    LaplacianKind laplacian_kind = LaplacianKind::Combinatorial;
    BandwidthMode bandwidth = BandwidthMode::GlobalMean;
    OptimizerConfig optimizer;

    void validate() const {
        if (method != 1 && method != 2) throw ParameterError("method must be 1 or 2");
        if (k_neighbors < 1) throw ParameterError("k must be >= 1");
        if (n_bands < 2) throw ParameterError("bands must be >= 2");
        if (cheb_order < 3) throw ParameterError("order must be >= 3");
        optimizer.validate();
    }

    std::string header() const {
        std::ostringstream os;
        os << "seed=" << optimizer.seed << ", method=" << method
           << ", epochs=" << optimizer.epochs << ", lr=" << optimizer.initial_lr
           << ", negatives=" << optimizer.negatives_per_positive << ", k=" << k_neighbors
           << ", bands=" << n_bands << ", order=" << cheb_order << ", sampler="
           << (optimizer.sampler_kind == SamplerKind::WeightProportional ? "weight" : "ebc")
           << ", laplacian="
           << (laplacian_kind == LaplacianKind::Combinatorial ? "combinatorial" : "normalized")
           << ", bandwidth=" << (bandwidth == BandwidthMode::PerPoint ? "perpoint" : "global")
           << ", deterministic=" << (optimizer.deterministic ? 1 : 0);
        return os.str();
    }

    /// Applies key=value overrides (config file or a parsed header line).
    void apply(const std::map<std::string, std::string>& kv) {
        const auto to_int = [](const std::string& k, const std::string& v) {
            try {
                return std::stoi(v);
            } catch (const std::exception&) {
                throw ParseError("bad integer for " + k + ": '" + v + "'");
            }
        };
        for (const auto& [key, value] : kv) {
            if (key == "seed") {
                optimizer.seed = static_cast<std::uint64_t>(std::stoull(value));
            } else if (key == "method") {
                method = to_int(key, value);
            } else if (key == "epochs") {
                optimizer.epochs = to_int(key, value);
            } else if (key == "lr") {
                optimizer.initial_lr = detail::parse_double(value, "config key lr");
            } else if (key == "negatives") {
                optimizer.negatives_per_positive = to_int(key, value);
            } else if (key == "k") {
                k_neighbors = to_int(key, value);
            } else if (key == "bands") {
                n_bands = to_int(key, value);
            } else if (key == "order") {
                cheb_order = to_int(key, value);
            } else if (key == "sampler") {
                if (value == "weight") {
                    optimizer.sampler_kind = SamplerKind::WeightProportional;
                } else if (value == "ebc") {
                    optimizer.sampler_kind = SamplerKind::EbcKde;
                } else {
                    throw ParseError("sampler must be weight|ebc, got '" + value + "'");
                }
            } else if (key == "laplacian") {
                if (value == "combinatorial") {
                    laplacian_kind = LaplacianKind::Combinatorial;
                } else if (value == "normalized") {
                    laplacian_kind = LaplacianKind::Normalized;
                } else {
                    throw ParseError("laplacian must be combinatorial|normalized, got '" + value + "'");
                }
            } else if (key == "bandwidth") {
                if (value == "perpoint") {
                    bandwidth = BandwidthMode::PerPoint;
                } else if (value == "global") {
                    bandwidth = BandwidthMode::GlobalMean;
                } else {
                    throw ParseError("bandwidth must be perpoint|global, got '" + value + "'");
                }
            } else if (key == "deterministic") {
                optimizer.deterministic = to_int(key, value) != 0;
            } else {
                throw ParseError("unknown config key '" + key + "'");
            }
        }
    }

    static RunConfig from_header(const std::string& header_line) {
        RunConfig cfg;
        cfg.apply(parse_key_values(header_line, ','));
        return cfg;
    }
};

struct PipelineResult {
    SparseGraph graph;
    SgwTensor tensor;
    Embedding embedding;
};

/// Full pipeline: kNN graph, Laplacian, spectral bound, filter bank,
/// SGW tensor, method encoding, contrastive optimization.
inline PipelineResult run_embed(const PointCloud& points, const RunConfig& cfg,
                                std::vector<std::string> feature_names = {}) {
    cfg.validate();
    if (cfg.k_neighbors >= points.n_samples()) {
        throw ParameterError("k must be smaller than the sample count");
    }

    SparseGraph graph = build_knn_graph(points, cfg.k_neighbors, std::nullopt, cfg.bandwidth);
    const Laplacian L = build_laplacian(graph, cfg.laplacian_kind);
    const SpectrumBound bound = estimate_lambda_max(L);
    const FilterBank bank = design_filter_bank(bound.lambda_max, cfg.n_bands);
    SgwTensor tensor = sgw_transform_all(points, L, bank, cfg.cheb_order);

    Embedding emb = cfg.method == 1
                        ? optimize_method1(encode_method1(tensor), graph, cfg.optimizer)
                        : optimize_method2(encode_method2(tensor, std::move(feature_names)), graph,
                                           cfg.optimizer);
    emb.provenance = cfg.header();
    return PipelineResult{std::move(graph), std::move(tensor), std::move(emb)};
}

/// Embed, cluster with k-means (k = n_classes), and score against labels.
struct EvalMetrics {
    double ari;
    double ami;
};

inline EvalMetrics run_pipeline_eval(const PointCloud& points, const std::vector<int>& labels,
                                     int n_classes, const RunConfig& cfg) {
    if (static_cast<int>(labels.size()) != points.n_samples()) {
        throw ParameterError("label count must match sample count");
    }
    const PipelineResult result = run_embed(points, cfg);
    const std::vector<int> pred =
        kmeans(result.embedding.coords.transpose(), n_classes, cfg.optimizer.seed);
    return EvalMetrics{adjusted_rand_index(labels, pred), adjusted_mutual_information(labels, pred)};
}

}  // namespace msimap

#endif
