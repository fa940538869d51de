#include <catch2/catch_amalgamated.hpp>

#include "msimap/io.hpp"
#include "msimap/pipeline.hpp"

#include <cstdio>
#include <fstream>

using namespace msimap;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/msimap_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

}  // namespace

TEST_CASE("CSV write/read round-trips values, labels, and the header") {
    TempFile f("roundtrip.csv");
    Matrix m(3, 2);
    m << 1.5, -2.25, 0.0, 1e-12, 3.0, 4.0;
    std::vector<int> labels = {0, 1, 1};
    write_csv(f.path, m, "seed=5, method=1", &labels);

    const CsvTable t = read_csv(f.path, false, 2);
    REQUIRE(t.values == m);
    REQUIRE(t.labels == labels);
    REQUIRE(t.header_comment == "seed=5, method=1");
}

TEST_CASE("CSV parse errors carry exit-worthy diagnostics") {
    TempFile f("bad.csv");
    write_text(f.path, "1.0,2.0\nx,3.0\n");
    REQUIRE_THROWS_AS(read_csv(f.path), ParseError);

    write_text(f.path, "1.0,2.0\n3.0\n");
    REQUIRE_THROWS_AS(read_csv(f.path), ParseError);

    write_text(f.path, "# only a comment\n");
    REQUIRE_THROWS_AS(read_csv(f.path), ParseError);

    REQUIRE_THROWS_AS(read_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("header rows and comments are skipped") {
    TempFile f("header.csv");
    write_text(f.path, "# provenance here\nx,y\n1,2\n3,4\n");
    const CsvTable t = read_csv(f.path, true);
    REQUIRE(t.values.rows() == 2);
    REQUIRE(t.header_comment == "provenance here");
}

TEST_CASE("key=value config parsing") {
    const auto kv = parse_key_values("k=10\n# comment\nepochs=250\n\nsampler=ebc\n");
    REQUIRE(kv.at("k") == "10");
    REQUIRE(kv.at("epochs") == "250");
    REQUIRE(kv.at("sampler") == "ebc");
    REQUIRE_THROWS_AS(parse_key_values("novalue\n"), ParseError);
    REQUIRE_THROWS_AS(parse_key_values("=5\n"), ParseError);
}

TEST_CASE("RunConfig header round-trips every field") {
    RunConfig cfg;
    cfg.method = 1;
    cfg.k_neighbors = 9;
    cfg.n_bands = 4;
    cfg.cheb_order = 33;
    cfg.laplacian_kind = LaplacianKind::Normalized;
    cfg.bandwidth = BandwidthMode::PerPoint;
    cfg.optimizer.seed = 77;
    cfg.optimizer.epochs = 123;
    cfg.optimizer.initial_lr = 0.5;
    cfg.optimizer.negatives_per_positive = 3;
    cfg.optimizer.sampler_kind = SamplerKind::EbcKde;
    cfg.optimizer.deterministic = false;

    const RunConfig back = RunConfig::from_header(cfg.header());
    REQUIRE(back.header() == cfg.header());
    REQUIRE(back.method == 1);
    REQUIRE(back.k_neighbors == 9);
    REQUIRE(back.n_bands == 4);
    REQUIRE(back.cheb_order == 33);
    REQUIRE(back.laplacian_kind == LaplacianKind::Normalized);
    REQUIRE(back.bandwidth == BandwidthMode::PerPoint);
    REQUIRE(back.optimizer.seed == 77);
    REQUIRE(back.optimizer.epochs == 123);
    REQUIRE(back.optimizer.initial_lr == 0.5);
    REQUIRE(back.optimizer.negatives_per_positive == 3);
    REQUIRE(back.optimizer.sampler_kind == SamplerKind::EbcKde);
    REQUIRE_FALSE(back.optimizer.deterministic);
}

TEST_CASE("RunConfig rejects bad keys and values") {
    RunConfig cfg;
    REQUIRE_THROWS_AS(cfg.apply({{"bogus", "1"}}), ParseError);
    REQUIRE_THROWS_AS(cfg.apply({{"epochs", "many"}}), ParseError);
    REQUIRE_THROWS_AS(cfg.apply({{"sampler", "magic"}}), ParseError);
    cfg.method = 3;
    REQUIRE_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("pipeline is reproducible and k >= N is rejected") {
    const LabeledDataset data = generate_two_moons(80, 0.05, 5);
    RunConfig cfg;
    cfg.k_neighbors = 6;
    cfg.optimizer.epochs = 5;
    const PointCloud pts(data.points);
    const PipelineResult a = run_embed(pts, cfg);
    const PipelineResult b = run_embed(pts, cfg);
    REQUIRE(a.embedding.coords == b.embedding.coords);
    REQUIRE(a.embedding.provenance == cfg.header());

    cfg.k_neighbors = 80;
    REQUIRE_THROWS_AS(run_embed(pts, cfg), ParameterError);
}

TEST_CASE("pipeline eval returns sane metrics on easy data") {
    const LabeledDataset data = generate_two_moons(100, 0.05, 2);
    RunConfig cfg;
    cfg.k_neighbors = 8;
    cfg.optimizer.epochs = 60;
    cfg.method = 1;
    const EvalMetrics m =
        run_pipeline_eval(PointCloud(data.points), data.labels, data.n_classes, cfg);
    REQUIRE(m.ari > 0.3);
    REQUIRE(m.ami > 0.2);
}
