// Exercises the shared library strictly through the C API, the same way
// the CLI does.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tenad/tenad.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("tenad-capi-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    tenad_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("dataset generation, tensor io, and rank through the C API") {
    fs::path dir = fresh_dir("gen");
    const uint32_t dims[4] = {4, 4, 3, 6};
    char* summary = nullptr;
    REQUIRE(tenad_generate_dataset("rank-k", dims, 3, 1, 11,
                                   dir.string().c_str(), &summary) ==
            TENAD_OK);
    const std::string manifest = take(summary);
    CHECK(manifest.find("sample_0002.ten4") != std::string::npos);

    tenad_tensor* t = nullptr;
    REQUIRE(tenad_tensor_load((dir / "sample_0000.ten4").string().c_str(),
                              &t) == TENAD_OK);
    uint32_t got_dims[4] = {};
    CHECK(tenad_tensor_dims(t, got_dims) == TENAD_OK);
    CHECK(got_dims[0] == 4);
    CHECK(got_dims[3] == 6);

    const double* data = nullptr;
    uint64_t len = 0;
    CHECK(tenad_tensor_data(t, &data, &len) == TENAD_OK);
    CHECK(len == 4ull * 4 * 3 * 6);

    int32_t rank[4] = {};
    CHECK(tenad_multilinear_rank(t, 1e-8, rank) == TENAD_OK);
    CHECK(rank[0] == 1);
    CHECK(rank[1] == 1);
    CHECK(rank[2] == 1);
    CHECK(rank[3] == 1);

    const fs::path copy = dir / "copy.ten4";
    CHECK(tenad_tensor_save(t, copy.string().c_str()) == TENAD_OK);
    tenad_tensor* t2 = nullptr;
    REQUIRE(tenad_tensor_load(copy.string().c_str(), &t2) == TENAD_OK);
    tenad_tensor_free(t2);
    tenad_tensor_free(t);
}

TEST_CASE("error reporting") {
    tenad_tensor* t = nullptr;
    CHECK(tenad_tensor_load("/nonexistent/never.ten4", &t) == TENAD_ERR_IO);
    CHECK(std::string(tenad_last_error()).size() > 0);
    CHECK(tenad_tensor_load(nullptr, &t) == TENAD_ERR_INVALID_ARGUMENT);

    tenad_model* m = nullptr;
    const uint32_t dims[4] = {2, 2, 2, 2};
    CHECK(tenad_model_open("quantum", dims, &m) ==
          TENAD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("model predict and attack run through the C API") {
    fs::path dir = fresh_dir("attack");
    const uint32_t dims[4] = {6, 5, 2, 6};
    char* summary = nullptr;
    REQUIRE(tenad_generate_dataset("smooth", dims, 1, 1, 5,
                                   dir.string().c_str(), &summary) ==
            TENAD_OK);
    take(summary);

    tenad_tensor* x = nullptr;
    REQUIRE(tenad_tensor_load((dir / "sample_0000.ten4").string().c_str(),
                              &x) == TENAD_OK);

    tenad_model* model = nullptr;
    REQUIRE(tenad_model_open("linear", dims, &model) == TENAD_OK);
    int32_t label = -1;
    CHECK(tenad_model_predict(model, x, &label) == TENAD_OK);
    CHECK(label >= 0);
    CHECK(tenad_model_query_count(model) == 1);

    const fs::path out = dir / "result";
    summary = nullptr;
    REQUIRE(tenad_attack_run(model, x, nullptr, 7, out.string().c_str(),
                             &summary) == TENAD_OK);
    const std::string result = take(summary);
    CHECK(result.find("\"success\": true") != std::string::npos);
    CHECK(fs::exists(out / "adversarial.ten4"));
    CHECK(fs::exists(out / "result.json"));

    tenad_model_free(model);
    tenad_tensor_free(x);
}

TEST_CASE("hosvd and demo through the C API") {
    fs::path dir = fresh_dir("hosvd");
    const uint32_t dims[4] = {4, 4, 2, 5};
    char* summary = nullptr;
    REQUIRE(tenad_generate_dataset("gaussian", dims, 1, 1, 3,
                                   dir.string().c_str(), &summary) ==
            TENAD_OK);
    take(summary);
    tenad_tensor* x = nullptr;
    REQUIRE(tenad_tensor_load((dir / "sample_0000.ten4").string().c_str(),
                              &x) == TENAD_OK);

    summary = nullptr;
    REQUIRE(tenad_hosvd_run(x, nullptr, (dir / "factors").string().c_str(),
                            &summary) == TENAD_OK);
    const std::string hosvd = take(summary);
    CHECK(hosvd.find("singular_values") != std::string::npos);
    CHECK(fs::exists(dir / "factors/core.ten4"));
    CHECK(fs::exists(dir / "factors/factor_mode1.csv"));
    CHECK(fs::exists(dir / "factors/factor_mode4.csv"));

    const int32_t bad_ranks[4] = {9, 1, 1, 1};
    summary = nullptr;
    CHECK(tenad_hosvd_run(x, bad_ranks, nullptr, &summary) ==
          TENAD_ERR_INVALID_ARGUMENT);

    summary = nullptr;
    REQUIRE(tenad_demo_rank1(x, 256.0, (dir / "demo.ten4").string().c_str(),
                             &summary) == TENAD_OK);
    const std::string demo = take(summary);
    CHECK(demo.find("\"perturbation_rank\": \"(1,1,1,1)\"") !=
          std::string::npos);
    CHECK(demo.find("\"map\": 256.0") != std::string::npos);
    CHECK(fs::exists(dir / "demo.ten4"));
    tenad_tensor_free(x);
}

TEST_CASE("bench and metrics recompute through the C API") {
    fs::path dir = fresh_dir("bench");
    const fs::path cfg_path = dir / "exp.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "dims = 6x5x2x6\n"
               "samples = 2\n"
               "dataset.kind = smooth\n"
               "seed = 4\n"
               "model.kind = centroid\n"
               "attacks = tenad\n"
               "attack.tenad.query_budget = 600\n";
    }
    char* summary = nullptr;
    REQUIRE(tenad_bench_run(cfg_path.string().c_str(),
                            (dir / "out").string().c_str(),
                            &summary) == TENAD_OK);
    const std::string bench = take(summary);
    CHECK(bench.find("\"samples_errored\": 0") != std::string::npos);
    CHECK(fs::exists(dir / "out/comparison.csv"));

    summary = nullptr;
    REQUIRE(tenad_metrics_recompute((dir / "out").string().c_str(),
                                    &summary) == TENAD_OK);
    take(summary);

    summary = nullptr;
    CHECK(tenad_bench_run((dir / "missing.cfg").string().c_str(), nullptr,
                          &summary) == TENAD_ERR_INVALID_ARGUMENT);
}
