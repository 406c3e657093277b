// tenad command-line tool. Everything goes through the shared library's
// C API (tenad/tenad.h); exit codes: 0 ok, 2 invalid input or config,
// 3 model failure, 4 partial experiment failure.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tenad/tenad.h"

namespace {

int status_to_exit_code(tenad_status rc) {
    switch (rc) {
        case TENAD_OK: return 0;
        case TENAD_ERR_INVALID_ARGUMENT: return 2;
        case TENAD_ERR_IO: return 2;
        case TENAD_ERR_MODEL_UNAVAILABLE: return 3;
        case TENAD_ERR_PARTIAL_FAILURE: return 4;
        case TENAD_ERR_INTERNAL: return 2;
    }
    return 2;
}

int finish(tenad_status rc, char* summary) {
    if (summary) {
        std::printf("%s\n", summary);
        tenad_string_free(summary);
    }
    if (rc != TENAD_OK)
        std::fprintf(stderr, "error: %s\n", tenad_last_error());
    return status_to_exit_code(rc);
}

struct TensorHandle {
    tenad_tensor* t = nullptr;
    ~TensorHandle() { tenad_tensor_free(t); }
};

struct ModelHandle {
    tenad_model* m = nullptr;
    ~ModelHandle() { tenad_model_free(m); }
};

bool parse_dims_arg(const std::string& text, uint32_t dims[4]) {
    unsigned a = 0, b = 0, c = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%ux%ux%ux%u%c", &a, &b, &c, &d, &tail) != 4)
        return false;
    dims[0] = a;
    dims[1] = b;
    dims[2] = c;
    dims[3] = d;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank hard-label black-box attacks on order-4 video "
                 "tensors"};
    app.require_subcommand(1);

    // attack: one sample, one model, one attack configuration.
    std::string attack_input, attack_model, attack_config, attack_out;
    std::int64_t attack_seed = -1;
    auto* attack = app.add_subcommand("attack", "Attack a single TEN4 sample");
    attack->add_option("--input", attack_input, "Clean tensor (TEN4)")
        ->required();
    attack->add_option("--model", attack_model,
                       "Model spec: linear[:opts], centroid[:opts], "
                       "subprocess:<command>")
        ->required();
    attack->add_option("--config", attack_config,
                       "Attack config file (key = value)");
    attack->add_option("--seed", attack_seed, "Seed override (>= 0)");
    attack->add_option("--out", attack_out,
                       "Directory for result.json + adversarial.ten4");

    std::string bench_config, bench_out;
    auto* bench = app.add_subcommand("bench", "Run a full experiment");
    bench->add_option("config", bench_config, "Experiment config file")
        ->required();
    bench->add_option("--out", bench_out, "Output directory override");

    std::string metrics_dir;
    auto* metrics = app.add_subcommand(
        "metrics", "Recompute reports from stored experiment artifacts");
    metrics->add_option("dir", metrics_dir, "Experiment directory")
        ->required();

    std::string hosvd_input, hosvd_ranks, hosvd_out;
    auto* hosvd = app.add_subcommand(
        "hosvd", "Singular spectra and factor matrices of a tensor");
    hosvd->add_option("--input", hosvd_input, "Tensor (TEN4)")->required();
    hosvd->add_option("--ranks", hosvd_ranks,
                      "Truncation ranks r1,r2,r3,r4 (default: full)");
    hosvd->add_option("--out", hosvd_out, "Directory for core + factors");

    std::string gen_dims = "32x32x3x16", gen_kind = "smooth", gen_out;
    std::uint32_t gen_count = 10;
    std::int32_t gen_rank = 1;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen->add_option("--dims", gen_dims, "Extents WxHxCxT");
    gen->add_option("--kind", gen_kind, "smooth | gaussian | rank-k");
    gen->add_option("--count", gen_count, "Number of samples");
    gen->add_option("--rank", gen_rank, "k for the rank-k generator");
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    std::string demo_input, demo_out;
    double demo_magnitude = 256.0;
    auto* demo = app.add_subcommand(
        "demo-rank1", "Add a constant rank-one perturbation and report its "
                      "rank and MAP");
    demo->add_option("--input", demo_input, "Clean tensor (TEN4)")->required();
    demo->add_option("--magnitude", demo_magnitude, "Perturbation magnitude");
    demo->add_option("--out", demo_out, "Write the perturbed tensor here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    char* summary = nullptr;

    if (*attack) {
        TensorHandle x;
        tenad_status rc = tenad_tensor_load(attack_input.c_str(), &x.t);
        if (rc != TENAD_OK) return finish(rc, nullptr);
        uint32_t dims[4];
        tenad_tensor_dims(x.t, dims);
        ModelHandle model;
        rc = tenad_model_open(attack_model.c_str(), dims, &model.m);
        if (rc != TENAD_OK) return finish(rc, nullptr);
        rc = tenad_attack_run(
            model.m, x.t, attack_config.empty() ? nullptr : attack_config.c_str(),
            attack_seed, attack_out.empty() ? nullptr : attack_out.c_str(),
            &summary);
        return finish(rc, summary);
    }

    if (*bench) {
        const tenad_status rc = tenad_bench_run(
            bench_config.c_str(), bench_out.empty() ? nullptr : bench_out.c_str(),
            &summary);
        return finish(rc, summary);
    }

    if (*metrics) {
        const tenad_status rc =
            tenad_metrics_recompute(metrics_dir.c_str(), &summary);
        return finish(rc, summary);
    }

    if (*hosvd) {
        TensorHandle x;
        tenad_status rc = tenad_tensor_load(hosvd_input.c_str(), &x.t);
        if (rc != TENAD_OK) return finish(rc, nullptr);
        int32_t ranks[4];
        const int32_t* ranks_ptr = nullptr;
        if (!hosvd_ranks.empty()) {
            unsigned a = 0, b = 0, c = 0, d = 0;
            char tail = 0;
            if (std::sscanf(hosvd_ranks.c_str(), "%u,%u,%u,%u%c", &a, &b, &c,
                            &d, &tail) != 4) {
                std::fprintf(stderr, "error: bad --ranks value\n");
                return 2;
            }
            ranks[0] = static_cast<int32_t>(a);
            ranks[1] = static_cast<int32_t>(b);
            ranks[2] = static_cast<int32_t>(c);
            ranks[3] = static_cast<int32_t>(d);
            ranks_ptr = ranks;
        }
        rc = tenad_hosvd_run(x.t, ranks_ptr,
                             hosvd_out.empty() ? nullptr : hosvd_out.c_str(),
                             &summary);
        return finish(rc, summary);
    }

    if (*gen) {
        uint32_t dims[4];
        if (!parse_dims_arg(gen_dims, dims)) {
            std::fprintf(stderr, "error: bad --dims value\n");
            return 2;
        }
        const tenad_status rc =
            tenad_generate_dataset(gen_kind.c_str(), dims, gen_count, gen_rank,
                                   gen_seed, gen_out.c_str(), &summary);
        return finish(rc, summary);
    }

    if (*demo) {
        TensorHandle x;
        tenad_status rc = tenad_tensor_load(demo_input.c_str(), &x.t);
        if (rc != TENAD_OK) return finish(rc, nullptr);
        rc = tenad_demo_rank1(x.t, demo_magnitude,
                              demo_out.empty() ? nullptr : demo_out.c_str(),
                              &summary);
        return finish(rc, summary);
    }

    return 2;
}
