#include "tenad/tenad.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include "tenad/attack.hpp"
#include "tenad/config.hpp"
#include "tenad/decomposition.hpp"
#include "tenad/harness.hpp"
#include "tenad/metrics.hpp"
#include "tenad/model.hpp"
#include "tenad/tensor.hpp"

struct tenad_tensor {
    tenad::Tensor4 value;
};

struct tenad_model {
    std::unique_ptr<tenad::BlackBoxModel> value;
};

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tenad_status fail(tenad_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Maps the core exception taxonomy onto status codes.
template <typename Fn>
tenad_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const tenad::ModelUnavailable& e) {
        return fail(TENAD_ERR_MODEL_UNAVAILABLE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TENAD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(TENAD_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(TENAD_ERR_INTERNAL, e.what());
    }
}

tenad_status require(bool ok, const char* what) {
    return ok ? TENAD_OK : fail(TENAD_ERR_INVALID_ARGUMENT, what);
}

tenad::Dims4 to_dims(const uint32_t dims[4]) {
    return {dims[0], dims[1], dims[2], dims[3]};
}

}  // namespace

extern "C" {

const char* tenad_version(void) { return "1.0.0"; }

const char* tenad_last_error(void) { return g_last_error.c_str(); }

void tenad_string_free(char* s) { delete[] s; }

tenad_status tenad_tensor_load(const char* path, tenad_tensor** out) {
    if (auto rc = require(path && out, "tensor_load: null argument"))
        return rc;
    return guarded([&] {
        auto* t = new tenad_tensor{tenad::read_ten4(path)};
        *out = t;
        return TENAD_OK;
    });
}

tenad_status tenad_tensor_save(const tenad_tensor* t, const char* path) {
    if (auto rc = require(t && path, "tensor_save: null argument")) return rc;
    return guarded([&] {
        tenad::write_ten4(t->value, path);
        return TENAD_OK;
    });
}

tenad_status tenad_tensor_dims(const tenad_tensor* t, uint32_t dims[4]) {
    if (auto rc = require(t && dims, "tensor_dims: null argument")) return rc;
    const tenad::Dims4 d = t->value.dims();
    dims[0] = d.w;
    dims[1] = d.h;
    dims[2] = d.c;
    dims[3] = d.t;
    return TENAD_OK;
}

tenad_status tenad_tensor_data(const tenad_tensor* t, const double** data,
                               uint64_t* length) {
    if (auto rc = require(t && data && length, "tensor_data: null argument"))
        return rc;
    *data = t->value.data().data();
    *length = t->value.size();
    return TENAD_OK;
}

void tenad_tensor_free(tenad_tensor* t) { delete t; }

tenad_status tenad_model_open(const char* spec, const uint32_t dims[4],
                              tenad_model** out) {
    if (auto rc = require(spec && dims && out, "model_open: null argument"))
        return rc;
    return guarded([&] {
        auto model =
            tenad::make_model(tenad::parse_model_spec(spec), to_dims(dims));
        *out = new tenad_model{std::move(model)};
        return TENAD_OK;
    });
}

tenad_status tenad_model_predict(tenad_model* m, const tenad_tensor* x,
                                 int32_t* label) {
    if (auto rc = require(m && x && label, "model_predict: null argument"))
        return rc;
    return guarded([&] {
        *label = m->value->predict(x->value);
        return TENAD_OK;
    });
}

uint64_t tenad_model_query_count(const tenad_model* m) {
    return m ? m->value->query_count() : 0;
}

void tenad_model_free(tenad_model* m) { delete m; }

tenad_status tenad_attack_run(tenad_model* model, const tenad_tensor* x,
                              const char* config_path, int64_t seed_override,
                              const char* out_dir, char** summary_json) {
    if (auto rc = require(model && x && summary_json,
                          "attack_run: null argument"))
        return rc;
    return guarded([&] {
        tenad::AttackConfig cfg;
        std::string method = "tenad";
        if (config_path) {
            const auto kv = tenad::KeyValueConfig::parse_file(config_path);
            method = kv.get_string("method", "tenad");
            if (method != "tenad" && method != "baseline")
                throw std::invalid_argument("bad method: " + method);
            cfg = tenad::attack_config_from_kv(kv, "");
            kv.reject_unused();
        }
        if (seed_override >= 0)
            cfg.seed = static_cast<std::uint64_t>(seed_override);
        const tenad::AttackResult result =
            method == "tenad"
                ? tenad::tenad_attack(*model->value, x->value, cfg)
                : tenad::opt_attack_baseline(*model->value, x->value, cfg);
        if (out_dir) {
            std::filesystem::path dir(out_dir);
            std::filesystem::create_directories(dir);
            tenad::write_ten4(result.adversarial, dir / "adversarial.ten4");
            std::ofstream f(dir / "result.json",
                            std::ios::binary | std::ios::trunc);
            f << tenad::attack_result_to_json(result).dump(2) << "\n";
            if (!f) throw std::runtime_error("cannot write result.json");
        }
        *summary_json = dup_string(
            tenad::attack_result_to_json(result).dump(2));
        return TENAD_OK;
    });
}

tenad_status tenad_bench_run(const char* config_path,
                             const char* out_dir_override,
                             char** summary_json) {
    if (auto rc =
            require(config_path && summary_json, "bench_run: null argument"))
        return rc;
    return guarded([&] {
        const tenad::ExperimentConfig cfg =
            tenad::parse_experiment_file(config_path);
        std::string out_dir =
            out_dir_override ? out_dir_override : cfg.out_dir;
        if (out_dir.empty())
            throw std::invalid_argument(
                "no output directory (config `out` or override)");
        const tenad::ExperimentOutcome outcome =
            tenad::run_experiment(cfg, out_dir);
        nlohmann::ordered_json j;
        j["out_dir"] = out_dir;
        j["samples_total"] = outcome.samples_total;
        j["samples_errored"] = outcome.samples_errored;
        for (const auto& [name, summary] : outcome.attacks)
            j["metrics"][name] = tenad::metrics_report_to_json(summary.report);
        *summary_json = dup_string(j.dump(2));
        if (outcome.samples_errored == 0) return TENAD_OK;
        if (outcome.samples_errored == outcome.samples_total)
            return fail(TENAD_ERR_MODEL_UNAVAILABLE,
                        "every sample failed: " +
                            (outcome.errors.empty() ? std::string("unknown")
                                                    : outcome.errors.front()));
        return fail(TENAD_ERR_PARTIAL_FAILURE,
                    std::to_string(outcome.samples_errored) +
                        " of " + std::to_string(outcome.samples_total) +
                        " samples errored");
    });
}

tenad_status tenad_metrics_recompute(const char* experiment_dir,
                                     char** summary_json) {
    if (auto rc = require(experiment_dir && summary_json,
                          "metrics_recompute: null argument"))
        return rc;
    return guarded([&] {
        const tenad::ExperimentOutcome outcome =
            tenad::recompute_metrics(experiment_dir);
        nlohmann::ordered_json j;
        j["samples_total"] = outcome.samples_total;
        j["samples_errored"] = outcome.samples_errored;
        for (const auto& [name, summary] : outcome.attacks)
            j["metrics"][name] = tenad::metrics_report_to_json(summary.report);
        *summary_json = dup_string(j.dump(2));
        return TENAD_OK;
    });
}

tenad_status tenad_hosvd_run(const tenad_tensor* x, const int32_t* ranks,
                             const char* out_dir, char** summary_json) {
    if (auto rc = require(x && summary_json, "hosvd_run: null argument"))
        return rc;
    return guarded([&] {
        std::optional<tenad::RankTuple> truncation;
        if (ranks)
            truncation = tenad::RankTuple{ranks[0], ranks[1], ranks[2],
                                          ranks[3]};
        const tenad::FactorMatrixSet f = tenad::hosvd(x->value, truncation);
        nlohmann::ordered_json j;
        j["dims"] = x->value.dims().to_string();
        nlohmann::ordered_json spectra = nlohmann::ordered_json::array();
        for (int mode = 0; mode < 4; ++mode) {
            std::vector<double> s(f.singular_values[mode].data(),
                                  f.singular_values[mode].data() +
                                      f.singular_values[mode].size());
            spectra.push_back(s);
        }
        j["singular_values"] = std::move(spectra);
        const tenad::Tensor4 rec = tenad::reconstruct(f);
        const double denom = tenad::frobenius_norm(x->value);
        j["reconstruction_error"] =
            denom > 0.0
                ? tenad::frobenius_norm(x->value - rec) / denom
                : 0.0;
        if (out_dir) {
            std::filesystem::path dir(out_dir);
            std::filesystem::create_directories(dir);
            tenad::write_ten4(f.core, dir / "core.ten4");
            for (int mode = 0; mode < 4; ++mode) {
                std::ofstream mf(dir / ("factor_mode" +
                                        std::to_string(mode + 1) + ".csv"),
                                 std::ios::binary | std::ios::trunc);
                const Eigen::MatrixXd& u = f.factors[mode];
                for (Eigen::Index r = 0; r < u.rows(); ++r) {
                    for (Eigen::Index c = 0; c < u.cols(); ++c)
                        mf << (c ? "," : "") << tenad::format_double(u(r, c));
                    mf << "\n";
                }
                if (!mf)
                    throw std::runtime_error("cannot write factor matrix");
            }
        }
        *summary_json = dup_string(j.dump(2));
        return TENAD_OK;
    });
}

tenad_status tenad_multilinear_rank(const tenad_tensor* x, double tol,
                                    int32_t rank[4]) {
    if (auto rc = require(x && rank, "multilinear_rank: null argument"))
        return rc;
    return guarded([&] {
        const tenad::RankTuple r = tenad::multilinear_rank(x->value, tol);
        rank[0] = r.r1;
        rank[1] = r.r2;
        rank[2] = r.r3;
        rank[3] = r.r4;
        return TENAD_OK;
    });
}

tenad_status tenad_generate_dataset(const char* kind, const uint32_t dims[4],
                                    uint32_t count, int32_t rank,
                                    uint64_t seed, const char* out_dir,
                                    char** summary_json) {
    if (auto rc = require(kind && dims && out_dir && summary_json,
                          "generate_dataset: null argument"))
        return rc;
    return guarded([&] {
        tenad::DatasetSpec spec;
        spec.kind = tenad::parse_dataset_kind(kind);
        spec.dims = to_dims(dims);
        spec.count = static_cast<int>(count);
        spec.rank = rank;
        spec.seed = seed;
        const std::vector<tenad::Tensor4> samples =
            tenad::generate_synthetic_dataset(spec);
        std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        nlohmann::ordered_json files = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "sample_%04zu.ten4", i);
            tenad::write_ten4(samples[i], dir / name);
            files.push_back(name);
        }
        nlohmann::ordered_json j;
        j["kind"] = kind;
        j["dims"] = spec.dims.to_string();
        j["count"] = spec.count;
        j["rank"] = spec.rank;
        j["seed"] = spec.seed;
        j["files"] = files;
        std::ofstream mf(dir / "manifest.json",
                         std::ios::binary | std::ios::trunc);
        mf << j.dump(2) << "\n";
        if (!mf) throw std::runtime_error("cannot write manifest.json");
        *summary_json = dup_string(j.dump(2));
        return TENAD_OK;
    });
}

tenad_status tenad_demo_rank1(const tenad_tensor* x, double magnitude,
                              const char* out_path, char** summary_json) {
    if (auto rc = require(x && summary_json, "demo_rank1: null argument"))
        return rc;
    return guarded([&] {
        const tenad::DemoRank1Result demo =
            tenad::demo_rank1_constant(x->value, magnitude);
        if (out_path) tenad::write_ten4(demo.adversarial, out_path);
        nlohmann::ordered_json j;
        j["magnitude"] = magnitude;
        j["perturbation_rank"] = demo.perturbation_rank.to_string();
        j["map"] = demo.map;
        *summary_json = dup_string(j.dump(2));
        return TENAD_OK;
    });
}

}  // extern "C"
