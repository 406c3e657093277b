#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tenad/attack.hpp"
#include "tenad/config.hpp"
#include "tenad/decomposition.hpp"
#include "tenad/metrics.hpp"
#include "tenad/model.hpp"

namespace tenad {

enum class DatasetKind { Smooth, Gaussian, RankK };

DatasetKind parse_dataset_kind(const std::string& name);
std::string dataset_kind_name(DatasetKind kind);

struct DatasetSpec {
    Dims4 dims{32, 32, 3, 16};
    int count = 1;
    DatasetKind kind = DatasetKind::Smooth;
    int rank = 1;  // k for the rank-k generator
    std::uint64_t seed = 0;
};

/// Deterministic synthetic videos: `smooth` builds separable low-frequency
/// structure plus small noise, `gaussian` is i.i.d. normal, `rank-k` sums
/// k random rank-one terms. Sample i draws from split_seed(seed, i).
std::vector<Tensor4> generate_synthetic_dataset(const DatasetSpec& spec);

enum class ModelKind { Linear, Centroid, Subprocess };

struct ModelSpec {
    ModelKind kind = ModelKind::Linear;
    std::uint64_t seed = 1234;            // toy parameter generation
    std::string structure = "smooth";     // smooth | gaussian weights
    std::vector<double> thresholds{0.0};  // linear bands
    int centroids = 2;
    std::string command;                  // subprocess command line
    double timeout_seconds = 30.0;

    std::string to_string() const;
};

/// Parses "linear", "centroid", "subprocess:<command>", optionally with
/// comma-separated key=value options after a ':' for the toy kinds, e.g.
/// "linear:seed=7,thresholds=0;5" or "centroid:count=3,structure=gaussian".
ModelSpec parse_model_spec(const std::string& spec);

std::unique_ptr<BlackBoxModel> make_model(const ModelSpec& spec, Dims4 dims);

struct NamedAttack {
    std::string name;
    std::string method;  // "tenad" | "baseline"
    AttackConfig config;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    ModelSpec model;
    std::vector<NamedAttack> attacks;
    std::uint64_t seed = 0;
    std::string out_dir;  // may be overridden at run time
    std::string snapshot;  // original config text, persisted with results
};

ExperimentConfig parse_experiment_config(const KeyValueConfig& kv);
ExperimentConfig parse_experiment_file(const std::filesystem::path& path);

struct AttackSummary {
    MetricsReport report;
    std::vector<AttackOutcome> outcomes;
};

struct ExperimentOutcome {
    std::map<std::string, AttackSummary> attacks;
    int samples_total = 0;
    int samples_errored = 0;
    std::vector<std::string> errors;  // one message per errored sample
};

/// Runs every named attack on every sample, persisting per-sample results
/// (clean TEN4, per-attack result JSON and adversarial TEN4), per-attack
/// metrics JSON/CSV, and a cross-attack comparison CSV under `out_dir`.
/// A failing sample is recorded and skipped; the rest continue.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir);

/// Rebuilds every metrics report and CSV from the artifacts an earlier
/// run_experiment left in `dir`.
ExperimentOutcome recompute_metrics(const std::filesystem::path& dir);

struct DemoRank1Result {
    Tensor4 adversarial;
    RankTuple perturbation_rank;
    double map = 0.0;
};

/// Adds magnitude * (all-ones rank-one tensor) and reports the
/// perturbation's multilinear rank and MAP.
DemoRank1Result demo_rank1_constant(const Tensor4& x, double magnitude);

nlohmann::ordered_json attack_result_to_json(const AttackResult& r);
nlohmann::ordered_json metrics_report_to_json(const MetricsReport& r);

/// Table-style CSV with one row per sample and a trailing summary row;
/// columns: sample, MQ, MAP, MAP*, SSIM, SSIM*, FR, error_rank.
std::string per_sample_csv(std::span<const SamplePair> pairs,
                           std::span<const AttackOutcome> outcomes);

/// One row per attack with the summary metrics.
std::string comparison_csv(
    const std::vector<std::pair<std::string, MetricsReport>>& reports);

}  // namespace tenad
