#include "tenad/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tenad/rng.hpp"

namespace tenad {

namespace {

Tensor4 gaussian_tensor(Dims4 dims, Rng& rng) {
    Tensor4 t(dims);
    for (double& v : t.data()) v = rng.normal();
    return t;
}

Eigen::VectorXd cosine_vector(std::uint32_t n, Rng& rng) {
    const double freq = rng.uniform(0.5, 1.5);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Eigen::VectorXd v(n);
    for (std::uint32_t i = 0; i < n; ++i)
        v[i] = std::cos(std::numbers::pi * freq * (i + 0.5) / n + phase);
    return v;
}

// Separable low-frequency structure: a dominant rank-one term, a weak
// second term, and (optionally) small dense noise. Terms are normalized so
// the spectra keep a fixed dominance ratio regardless of the draw;
// noise_level is relative to the structure's Frobenius norm.
Tensor4 smooth_tensor(Dims4 dims, Rng& rng, double noise_level) {
    const std::array<double, 2> amplitudes{1.0, 0.15};
    Tensor4 out(dims);
    for (double amp : amplitudes) {
        Tensor4 term = outer_product(
            cosine_vector(dims.w, rng), cosine_vector(dims.h, rng),
            cosine_vector(dims.c, rng), cosine_vector(dims.t, rng));
        const double n = frobenius_norm(term);
        if (n == 0.0) continue;
        out += (amp / n) * term;
    }
    if (noise_level > 0.0) {
        const double entry_sigma = noise_level * frobenius_norm(out) /
                                   std::sqrt(double(dims.count()));
        out += entry_sigma * gaussian_tensor(dims, rng);
    }
    return out;
}

Tensor4 scaled_to_norm(Tensor4 t, double target) {
    const double n = frobenius_norm(t);
    if (n > 0.0) t = (target / n) * t;
    return t;
}

Tensor4 rank_k_tensor(Dims4 dims, int k, Rng& rng) {
    Tensor4 out(dims);
    for (int i = 0; i < k; ++i)
        out += outer_product(rng.normal_vector(dims.w),
                             rng.normal_vector(dims.h),
                             rng.normal_vector(dims.c),
                             rng.normal_vector(dims.t));
    return out;
}

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string sample_dir_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%04d", index);
    return buf;
}

}  // namespace

DatasetKind parse_dataset_kind(const std::string& name) {
    if (name == "smooth") return DatasetKind::Smooth;
    if (name == "gaussian") return DatasetKind::Gaussian;
    if (name == "rank-k") return DatasetKind::RankK;
    throw std::invalid_argument("unknown dataset kind: " + name);
}

std::string dataset_kind_name(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Smooth: return "smooth";
        case DatasetKind::Gaussian: return "gaussian";
        case DatasetKind::RankK: return "rank-k";
    }
    return "?";
}

std::vector<Tensor4> generate_synthetic_dataset(const DatasetSpec& spec) {
    if (spec.count < 1)
        throw std::invalid_argument("dataset: count must be >= 1");
    if (spec.kind == DatasetKind::RankK && spec.rank < 1)
        throw std::invalid_argument("dataset: rank-k needs rank >= 1");
    const double target_norm = std::sqrt(double(spec.dims.count()));
    std::vector<Tensor4> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        Rng rng(split_seed(spec.seed, static_cast<std::uint64_t>(i)));
        switch (spec.kind) {
            case DatasetKind::Smooth:
                out.push_back(scaled_to_norm(
                    smooth_tensor(spec.dims, rng, 0.005), target_norm));
                break;
            case DatasetKind::Gaussian:
                out.push_back(gaussian_tensor(spec.dims, rng));
                break;
            case DatasetKind::RankK:
                out.push_back(scaled_to_norm(
                    rank_k_tensor(spec.dims, spec.rank, rng), target_norm));
                break;
        }
    }
    return out;
}

std::string ModelSpec::to_string() const {
    switch (kind) {
        case ModelKind::Linear: {
            std::string t;
            for (double v : thresholds)
                t += (t.empty() ? "" : ";") + format_double(v);
            return "linear:seed=" + std::to_string(seed) +
                   ",structure=" + structure + ",thresholds=" + t;
        }
        case ModelKind::Centroid:
            return "centroid:seed=" + std::to_string(seed) +
                   ",structure=" + structure +
                   ",count=" + std::to_string(centroids);
        case ModelKind::Subprocess: return "subprocess:" + command;
    }
    return "?";
}

ModelSpec parse_model_spec(const std::string& spec) {
    ModelSpec out;
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "subprocess") {
        out.kind = ModelKind::Subprocess;
        out.command = rest;
        if (out.command.empty())
            throw std::invalid_argument("subprocess model needs a command");
        return out;
    }
    if (head == "linear")
        out.kind = ModelKind::Linear;
    else if (head == "centroid")
        out.kind = ModelKind::Centroid;
    else
        throw std::invalid_argument("unknown model kind: " + head);
    std::istringstream opts(rest);
    std::string opt;
    while (std::getline(opts, opt, ',')) {
        if (opt.empty()) continue;
        const auto eq = opt.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad model option: " + opt);
        const std::string key = opt.substr(0, eq);
        const std::string value = opt.substr(eq + 1);
        if (key == "seed")
            out.seed = std::stoull(value);
        else if (key == "structure")
            out.structure = value;
        else if (key == "thresholds") {
            std::string commas = value;
            std::replace(commas.begin(), commas.end(), ';', ',');
            out.thresholds = parse_double_list(commas);
        } else if (key == "count")
            out.centroids = std::stoi(value);
        else
            throw std::invalid_argument("unknown model option: " + key);
    }
    if (out.structure != "smooth" && out.structure != "gaussian")
        throw std::invalid_argument("model structure must be smooth|gaussian");
    return out;
}

std::unique_ptr<BlackBoxModel> make_model(const ModelSpec& spec, Dims4 dims) {
    const double target_norm = std::sqrt(double(dims.count()));
    auto parameter_tensor = [&](std::uint64_t stream) {
        Rng rng(split_seed(spec.seed, stream));
        if (spec.structure == "gaussian") return gaussian_tensor(dims, rng);
        return scaled_to_norm(smooth_tensor(dims, rng, 0.01), target_norm);
    };
    switch (spec.kind) {
        case ModelKind::Linear:
            return std::make_unique<LinearThresholdModel>(parameter_tensor(0),
                                                          spec.thresholds);
        case ModelKind::Centroid: {
            std::vector<Tensor4> centroids;
            for (int i = 0; i < spec.centroids; ++i)
                centroids.push_back(
                    parameter_tensor(static_cast<std::uint64_t>(i)));
            return std::make_unique<CentroidModel>(std::move(centroids));
        }
        case ModelKind::Subprocess:
            return std::make_unique<SubprocessModel>(spec.command, dims,
                                                     spec.timeout_seconds);
    }
    throw std::invalid_argument("unreachable model kind");
}

ExperimentConfig parse_experiment_config(const KeyValueConfig& kv) {
    ExperimentConfig cfg;
    cfg.snapshot = kv.raw_text();
    cfg.dataset.dims = parse_dims(kv.get_string("dims", "32x32x3x16"));
    cfg.dataset.count = static_cast<int>(kv.get_long("samples", 10));
    cfg.dataset.kind =
        parse_dataset_kind(kv.get_string("dataset.kind", "smooth"));
    cfg.dataset.rank = static_cast<int>(kv.get_long("dataset.rank", 1));
    cfg.seed = kv.get_u64("seed", 0);
    cfg.dataset.seed = split_seed(cfg.seed, fnv1a64("dataset"));
    cfg.out_dir = kv.get_string("out", "");

    const std::string model_kind = kv.get_string("model.kind", "linear");
    if (model_kind == "linear") {
        cfg.model.kind = ModelKind::Linear;
    } else if (model_kind == "centroid") {
        cfg.model.kind = ModelKind::Centroid;
    } else if (model_kind == "subprocess") {
        cfg.model.kind = ModelKind::Subprocess;
        cfg.model.command = kv.get_string("model.command", "");
        if (cfg.model.command.empty())
            throw std::invalid_argument("model.kind=subprocess needs model.command");
    } else {
        throw std::invalid_argument("bad model.kind: " + model_kind);
    }
    cfg.model.seed = kv.get_u64("model.seed", 1234);
    cfg.model.structure = kv.get_string("model.structure", "smooth");
    if (cfg.model.structure != "smooth" && cfg.model.structure != "gaussian")
        throw std::invalid_argument("model.structure must be smooth|gaussian");
    if (kv.has("model.thresholds"))
        cfg.model.thresholds =
            parse_double_list(kv.get_string("model.thresholds", "0"));
    cfg.model.centroids =
        static_cast<int>(kv.get_long("model.centroids", 2));
    cfg.model.timeout_seconds = kv.get_double("model.timeout_s", 30.0);

    std::istringstream names(kv.get_string("attacks", "tenad,baseline"));
    std::string name;
    while (std::getline(names, name, ',')) {
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        if (name.empty()) continue;
        NamedAttack attack;
        attack.name = name;
        const std::string prefix = "attack." + name + ".";
        attack.method = kv.get_string(
            prefix + "method",
            (name == "tenad" || name == "baseline") ? name : "");
        if (attack.method != "tenad" && attack.method != "baseline")
            throw std::invalid_argument("attack '" + name +
                                        "' needs method = tenad|baseline");
        attack.config = attack_config_from_kv(kv, prefix);
        cfg.attacks.push_back(std::move(attack));
    }
    if (cfg.attacks.empty())
        throw std::invalid_argument("no attacks configured");
    for (std::size_t i = 0; i < cfg.attacks.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.attacks.size(); ++j)
            if (cfg.attacks[i].name == cfg.attacks[j].name)
                throw std::invalid_argument("duplicate attack name: " +
                                            cfg.attacks[i].name);
    kv.reject_unused();
    return cfg;
}

ExperimentConfig parse_experiment_file(const std::filesystem::path& path) {
    return parse_experiment_config(KeyValueConfig::parse_file(path));
}

nlohmann::ordered_json attack_result_to_json(const AttackResult& r) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["success"] = r.success;
    j["g_star"] = r.g_star;
    j["queries_used"] = r.queries_used;
    j["original_label"] = r.original_label;
    j["adversarial_label"] = r.adversarial_label;
    j["param_count"] = r.param_count;
    j["loss_frobenius"] = r.loss_frobenius;
    if (r.loss_mode_sum)
        j["loss_mode_sum"] = *r.loss_mode_sum;
    else
        j["loss_mode_sum"] = nullptr;
    j["init_fallback"] = r.init_fallback;
    j["restarts"] = r.restarts;
    j["iterations"] = r.iterations;
    j["accepted_steps"] = r.accepted_steps;
    j["beta_final"] = r.beta_final;
    nlohmann::ordered_json traj = nlohmann::ordered_json::array();
    for (const TrajectoryPoint& p : r.trajectory)
        traj.push_back({{"g", p.g},
                        {"queries", p.queries},
                        {"accepted", p.accepted}});
    j["trajectory"] = std::move(traj);
    if (r.theta_star) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const FactorTerm& term : r.theta_star->terms) {
            nlohmann::ordered_json factors = nlohmann::ordered_json::array();
            for (const auto& v : term) {
                std::vector<double> vals(v.data(), v.data() + v.size());
                factors.push_back(vals);
            }
            terms.push_back(std::move(factors));
        }
        j["theta_star"] = std::move(terms);
    } else {
        j["theta_star"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json metrics_report_to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["mq"] = {{"value", r.mq.value}, {"defined", r.mq.defined}};
    j["map"] = r.map;
    j["map_star"] = {{"value", r.map_star.value},
                     {"empty_active", r.map_star.empty_active}};
    j["mssim"] = r.mssim;
    j["ssim_star"] = {{"value", r.ssim_star.value},
                      {"empty_active", r.ssim_star.empty_active}};
    j["fr"] = r.fr;
    nlohmann::ordered_json ranks = nlohmann::ordered_json::array();
    for (const RankTuple& t : r.error_rank.per_sample)
        ranks.push_back(t.to_string());
    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    for (const auto& [rank, count] : r.error_rank.histogram)
        hist.push_back({{"rank", rank.to_string()}, {"count", count}});
    j["error_rank"] = {{"per_sample", std::move(ranks)},
                       {"modal", r.error_rank.modal.to_string()},
                       {"histogram", std::move(hist)}};
    return j;
}

std::string per_sample_csv(std::span<const SamplePair> pairs,
                           std::span<const AttackOutcome> outcomes) {
    if (pairs.size() != outcomes.size())
        throw std::invalid_argument("per_sample_csv: size mismatch");
    std::ostringstream csv;
    csv << "sample,MQ,MAP,MAP*,SSIM,SSIM*,FR,error_rank\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::span<const SamplePair> one{&pairs[i], 1};
        const double map_v = mean_absolute_perturbation(one);
        const ActiveValue maps = map_star(one);
        const double ssim_v = mssim(one);
        const ActiveValue ssims = ssim_star(one);
        const RankTuple rank = multilinear_rank(pairs[i].adversarial -
                                                pairs[i].clean);
        csv << i << "," << outcomes[i].queries << ","
            << format_double(map_v) << "," << format_double(maps.value) << ","
            << format_double(ssim_v) << "," << format_double(ssims.value)
            << "," << (outcomes[i].success ? 100 : 0) << ",\""
            << rank.to_string() << "\"\n";
    }
    const MetricsReport agg = compute_metrics(pairs, outcomes);
    csv << "summary," << format_double(agg.mq.value) << ","
        << format_double(agg.map) << "," << format_double(agg.map_star.value)
        << "," << format_double(agg.mssim) << ","
        << format_double(agg.ssim_star.value) << "," << format_double(agg.fr)
        << ",\"" << agg.error_rank.modal.to_string() << "\"\n";
    return csv.str();
}

std::string comparison_csv(
    const std::vector<std::pair<std::string, MetricsReport>>& reports) {
    std::ostringstream csv;
    csv << "attack,n,MQ,MAP,MAP*,SSIM,SSIM*,FR,error_rank_modal\n";
    for (const auto& [name, r] : reports) {
        csv << name << "," << r.n << "," << format_double(r.mq.value) << ","
            << format_double(r.map) << "," << format_double(r.map_star.value)
            << "," << format_double(r.mssim) << ","
            << format_double(r.ssim_star.value) << "," << format_double(r.fr)
            << ",\"" << r.error_rank.modal.to_string() << "\"\n";
    }
    return csv.str();
}

namespace {

void write_reports(const std::filesystem::path& out_dir,
                   const std::vector<std::string>& attack_order,
                   ExperimentOutcome& outcome,
                   const std::map<std::string, std::vector<SamplePair>>& pairs,
                   const std::map<std::string, std::vector<AttackOutcome>>& outcomes) {
    std::vector<std::pair<std::string, MetricsReport>> table;
    for (const std::string& name : attack_order) {
        const auto& p = pairs.at(name);
        const auto& o = outcomes.at(name);
        if (p.empty()) continue;  // every sample errored
        AttackSummary summary;
        summary.report = compute_metrics(p, o);
        summary.outcomes = o;
        write_text(out_dir / ("metrics_" + name + ".json"),
                   json_dump(metrics_report_to_json(summary.report)));
        write_text(out_dir / ("per_sample_" + name + ".csv"),
                   per_sample_csv(p, o));
        table.emplace_back(name, summary.report);
        outcome.attacks.emplace(name, std::move(summary));
    }
    write_text(out_dir / "comparison.csv", comparison_csv(table));

    nlohmann::ordered_json j;
    j["samples_total"] = outcome.samples_total;
    j["samples_errored"] = outcome.samples_errored;
    j["attacks"] = attack_order;
    j["errors"] = outcome.errors;
    nlohmann::ordered_json reports;
    for (const auto& [name, report] : table)
        reports[name] = metrics_report_to_json(report);
    j["metrics"] = std::move(reports);
    write_text(out_dir / "experiment.json", json_dump(j));
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "samples");
    write_text(out_dir / "config.txt", cfg.snapshot);

    const std::vector<Tensor4> dataset = generate_synthetic_dataset(cfg.dataset);

    ExperimentOutcome outcome;
    outcome.samples_total = cfg.dataset.count;

    std::vector<std::string> attack_order;
    std::map<std::string, std::vector<SamplePair>> pairs;
    std::map<std::string, std::vector<AttackOutcome>> outcomes;
    for (const NamedAttack& a : cfg.attacks) {
        attack_order.push_back(a.name);
        pairs[a.name];
        outcomes[a.name];
    }

    for (int i = 0; i < cfg.dataset.count; ++i) {
        const Tensor4& clean = dataset[static_cast<std::size_t>(i)];
        const fs::path sample_dir = out_dir / "samples" / sample_dir_name(i);
        fs::create_directories(sample_dir);
        write_ten4(clean, sample_dir / "clean.ten4");

        // Stage this sample's results; commit only if every attack ran, so
        // cross-attack aggregates always cover the same samples.
        std::map<std::string, std::pair<SamplePair, AttackOutcome>> staged;
        try {
            auto label_model = make_model(cfg.model, cfg.dataset.dims);
            const Label label = label_model->predict(clean);
            nlohmann::ordered_json sj;
            sj["id"] = i;
            sj["label"] = label;
            write_text(sample_dir / "sample.json", json_dump(sj));

            const std::uint64_t sample_seed =
                split_seed(cfg.seed, static_cast<std::uint64_t>(i));
            for (const NamedAttack& a : cfg.attacks) {
                auto model = make_model(cfg.model, cfg.dataset.dims);
                AttackConfig acfg = a.config;
                acfg.seed =
                    split_seed(sample_seed, fnv1a64(a.name) ^ a.config.seed);
                const AttackResult result =
                    a.method == "tenad"
                        ? tenad_attack(*model, clean, acfg)
                        : opt_attack_baseline(*model, clean, acfg);
                const fs::path attack_dir = sample_dir / a.name;
                fs::create_directories(attack_dir);
                write_ten4(result.adversarial, attack_dir / "adversarial.ten4");
                write_text(attack_dir / "result.json",
                           json_dump(attack_result_to_json(result)));
                staged.emplace(a.name,
                               std::make_pair(
                                   SamplePair{clean, result.adversarial},
                                   AttackOutcome{result.success,
                                                 result.queries_used}));
            }
        } catch (const std::exception& e) {
            ++outcome.samples_errored;
            const std::string msg =
                "sample " + std::to_string(i) + ": " + e.what();
            outcome.errors.push_back(msg);
            write_text(sample_dir / "error.txt", msg + "\n");
            continue;
        }
        for (auto& [name, staged_pair] : staged) {
            pairs[name].push_back(std::move(staged_pair.first));
            outcomes[name].push_back(staged_pair.second);
        }
    }

    write_reports(out_dir, attack_order, outcome, pairs, outcomes);
    return outcome;
}

ExperimentOutcome recompute_metrics(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path index_path = dir / "experiment.json";
    if (!fs::exists(index_path))
        throw std::invalid_argument("no experiment.json under " +
                                    dir.string());
    const nlohmann::json index = nlohmann::json::parse(read_text(index_path));

    std::vector<std::string> attack_order;
    for (const auto& name : index.at("attacks"))
        attack_order.push_back(name.get<std::string>());

    ExperimentOutcome outcome;
    std::map<std::string, std::vector<SamplePair>> pairs;
    std::map<std::string, std::vector<AttackOutcome>> outcomes;
    for (const std::string& name : attack_order) {
        pairs[name];
        outcomes[name];
    }

    std::vector<fs::path> sample_dirs;
    for (const auto& entry : fs::directory_iterator(dir / "samples"))
        if (entry.is_directory()) sample_dirs.push_back(entry.path());
    std::sort(sample_dirs.begin(), sample_dirs.end());

    for (const fs::path& sample_dir : sample_dirs) {
        ++outcome.samples_total;
        if (fs::exists(sample_dir / "error.txt")) {
            ++outcome.samples_errored;
            std::string msg = read_text(sample_dir / "error.txt");
            while (!msg.empty() && (msg.back() == '\n' || msg.back() == '\r'))
                msg.pop_back();
            outcome.errors.push_back(std::move(msg));
            continue;
        }
        const Tensor4 clean = read_ten4(sample_dir / "clean.ten4");
        for (const std::string& name : attack_order) {
            const fs::path attack_dir = sample_dir / name;
            const nlohmann::json rj =
                nlohmann::json::parse(read_text(attack_dir / "result.json"));
            pairs[name].push_back(
                {clean, read_ten4(attack_dir / "adversarial.ten4")});
            outcomes[name].push_back({rj.at("success").get<bool>(),
                                      rj.at("queries_used").get<long>()});
        }
    }

    write_reports(dir, attack_order, outcome, pairs, outcomes);
    return outcome;
}

DemoRank1Result demo_rank1_constant(const Tensor4& x, double magnitude) {
    DemoRank1Result out;
    const Tensor4 perturbation(x.dims(), magnitude);
    out.adversarial = x + perturbation;
    out.perturbation_rank = multilinear_rank(perturbation);
    out.map = abs_sum(perturbation) / static_cast<double>(perturbation.size());
    return out;
}

}  // namespace tenad
