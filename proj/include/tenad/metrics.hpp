#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tenad/decomposition.hpp"
#include "tenad/tensor.hpp"

namespace tenad {

/// A clean video and its attacked counterpart.
struct SamplePair {
    Tensor4 clean;
    Tensor4 adversarial;
};

/// The per-attack fields the aggregate metrics need.
struct AttackOutcome {
    bool success = false;
    long queries = 0;
};

/// MAP: mean over pairs of (entrywise absolute perturbation sum) / (W*H*C*T).
double mean_absolute_perturbation(std::span<const SamplePair> pairs);

struct ActiveValue {
    double value = 0.0;
    bool empty_active = false;  // no pixel crossed the activity threshold
};

/// MAP restricted to the active set: frames whose max-abs perturbation
/// exceeds eps_active, and within them the pixels exceeding eps_active.
/// Pairs without active pixels are skipped; if none remain the value is 0
/// with the empty flag set.
ActiveValue map_star(std::span<const SamplePair> pairs,
                     double eps_active = 1e-8);

/// Structural similarity of two W x H x C x 1 frames: per channel, a
/// sliding Gaussian window of side min(11, W, H) and sigma 1.5 over all
/// fully-contained positions, stabilized by C1 = (0.01 L)^2 and
/// C2 = (0.03 L)^2, averaged over windows and channels.
double ssim_frame(const Tensor4& a, const Tensor4& b,
                  double dynamic_range = 255.0);

/// Mean SSIM over every frame of every pair.
double mssim(std::span<const SamplePair> pairs, double dynamic_range = 255.0);

/// Mean SSIM over active frames only (value 1 with the empty flag when no
/// frame is perturbed above eps_active).
ActiveValue ssim_star(std::span<const SamplePair> pairs,
                      double eps_active = 1e-8, double dynamic_range = 255.0);

/// Percentage of successful attacks.
double fooling_rate(std::span<const AttackOutcome> outcomes);

struct MeanQueries {
    double value = 0.0;
    bool defined = false;  // false when there is no successful attack
};

/// Mean queries over successful attacks only.
MeanQueries mean_queries(std::span<const AttackOutcome> outcomes);

struct ErrorRankReport {
    std::vector<RankTuple> per_sample;
    RankTuple modal;  // most frequent tuple, lowest on ties
    std::vector<std::pair<RankTuple, int>> histogram;
};

/// Multilinear rank of every perturbation plus the modal tuple.
ErrorRankReport error_rank_report(std::span<const SamplePair> pairs,
                                  double tol = 1e-8);

struct MetricsReport {
    long n = 0;
    MeanQueries mq;
    double map = 0.0;
    ActiveValue map_star;
    double mssim = 0.0;
    ActiveValue ssim_star;
    double fr = 0.0;
    ErrorRankReport error_rank;
};

MetricsReport compute_metrics(std::span<const SamplePair> pairs,
                              std::span<const AttackOutcome> outcomes,
                              double eps_active = 1e-8,
                              double dynamic_range = 255.0);

/// Fixed shortest-deterministic formatting used in every CSV cell.
std::string format_double(double v);

}  // namespace tenad
