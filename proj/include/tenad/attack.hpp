#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tenad/model.hpp"
#include "tenad/rng.hpp"
#include "tenad/tensor.hpp"

namespace tenad {

/// One rank-one term: a factor vector per mode.
using FactorTerm = std::array<Eigen::VectorXd, 4>;

/// The low-rank attack variable: l >= 1 rank-one terms. Every factor
/// vector must have a strictly positive 2-norm and match the target
/// tensor's extents.
struct FactorSet {
    std::vector<FactorTerm> terms;

    int rank() const { return static_cast<int>(terms.size()); }
    void validate(const Dims4& dims) const;
    long parameter_count() const;
};

enum class InitMode { HosvdColumn, Gaussian };
enum class GradMode { PerFactor, ChainRule };

struct AttackConfig {
    int rank = 1;             // l, number of rank-one terms
    long query_budget = 10000;
    double alpha = 0.2;       // initial gradient-descent step size
    double beta = 0.05;       // smoothing parameter, decays by 10x
    double beta_floor = 1e-6; // terminate once beta falls below this
    double lambda_tol = 1e-4; // relative bisection tolerance on g
    double lambda0_factor = 0.1;    // first coarse probe, x ||x||_F
    double lambda_cap_factor = 10.0;  // give up past this, x ||x||_F
    InitMode init = InitMode::HosvdColumn;
    std::array<int, 4> init_q{1, 1, 1, 1};  // 1-based factor columns
    GradMode grad_mode = GradMode::ChainRule;
    int directions_per_step = 1;
    std::uint64_t seed = 0;
    bool clamp = false;       // optional post-hoc clamp of the adversary
    double clamp_min = 0.0;
    double clamp_max = 255.0;

    void validate() const;
};

struct TrajectoryPoint {
    double g = 0.0;
    long queries = 0;
    bool accepted = false;
};

struct AttackResult {
    Tensor4 adversarial;
    double g_star = 0.0;
    std::optional<FactorSet> theta_star;  // absent for the full-space baseline
    long queries_used = 0;
    bool success = false;
    std::vector<TrajectoryPoint> trajectory;
    double loss_frobenius = 0.0;             // Frobenius-squared loss of E
    std::optional<double> loss_mode_sum;     // mode-sum loss of E's factors
    long param_count = 0;
    Label original_label = 0;
    Label adversarial_label = 0;
    bool init_fallback = false;
    int restarts = 0;
    long iterations = 0;
    long accepted_steps = 0;
    double beta_final = 0.0;
    std::string method;
};

struct DirectionScale {
    Tensor4 unit;  // unit Frobenius norm
    double scale = 0.0;
};

/// Unit attack direction of a factor set. For one term this is the outer
/// product of the per-mode-normalized factors (unit by norm
/// multiplicativity) with scale = prod_j ||theta_j||. For several terms
/// the per-term normalized outer products are summed and the sum is
/// normalized globally, with scale = ||sum||_F.
DirectionScale assemble_direction(const FactorSet& theta);

/// (sum_i prod_j ||theta_i_j||^2, sum_i sum_j ||theta_i_j||^2): the
/// Frobenius-style and mode-sum losses of a factor set.
std::pair<double, double> loss_values(const FactorSet& theta);

struct GEvalResult {
    std::optional<double> lambda;  // nullopt: no flip within the cap
    long queries = 0;
};

/// Boundary distance along a fixed unit direction: the smallest magnitude
/// lambda with predict(x + lambda*d) != y, found by geometric coarse
/// search from lambda0 (doubling until the label flips or the cap
/// cfg.lambda_cap_factor * ||x|| is passed) and then bisection until the
/// bracket is within cfg.lambda_tol relative. The returned lambda is the
/// verified-flipped bracket end. y must already be known; x itself is not
/// re-queried. lambda0_hint <= 0 selects cfg.lambda0_factor * ||x||.
GEvalResult g_eval(BlackBoxModel& model, const Tensor4& x, const Tensor4& d,
                   Label y, const AttackConfig& cfg,
                   double lambda0_hint = 0.0);

/// Worst-case model queries one g_eval can consume for a given start.
long g_eval_query_bound(const AttackConfig& cfg, double x_norm,
                        double lambda0_hint = 0.0);

/// Objective used by the factor-space estimator: g as a function of a
/// factor set, nullopt when the assembled direction cannot flip the label.
using FactorObjective =
    std::function<std::optional<double>(const FactorSet&)>;
/// Objective used by the full-space estimators: g at a (not necessarily
/// unit) tensor point; implementations normalize internally.
using TensorObjective = std::function<std::optional<double>(const Tensor4&)>;

struct FactorGradient {
    std::vector<FactorTerm> grads;  // same shape as the factor set
    bool informative = false;
    long objective_calls = 0;
};

/// One estimator probe per (term, mode): draw a Gaussian vector u of the
/// mode's extent, evaluate g with that one factor shifted by beta*u, and
/// return ((g(shifted) - g(theta)) / beta) * u. Components whose probe
/// cannot flip the label are zero; `informative` is false when every
/// component is zero or infeasible.
FactorGradient grad_per_factor(const FactorObjective& g_fn,
                               const FactorSet& theta, double g_theta,
                               double beta, Rng& rng);

/// Chain-rule estimator: estimate the full-space gradient G at the
/// assembled direction with one Gaussian-tensor probe, then contract G
/// with the other modes' factor vectors to get each factor gradient.
FactorGradient grad_chain_rule(const TensorObjective& g_fn,
                               const FactorSet& theta, double g_theta,
                               double beta, Rng& rng);

/// Mode-product form of the chain rule: gradient w.r.t. factor j is G
/// contracted with the other three factors as 1 x I_k row matrices.
std::array<Eigen::VectorXd, 4> contract_gradient(const Tensor4& g_tensor,
                                                 const FactorTerm& term);

struct TensorGradient {
    Tensor4 grad;
    bool informative = false;
    long objective_calls = 0;
};

/// Full-space finite-difference estimator used by the vectorized
/// baseline: ((g(rho + beta*U) - g(rho)) / beta) * U with Gaussian U.
TensorGradient grad_full_space(const TensorObjective& g_fn,
                               const Tensor4& rho, double g_rho, double beta,
                               Rng& rng);

struct InitTheta {
    FactorSet theta;
    bool used_fallback = false;  // zero input forced a Gaussian init
};

/// hosvd-column init takes factor column q_j per mode (consecutive
/// columns for additional terms); gaussian init draws i.i.d. standard
/// normals. A zero input tensor falls back to gaussian with a flag.
InitTheta init_theta(const Tensor4& x, const AttackConfig& cfg, Rng& rng);

struct AttackHooks {
    /// Called after every accepted step with the unit direction and its g.
    std::function<void(const Tensor4& unit_direction, double g)> on_accept;
};

/// The low-rank attack: zeroth-order descent of the boundary distance over
/// the factor parametrization.
AttackResult tenad_attack(BlackBoxModel& model, const Tensor4& x,
                          const AttackConfig& cfg,
                          const AttackHooks* hooks = nullptr);

/// Vectorized baseline: the same loop, acceptance, and termination rules
/// with a full tensor as the optimization variable, so query comparisons
/// isolate the parametrization.
AttackResult opt_attack_baseline(BlackBoxModel& model, const Tensor4& x,
                                 const AttackConfig& cfg,
                                 const AttackHooks* hooks = nullptr);

}  // namespace tenad
