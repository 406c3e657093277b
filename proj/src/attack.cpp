#include "tenad/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "tenad/decomposition.hpp"

namespace tenad {

namespace {

constexpr double kZeroDiff = 1e-12;        // probe differences below this carry no signal
constexpr double kNegligibleStep = 1e-9;   // relative direction change below measurement

Eigen::VectorXd nonzero_normal_vector(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd v = rng.normal_vector(n);
    while (v.norm() == 0.0) v = rng.normal_vector(n);
    return v;
}

// Probe directions are Gaussian draws normalized to unit length, so the
// estimator scale is set by the measured difference alone.
Eigen::VectorXd unit_normal_vector(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd v = nonzero_normal_vector(rng, n);
    return v / v.norm();
}

FactorSet gaussian_theta(const Dims4& dims, int rank, Rng& rng) {
    FactorSet theta;
    theta.terms.reserve(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) {
        FactorTerm term{nonzero_normal_vector(rng, dims.w),
                        nonzero_normal_vector(rng, dims.h),
                        nonzero_normal_vector(rng, dims.c),
                        nonzero_normal_vector(rng, dims.t)};
        theta.terms.push_back(std::move(term));
    }
    return theta;
}

Tensor4 gaussian_tensor(const Dims4& dims, Rng& rng) {
    Tensor4 t(dims);
    auto v = t.vec();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    return t;
}

Tensor4 unit_gaussian_tensor(const Dims4& dims, Rng& rng) {
    Tensor4 t = gaussian_tensor(dims, rng);
    double n = frobenius_norm(t);
    while (n == 0.0) {
        t = gaussian_tensor(dims, rng);
        n = frobenius_norm(t);
    }
    return (1.0 / n) * t;
}

}  // namespace

void FactorSet::validate(const Dims4& dims) const {
    if (terms.empty())
        throw std::invalid_argument("FactorSet: needs at least one term");
    const std::array<std::uint32_t, 4> ext{dims.w, dims.h, dims.c, dims.t};
    for (const FactorTerm& term : terms) {
        for (int j = 0; j < 4; ++j) {
            if (term[j].size() != static_cast<Eigen::Index>(ext[j]))
                throw std::invalid_argument(
                    "FactorSet: mode-" + std::to_string(j + 1) +
                    " factor length " + std::to_string(term[j].size()) +
                    " does not match extent " + std::to_string(ext[j]));
            if (term[j].norm() == 0.0)
                throw std::invalid_argument(
                    "FactorSet: zero-norm mode-" + std::to_string(j + 1) +
                    " factor");
        }
    }
}

long FactorSet::parameter_count() const {
    long n = 0;
    for (const FactorTerm& term : terms)
        for (const auto& v : term) n += static_cast<long>(v.size());
    return n;
}

void AttackConfig::validate() const {
    if (rank < 1) throw std::invalid_argument("AttackConfig: rank must be >= 1");
    if (query_budget < 1)
        throw std::invalid_argument("AttackConfig: query_budget must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("AttackConfig: alpha <= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("AttackConfig: beta <= 0");
    if (!(beta_floor > 0.0))
        throw std::invalid_argument("AttackConfig: beta_floor <= 0");
    if (!(lambda_tol > 0.0 && lambda_tol < 0.5))
        throw std::invalid_argument("AttackConfig: lambda_tol outside (0,0.5)");
    if (!(lambda0_factor > 0.0))
        throw std::invalid_argument("AttackConfig: lambda0_factor <= 0");
    if (!(lambda_cap_factor >= lambda0_factor))
        throw std::invalid_argument(
            "AttackConfig: lambda_cap_factor below lambda0_factor");
    if (directions_per_step < 1)
        throw std::invalid_argument("AttackConfig: directions_per_step < 1");
    for (int q : init_q)
        if (q < 1) throw std::invalid_argument("AttackConfig: init_q < 1");
    if (clamp && !(clamp_min < clamp_max))
        throw std::invalid_argument("AttackConfig: clamp range empty");
}

DirectionScale assemble_direction(const FactorSet& theta) {
    if (theta.terms.empty())
        throw std::invalid_argument("assemble_direction: empty factor set");
    std::optional<Tensor4> sum;
    for (const FactorTerm& term : theta.terms) {
        std::array<Eigen::VectorXd, 4> unit;
        for (int j = 0; j < 4; ++j) {
            const double n = term[j].norm();
            if (n == 0.0)
                throw std::invalid_argument(
                    "assemble_direction: zero-norm factor");
            unit[j] = term[j] / n;
        }
        Tensor4 one = outer_product(unit[0], unit[1], unit[2], unit[3]);
        if (sum)
            *sum += one;
        else
            sum = std::move(one);
    }
    if (theta.terms.size() == 1) {
        double scale = 1.0;
        for (const auto& v : theta.terms.front()) scale *= v.norm();
        return {std::move(*sum), scale};
    }
    const double norm = frobenius_norm(*sum);
    if (norm == 0.0)
        throw std::invalid_argument(
            "assemble_direction: terms cancel to the zero tensor");
    return {(1.0 / norm) * *sum, norm};
}

std::pair<double, double> loss_values(const FactorSet& theta) {
    double frob = 0.0;
    double mode_sum = 0.0;
    for (const FactorTerm& term : theta.terms) {
        double prod = 1.0;
        for (const auto& v : term) {
            const double sq = v.squaredNorm();
            prod *= sq;
            mode_sum += sq;
        }
        frob += prod;
    }
    return {frob, mode_sum};
}

GEvalResult g_eval(BlackBoxModel& model, const Tensor4& x, const Tensor4& d,
                   Label y, const AttackConfig& cfg, double lambda0_hint) {
    const double dnorm = frobenius_norm(d);
    if (std::abs(dnorm - 1.0) > 1e-10)
        throw std::invalid_argument("g_eval: direction is not unit norm");
    const double x_norm = frobenius_norm(x);
    double cap = cfg.lambda_cap_factor * x_norm;
    if (!(cap > 0.0)) cap = cfg.lambda_cap_factor;
    double lam0 = lambda0_hint > 0.0 ? lambda0_hint : cfg.lambda0_factor * x_norm;
    if (!(lam0 > 0.0)) lam0 = cfg.lambda0_factor;
    lam0 = std::min(lam0, cap);

    long queries = 0;
    auto flips = [&](double lam) {
        ++queries;
        return model.predict(add_scaled(x, lam, d)) != y;
    };

    double lo = 0.0;
    std::optional<double> hi;
    for (double lam = lam0; lam <= cap; lam *= 2.0) {
        if (flips(lam)) {
            hi = lam;
            break;
        }
        lo = lam;
    }
    if (!hi) return {std::nullopt, queries};

    // The hard iteration cap keeps the worst-case query cost predictable;
    // with the coarse bracket it still meets the relative tolerance.
    const long max_bisect =
        static_cast<long>(std::ceil(std::log2(1.0 / cfg.lambda_tol))) + 1;
    for (long it = 0; it < max_bisect && (*hi - lo) > cfg.lambda_tol * *hi;
         ++it) {
        const double mid = 0.5 * (lo + *hi);
        if (!(mid > lo) || !(mid < *hi)) break;
        if (flips(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {hi, queries};
}

long g_eval_query_bound(const AttackConfig& cfg, double x_norm,
                        double lambda0_hint) {
    double cap = cfg.lambda_cap_factor * x_norm;
    if (!(cap > 0.0)) cap = cfg.lambda_cap_factor;
    double lam0 = lambda0_hint > 0.0 ? lambda0_hint : cfg.lambda0_factor * x_norm;
    if (!(lam0 > 0.0)) lam0 = cfg.lambda0_factor;
    lam0 = std::min(lam0, cap);
    const long coarse =
        1 + std::max<long>(
                0, static_cast<long>(std::ceil(std::log2(cap / lam0))) + 1);
    const long bisect =
        static_cast<long>(std::ceil(std::log2(1.0 / cfg.lambda_tol))) + 1;
    return coarse + bisect;
}

FactorGradient grad_per_factor(const FactorObjective& g_fn,
                               const FactorSet& theta, double g_theta,
                               double beta, Rng& rng) {
    FactorGradient out;
    out.grads.resize(theta.terms.size());
    bool any_signal = false;
    for (std::size_t i = 0; i < theta.terms.size(); ++i) {
        for (int j = 0; j < 4; ++j) {
            const Eigen::Index n = theta.terms[i][j].size();
            Eigen::VectorXd u = unit_normal_vector(rng, n);
            FactorSet shifted = theta;
            shifted.terms[i][j] += beta * u;
            out.grads[i][j] = Eigen::VectorXd::Zero(n);
            if (shifted.terms[i][j].norm() == 0.0) continue;
            std::optional<double> gp = g_fn(shifted);
            ++out.objective_calls;
            if (!gp) continue;
            const double diff = *gp - g_theta;
            if (std::abs(diff) < kZeroDiff) continue;
            out.grads[i][j] = (diff / beta) * u;
            any_signal = true;
        }
    }
    out.informative = any_signal;
    return out;
}

std::array<Eigen::VectorXd, 4> contract_gradient(const Tensor4& g_tensor,
                                                 const FactorTerm& term) {
    std::array<Eigen::VectorXd, 4> out;
    for (int j = 0; j < 4; ++j) {
        Tensor4 contracted = g_tensor;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            Eigen::MatrixXd row = term[k].transpose();  // 1 x I_k
            contracted = mode_n_product(contracted, row, k + 1);
        }
        const std::uint32_t extent = g_tensor.dims().extent(j + 1);
        Eigen::VectorXd v(extent);
        // All other modes now have extent 1; the data is the mode-j fiber.
        for (std::uint32_t i = 0; i < extent; ++i)
            v[i] = contracted.data()[i];
        out[j] = std::move(v);
    }
    return out;
}

FactorGradient grad_chain_rule(const TensorObjective& g_fn,
                               const FactorSet& theta, double g_theta,
                               double beta, Rng& rng) {
    FactorGradient out;
    out.grads.resize(theta.terms.size());
    const DirectionScale dir = assemble_direction(theta);
    Tensor4 u = unit_gaussian_tensor(dir.unit.dims(), rng);
    std::optional<double> gp = g_fn(add_scaled(dir.unit, beta, u));
    out.objective_calls = 1;
    for (std::size_t i = 0; i < theta.terms.size(); ++i)
        for (int j = 0; j < 4; ++j)
            out.grads[i][j] =
                Eigen::VectorXd::Zero(theta.terms[i][j].size());
    if (!gp) return out;
    const double diff = *gp - g_theta;
    if (std::abs(diff) < kZeroDiff) return out;
    Tensor4 g_full = (diff / beta) * u;
    for (std::size_t i = 0; i < theta.terms.size(); ++i)
        out.grads[i] = contract_gradient(g_full, theta.terms[i]);
    out.informative = true;
    return out;
}

TensorGradient grad_full_space(const TensorObjective& g_fn, const Tensor4& rho,
                               double g_rho, double beta, Rng& rng) {
    TensorGradient out;
    out.grad = Tensor4(rho.dims());
    Tensor4 u = unit_gaussian_tensor(rho.dims(), rng);
    std::optional<double> gp = g_fn(add_scaled(rho, beta, u));
    out.objective_calls = 1;
    if (!gp) return out;
    const double diff = *gp - g_rho;
    if (std::abs(diff) < kZeroDiff) return out;
    out.grad = (diff / beta) * u;
    out.informative = true;
    return out;
}

InitTheta init_theta(const Tensor4& x, const AttackConfig& cfg, Rng& rng) {
    cfg.validate();
    const Dims4 dims = x.dims();
    if (cfg.init == InitMode::Gaussian)
        return {gaussian_theta(dims, cfg.rank, rng), false};

    if (frobenius_norm(x) == 0.0)
        return {gaussian_theta(dims, cfg.rank, rng), true};

    const std::array<std::uint32_t, 4> ext{dims.w, dims.h, dims.c, dims.t};
    for (int j = 0; j < 4; ++j) {
        const int last = cfg.init_q[j] - 1 + (cfg.rank - 1);
        if (last >= static_cast<int>(ext[j]))
            throw std::invalid_argument(
                "init_theta: column " + std::to_string(last + 1) +
                " exceeds mode-" + std::to_string(j + 1) + " extent " +
                std::to_string(ext[j]));
    }
    FactorMatrixSet f = hosvd(x);
    FactorSet theta;
    theta.terms.reserve(static_cast<std::size_t>(cfg.rank));
    for (int i = 0; i < cfg.rank; ++i) {
        FactorTerm term;
        for (int j = 0; j < 4; ++j)
            term[j] = f.factors[j].col(cfg.init_q[j] - 1 + i);
        theta.terms.push_back(std::move(term));
    }
    return {std::move(theta), false};
}

namespace {

struct BudgetExhausted {};

struct Objectives {
    FactorObjective on_factors;
    TensorObjective on_tensor;
};

// Factor-space parametrization (the low-rank attack variable).
struct FactorParam {
    FactorSet theta;
    GradMode grad_mode = GradMode::PerFactor;

    using Step = std::vector<FactorTerm>;

    DirectionScale direction() const { return assemble_direction(theta); }
    long param_count() const { return theta.parameter_count(); }

    std::optional<Step> estimate(const Objectives& obj, double g_cur,
                                 double beta, Rng& rng, int probes) const {
        Step sum;
        int informative = 0;
        for (int p = 0; p < probes; ++p) {
            FactorGradient fg =
                grad_mode == GradMode::PerFactor
                    ? grad_per_factor(obj.on_factors, theta, g_cur, beta, rng)
                    : grad_chain_rule(obj.on_tensor, theta, g_cur, beta, rng);
            if (!fg.informative) continue;
            if (sum.empty()) {
                sum = std::move(fg.grads);
            } else {
                for (std::size_t i = 0; i < sum.size(); ++i)
                    for (int j = 0; j < 4; ++j) sum[i][j] += fg.grads[i][j];
            }
            ++informative;
        }
        if (informative == 0) return std::nullopt;
        if (informative > 1)
            for (auto& term : sum)
                for (auto& v : term) v /= double(informative);
        return sum;
    }

    double relative_step_scale(const Step& step) const {
        double scale = 0.0;
        for (std::size_t i = 0; i < theta.terms.size(); ++i)
            for (int j = 0; j < 4; ++j)
                scale = std::max(scale, step[i][j].norm() /
                                            theta.terms[i][j].norm());
        return scale;
    }

    std::optional<FactorParam> apply(double alpha, const Step& step) const {
        FactorParam next = *this;
        for (std::size_t i = 0; i < next.theta.terms.size(); ++i)
            for (int j = 0; j < 4; ++j) {
                next.theta.terms[i][j] -= alpha * step[i][j];
                if (next.theta.terms[i][j].norm() == 0.0) return std::nullopt;
            }
        return next;
    }

    FactorParam negated() const {
        FactorParam out = *this;
        for (FactorTerm& term : out.theta.terms) term[0] = -term[0];
        return out;
    }

    void random_restart(const Dims4& dims, int rank, Rng& rng) {
        theta = gaussian_theta(dims, rank, rng);
    }

    // g is invariant to per-mode scaling, so factors can be rescaled to
    // unit norm after a step; probes then keep a fixed relative size.
    void renormalize() {
        for (FactorTerm& term : theta.terms)
            for (auto& v : term) v /= v.norm();
    }
};

// Full-space parametrization (the vectorized baseline variable).
struct FullParam {
    Tensor4 rho;

    using Step = Tensor4;

    DirectionScale direction() const {
        const double n = frobenius_norm(rho);
        if (n == 0.0)
            throw std::invalid_argument("baseline direction is zero");
        return {(1.0 / n) * rho, n};
    }
    long param_count() const { return static_cast<long>(rho.size()); }

    std::optional<Step> estimate(const Objectives& obj, double g_cur,
                                 double beta, Rng& rng, int probes) const {
        std::optional<Tensor4> sum;
        int informative = 0;
        for (int p = 0; p < probes; ++p) {
            TensorGradient tg =
                grad_full_space(obj.on_tensor, rho, g_cur, beta, rng);
            if (!tg.informative) continue;
            if (sum)
                *sum += tg.grad;
            else
                sum = std::move(tg.grad);
            ++informative;
        }
        if (informative == 0) return std::nullopt;
        if (informative > 1) *sum = (1.0 / informative) * *sum;
        return sum;
    }

    double relative_step_scale(const Step& step) const {
        return frobenius_norm(step) / frobenius_norm(rho);
    }

    std::optional<FullParam> apply(double alpha, const Step& step) const {
        FullParam next{add_scaled(rho, -alpha, step)};
        if (frobenius_norm(next.rho) == 0.0) return std::nullopt;
        return next;
    }

    FullParam negated() const { return {-1.0 * rho}; }

    void random_restart(const Dims4& dims, int /*rank*/, Rng& rng) {
        rho = unit_gaussian_tensor(dims, rng);
    }

    void renormalize() { rho = (1.0 / frobenius_norm(rho)) * rho; }
};

void clamp_tensor(Tensor4& t, double lo, double hi) {
    for (double& v : t.data()) v = std::clamp(v, lo, hi);
}

template <typename Param>
AttackResult run_attack(BlackBoxModel& model, const Tensor4& x,
                        const AttackConfig& cfg, const AttackHooks* hooks,
                        std::string method, bool keep_theta) {
    cfg.validate();
    const double x_norm = frobenius_norm(x);
    const std::uint64_t start_count = model.query_count();
    auto used = [&] {
        return static_cast<long>(model.query_count() - start_count);
    };

    AttackResult res;
    res.method = std::move(method);

    const Label y = model.predict(x);
    res.original_label = y;
    res.adversarial_label = y;

    Rng rng(cfg.seed);
    // One query stays reserved for the final confirmation.
    const long loop_budget = cfg.query_budget - 1;

    auto checked_g = [&](const Tensor4& unit,
                         double hint) -> std::optional<double> {
        if (used() + g_eval_query_bound(cfg, x_norm, hint) > loop_budget)
            throw BudgetExhausted{};
        return g_eval(model, x, unit, y, cfg, hint).lambda;
    };

    double g_cur = 0.0;
    Objectives obj;
    obj.on_factors = [&](const FactorSet& th) -> std::optional<double> {
        return checked_g(assemble_direction(th).unit, g_cur);
    };
    obj.on_tensor = [&](const Tensor4& p) -> std::optional<double> {
        const double n = frobenius_norm(p);
        if (n == 0.0) return std::nullopt;
        return checked_g((1.0 / n) * p, g_cur);
    };

    InitTheta init = init_theta(x, cfg, rng);
    res.init_fallback = init.used_fallback;

    Param param;
    bool have_g = false;
    try {
        init.theta.validate(x.dims());
        param = [&] {
            if constexpr (std::is_same_v<Param, FactorParam>)
                return FactorParam{std::move(init.theta), cfg.grad_mode};
            else
                return FullParam{assemble_direction(init.theta).unit};
        }();

        // A direction and its negation bracket the boundary from both
        // sides; try both before drawing a fresh start.
        auto try_both_signs = [&](Param& p) -> std::optional<double> {
            std::optional<double> g = checked_g(p.direction().unit, 0.0);
            if (g) return g;
            Param flipped = p.negated();
            g = checked_g(flipped.direction().unit, 0.0);
            if (g) p = std::move(flipped);
            return g;
        };
        std::optional<double> g0 = try_both_signs(param);
        while (!g0 && res.restarts < 50) {
            ++res.restarts;
            param.random_restart(x.dims(), cfg.rank, rng);
            g0 = try_both_signs(param);
        }
        if (g0) {
            g_cur = *g0;
            have_g = true;
        }
    } catch (const BudgetExhausted&) {
    }

    if (!have_g) {
        res.adversarial = x;
        res.queries_used = used();
        res.param_count = param.param_count();
        res.beta_final = cfg.beta;
        if constexpr (std::is_same_v<Param, FactorParam>)
            if (keep_theta) res.theta_star = param.theta;
        return res;
    }

    res.trajectory.push_back({g_cur, used(), true});
    if (hooks && hooks->on_accept)
        hooks->on_accept(param.direction().unit, g_cur);

    double beta = cfg.beta;
    double alpha_work = cfg.alpha;
    int consecutive_rejects = 0;
    std::vector<double> accepted_g{g_cur};

    try {
        while (beta >= cfg.beta_floor) {
            ++res.iterations;
            auto step = param.estimate(obj, g_cur, beta, rng,
                                       cfg.directions_per_step);
            if (!step) {
                beta *= 0.1;
                alpha_work = cfg.alpha;
                continue;
            }
            const double step_scale = param.relative_step_scale(*step);

            bool accepted = false;
            double alpha_try = alpha_work;
            double g_new = 0.0;
            std::optional<Param> cand;
            for (int attempt = 0; attempt <= 10; ++attempt) {
                if (alpha_try * step_scale < kNegligibleStep) break;
                std::optional<Param> c = param.apply(alpha_try, *step);
                if (c) {
                    std::optional<double> gc =
                        checked_g(c->direction().unit, g_cur);
                    // Accept only decreases the bisection can certify:
                    // anything inside one relative tolerance of g_cur is
                    // measurement noise, and once a candidate lands there
                    // smaller steps cannot leave that band either.
                    if (gc && *gc < g_cur * (1.0 - cfg.lambda_tol)) {
                        accepted = true;
                        cand = std::move(c);
                        g_new = *gc;
                        break;
                    }
                    if (gc && std::abs(*gc - g_cur) <= cfg.lambda_tol * g_cur)
                        break;
                }
                alpha_try *= 0.5;
            }

            if (accepted) {
                param = std::move(*cand);
                param.renormalize();
                g_cur = g_new;
                alpha_work = alpha_try * 4.0;
                consecutive_rejects = 0;
                // Progress at this smoothing level: decay applies only to
                // consecutive failures, so beta recovers after an accept.
                beta = cfg.beta;
                ++res.accepted_steps;
                accepted_g.push_back(g_cur);
                res.trajectory.push_back({g_cur, used(), true});
                if (hooks && hooks->on_accept)
                    hooks->on_accept(param.direction().unit, g_cur);
                // Converged once a 20-accept window gains no more than
                // quantization drift could explain (2 tolerance quanta per
                // accepted step).
                const std::size_t n = accepted_g.size();
                if (n >= 21) {
                    const double g_then = accepted_g[n - 21];
                    if ((g_then - g_cur) / g_then < 40.0 * cfg.lambda_tol)
                        break;
                }
            } else {
                alpha_work = alpha_try;
                ++consecutive_rejects;
                res.trajectory.push_back({g_cur, used(), false});
                if (consecutive_rejects >= 3) {
                    // Refine the smoothing and retry from a fresh step size
                    // so one bad stretch cannot pin the search at tiny steps.
                    beta *= 0.1;
                    alpha_work = cfg.alpha;
                    consecutive_rejects = 0;
                }
            }
        }
    } catch (const BudgetExhausted&) {
    }

    res.beta_final = beta;
    const DirectionScale final_dir = param.direction();
    Tensor4 adversarial = add_scaled(x, g_cur, final_dir.unit);
    if (cfg.clamp) clamp_tensor(adversarial, cfg.clamp_min, cfg.clamp_max);

    const Label adv_label = model.predict(adversarial);
    res.adversarial = std::move(adversarial);
    res.adversarial_label = adv_label;
    res.success = adv_label != y;
    res.g_star = g_cur;
    res.queries_used = used();
    res.param_count = param.param_count();

    if constexpr (std::is_same_v<Param, FactorParam>) {
        if (keep_theta) res.theta_star = param.theta;
        // Losses of the perturbation's own factor form: each term of the
        // final E = g * unit carries weight g / scale-of-the-unit-sum.
        FactorSet pert_factors;
        const double per_term =
            param.theta.terms.size() == 1
                ? g_cur
                : g_cur / assemble_direction(param.theta).scale;
        for (const FactorTerm& term : param.theta.terms) {
            FactorTerm scaled;
            const double coef = std::pow(per_term, 0.25);
            for (int j = 0; j < 4; ++j)
                scaled[j] = coef * (term[j] / term[j].norm());
            pert_factors.terms.push_back(std::move(scaled));
        }
        auto [frob, mode_sum] = loss_values(pert_factors);
        res.loss_frobenius = frob;
        res.loss_mode_sum = mode_sum;
    } else {
        res.loss_frobenius = g_cur * g_cur;
        res.loss_mode_sum = std::nullopt;
    }
    return res;
}

}  // namespace

AttackResult tenad_attack(BlackBoxModel& model, const Tensor4& x,
                          const AttackConfig& cfg, const AttackHooks* hooks) {
    return run_attack<FactorParam>(model, x, cfg, hooks, "tenad", true);
}

AttackResult opt_attack_baseline(BlackBoxModel& model, const Tensor4& x,
                                 const AttackConfig& cfg,
                                 const AttackHooks* hooks) {
    return run_attack<FullParam>(model, x, cfg, hooks, "baseline", false);
}

}  // namespace tenad
