#include "tenad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace tenad {

namespace {

void require_pair_dims(const SamplePair& p) {
    if (!(p.clean.dims() == p.adversarial.dims()))
        throw std::invalid_argument("metrics: pair dims mismatch " +
                                    p.clean.dims().to_string() + " vs " +
                                    p.adversarial.dims().to_string());
}

}  // namespace

double mean_absolute_perturbation(std::span<const SamplePair> pairs) {
    if (pairs.empty())
        throw std::invalid_argument("mean_absolute_perturbation: empty input");
    double total = 0.0;
    for (const SamplePair& p : pairs) {
        require_pair_dims(p);
        total += abs_sum(p.adversarial - p.clean) /
                 static_cast<double>(p.clean.size());
    }
    return total / static_cast<double>(pairs.size());
}

ActiveValue map_star(std::span<const SamplePair> pairs, double eps_active) {
    if (pairs.empty()) throw std::invalid_argument("map_star: empty input");
    if (!(eps_active > 0.0))
        throw std::invalid_argument("map_star: eps_active must be > 0");
    double total = 0.0;
    long pairs_with_active = 0;
    for (const SamplePair& p : pairs) {
        require_pair_dims(p);
        const Tensor4 pert = p.adversarial - p.clean;
        double sum = 0.0;
        long count = 0;
        for (std::uint32_t t = 0; t < pert.dims().t; ++t) {
            const Tensor4 frame = frame_slice(pert, t);
            if (max_abs(frame) <= eps_active) continue;
            for (double v : frame.data()) {
                if (std::abs(v) > eps_active) {
                    sum += std::abs(v);
                    ++count;
                }
            }
        }
        if (count > 0) {
            total += sum / static_cast<double>(count);
            ++pairs_with_active;
        }
    }
    if (pairs_with_active == 0) return {0.0, true};
    return {total / static_cast<double>(pairs_with_active), false};
}

double ssim_frame(const Tensor4& a, const Tensor4& b, double dynamic_range) {
    if (!(a.dims() == b.dims()))
        throw std::invalid_argument("ssim_frame: dims mismatch");
    if (a.dims().t != 1)
        throw std::invalid_argument("ssim_frame: expected a single frame");
    if (!(dynamic_range > 0.0))
        throw std::invalid_argument("ssim_frame: dynamic_range must be > 0");
    const std::uint32_t w = a.dims().w;
    const std::uint32_t h = a.dims().h;
    const std::uint32_t channels = a.dims().c;
    const std::uint32_t side = std::min<std::uint32_t>({11u, w, h});
    if (side < 2)
        throw std::invalid_argument("ssim_frame: window side below 2");

    // Normalized Gaussian window, sigma 1.5, centered on the window.
    Eigen::MatrixXd win(side, side);
    const double center = (side - 1) / 2.0;
    const double sigma = 1.5;
    double wsum = 0.0;
    for (std::uint32_t i = 0; i < side; ++i)
        for (std::uint32_t j = 0; j < side; ++j) {
            const double dx = i - center;
            const double dy = j - center;
            win(i, j) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            wsum += win(i, j);
        }
    win /= wsum;

    const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);

    double accum = 0.0;
    long windows = 0;
    for (std::uint32_t ch = 0; ch < channels; ++ch)
        for (std::uint32_t x0 = 0; x0 + side <= w; ++x0)
            for (std::uint32_t y0 = 0; y0 + side <= h; ++y0) {
                double mu1 = 0.0, mu2 = 0.0, s1 = 0.0, s2 = 0.0, s12 = 0.0;
                for (std::uint32_t i = 0; i < side; ++i)
                    for (std::uint32_t j = 0; j < side; ++j) {
                        const double wij = win(i, j);
                        const double va = a(x0 + i, y0 + j, ch, 0);
                        const double vb = b(x0 + i, y0 + j, ch, 0);
                        mu1 += wij * va;
                        mu2 += wij * vb;
                        s1 += wij * va * va;
                        s2 += wij * vb * vb;
                        s12 += wij * va * vb;
                    }
                const double var1 = s1 - mu1 * mu1;
                const double var2 = s2 - mu2 * mu2;
                const double cov = s12 - mu1 * mu2;
                const double num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2);
                const double den =
                    (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2);
                accum += num / den;
                ++windows;
            }
    return accum / static_cast<double>(windows);
}

double mssim(std::span<const SamplePair> pairs, double dynamic_range) {
    if (pairs.empty()) throw std::invalid_argument("mssim: empty input");
    double total = 0.0;
    long frames = 0;
    for (const SamplePair& p : pairs) {
        require_pair_dims(p);
        for (std::uint32_t t = 0; t < p.clean.dims().t; ++t) {
            total += ssim_frame(frame_slice(p.clean, t),
                                frame_slice(p.adversarial, t), dynamic_range);
            ++frames;
        }
    }
    return total / static_cast<double>(frames);
}

ActiveValue ssim_star(std::span<const SamplePair> pairs, double eps_active,
                      double dynamic_range) {
    if (pairs.empty()) throw std::invalid_argument("ssim_star: empty input");
    if (!(eps_active > 0.0))
        throw std::invalid_argument("ssim_star: eps_active must be > 0");
    double total = 0.0;
    long frames = 0;
    for (const SamplePair& p : pairs) {
        require_pair_dims(p);
        for (std::uint32_t t = 0; t < p.clean.dims().t; ++t) {
            const Tensor4 clean_frame = frame_slice(p.clean, t);
            const Tensor4 adv_frame = frame_slice(p.adversarial, t);
            if (max_abs(adv_frame - clean_frame) <= eps_active) continue;
            total += ssim_frame(clean_frame, adv_frame, dynamic_range);
            ++frames;
        }
    }
    if (frames == 0) return {1.0, true};
    return {total / static_cast<double>(frames), false};
}

double fooling_rate(std::span<const AttackOutcome> outcomes) {
    if (outcomes.empty())
        throw std::invalid_argument("fooling_rate: empty input");
    long ok = 0;
    for (const AttackOutcome& o : outcomes)
        if (o.success) ++ok;
    return 100.0 * static_cast<double>(ok) /
           static_cast<double>(outcomes.size());
}

MeanQueries mean_queries(std::span<const AttackOutcome> outcomes) {
    if (outcomes.empty())
        throw std::invalid_argument("mean_queries: empty input");
    double total = 0.0;
    long ok = 0;
    for (const AttackOutcome& o : outcomes)
        if (o.success) {
            total += static_cast<double>(o.queries);
            ++ok;
        }
    if (ok == 0) return {0.0, false};
    return {total / static_cast<double>(ok), true};
}

ErrorRankReport error_rank_report(std::span<const SamplePair> pairs,
                                  double tol) {
    ErrorRankReport out;
    std::map<RankTuple, int> hist;
    for (const SamplePair& p : pairs) {
        require_pair_dims(p);
        const RankTuple r = multilinear_rank(p.adversarial - p.clean, tol);
        out.per_sample.push_back(r);
        ++hist[r];
    }
    int best = 0;
    for (const auto& [rank, count] : hist) {
        out.histogram.emplace_back(rank, count);
        if (count > best) {
            best = count;
            out.modal = rank;
        }
    }
    return out;
}

MetricsReport compute_metrics(std::span<const SamplePair> pairs,
                              std::span<const AttackOutcome> outcomes,
                              double eps_active, double dynamic_range) {
    if (pairs.size() != outcomes.size())
        throw std::invalid_argument(
            "compute_metrics: pairs/outcomes size mismatch");
    MetricsReport r;
    r.n = static_cast<long>(pairs.size());
    r.mq = mean_queries(outcomes);
    r.map = mean_absolute_perturbation(pairs);
    r.map_star = map_star(pairs, eps_active);
    r.mssim = mssim(pairs, dynamic_range);
    r.ssim_star = ssim_star(pairs, eps_active, dynamic_range);
    r.fr = fooling_rate(outcomes);
    r.error_rank = error_rank_report(pairs);
    return r;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace tenad
