// Independent brute-force oracles for the test suites. Everything here is
// written against the definitions directly (index loops, grid scans) and
// must stay independent of the library's implementation paths.

#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "tenad/model.hpp"
#include "tenad/rng.hpp"
#include "tenad/tensor.hpp"

namespace oracles {

inline tenad::Tensor4 naive_outer_product(const Eigen::VectorXd& v1,
                                          const Eigen::VectorXd& v2,
                                          const Eigen::VectorXd& v3,
                                          const Eigen::VectorXd& v4) {
    tenad::Dims4 dims{std::uint32_t(v1.size()), std::uint32_t(v2.size()),
                      std::uint32_t(v3.size()), std::uint32_t(v4.size())};
    tenad::Tensor4 out(dims);
    for (std::uint32_t i1 = 0; i1 < dims.w; ++i1)
        for (std::uint32_t i2 = 0; i2 < dims.h; ++i2)
            for (std::uint32_t i3 = 0; i3 < dims.c; ++i3)
                for (std::uint32_t i4 = 0; i4 < dims.t; ++i4)
                    out(i1, i2, i3, i4) = v1[i1] * v2[i2] * v3[i3] * v4[i4];
    return out;
}

// b[.., i_n, ..] = sum_j m(i_n, j) a[.., j, ..], spelled out per mode.
inline tenad::Tensor4 naive_mode_product(const tenad::Tensor4& a,
                                         const Eigen::MatrixXd& m, int mode) {
    tenad::Dims4 d = a.dims();
    tenad::Dims4 out_dims = d;
    const auto k = static_cast<std::uint32_t>(m.rows());
    switch (mode) {
        case 1: out_dims.w = k; break;
        case 2: out_dims.h = k; break;
        case 3: out_dims.c = k; break;
        case 4: out_dims.t = k; break;
    }
    tenad::Tensor4 b(out_dims);
    for (std::uint32_t i1 = 0; i1 < out_dims.w; ++i1)
        for (std::uint32_t i2 = 0; i2 < out_dims.h; ++i2)
            for (std::uint32_t i3 = 0; i3 < out_dims.c; ++i3)
                for (std::uint32_t i4 = 0; i4 < out_dims.t; ++i4) {
                    double sum = 0.0;
                    const std::uint32_t in_extent = d.extent(mode);
                    for (std::uint32_t j = 0; j < in_extent; ++j) {
                        std::uint32_t a1 = i1, a2 = i2, a3 = i3, a4 = i4;
                        std::uint32_t row = 0;
                        switch (mode) {
                            case 1: row = i1; a1 = j; break;
                            case 2: row = i2; a2 = j; break;
                            case 3: row = i3; a3 = j; break;
                            case 4: row = i4; a4 = j; break;
                        }
                        sum += m(row, j) * a(a1, a2, a3, a4);
                    }
                    b(i1, i2, i3, i4) = sum;
                }
    return b;
}

// Row i_n holds entries with mode-n index i_n; remaining modes in
// ascending order, earliest fastest.
inline Eigen::MatrixXd naive_unfold(const tenad::Tensor4& t, int mode) {
    const tenad::Dims4 d = t.dims();
    const std::uint32_t ext[4] = {d.w, d.h, d.c, d.t};
    const std::uint32_t rows = ext[mode - 1];
    Eigen::MatrixXd m(rows, d.count() / rows);
    for (std::uint32_t i1 = 0; i1 < d.w; ++i1)
        for (std::uint32_t i2 = 0; i2 < d.h; ++i2)
            for (std::uint32_t i3 = 0; i3 < d.c; ++i3)
                for (std::uint32_t i4 = 0; i4 < d.t; ++i4) {
                    const std::uint32_t idx[4] = {i1, i2, i3, i4};
                    std::uint64_t col = 0;
                    std::uint64_t stride = 1;
                    for (int k = 0; k < 4; ++k) {
                        if (k == mode - 1) continue;
                        col += idx[k] * stride;
                        stride *= ext[k];
                    }
                    m(idx[mode - 1], static_cast<Eigen::Index>(col)) =
                        t(i1, i2, i3, i4);
                }
    return m;
}

// Explicit chain-rule sums: dg/dtheta1[j] = sum_{i2,i3,i4}
// G[j,i2,i3,i4] * theta2[i2] * theta3[i3] * theta4[i4], and cyclically.
inline std::array<Eigen::VectorXd, 4> naive_chain_contraction(
    const tenad::Tensor4& g, const std::array<Eigen::VectorXd, 4>& theta) {
    const tenad::Dims4 d = g.dims();
    std::array<Eigen::VectorXd, 4> out;
    out[0] = Eigen::VectorXd::Zero(d.w);
    out[1] = Eigen::VectorXd::Zero(d.h);
    out[2] = Eigen::VectorXd::Zero(d.c);
    out[3] = Eigen::VectorXd::Zero(d.t);
    for (std::uint32_t i1 = 0; i1 < d.w; ++i1)
        for (std::uint32_t i2 = 0; i2 < d.h; ++i2)
            for (std::uint32_t i3 = 0; i3 < d.c; ++i3)
                for (std::uint32_t i4 = 0; i4 < d.t; ++i4) {
                    const double v = g(i1, i2, i3, i4);
                    out[0][i1] += v * theta[1][i2] * theta[2][i3] * theta[3][i4];
                    out[1][i2] += v * theta[0][i1] * theta[2][i3] * theta[3][i4];
                    out[2][i3] += v * theta[0][i1] * theta[1][i2] * theta[3][i4];
                    out[3][i4] += v * theta[0][i1] * theta[1][i2] * theta[2][i3];
                }
    return out;
}

// Boundary distance by grid scan plus local bisection, independent of the
// closed form: walk lambda in fixed steps until the label flips, then
// bisect the last step down to 1e-9 absolute.
inline std::optional<double> boundary_scan(
    const tenad::LinearThresholdModel& model, const tenad::Tensor4& x,
    const tenad::Tensor4& d, double step = 1e-4, double reach = 40.0) {
    const tenad::Label y0 = model.classify_score(model.score(x));
    auto label_at = [&](double lam) {
        return model.classify_score(model.score(tenad::add_scaled(x, lam, d)));
    };
    double prev = 0.0;
    for (double lam = step; lam <= reach; lam += step) {
        if (label_at(lam) != y0) {
            double lo = prev, hi = lam;
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                if (label_at(mid) != y0)
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }
        prev = lam;
    }
    return std::nullopt;
}

// Straight-from-the-definition SSIM over W x H x C x 1 frames.
inline double reference_ssim(const tenad::Tensor4& a, const tenad::Tensor4& b,
                             double dynamic_range = 255.0) {
    const std::uint32_t w = a.dims().w;
    const std::uint32_t h = a.dims().h;
    const std::uint32_t channels = a.dims().c;
    const std::uint32_t side = std::min<std::uint32_t>({11u, w, h});
    const double sigma = 1.5;
    const double center = (side - 1) / 2.0;
    std::vector<double> win(side * side);
    double wsum = 0.0;
    for (std::uint32_t i = 0; i < side; ++i)
        for (std::uint32_t j = 0; j < side; ++j) {
            const double g = std::exp(-((i - center) * (i - center) +
                                        (j - center) * (j - center)) /
                                      (2.0 * sigma * sigma));
            win[i * side + j] = g;
            wsum += g;
        }
    for (double& v : win) v /= wsum;
    const double c1 = std::pow(0.01 * dynamic_range, 2);
    const double c2 = std::pow(0.03 * dynamic_range, 2);
    double total = 0.0;
    long count = 0;
    for (std::uint32_t ch = 0; ch < channels; ++ch)
        for (std::uint32_t x0 = 0; x0 + side <= w; ++x0)
            for (std::uint32_t y0 = 0; y0 + side <= h; ++y0) {
                double mu1 = 0, mu2 = 0, q1 = 0, q2 = 0, q12 = 0;
                for (std::uint32_t i = 0; i < side; ++i)
                    for (std::uint32_t j = 0; j < side; ++j) {
                        const double wt = win[i * side + j];
                        const double va = a(x0 + i, y0 + j, ch, 0);
                        const double vb = b(x0 + i, y0 + j, ch, 0);
                        mu1 += wt * va;
                        mu2 += wt * vb;
                        q1 += wt * va * va;
                        q2 += wt * vb * vb;
                        q12 += wt * va * vb;
                    }
                const double num =
                    (2 * mu1 * mu2 + c1) * (2 * (q12 - mu1 * mu2) + c2);
                const double den =
                    (mu1 * mu1 + mu2 * mu2 + c1) *
                    ((q1 - mu1 * mu1) + (q2 - mu2 * mu2) + c2);
                total += num / den;
                ++count;
            }
    return total / count;
}

inline tenad::Tensor4 random_tensor(tenad::Dims4 dims, tenad::Rng& rng) {
    tenad::Tensor4 t(dims);
    for (double& v : t.data()) v = rng.normal();
    return t;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     tenad::Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

inline tenad::Dims4 random_small_dims(tenad::Rng& rng, std::uint32_t max_extent = 4) {
    auto draw = [&] {
        return 1 + static_cast<std::uint32_t>(rng.uniform() * max_extent) %
                       max_extent;
    };
    return {draw(), draw(), draw(), draw()};
}

}  // namespace oracles
