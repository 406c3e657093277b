#include "tenad/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tenad {

std::string RankTuple::to_string() const {
    std::ostringstream os;
    os << "(" << r1 << "," << r2 << "," << r3 << "," << r4 << ")";
    return os.str();
}

namespace {

struct ModeBasis {
    Eigen::MatrixXd u;       // I_n x I_n orthonormal
    Eigen::VectorXd sigmas;  // descending
};

// Left singular basis of the mode unfolding via a direct SVD. The Gram
// route A*A^T would be cheaper for these short, wide matrices but its
// sqrt(machine-eps) singular-value noise floor sits exactly at the 1e-8
// relative rank tolerance, so it cannot serve the rank queries.
ModeBasis mode_basis(const Tensor4& t, int mode) {
    Eigen::MatrixXd a = unfold(t, mode);
    ModeBasis out;
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd thin_u;
    Eigen::VectorXd sigmas;
    if (a.cols() > 128) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
        thin_u = svd.matrixU();
        sigmas = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
        thin_u = svd.matrixU();
        sigmas = svd.singularValues();
    }
    const Eigen::Index k = thin_u.cols();
    out.sigmas = Eigen::VectorXd::Zero(n);
    out.sigmas.head(sigmas.size()) = sigmas;
    if (k == n) {
        out.u = std::move(thin_u);
    } else {
        // Wider-than-tall case: complete the left basis to n columns.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(thin_u);
        out.u = qr.householderQ();
        out.u.leftCols(k) = thin_u;
    }
    // Deterministic sign: the entry of largest magnitude is nonnegative.
    for (Eigen::Index col = 0; col < out.u.cols(); ++col) {
        Eigen::Index at = 0;
        out.u.col(col).cwiseAbs().maxCoeff(&at);
        if (out.u(at, col) < 0.0) out.u.col(col) = -out.u.col(col);
    }
    return out;
}

}  // namespace

Eigen::VectorXd mode_singular_values(const Tensor4& t, int mode) {
    return mode_basis(t, mode).sigmas;
}

FactorMatrixSet hosvd(const Tensor4& t, std::optional<RankTuple> truncation) {
    const Dims4 d = t.dims();
    std::array<int, 4> keep{int(d.w), int(d.h), int(d.c), int(d.t)};
    if (truncation) {
        const std::array<int, 4> want{truncation->r1, truncation->r2,
                                      truncation->r3, truncation->r4};
        for (int j = 0; j < 4; ++j) {
            if (want[j] < 1 || want[j] > keep[j])
                throw std::invalid_argument(
                    "hosvd: truncation rank " + std::to_string(want[j]) +
                    " invalid for mode " + std::to_string(j + 1) +
                    " of extent " + std::to_string(keep[j]));
            keep[j] = want[j];
        }
    }
    FactorMatrixSet out;
    for (int j = 0; j < 4; ++j) {
        ModeBasis basis = mode_basis(t, j + 1);
        out.singular_values[j] = basis.sigmas;
        out.factors[j] = basis.u.leftCols(keep[j]);
    }
    Tensor4 core = t;
    for (int j = 0; j < 4; ++j)
        core = mode_n_product(core, out.factors[j].transpose(), j + 1);
    out.core = std::move(core);
    return out;
}

Tensor4 reconstruct(const FactorMatrixSet& f) {
    Tensor4 t = f.core;
    for (int j = 0; j < 4; ++j)
        t = mode_n_product(t, f.factors[j], j + 1);
    return t;
}

RankTuple multilinear_rank(const Tensor4& t, double tol) {
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("multilinear_rank: tol must be in (0,1)");
    RankTuple r;
    std::array<int*, 4> slots{&r.r1, &r.r2, &r.r3, &r.r4};
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd s = mode_singular_values(t, j + 1);
        const double top = s.size() ? s[0] : 0.0;
        int count = 0;
        if (top > 0.0) {
            for (Eigen::Index i = 0; i < s.size(); ++i)
                if (s[i] > tol * top) ++count;
        }
        *slots[j] = count;
    }
    return r;
}

}  // namespace tenad
