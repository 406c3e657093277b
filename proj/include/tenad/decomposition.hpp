#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "tenad/tensor.hpp"

namespace tenad {

/// Multilinear rank: matrix rank of each mode unfolding.
struct RankTuple {
    int r1 = 0, r2 = 0, r3 = 0, r4 = 0;

    bool operator==(const RankTuple&) const = default;
    auto operator<=>(const RankTuple&) const = default;
    std::string to_string() const;  // "(r1,r2,r3,r4)"
};

/// Tucker/HOSVD factorization: per-mode orthonormal factor matrices and a
/// core tensor such that (U1,...,U4) . core reproduces the input (exactly
/// at full rank, in the least-squares sense when truncated).
struct FactorMatrixSet {
    std::array<Eigen::MatrixXd, 4> factors;          // U(j), I_j x r_j
    Tensor4 core;                                    // r1 x r2 x r3 x r4
    std::array<Eigen::VectorXd, 4> singular_values;  // per mode, descending
};

/// Singular values of the mode-n unfolding, descending. The short side is
/// factored through its Gram matrix when it has <= 64 rows, otherwise a
/// dense SVD of the unfolding is used.
Eigen::VectorXd mode_singular_values(const Tensor4& t, int mode);

/// HOSVD. Factor columns are left singular vectors of the mode unfoldings,
/// ordered by descending singular value, sign-fixed so that each column's
/// entry of largest magnitude is nonnegative. `truncation` keeps the
/// leading r_j columns per mode; ranks above the mode extent are rejected.
FactorMatrixSet hosvd(const Tensor4& t,
                      std::optional<RankTuple> truncation = std::nullopt);

/// (U1,...,U4) . core.
Tensor4 reconstruct(const FactorMatrixSet& f);

/// r_j = number of singular values of the mode-j unfolding above
/// tol * (largest singular value of that unfolding). The zero tensor has
/// rank (0,0,0,0). tol must lie in (0,1).
RankTuple multilinear_rank(const Tensor4& t, double tol = 1e-8);

}  // namespace tenad
