#include <doctest.h>

#include "oracles.hpp"
#include "tenad/decomposition.hpp"

using namespace tenad;

TEST_CASE("hosvd of a rank-one tensor concentrates the core") {
    Rng rng(19);
    Eigen::VectorXd v1 = rng.normal_vector(3);
    Eigen::VectorXd v2 = rng.normal_vector(4);
    Eigen::VectorXd v3 = rng.normal_vector(2);
    Eigen::VectorXd v4 = rng.normal_vector(5);
    Tensor4 t = outer_product(v1, v2, v3, v4);
    const double scale = 5.0 / frobenius_norm(t);
    t = scale * t;  // Frobenius norm exactly-ish 5

    FactorMatrixSet f = hosvd(t);
    CHECK(std::abs(std::abs(f.core(0, 0, 0, 0)) - 5.0) <= 1e-10);
    for (std::uint32_t i1 = 0; i1 < 3; ++i1)
        for (std::uint32_t i2 = 0; i2 < 4; ++i2)
            for (std::uint32_t i3 = 0; i3 < 2; ++i3)
                for (std::uint32_t i4 = 0; i4 < 5; ++i4)
                    if (i1 + i2 + i3 + i4 > 0)
                        CHECK(std::abs(f.core(i1, i2, i3, i4)) < 1e-10);
}

TEST_CASE("full-rank hosvd reconstructs and stays orthonormal") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor4 t = oracles::random_tensor(Dims4{3, 3, 2, 4}, rng);
        FactorMatrixSet f = hosvd(t);
        for (int j = 0; j < 4; ++j) {
            Eigen::MatrixXd gram =
                f.factors[j].transpose() * f.factors[j];
            Eigen::MatrixXd eye =
                Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
            CHECK((gram - eye).cwiseAbs().maxCoeff() <= 1e-10);
            // Energy ordering: singular values non-increasing.
            for (Eigen::Index i = 1; i < f.singular_values[j].size(); ++i)
                CHECK(f.singular_values[j][i] <=
                      f.singular_values[j][i - 1] + 1e-14);
        }
        Tensor4 back = reconstruct(f);
        CHECK(frobenius_norm(back - t) <= 1e-10 * frobenius_norm(t));
    }
}

TEST_CASE("hosvd truncation") {
    Rng rng(37);
    Tensor4 t = oracles::random_tensor(Dims4{4, 3, 2, 5}, rng);
    FactorMatrixSet f = hosvd(t, RankTuple{2, 2, 1, 3});
    CHECK(f.factors[0].cols() == 2);
    CHECK(f.factors[2].cols() == 1);
    CHECK(f.core.dims() == Dims4{2, 2, 1, 3});
    CHECK_THROWS_AS(hosvd(t, RankTuple{5, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(hosvd(t, RankTuple{0, 1, 1, 1}), std::invalid_argument);

    // Truncated reconstruction error is bounded by the dropped spectrum.
    Tensor4 approx = reconstruct(f);
    double dropped_sq = 0.0;
    const std::array<int, 4> keep{2, 2, 1, 3};
    for (int j = 0; j < 4; ++j)
        for (Eigen::Index i = keep[j]; i < f.singular_values[j].size(); ++i)
            dropped_sq +=
                f.singular_values[j][i] * f.singular_values[j][i];
    CHECK(frobenius_norm(approx - t) <=
          std::sqrt(dropped_sq) + 1e-10 * frobenius_norm(t));
}

TEST_CASE("hosvd sign convention is deterministic") {
    Rng rng(43);
    Tensor4 t = oracles::random_tensor(Dims4{3, 3, 2, 4}, rng);
    FactorMatrixSet a = hosvd(t);
    FactorMatrixSet b = hosvd(t);
    for (int j = 0; j < 4; ++j) {
        CHECK((a.factors[j] - b.factors[j]).cwiseAbs().maxCoeff() == 0.0);
        for (Eigen::Index col = 0; col < a.factors[j].cols(); ++col) {
            Eigen::Index at = 0;
            a.factors[j].col(col).cwiseAbs().maxCoeff(&at);
            CHECK(a.factors[j](at, col) >= 0.0);
        }
    }
}

TEST_CASE("multilinear rank") {
    Tensor4 ones(Dims4{2, 2, 2, 2}, 1.0);
    CHECK(multilinear_rank(ones) == RankTuple{1, 1, 1, 1});

    Tensor4 zero(Dims4{3, 2, 2, 3});
    CHECK(multilinear_rank(zero) == RankTuple{0, 0, 0, 0});

    Rng rng(53);
    Tensor4 two = outer_product(rng.normal_vector(3), rng.normal_vector(4),
                                rng.normal_vector(2), rng.normal_vector(5)) +
                  outer_product(rng.normal_vector(3), rng.normal_vector(4),
                                rng.normal_vector(2), rng.normal_vector(5));
    CHECK(multilinear_rank(two) == RankTuple{2, 2, 2, 2});

    CHECK_THROWS_AS(multilinear_rank(ones, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(multilinear_rank(ones, 1.0), std::invalid_argument);
    CHECK(RankTuple{1, 1, 1, 1}.to_string() == "(1,1,1,1)");
}

TEST_CASE("mode singular values match the unfolding spectrum") {
    Rng rng(61);
    Tensor4 t = oracles::random_tensor(Dims4{3, 4, 2, 3}, rng);
    for (int mode = 1; mode <= 4; ++mode) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(oracles::naive_unfold(t, mode));
        Eigen::VectorXd got = mode_singular_values(t, mode);
        const auto& want = svd.singularValues();
        REQUIRE(got.size() >= want.size());
        for (Eigen::Index i = 0; i < want.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}
