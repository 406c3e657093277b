#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tenad {

/// Extents of an order-4 tensor, (W, H, C, T).
struct Dims4 {
    std::uint32_t w = 0;
    std::uint32_t h = 0;
    std::uint32_t c = 0;
    std::uint32_t t = 0;

    std::uint64_t count() const {
        return std::uint64_t(w) * h * std::uint64_t(c) * t;
    }
    /// Extent of a mode, 1-based (mode 1 = W, ..., mode 4 = T).
    std::uint32_t extent(int mode) const;

    bool operator==(const Dims4&) const = default;
    std::string to_string() const;  // "WxHxCxT"
};

/// Parses "WxHxCxT", e.g. "16x16x3x16". Throws std::invalid_argument.
Dims4 parse_dims(const std::string& text);

/// Dense order-4 tensor of doubles in canonical layout: element
/// (i1,i2,i3,i4) lives at offset i1 + W*(i2 + H*(i3 + C*i4)), so the
/// mode-1 index moves fastest and the mode-4 index slowest.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(Dims4 dims, double fill = 0.0);

    /// Adopts a flat buffer already in canonical layout. Rejects size
    /// mismatches and non-finite values.
    static Tensor4 from_data(Dims4 dims, std::vector<double> data);

    const Dims4& dims() const { return dims_; }
    std::uint64_t size() const { return data_.size(); }

    double operator()(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3,
                      std::uint32_t i4) const {
        return data_[offset(i1, i2, i3, i4)];
    }
    double& operator()(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3,
                       std::uint32_t i4) {
        return data_[offset(i1, i2, i3, i4)];
    }

    std::uint64_t offset(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3,
                         std::uint32_t i4) const {
        return i1 + std::uint64_t(dims_.w) *
                        (i2 + std::uint64_t(dims_.h) *
                                  (i3 + std::uint64_t(dims_.c) * i4));
    }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Eigen::Map<const Eigen::VectorXd> vec() const {
        return {data_.data(), static_cast<Eigen::Index>(data_.size())};
    }
    Eigen::Map<Eigen::VectorXd> vec() {
        return {data_.data(), static_cast<Eigen::Index>(data_.size())};
    }

    bool all_finite() const;

private:
    Dims4 dims_{0, 0, 0, 0};
    std::vector<double> data_;
};

// Elementwise arithmetic. Dimension mismatches throw std::invalid_argument.
Tensor4 operator+(const Tensor4& a, const Tensor4& b);
Tensor4 operator-(const Tensor4& a, const Tensor4& b);
Tensor4 operator*(double s, const Tensor4& t);
Tensor4 operator*(const Tensor4& t, double s);
Tensor4& operator+=(Tensor4& a, const Tensor4& b);

/// a + s*b without an intermediate temporary.
Tensor4 add_scaled(const Tensor4& a, double s, const Tensor4& b);

double inner(const Tensor4& a, const Tensor4& b);
double frobenius_norm(const Tensor4& t);
double abs_sum(const Tensor4& t);
double max_abs(const Tensor4& t);

/// Outer product of one vector per mode: result[i1,i2,i3,i4] =
/// v1[i1]*v2[i2]*v3[i3]*v4[i4]. Empty vectors are rejected.
Tensor4 outer_product(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2,
                      const Eigen::VectorXd& v3, const Eigen::VectorXd& v4);

/// Mode-n product with a K x I_n matrix (mode is 1-based). The result has
/// mode-n extent K; b[..i_n..] = sum_j m(i_n, j) * a[..j..]. K = 1
/// contracts the mode down to extent one.
Tensor4 mode_n_product(const Tensor4& t, const Eigen::MatrixXd& m, int mode);

/// Mode-n unfolding, shape I_n x (product of the other extents). Row i_n
/// collects every entry with mode-n index i_n; columns run over the
/// remaining modes in ascending mode order with the earliest mode fastest.
Eigen::MatrixXd unfold(const Tensor4& t, int mode);

/// Inverse of unfold for the documented column ordering.
Tensor4 refold(const Eigen::MatrixXd& m, Dims4 dims, int mode);

/// The W x H x C x 1 slice at frame index `frame` (0-based).
Tensor4 frame_slice(const Tensor4& t, std::uint32_t frame);

// TEN4 binary container: magic "TEN4", four little-endian uint32 extents
// (W,H,C,T), then W*H*C*T little-endian IEEE-754 doubles in canonical
// layout. Readers reject bad magic, truncation, and non-finite payloads.
void write_ten4(const Tensor4& t, std::ostream& out);
void write_ten4(const Tensor4& t, const std::filesystem::path& path);
Tensor4 read_ten4(std::istream& in);
Tensor4 read_ten4(const std::filesystem::path& path);

}  // namespace tenad
