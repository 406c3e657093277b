#include "tenad/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "TEN4 I/O assumes a little-endian host");

namespace tenad {

std::uint32_t Dims4::extent(int mode) const {
    switch (mode) {
        case 1: return w;
        case 2: return h;
        case 3: return c;
        case 4: return t;
        default:
            throw std::invalid_argument("mode outside 1..4: " +
                                        std::to_string(mode));
    }
}

std::string Dims4::to_string() const {
    std::ostringstream os;
    os << w << "x" << h << "x" << c << "x" << t;
    return os.str();
}

Dims4 parse_dims(const std::string& text) {
    std::array<std::uint32_t, 4> ext{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad dims spec: " + text);
        }
        if (used == 0 || v == 0 || v > 0xFFFFFFFFUL)
            throw std::invalid_argument("bad dims spec: " + text);
        ext[i] = static_cast<std::uint32_t>(v);
        pos += used;
        if (i < 3) {
            if (pos >= text.size() || text[pos] != 'x')
                throw std::invalid_argument("bad dims spec: " + text);
            ++pos;
        }
    }
    if (pos != text.size())
        throw std::invalid_argument("bad dims spec: " + text);
    return {ext[0], ext[1], ext[2], ext[3]};
}

namespace {

void require_positive(Dims4 d) {
    if (d.w == 0 || d.h == 0 || d.c == 0 || d.t == 0)
        throw std::invalid_argument("tensor extents must be >= 1, got " +
                                    d.to_string());
}

void require_same_dims(const Tensor4& a, const Tensor4& b, const char* op) {
    if (!(a.dims() == b.dims()))
        throw std::invalid_argument(std::string(op) + ": dims mismatch " +
                                    a.dims().to_string() + " vs " +
                                    b.dims().to_string());
}

}  // namespace

Tensor4::Tensor4(Dims4 dims, double fill) : dims_(dims) {
    require_positive(dims);
    data_.assign(dims.count(), fill);
}

Tensor4 Tensor4::from_data(Dims4 dims, std::vector<double> data) {
    require_positive(dims);
    if (data.size() != dims.count())
        throw std::invalid_argument(
            "data length " + std::to_string(data.size()) +
            " does not match dims " + dims.to_string());
    Tensor4 t;
    t.dims_ = dims;
    t.data_ = std::move(data);
    if (!t.all_finite())
        throw std::invalid_argument("tensor data contains non-finite values");
    return t;
}

bool Tensor4::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor4 operator+(const Tensor4& a, const Tensor4& b) {
    require_same_dims(a, b, "operator+");
    Tensor4 r(a.dims());
    r.vec() = a.vec() + b.vec();
    return r;
}

Tensor4 operator-(const Tensor4& a, const Tensor4& b) {
    require_same_dims(a, b, "operator-");
    Tensor4 r(a.dims());
    r.vec() = a.vec() - b.vec();
    return r;
}

Tensor4 operator*(double s, const Tensor4& t) {
    Tensor4 r(t.dims());
    r.vec() = s * t.vec();
    return r;
}

Tensor4 operator*(const Tensor4& t, double s) { return s * t; }

Tensor4& operator+=(Tensor4& a, const Tensor4& b) {
    require_same_dims(a, b, "operator+=");
    a.vec() += b.vec();
    return a;
}

Tensor4 add_scaled(const Tensor4& a, double s, const Tensor4& b) {
    require_same_dims(a, b, "add_scaled");
    Tensor4 r(a.dims());
    r.vec() = a.vec() + s * b.vec();
    return r;
}

double inner(const Tensor4& a, const Tensor4& b) {
    require_same_dims(a, b, "inner");
    return a.vec().dot(b.vec());
}

double frobenius_norm(const Tensor4& t) { return t.vec().norm(); }

double abs_sum(const Tensor4& t) { return t.vec().cwiseAbs().sum(); }

double max_abs(const Tensor4& t) {
    return t.size() == 0 ? 0.0 : t.vec().cwiseAbs().maxCoeff();
}

Tensor4 outer_product(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2,
                      const Eigen::VectorXd& v3, const Eigen::VectorXd& v4) {
    const std::array<const Eigen::VectorXd*, 4> vs{&v1, &v2, &v3, &v4};
    for (int j = 0; j < 4; ++j) {
        if (vs[j]->size() == 0)
            throw std::invalid_argument("outer_product: empty mode-" +
                                        std::to_string(j + 1) + " vector");
        if (!vs[j]->allFinite())
            throw std::invalid_argument("outer_product: non-finite mode-" +
                                        std::to_string(j + 1) + " vector");
    }
    Dims4 dims{static_cast<std::uint32_t>(v1.size()),
               static_cast<std::uint32_t>(v2.size()),
               static_cast<std::uint32_t>(v3.size()),
               static_cast<std::uint32_t>(v4.size())};
    Tensor4 r(dims);
    auto out = r.vec();
    Eigen::Index pos = 0;
    for (std::uint32_t i4 = 0; i4 < dims.t; ++i4)
        for (std::uint32_t i3 = 0; i3 < dims.c; ++i3)
            for (std::uint32_t i2 = 0; i2 < dims.h; ++i2) {
                const double coef = v2[i2] * v3[i3] * v4[i4];
                out.segment(pos, v1.size()) = coef * v1;
                pos += v1.size();
            }
    return r;
}

Tensor4 mode_n_product(const Tensor4& t, const Eigen::MatrixXd& m, int mode) {
    const std::uint32_t in_extent = t.dims().extent(mode);
    if (m.cols() != static_cast<Eigen::Index>(in_extent))
        throw std::invalid_argument(
            "mode_n_product: matrix has " + std::to_string(m.cols()) +
            " columns but mode " + std::to_string(mode) + " extent is " +
            std::to_string(in_extent));
    Eigen::MatrixXd folded = m * unfold(t, mode);
    Dims4 out_dims = t.dims();
    const auto k = static_cast<std::uint32_t>(m.rows());
    switch (mode) {
        case 1: out_dims.w = k; break;
        case 2: out_dims.h = k; break;
        case 3: out_dims.c = k; break;
        case 4: out_dims.t = k; break;
    }
    return refold(folded, out_dims, mode);
}

Eigen::MatrixXd unfold(const Tensor4& t, int mode) {
    const Dims4 d = t.dims();
    const std::uint32_t rows = d.extent(mode);
    const std::uint64_t cols = d.count() / rows;
    Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols));
    if (mode == 1) {
        // Canonical layout already is the mode-1 unfolding, column-major.
        m = Eigen::Map<const Eigen::MatrixXd>(
            t.data().data(), rows, static_cast<Eigen::Index>(cols));
        return m;
    }
    std::array<std::uint32_t, 4> ext{d.w, d.h, d.c, d.t};
    std::array<int, 3> rest{};
    int r = 0;
    for (int k = 0; k < 4; ++k)
        if (k != mode - 1) rest[r++] = k;
    std::array<std::uint32_t, 4> idx{};
    for (std::uint32_t i4 = 0; i4 < d.t; ++i4)
        for (std::uint32_t i3 = 0; i3 < d.c; ++i3)
            for (std::uint32_t i2 = 0; i2 < d.h; ++i2)
                for (std::uint32_t i1 = 0; i1 < d.w; ++i1) {
                    idx = {i1, i2, i3, i4};
                    const std::uint64_t col =
                        idx[rest[0]] +
                        std::uint64_t(ext[rest[0]]) *
                            (idx[rest[1]] +
                             std::uint64_t(ext[rest[1]]) * idx[rest[2]]);
                    m(idx[mode - 1], static_cast<Eigen::Index>(col)) =
                        t(i1, i2, i3, i4);
                }
    return m;
}

Tensor4 refold(const Eigen::MatrixXd& m, Dims4 dims, int mode) {
    require_positive(dims);
    const std::uint32_t rows = dims.extent(mode);
    const std::uint64_t cols = dims.count() / rows;
    if (m.rows() != static_cast<Eigen::Index>(rows) ||
        m.cols() != static_cast<Eigen::Index>(cols))
        throw std::invalid_argument("refold: matrix shape does not match " +
                                    dims.to_string() + " on mode " +
                                    std::to_string(mode));
    Tensor4 t(dims);
    if (mode == 1) {
        Eigen::Map<Eigen::MatrixXd>(t.data().data(), rows,
                                    static_cast<Eigen::Index>(cols)) = m;
        return t;
    }
    std::array<std::uint32_t, 4> ext{dims.w, dims.h, dims.c, dims.t};
    std::array<int, 3> rest{};
    int r = 0;
    for (int k = 0; k < 4; ++k)
        if (k != mode - 1) rest[r++] = k;
    std::array<std::uint32_t, 4> idx{};
    for (std::uint32_t i4 = 0; i4 < dims.t; ++i4)
        for (std::uint32_t i3 = 0; i3 < dims.c; ++i3)
            for (std::uint32_t i2 = 0; i2 < dims.h; ++i2)
                for (std::uint32_t i1 = 0; i1 < dims.w; ++i1) {
                    idx = {i1, i2, i3, i4};
                    const std::uint64_t col =
                        idx[rest[0]] +
                        std::uint64_t(ext[rest[0]]) *
                            (idx[rest[1]] +
                             std::uint64_t(ext[rest[1]]) * idx[rest[2]]);
                    t(i1, i2, i3, i4) =
                        m(idx[mode - 1], static_cast<Eigen::Index>(col));
                }
    return t;
}

Tensor4 frame_slice(const Tensor4& t, std::uint32_t frame) {
    const Dims4 d = t.dims();
    if (frame >= d.t)
        throw std::invalid_argument("frame_slice: frame " +
                                    std::to_string(frame) + " out of range");
    Dims4 fd{d.w, d.h, d.c, 1};
    Tensor4 f(fd);
    const std::uint64_t n = fd.count();
    std::memcpy(f.data().data(), t.data().data() + n * frame,
                n * sizeof(double));
    return f;
}

namespace {
constexpr char kMagic[4] = {'T', 'E', 'N', '4'};
}

void write_ten4(const Tensor4& t, std::ostream& out) {
    out.write(kMagic, 4);
    const Dims4 d = t.dims();
    const std::uint32_t ext[4] = {d.w, d.h, d.c, d.t};
    out.write(reinterpret_cast<const char*>(ext), sizeof(ext));
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!out) throw std::runtime_error("TEN4 write failed");
}

void write_ten4(const Tensor4& t, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path.string());
    write_ten4(t, f);
    f.flush();
    if (!f) throw std::runtime_error("TEN4 write failed: " + path.string());
}

Tensor4 read_ten4(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a TEN4 file (bad magic)");
    std::uint32_t ext[4] = {};
    in.read(reinterpret_cast<char*>(ext), sizeof(ext));
    if (!in) throw std::runtime_error("truncated TEN4 header");
    Dims4 dims{ext[0], ext[1], ext[2], ext[3]};
    if (dims.w == 0 || dims.h == 0 || dims.c == 0 || dims.t == 0)
        throw std::runtime_error("TEN4 header has zero extent");
    const std::uint64_t n = dims.count();
    if (n > (std::uint64_t(1) << 31))
        throw std::runtime_error("TEN4 payload too large");
    std::vector<double> data(n);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in || static_cast<std::uint64_t>(in.gcount()) != n * sizeof(double))
        throw std::runtime_error("truncated TEN4 payload");
    for (double v : data)
        if (!std::isfinite(v))
            throw std::runtime_error("TEN4 payload contains non-finite values");
    return Tensor4::from_data(dims, std::move(data));
}

Tensor4 read_ten4(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path.string());
    return read_ten4(f);
}

}  // namespace tenad
