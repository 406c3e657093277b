#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tenad/tensor.hpp"

namespace tenad {

using Label = int;

/// Raised when an external model stops answering (child exit, malformed
/// reply, timeout). Carries the query count accumulated so far.
class ModelUnavailable : public std::runtime_error {
public:
    ModelUnavailable(const std::string& what, std::uint64_t queries)
        : std::runtime_error(what), queries_(queries) {}
    std::uint64_t queries() const { return queries_; }

private:
    std::uint64_t queries_;
};

/// Hard-label oracle: tensor in, top-1 class out. Every successful predict
/// increments the query counter by exactly one; the counter is never reset.
/// Predict calls are serialized on an internal mutex, so one instance may
/// be shared only if callers accept interleaved counting; attack sessions
/// are expected to own their instance.
class BlackBoxModel {
public:
    virtual ~BlackBoxModel() = default;

    Label predict(const Tensor4& x);
    std::uint64_t query_count() const;
    Dims4 input_dims() const { return dims_; }
    virtual int class_count() const = 0;

protected:
    explicit BlackBoxModel(Dims4 dims) : dims_(dims) {}
    virtual Label do_predict(const Tensor4& x) = 0;
    std::uint64_t unlocked_query_count() const { return queries_; }

private:
    Dims4 dims_;
    mutable std::mutex mutex_;
    std::uint64_t queries_ = 0;
};

/// Linear score with threshold bands: s = <weight, x>, class = number of
/// thresholds strictly below s. A score sitting exactly on a threshold
/// therefore falls in the lower band (lowest-id tie break).
class LinearThresholdModel final : public BlackBoxModel {
public:
    LinearThresholdModel(Tensor4 weight, std::vector<double> thresholds);

    int class_count() const override {
        return static_cast<int>(thresholds_.size()) + 1;
    }
    double score(const Tensor4& x) const { return inner(weight_, x); }
    const Tensor4& weight() const { return weight_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    Label classify_score(double s) const;

protected:
    Label do_predict(const Tensor4& x) override;

private:
    Tensor4 weight_;
    std::vector<double> thresholds_;
};

/// Nearest centroid by Frobenius distance; ties go to the lowest class id.
class CentroidModel final : public BlackBoxModel {
public:
    explicit CentroidModel(std::vector<Tensor4> centroids);

    int class_count() const override {
        return static_cast<int>(centroids_.size());
    }
    const std::vector<Tensor4>& centroids() const { return centroids_; }

protected:
    Label do_predict(const Tensor4& x) override;

private:
    std::vector<Tensor4> centroids_;
};

/// Closed-form boundary distance for the linear model: the smallest
/// lambda >= 0 with predict(x + lambda*d) != predict(x), or nullopt when
/// the score moves away from every band edge. d must have unit Frobenius
/// norm (within 1e-12).
std::optional<double> analytic_boundary_distance(
    const LinearThresholdModel& model, const Tensor4& x, const Tensor4& d);

/// External model driven over pipes. Each predict writes the query tensor
/// to a TEN4 file, sends the absolute path on the child's stdin as one
/// line, and reads one decimal label line back from its stdout. One
/// request is in flight at a time.
class SubprocessModel final : public BlackBoxModel {
public:
    /// `command` is split on whitespace into argv (no shell).
    SubprocessModel(std::string command, Dims4 dims,
                    double timeout_seconds = 30.0);
    ~SubprocessModel() override;

    SubprocessModel(const SubprocessModel&) = delete;
    SubprocessModel& operator=(const SubprocessModel&) = delete;

    int class_count() const override { return class_count_; }
    void set_class_count(int n) { class_count_ = n; }

protected:
    Label do_predict(const Tensor4& x) override;

private:
    void spawn();
    void shutdown() noexcept;
    [[noreturn]] void fail(const std::string& why);

    std::string command_;
    double timeout_seconds_;
    int class_count_ = 2;
    std::filesystem::path workdir_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string reply_buffer_;
};

}  // namespace tenad
