#include "tenad/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tenad {

Label BlackBoxModel::predict(const Tensor4& x) {
    if (!(x.dims() == dims_))
        throw std::invalid_argument("predict: input dims " +
                                    x.dims().to_string() +
                                    " do not match model dims " +
                                    dims_.to_string());
    std::lock_guard<std::mutex> lock(mutex_);
    Label y = do_predict(x);
    ++queries_;
    return y;
}

std::uint64_t BlackBoxModel::query_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return queries_;
}

LinearThresholdModel::LinearThresholdModel(Tensor4 weight,
                                           std::vector<double> thresholds)
    : BlackBoxModel(weight.dims()),
      weight_(std::move(weight)),
      thresholds_(std::move(thresholds)) {
    if (thresholds_.empty())
        throw std::invalid_argument("LinearThresholdModel: no thresholds");
    for (std::size_t i = 0; i + 1 < thresholds_.size(); ++i)
        if (!(thresholds_[i] < thresholds_[i + 1]))
            throw std::invalid_argument(
                "LinearThresholdModel: thresholds must be strictly increasing");
}

Label LinearThresholdModel::classify_score(double s) const {
    int band = 0;
    for (double t : thresholds_)
        if (t < s) ++band;
    return band;
}

Label LinearThresholdModel::do_predict(const Tensor4& x) {
    return classify_score(score(x));
}

CentroidModel::CentroidModel(std::vector<Tensor4> centroids)
    : BlackBoxModel(centroids.empty() ? Dims4{1, 1, 1, 1}
                                      : centroids.front().dims()),
      centroids_(std::move(centroids)) {
    if (centroids_.size() < 2)
        throw std::invalid_argument("CentroidModel: need at least 2 centroids");
    for (const Tensor4& c : centroids_)
        if (!(c.dims() == centroids_.front().dims()))
            throw std::invalid_argument("CentroidModel: centroid dims differ");
}

Label CentroidModel::do_predict(const Tensor4& x) {
    Label best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centroids_.size(); ++i) {
        const double dist = frobenius_norm(x - centroids_[i]);
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<Label>(i);
        }
    }
    return best;
}

std::optional<double> analytic_boundary_distance(
    const LinearThresholdModel& model, const Tensor4& x, const Tensor4& d) {
    const double dnorm = frobenius_norm(d);
    if (std::abs(dnorm - 1.0) > 1e-12)
        throw std::invalid_argument(
            "analytic_boundary_distance: direction norm " +
            std::to_string(dnorm) + " is not 1");
    const double s0 = model.score(x);
    const double wd = model.score(d);
    if (wd == 0.0) return std::nullopt;
    const auto& ts = model.thresholds();
    if (wd > 0.0) {
        // Moving up: the label changes once the score exceeds the nearest
        // threshold at or above s0.
        for (double t : ts)
            if (t >= s0) return (t - s0) / wd;
        return std::nullopt;
    }
    // Moving down: the label changes when the score reaches the nearest
    // threshold strictly below s0 (equality already counts as the lower band).
    for (auto it = ts.rbegin(); it != ts.rend(); ++it)
        if (*it < s0) return (s0 - *it) / (-wd);
    return std::nullopt;
}

}  // namespace tenad
