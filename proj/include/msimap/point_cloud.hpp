#ifndef MSIMAP_POINT_CLOUD_HPP
#define MSIMAP_POINT_CLOUD_HPP

#include "msimap/common.hpp"

#include <cmath>
#include <utility>

namespace msimap {

/// N x D matrix of input features; row = sample, column = feature signal.
class PointCloud {
  public:
    explicit PointCloud(Matrix data) : data_(std::move(data)) {
        if (data_.rows() < 2 || data_.cols() < 1) {
            throw ParameterError("PointCloud requires N >= 2 samples and D >= 1 features");
        }
        if (!data_.allFinite()) {
            throw ParameterError("PointCloud entries must be finite");
        }
    }

    const Matrix& data() const { return data_; }
    int n_samples() const { return static_cast<int>(data_.rows()); }
    int n_features() const { return static_cast<int>(data_.cols()); }

    /// Feature signal f_r over the samples.
    Vector feature(int r) const { return data_.col(r); }

  private:
    Matrix data_;
};

}  // namespace msimap

#endif
