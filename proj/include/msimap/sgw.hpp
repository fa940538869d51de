#ifndef MSIMAP_SGW_HPP
#define MSIMAP_SGW_HPP

#include "msimap/filter_bank.hpp"
#include "msimap/graph.hpp"
#include "msimap/point_cloud.hpp"

#include <utility>
#include <vector>

namespace msimap {

/// K x D x N tensor of SGW coefficients, stored as K slices of D x N.
/// Slice j holds the responses of every feature signal in band j.
class SgwTensor {
  public:
    SgwTensor(std::vector<Matrix> slices, std::vector<double> scales)
        : slices_(std::move(slices)), scales_(std::move(scales)) {
        for (const Matrix& s : slices_) {
            if (s.rows() != slices_[0].rows() || s.cols() != slices_[0].cols()) {
                throw ParameterError("tensor slices must share one shape");
            }
            if (!s.allFinite()) throw NumericError("SGW coefficients must be finite");
        }
    }

    int n_bands() const { return static_cast<int>(slices_.size()); }
    int n_features() const { return static_cast<int>(slices_[0].rows()); }
    int n_nodes() const { return static_cast<int>(slices_[0].cols()); }

    double coeff(int band, int feature, int node) const { return slices_[band](feature, node); }
    const Matrix& slice(int band) const { return slices_[band]; }
    const std::vector<double>& scales() const { return scales_; }

  private:
    std::vector<Matrix> slices_;
    std::vector<double> scales_;
};

/// Exact SGW coefficients through the dense eigendecomposition. O(N^3);
/// serves as the oracle for the Chebyshev path.
inline Matrix sgw_exact(const Laplacian& L, const Vector& signal, const FilterBank& bank) {
    const int n = static_cast<int>(L.matrix.rows());
    if (n > 2000) throw OracleSizeError("sgw_exact limited to N <= 2000");
    if (signal.size() != n) throw ParameterError("signal length must match node count");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(L.matrix));
    if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    const Vector& lambda = eig.eigenvalues();
    const Matrix& phi = eig.eigenvectors();

    const Vector f_hat = phi.transpose() * signal;
    Matrix out(bank.n_bands(), n);
    for (int j = 0; j < bank.n_bands(); ++j) {
        Vector kern(n);
        for (int l = 0; l < n; ++l) kern[l] = bank.response(j, lambda[l]);
        out.row(j) = (phi * (kern.array() * f_hat.array()).matrix()).transpose();
    }
    return out;
}

namespace detail {

/// Three-term recurrence on vectors, shared across all bands.
/// No domain checking; callers validate once.
inline Matrix chebyshev_apply(const SparseMatrix& L, const Vector& f, const ChebyshevCoeffs& coeffs) {
    const int n = static_cast<int>(f.size());
    const int n_bands = static_cast<int>(coeffs.bands.size());
    const double a = coeffs.domain_max / 2.0;

    Matrix out = Matrix::Zero(n_bands, n);
    Vector t_prev = f;                       // T0 f
    Vector t_cur = (L * f - a * f) / a;      // T1 f
    for (int j = 0; j < n_bands; ++j) {
        out.row(j) = (0.5 * coeffs.bands[j][0] * t_prev + coeffs.bands[j][1] * t_cur).transpose();
    }
    for (int k = 2; k <= coeffs.order; ++k) {
        Vector t_next = (2.0 / a) * (L * t_cur - a * t_cur) - t_prev;
        for (int j = 0; j < n_bands; ++j) {
            out.row(j) += coeffs.bands[j][k] * t_next.transpose();
        }
        t_prev = std::move(t_cur);
        t_cur = std::move(t_next);
    }
    return out;
}

inline void check_domain(const Laplacian& L, const ChebyshevCoeffs& coeffs) {
    const SpectrumBound bound = estimate_lambda_max(L);
    // bound.lambda_max is inflated; allow the inflation margin.
    if (bound.lambda_max > coeffs.domain_max * 1.011) {
        throw SpectralDomainError("Laplacian spectrum exceeds the Chebyshev fit domain");
    }
}

}  // namespace detail

/// Fast SGW coefficients via the shifted-Chebyshev recurrence, O(order * |E|).
inline Matrix sgw_chebyshev(const Laplacian& L, const Vector& signal, const ChebyshevCoeffs& coeffs) {
    if (signal.size() != L.matrix.rows()) throw ParameterError("signal length must match node count");
    detail::check_domain(L, coeffs);
    return detail::chebyshev_apply(L.matrix, signal, coeffs);
}

/// Transform every feature column of the point cloud, assembling the tensor.
inline SgwTensor sgw_transform_all(const PointCloud& points, const Laplacian& L,
                                   const FilterBank& bank, int order = 40) {
    if (points.n_samples() != L.matrix.rows()) {
        throw ParameterError("Laplacian must be built over the same points");
    }
    const ChebyshevCoeffs coeffs = chebyshev_fit(bank, order);
    detail::check_domain(L, coeffs);

    const int K = bank.n_bands();
    const int D = points.n_features();
    const int N = points.n_samples();
    std::vector<Matrix> slices(K, Matrix(D, N));
    for (int r = 0; r < D; ++r) {
        const Matrix per_band = detail::chebyshev_apply(L.matrix, points.feature(r), coeffs);
        for (int j = 0; j < K; ++j) slices[j].row(r) = per_band.row(j);
    }
    return SgwTensor(std::move(slices), bank.scales());
}

}  // namespace msimap

#endif
