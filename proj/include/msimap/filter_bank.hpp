#ifndef MSIMAP_FILTER_BANK_HPP
#define MSIMAP_FILTER_BANK_HPP

#include "msimap/common.hpp"

#include <cmath>
#include <vector>

namespace msimap {

/// One low-pass scaling kernel (band 0) plus K-1 scaled band-pass kernels
/// covering [0, lambda_max]. Scales are stored descending.
class FilterBank {
  public:
    FilterBank(double lambda_max, std::vector<double> scales)
        : lambda_max_(lambda_max), scales_(std::move(scales)) {}

    /// Band-pass kernel: g(0) = 0, peak value 1 at x = 1, decays for large x.
    static double band_kernel(double x) { return x * std::exp(1.0 - x); }

    /// Low-pass scaling kernel: h(0) = 1, quartic decay.
    double scaling_kernel(double x) const {
        const double r = x / (0.3 * lambda_max_);
        return std::exp(-r * r * r * r);
    }

    /// Spectral response of band j at eigenvalue x. Band 0 is the scaling
    /// function; bands 1..K-1 are wavelets at scales_[j-1].
    double response(int band, double x) const {
        return band == 0 ? scaling_kernel(x) : band_kernel(scales_[band - 1] * x);
    }

    int n_bands() const { return static_cast<int>(scales_.size()) + 1; }
    double lambda_max() const { return lambda_max_; }
    const std::vector<double>& scales() const { return scales_; }

  private:
    double lambda_max_;
    std::vector<double> scales_;
};

/// Wavelet scales chosen so that s*lambda_max covers [1, 2*lambda_max/lambda_min]
/// logarithmically with lambda_min = lambda_max/20, i.e. s*lambda_max in [1, 40].
/// This range keeps every band resolvable by a modest Chebyshev order.
inline FilterBank design_filter_bank(double lambda_max, int n_bands = 5) {
    if (!(lambda_max > 0.0)) throw ParameterError("lambda_max must be positive");
    if (n_bands < 2) throw ParameterError("need at least 2 bands");

    constexpr double kSpectrumSplits = 20.0;  // lambda_min = lambda_max / 20
    constexpr double kPeakFactor = 2.0;
    const double s_top = kPeakFactor * kSpectrumSplits / lambda_max;
    const double s_bottom = 1.0 / lambda_max;

    const int n_wavelets = n_bands - 1;
    std::vector<double> scales(n_wavelets);
    if (n_wavelets == 1) {
        scales[0] = s_top;
    } else {
        const double step = (std::log(s_bottom) - std::log(s_top)) / (n_wavelets - 1);
        for (int j = 0; j < n_wavelets; ++j) {
            scales[j] = std::exp(std::log(s_top) + step * j);
        }
    }
    return FilterBank(lambda_max, std::move(scales));
}

/// Shifted Chebyshev expansion coefficients per band on [0, lambda_max].
struct ChebyshevCoeffs {
    std::vector<std::vector<double>> bands;  // bands[j][k], k = 0..order
    int order;
    double domain_max;
};

inline ChebyshevCoeffs chebyshev_fit(const FilterBank& bank, int order) {
    if (order < 3) throw ParameterError("Chebyshev order must be >= 3");
    const double a = bank.lambda_max() / 2.0;
    const int n_quad = 2 * (order + 1);

    ChebyshevCoeffs out{{}, order, bank.lambda_max()};
    out.bands.resize(bank.n_bands());
    for (int j = 0; j < bank.n_bands(); ++j) {
        std::vector<double>& c = out.bands[j];
        c.assign(order + 1, 0.0);
        for (int p = 0; p < n_quad; ++p) {
            const double theta = M_PI * (p + 0.5) / n_quad;
            const double x = a * (std::cos(theta) + 1.0);
            const double fx = bank.response(j, x);
            for (int k = 0; k <= order; ++k) {
                c[k] += 2.0 / n_quad * std::cos(k * theta) * fx;
            }
        }
    }
    return out;
}

/// Reconstruction 0.5*c_0 + sum_k c_k T_k((x-a)/a); used by tests and
/// for tail-decay inspection.
inline double chebyshev_eval(const std::vector<double>& c, double x, double domain_max) {
    const double a = domain_max / 2.0;
    const double y = (x - a) / a;
    double acc = 0.5 * c[0];
    double tkm1 = 1.0, tk = y;
    if (c.size() > 1) acc += c[1] * tk;
    for (std::size_t k = 2; k < c.size(); ++k) {
        const double tkp1 = 2.0 * y * tk - tkm1;
        acc += c[k] * tkp1;
        tkm1 = tk;
        tk = tkp1;
    }
    return acc;
}

}  // namespace msimap

#endif
