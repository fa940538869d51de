#ifndef MSIMAP_ENCODE_HPP
#define MSIMAP_ENCODE_HPP

#include "msimap/sgw.hpp"

#include <string>
#include <utility>
#include <vector>

namespace msimap {

/// (K*D) x N flattening, scale-major / feature-minor: rows for scale s_1
/// come first ordered f_1..f_D, then s_2, and so on.
struct EncodedMethod1 {
    Matrix matrix;
    int n_bands;
    int n_features;

    struct RowKey {
        int band;     // 0-based
        int feature;  // 0-based
    };
    RowKey row_key(int row) const { return {row / n_features, row % n_features}; }
    int row_of(int band, int feature) const { return band * n_features + feature; }
};

/// The tensor carried through unchanged, with optional feature names for
/// the downstream importance report.
struct EncodedMethod2 {
    SgwTensor tensor;
    std::vector<std::string> feature_names;  // empty or size D
};

inline EncodedMethod1 encode_method1(const SgwTensor& tensor) {
    const int K = tensor.n_bands();
    const int D = tensor.n_features();
    const int N = tensor.n_nodes();
    Matrix m(K * D, N);
    for (int j = 0; j < K; ++j) {
        m.middleRows(j * D, D) = tensor.slice(j);
    }
    return EncodedMethod1{std::move(m), K, D};
}

inline EncodedMethod2 encode_method2(SgwTensor tensor, std::vector<std::string> feature_names = {}) {
    if (tensor.n_features() == 0) throw ParameterError("tensor has no features");
    if (!feature_names.empty() && static_cast<int>(feature_names.size()) != tensor.n_features()) {
        throw ParameterError("feature name count must match feature count");
    }
    return EncodedMethod2{std::move(tensor), std::move(feature_names)};
}

}  // namespace msimap

#endif
