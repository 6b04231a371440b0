#ifndef CURVEX_PREPROCESS_HPP
#define CURVEX_PREPROCESS_HPP

#include <string>
#include <vector>

#include "curvex/dataset.hpp"

namespace curvex {

/// Fitted feature pipeline: h-normalization, z-scoring, PCA projection and
/// whitening.  Resolution specific (owns the h it was fitted at).
struct PreprocessorState {
    int version = 1;
    double h = 0.0;
    int m_iota = 18;
    std::vector<double> means;          // 28
    std::vector<double> stds;           // 28
    std::vector<std::vector<double>> components; // m_iota rows of 28
    std::vector<double> explained_stds; // m_iota

    /// Fraction of standardized variance dropped with the discarded
    /// components (recorded at fit time).
    double discarded_energy = 0.0;
};

/// Fit scaler and PCA basis on a training set.  Level-set features are
/// divided by h before statistics are taken.  Throws DataError naming the
/// feature when one has zero variance.
PreprocessorState fit(const Dataset& train, double h, int m_iota);

/// Matrix-level fit used by `fit` and by tests; X is row-major n x dim.
struct PcaResult {
    std::vector<double> means, stds;
    std::vector<std::vector<double>> components;
    std::vector<double> explained_stds;
    double discarded_energy = 0.0;
};
PcaResult fit_matrix(const std::vector<double>& X, std::size_t n, std::size_t dim,
                     std::size_t keep, const std::vector<std::string>& names = {});

/// Transform one packet into the m_iota-vector fed to the network.
/// Throws DataError when h does not match the fitted state.
std::vector<double> transform(const PreprocessorState& state, const DataPacket& packet,
                              double h);

void save_json(const PreprocessorState& state, const std::string& path);
PreprocessorState load_preprocessor(const std::string& path);

/// Eigen-decomposition of a dense symmetric matrix (cyclic Jacobi), used for
/// the 28x28 correlation matrix.  Returns eigenvalues in descending order and
/// matching eigenvectors as rows.
void symmetric_eigen(std::vector<double>& a, std::size_t n, std::vector<double>& values,
                     std::vector<double>& vectors);

} // namespace curvex

#endif
