#ifndef CURVEX_HYBRID_HPP
#define CURVEX_HYBRID_HPP

#include <span>
#include <vector>

#include "curvex/neural.hpp"
#include "curvex/packet.hpp"
#include "curvex/preprocess.hpp"

namespace curvex {

/// Gate and blend thresholds of the hybrid solver plus the model snapshot it
/// consults.
struct HybridConfig {
    double hk_low = 0.004; // |hk| below this: numerical value passes through
    double hk_up = 0.007;  // |hk| up to this: linear blend back to numerical
    const ErrorNet* net = nullptr;
    const PreprocessorState* pre = nullptr;

    void validate(double grid_h) const;
};

struct HybridStats {
    std::size_t bypassed = 0;  // below gate, numerical value returned
    std::size_t corrected = 0; // network consulted
    std::size_t blended = 0;   // inside the blend window
    std::size_t fallbacks = 0; // packet construction failed, numerical kept
    std::size_t net_evals = 0; // individual network evaluations
};

/// Steps 4-5 of the solver: blend the averaged prediction back toward the
/// numerical value near the gate and restore the numerical sign.
double apply_gate_blend(double hk_numeric, double avg_prediction, double hk_low, double hk_up);

/// Dimensionless curvature at the node's projection onto Gamma with gated,
/// double-predicted neural correction.
double ml_curvature(const ScalarField& field, const VectorField& normals,
                    const ScalarField& curvatures, NodeIndex node, const HybridConfig& cfg,
                    HybridStats* stats = nullptr);

/// Batched variant; identical results to the per-node loop.
std::vector<double> ml_curvature_batch(const ScalarField& field, const VectorField& normals,
                                       const ScalarField& curvatures,
                                       std::span<const NodeIndex> nodes,
                                       const HybridConfig& cfg, HybridStats* stats = nullptr);

/// Numerical baseline for the same node: h times the bilinear curvature
/// interpolation at the projection point.
double numerical_hk(const ScalarField& field, const VectorField& normals,
                    const ScalarField& curvatures, NodeIndex node);

} // namespace curvex

#endif
