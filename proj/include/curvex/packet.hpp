#ifndef CURVEX_PACKET_HPP
#define CURVEX_PACKET_HPP

#include <array>
#include <vector>

#include "curvex/field.hpp"
#include "curvex/field_ops.hpp"

namespace curvex {

inline constexpr int kFeatureCount = 28;

/// Raw features of one interface node: 9 stencil level-set values, 9 unit
/// normals, and the dimensionless curvature interpolated at the projection
/// onto Gamma.
struct DataPacket {
    std::array<double, 9> phi{};
    std::array<Vec2, 9> normal{};
    double hk = 0.0;

    /// Flat feature vector: phi(mm..pp), nx(mm..pp), ny(mm..pp), hk.
    /// This order is the contract for CSV files, the scaler, and the PCA.
    std::array<double, kFeatureCount> features() const;
    static DataPacket from_features(const std::array<double, kFeatureCount>& f);
};

/// Column names matching DataPacket::features().
const std::array<const char*, kFeatureCount>& feature_names();

/// Learning tuple in negative-curvature standard form.
struct Sample {
    DataPacket packet;
    double target = 0.0; // dimensionless h*kappa, negative spectrum
};

/// Fill a packet from the node's 3x3 stencil; hk is h times the bilinear
/// curvature interpolation at the node's normal projection onto Gamma.
/// Throws NumericalError on incomplete stencils or degenerate normals.
DataPacket collect(const ScalarField& field, const VectorField& normals,
                   const ScalarField& curvatures, NodeIndex node);

/// Flip the sign of every level-set value, every normal, and hk.
DataPacket negate(const DataPacket& p);

/// Rotate the stencil by a multiple of pi/2 until the angle of n00 lies in
/// [0, pi/2].  Candidates are tried as theta = 0, +pi/2, -pi/2, +pi, -pi
/// (smallest |k| first, positive on ties); hk is rotation invariant.
DataPacket reorient(const DataPacket& p);

/// Mirror about the diagonal through the node: transpose the stencil and swap
/// normal components; hk is unchanged.
DataPacket reflect(const DataPacket& p);

} // namespace curvex

#endif
