#ifndef CURVEX_FIELD_OPS_HPP
#define CURVEX_FIELD_OPS_HPP

#include <vector>

#include "curvex/field.hpp"
#include "curvex/shapes.hpp"

namespace curvex {

/// Gradient-norm guard below which a node is flagged degenerate.
inline constexpr double kZeroGradientGuard = 1e-8;

/// Stencil slot for offset (di, dj), di/dj in {-1, 0, +1}; canonical order
/// mm, 0m, pm, m0, 00, p0, mp, 0p, pp.
constexpr int stencil_slot(int di, int dj) { return (dj + 1) * 3 + (di + 1); }

/// Sample a shape's level set on the narrow band inside `region`.
/// Every lattice node within band_half_width*h of Gamma is filled; throws
/// NumericalError("no interface in region") when no sign change exists.
/// Precondition: region covers the interface plus the band.
ScalarField evaluate(const Grid& grid, const ImplicitShape& shape, const Box2& region);

/// Sample an arbitrary function on every node of a box (test/debug helper;
/// no band restriction).
template <class Fn> ScalarField sample_box(const Grid& grid, const Box2& region, Fn&& fn) {
    const double h = grid.h;
    int i0 = static_cast<int>(std::floor((region.lo.x - grid.origin.x) / h));
    int j0 = static_cast<int>(std::floor((region.lo.y - grid.origin.y) / h));
    int i1 = static_cast<int>(std::ceil((region.hi.x - grid.origin.x) / h));
    int j1 = static_cast<int>(std::ceil((region.hi.y - grid.origin.y) / h));
    ScalarField f(grid, i0, j0, i1 - i0 + 1, j1 - j0 + 1);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) f.set(i, j, fn(grid.pos(i, j)));
    f.refresh_stencil_flags();
    return f;
}

/// Central-difference unit normals at stencil-complete nodes.  Nodes whose
/// gradient norm falls below the guard get (0, 0) and a degenerate flag.
VectorField normals(const ScalarField& field);

/// Nodal curvature of the level set (divergence of the unit normal) via
/// second-order central differences; degenerate nodes get zero.
ScalarField curvature(const ScalarField& field);

/// nu pseudo-time redistancing steps (first-order Godunov Hamiltonian,
/// TVD-RK2, smoothed signum, dtau = h/2).  Nodes without all four axis
/// neighbors are held frozen.
ScalarField reinitialize(const ScalarField& field, int nu);

/// Bilinear interpolation at x from the containing cell's four corners.
/// Throws NumericalError("interpolation outside band") when a corner is absent.
double interpolate_bilinear(const ScalarField& field, Vec2 x);

/// First-order projection onto Gamma: x - phi * n (n already unit).
Vec2 project_to_interface(Vec2 node_pos, double phi, Vec2 normal);

/// Nodes with a level-set sign change to at least one 4-neighbor, in
/// row-major order.  Only stencil-complete nodes are reported (sign-change
/// nodes are complete by band construction except on the outer pad ring).
std::vector<NodeIndex> interface_nodes(const ScalarField& field);

/// Curvature of a single 3x3 stencil, canonical order
/// (mm,0m,pm,m0,00,p0,mp,0p,pp).  Shared by the nodal kernel and by tests
/// that check transformation invariance.
double curvature_of_stencil(const double phi[9], double h);

/// Serial reference kernels, kept independent of the parallel versions for
/// consistency tests and benchmarking.
namespace ref {
VectorField normals(const ScalarField& field);
ScalarField curvature(const ScalarField& field);
ScalarField reinitialize(const ScalarField& field, int nu);
} // namespace ref

} // namespace curvex

#endif
