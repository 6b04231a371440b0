#ifndef CURVEX_FIELD_HPP
#define CURVEX_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "curvex/errors.hpp"
#include "curvex/vec2.hpp"

namespace curvex {

/// Uniform narrow-band Cartesian lattice.  Node (i, j) sits at
/// origin + (i*h, j*h); the band extends band_half_width*h around the
/// zero isocontour.
struct Grid {
    int eta = 6;                  // refinement level, h = 2^-eta
    double h = 1.0 / 64.0;        // mesh spacing
    Vec2 origin{0.0, 0.0};        // world position of lattice index (0, 0)
    double band_half_width = 8.0; // in multiples of h; must cover 4*sqrt(2)

    static Grid from_eta(int eta, double band_half_width = 8.0) {
        if (eta < 1 || eta > 40) throw DataError("grid: eta out of range");
        if (band_half_width < 4.0 * std::sqrt(2.0))
            throw DataError("grid: band_half_width below 4*sqrt(2)");
        Grid g;
        g.eta = eta;
        g.h = std::ldexp(1.0, -eta); // exact 2^-eta
        g.band_half_width = band_half_width;
        return g;
    }

    Vec2 pos(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
};

struct NodeIndex {
    int i = 0;
    int j = 0;
    bool operator==(const NodeIndex&) const = default;
};

namespace detail {

/// Rectangular index window with per-node presence/stencil/degeneracy masks.
/// Semantically a map from lattice coordinates to values, restricted to a
/// bounding window for O(1) access.
class Lattice {
  public:
    Lattice() = default;
    Lattice(const Grid& g, int i0, int j0, int nx, int ny)
        : grid_(g), i0_(i0), j0_(j0), nx_(nx), ny_(ny),
          mask_(static_cast<std::size_t>(nx) * ny, 0) {}

    const Grid& grid() const { return grid_; }
    int i0() const { return i0_; }
    int j0() const { return j0_; }
    int i1() const { return i0_ + nx_ - 1; }
    int j1() const { return j0_ + ny_ - 1; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

    bool in_window(int i, int j) const {
        return i >= i0_ && i < i0_ + nx_ && j >= j0_ && j < j0_ + ny_;
    }
    std::size_t at(int i, int j) const {
        return static_cast<std::size_t>(j - j0_) * nx_ + (i - i0_);
    }

    bool has(int i, int j) const { return in_window(i, j) && (mask_[at(i, j)] & Present); }
    bool stencil_ok(int i, int j) const {
        return in_window(i, j) && (mask_[at(i, j)] & StencilOk);
    }
    bool degenerate(int i, int j) const {
        return in_window(i, j) && (mask_[at(i, j)] & Degenerate);
    }

    void set_present(int i, int j) { mask_[at(i, j)] |= Present; }
    void set_degenerate(int i, int j) { mask_[at(i, j)] |= Degenerate; }

    /// A node is stencil-complete when all 8 neighbors are present.
    void refresh_stencil_flags();

    std::size_t count_present() const;

  protected:
    static constexpr std::uint8_t Present = 1;
    static constexpr std::uint8_t StencilOk = 2;
    static constexpr std::uint8_t Degenerate = 4;

    Grid grid_;
    int i0_ = 0, j0_ = 0, nx_ = 0, ny_ = 0;
    std::vector<std::uint8_t> mask_;
};

} // namespace detail

/// Nodal scalar samples (level-set values, curvature, ...) on a band.
class ScalarField : public detail::Lattice {
  public:
    ScalarField() = default;
    ScalarField(const Grid& g, int i0, int j0, int nx, int ny)
        : Lattice(g, i0, j0, nx, ny), val_(static_cast<std::size_t>(nx) * ny, 0.0) {}

    double value(int i, int j) const { return val_[at(i, j)]; }
    void set(int i, int j, double v) {
        val_[at(i, j)] = v;
        set_present(i, j);
    }

    const std::vector<double>& raw() const { return val_; }
    std::vector<double>& raw() { return val_; }

    /// Debug dump, one row `i,j,x,y,phi` per present node.
    void write_csv(const std::string& path) const;

  private:
    std::vector<double> val_;
};

/// Nodal vector samples (unit normals) on a band.
class VectorField : public detail::Lattice {
  public:
    VectorField() = default;
    VectorField(const Grid& g, int i0, int j0, int nx, int ny)
        : Lattice(g, i0, j0, nx, ny), vx_(static_cast<std::size_t>(nx) * ny, 0.0),
          vy_(static_cast<std::size_t>(nx) * ny, 0.0) {}

    Vec2 value(int i, int j) const { return {vx_[at(i, j)], vy_[at(i, j)]}; }
    void set(int i, int j, Vec2 v) {
        vx_[at(i, j)] = v.x;
        vy_[at(i, j)] = v.y;
        set_present(i, j);
    }

  private:
    std::vector<double> vx_, vy_;
};

} // namespace curvex

#endif
