#include "curvex/field_ops.hpp"

#include <algorithm>
#include <cmath>

namespace curvex {

namespace {

struct Window {
    int i0, j0, i1, j1;
};

Window window_from_region(const Grid& grid, const Box2& region) {
    const double h = grid.h;
    Window w;
    w.i0 = static_cast<int>(std::floor((region.lo.x - grid.origin.x) / h));
    w.j0 = static_cast<int>(std::floor((region.lo.y - grid.origin.y) / h));
    w.i1 = static_cast<int>(std::ceil((region.hi.x - grid.origin.x) / h));
    w.j1 = static_cast<int>(std::ceil((region.hi.y - grid.origin.y) / h));
    return w;
}

} // namespace

ScalarField evaluate(const Grid& grid, const ImplicitShape& shape, const Box2& region) {
    const double h = grid.h;
    const Window w = window_from_region(grid, region);
    const int nx = w.i1 - w.i0 + 1;
    const int ny = w.j1 - w.j0 + 1;
    if (nx <= 2 || ny <= 2) throw DataError("evaluate: region too small");

    // Band membership: nodes within band_half_width*h of the interface,
    // found by marking a Chebyshev disc around a dense polyline of Gamma.
    const auto polyline = shape.interface_polyline(0.5 * h, region.grown(2.0 * h));
    if (polyline.empty()) throw NumericalError("no interface in region");

    const int radius = static_cast<int>(std::ceil(grid.band_half_width)) + 1;
    std::vector<std::uint8_t> band(static_cast<std::size_t>(nx) * ny, 0);
    for (const Vec2& p : polyline) {
        const int ic = static_cast<int>(std::lround((p.x - grid.origin.x) / h));
        const int jc = static_cast<int>(std::lround((p.y - grid.origin.y) / h));
        for (int j = std::max(jc - radius, w.j0); j <= std::min(jc + radius, w.j1); ++j) {
            std::uint8_t* row = band.data() + static_cast<std::size_t>(j - w.j0) * nx;
            const int lo = std::max(ic - radius, w.i0);
            const int hi = std::min(ic + radius, w.i1);
            for (int i = lo; i <= hi; ++i) row[i - w.i0] = 1;
        }
    }

    ScalarField field(grid, w.i0, w.j0, nx, ny);
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = w.j0; j <= w.j1; ++j) {
        for (int i = w.i0; i <= w.i1; ++i) {
            if (!band[static_cast<std::size_t>(j - w.j0) * nx + (i - w.i0)]) continue;
            field.set(i, j, shape.phi(grid.pos(i, j)));
        }
    }
    field.refresh_stencil_flags();

    // The polyline only approximates Gamma; make sure a sign change exists.
    bool found = false;
    for (int j = w.j0; j <= w.j1 && !found; ++j) {
        for (int i = w.i0; i < w.i1 && !found; ++i) {
            if (!field.has(i, j)) continue;
            const double v = field.value(i, j);
            if (field.has(i + 1, j) && v * field.value(i + 1, j) <= 0.0) found = true;
            else if (field.has(i, j + 1) && v * field.value(i, j + 1) <= 0.0) found = true;
        }
    }
    if (!found) throw NumericalError("no interface in region");
    return field;
}

namespace kernels {

inline Vec2 normal_at(const ScalarField& f, int i, int j, bool& degenerate) {
    const double h = f.grid().h;
    const double px = (f.value(i + 1, j) - f.value(i - 1, j)) / (2.0 * h);
    const double py = (f.value(i, j + 1) - f.value(i, j - 1)) / (2.0 * h);
    const double norm = std::sqrt(px * px + py * py);
    if (norm < kZeroGradientGuard) {
        degenerate = true;
        return {0.0, 0.0};
    }
    degenerate = false;
    return {px / norm, py / norm};
}

inline double curvature_at(const ScalarField& f, int i, int j, bool& degenerate) {
    const double h = f.grid().h;
    double phi[9];
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) phi[stencil_slot(di, dj)] = f.value(i + di, j + dj);
    const double px = (phi[stencil_slot(1, 0)] - phi[stencil_slot(-1, 0)]) / (2.0 * h);
    const double py = (phi[stencil_slot(0, 1)] - phi[stencil_slot(0, -1)]) / (2.0 * h);
    if (std::sqrt(px * px + py * py) < kZeroGradientGuard) {
        degenerate = true;
        return 0.0;
    }
    degenerate = false;
    return curvature_of_stencil(phi, h);
}

/// Godunov upwind Hamiltonian |grad phi| with the propagation direction set
/// by the smoothed sign of the pre-redistancing field.
inline double godunov_grad_norm(double a, double b, double c, double d, double sgn) {
    double x2, y2;
    if (sgn >= 0.0) {
        const double am = std::max(a, 0.0), bm = std::min(b, 0.0);
        const double cm = std::max(c, 0.0), dm = std::min(d, 0.0);
        x2 = std::max(am * am, bm * bm);
        y2 = std::max(cm * cm, dm * dm);
    } else {
        const double am = std::min(a, 0.0), bm = std::max(b, 0.0);
        const double cm = std::min(c, 0.0), dm = std::max(d, 0.0);
        x2 = std::max(am * am, bm * bm);
        y2 = std::max(cm * cm, dm * dm);
    }
    return std::sqrt(x2 + y2);
}

} // namespace kernels

double curvature_of_stencil(const double phi[9], double h) {
    const double p00 = phi[stencil_slot(0, 0)];
    const double pm0 = phi[stencil_slot(-1, 0)], pp0 = phi[stencil_slot(1, 0)];
    const double p0m = phi[stencil_slot(0, -1)], p0p = phi[stencil_slot(0, 1)];
    const double pmm = phi[stencil_slot(-1, -1)], ppm = phi[stencil_slot(1, -1)];
    const double pmp = phi[stencil_slot(-1, 1)], ppp = phi[stencil_slot(1, 1)];

    const double px = (pp0 - pm0) / (2.0 * h);
    const double py = (p0p - p0m) / (2.0 * h);
    const double pxx = (pp0 - 2.0 * p00 + pm0) / (h * h);
    const double pyy = (p0p - 2.0 * p00 + p0m) / (h * h);
    const double pxy = (ppp - ppm - pmp + pmm) / (4.0 * h * h);

    const double g2 = px * px + py * py;
    const double denom = g2 * std::sqrt(g2);
    const double guard = kZeroGradientGuard * kZeroGradientGuard * kZeroGradientGuard;
    if (denom < guard) return 0.0;
    return (px * px * pyy - 2.0 * px * py * pxy + py * py * pxx) / denom;
}

VectorField normals(const ScalarField& field) {
    VectorField out(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
#pragma omp parallel for schedule(static)
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.stencil_ok(i, j)) continue;
            bool degenerate = false;
            out.set(i, j, kernels::normal_at(field, i, j, degenerate));
            if (degenerate) out.set_degenerate(i, j);
        }
    }
    return out;
}

ScalarField curvature(const ScalarField& field) {
    ScalarField out(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
#pragma omp parallel for schedule(static)
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.stencil_ok(i, j)) continue;
            bool degenerate = false;
            out.set(i, j, kernels::curvature_at(field, i, j, degenerate));
            if (degenerate) out.set_degenerate(i, j);
        }
    }
    return out;
}

namespace {

/// Signed distance estimate along the normal from the local quadratic model
/// of phi0 (the smaller root of phi - t g + t^2 q / 2).  Exact for quadratic
/// level sets, second order for smooth ones; falls back to phi0 over the
/// gradient norm when the model has no usable root.
inline double normal_root_distance(double v, double g, double q) {
    const double first_order = v / g;
    if (std::abs(q) < 1e-12) return first_order;
    const double disc = g * g - 2.0 * v * q;
    if (disc <= 0.0) return first_order;
    return (g - std::sqrt(disc)) / q;
}

/// Distance targets for nodes next to Gamma.  Relaxing those nodes toward
/// these values pins the zero crossing, which plain upwinding would displace
/// when phi0 is far from a distance function (the quadratic circle has slope
/// 2r at Gamma).
ScalarField subcell_targets(const ScalarField& phi0) {
    const double h = phi0.grid().h;
    ScalarField d(phi0.grid(), phi0.i0(), phi0.j0(), phi0.nx(), phi0.ny());
    for (int j = phi0.j0(); j <= phi0.j1(); ++j) {
        for (int i = phi0.i0(); i <= phi0.i1(); ++i) {
            if (!phi0.stencil_ok(i, j)) continue;
            const double v = phi0.value(i, j);
            const bool crossing = v * phi0.value(i + 1, j) <= 0.0 ||
                                  v * phi0.value(i - 1, j) <= 0.0 ||
                                  v * phi0.value(i, j + 1) <= 0.0 ||
                                  v * phi0.value(i, j - 1) <= 0.0;
            if (!crossing) continue;
            const double gx = (phi0.value(i + 1, j) - phi0.value(i - 1, j)) / (2.0 * h);
            const double gy = (phi0.value(i, j + 1) - phi0.value(i, j - 1)) / (2.0 * h);
            const double g = std::max(std::sqrt(gx * gx + gy * gy), kZeroGradientGuard);
            const double nx = gx / g, ny = gy / g;
            const double hxx =
                (phi0.value(i + 1, j) - 2.0 * v + phi0.value(i - 1, j)) / (h * h);
            const double hyy =
                (phi0.value(i, j + 1) - 2.0 * v + phi0.value(i, j - 1)) / (h * h);
            const double hxy = (phi0.value(i + 1, j + 1) - phi0.value(i + 1, j - 1) -
                                phi0.value(i - 1, j + 1) + phi0.value(i - 1, j - 1)) /
                               (4.0 * h * h);
            const double q = nx * nx * hxx + 2.0 * nx * ny * hxy + ny * ny * hyy;
            d.set(i, j, normal_root_distance(v, g, q));
        }
    }
    return d;
}

/// Smoothed signum of the pre-redistancing field, with the smearing width
/// scaled by the local gradient so that fields far from unit slope (the
/// quadratic circle has |grad| = 2r at Gamma) neither crawl nor overshoot.
ScalarField smoothed_sign(const ScalarField& phi0) {
    const double h = phi0.grid().h;
    ScalarField s(phi0.grid(), phi0.i0(), phi0.j0(), phi0.nx(), phi0.ny());
    for (int j = phi0.j0(); j <= phi0.j1(); ++j) {
        for (int i = phi0.i0(); i <= phi0.i1(); ++i) {
            if (!phi0.has(i, j)) continue;
            const double v = phi0.value(i, j);
            double width = h;
            if (phi0.has(i - 1, j) && phi0.has(i + 1, j) && phi0.has(i, j - 1) &&
                phi0.has(i, j + 1)) {
                const double gx = (phi0.value(i + 1, j) - phi0.value(i - 1, j)) / (2.0 * h);
                const double gy = (phi0.value(i, j + 1) - phi0.value(i, j - 1)) / (2.0 * h);
                width = h * std::max(std::sqrt(gx * gx + gy * gy), kZeroGradientGuard);
            }
            s.set(i, j, v / std::sqrt(v * v + width * width));
        }
    }
    return s;
}

/// One forward-Euler stage of the redistancing PDE.  Nodes without all four
/// axis neighbors are copied through unchanged (frozen band edge);
/// interface-adjacent nodes relax toward the subcell distance target.
void reinit_stage(const ScalarField& phi0, const ScalarField& sgn0,
                  const ScalarField& subcell, const ScalarField& in, ScalarField& out,
                  double dtau) {
    const double h = in.grid().h;
#pragma omp parallel for schedule(static)
    for (int j = in.j0(); j <= in.j1(); ++j) {
        for (int i = in.i0(); i <= in.i1(); ++i) {
            if (!in.has(i, j)) continue;
            const double v = in.value(i, j);
            if (!in.has(i - 1, j) || !in.has(i + 1, j) || !in.has(i, j - 1) ||
                !in.has(i, j + 1)) {
                out.set(i, j, v);
                continue;
            }
            if (subcell.has(i, j)) {
                const double hard = phi0.value(i, j) >= 0.0 ? 1.0 : -1.0;
                out.set(i, j, v - (dtau / h) * (hard * std::abs(v) - subcell.value(i, j)));
                continue;
            }
            const double s = sgn0.value(i, j);
            const double a = (v - in.value(i - 1, j)) / h;
            const double b = (in.value(i + 1, j) - v) / h;
            const double c = (v - in.value(i, j - 1)) / h;
            const double d = (in.value(i, j + 1) - v) / h;
            const double g = kernels::godunov_grad_norm(a, b, c, d, s);
            out.set(i, j, v - dtau * s * (g - 1.0));
        }
    }
}

} // namespace

ScalarField reinitialize(const ScalarField& field, int nu) {
    if (nu < 0) throw DataError("reinitialize: nu must be non-negative");
    const double dtau = field.grid().h / 2.0;
    const ScalarField subcell = subcell_targets(field);
    const ScalarField sgn0 = smoothed_sign(field);
    ScalarField cur = field;
    ScalarField s1 = field, s2 = field;
    for (int step = 0; step < nu; ++step) {
        reinit_stage(field, sgn0, subcell, cur, s1, dtau);
        reinit_stage(field, sgn0, subcell, s1, s2, dtau);
        // TVD-RK2 average
        auto& out = s2.raw();
        const auto& base = cur.raw();
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (base[k] + out[k]);
        std::swap(cur, s2);
    }
    cur.refresh_stencil_flags();
    return cur;
}

double interpolate_bilinear(const ScalarField& field, Vec2 x) {
    const Grid& g = field.grid();
    const double h = g.h;
    const double fx = (x.x - g.origin.x) / h;
    const double fy = (x.y - g.origin.y) / h;
    const int i = static_cast<int>(std::floor(fx));
    const int j = static_cast<int>(std::floor(fy));
    if (!field.has(i, j) || !field.has(i + 1, j) || !field.has(i, j + 1) ||
        !field.has(i + 1, j + 1))
        throw NumericalError("interpolation outside band");
    const double tx = fx - i;
    const double ty = fy - j;
    return (1.0 - tx) * (1.0 - ty) * field.value(i, j) + tx * (1.0 - ty) * field.value(i + 1, j) +
           (1.0 - tx) * ty * field.value(i, j + 1) + tx * ty * field.value(i + 1, j + 1);
}

Vec2 project_to_interface(Vec2 node_pos, double phi, Vec2 normal) {
    if (normal.norm() < kZeroGradientGuard) throw NumericalError("degenerate projection");
    return node_pos - phi * normal;
}

std::vector<NodeIndex> interface_nodes(const ScalarField& field) {
    std::vector<NodeIndex> nodes;
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.has(i, j)) continue;
            const double v = field.value(i, j);
            bool crossing = false;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4 && !crossing; ++k) {
                const int ii = i + di[k], jj = j + dj[k];
                if (field.has(ii, jj) && v * field.value(ii, jj) <= 0.0) crossing = true;
            }
            if (crossing && field.stencil_ok(i, j)) nodes.push_back({i, j});
        }
    }
    return nodes;
}

namespace ref {

VectorField normals(const ScalarField& field) {
    VectorField out(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
    const double h = field.grid().h;
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.stencil_ok(i, j)) continue;
            const double px = (field.value(i + 1, j) - field.value(i - 1, j)) / (2.0 * h);
            const double py = (field.value(i, j + 1) - field.value(i, j - 1)) / (2.0 * h);
            const double norm = std::sqrt(px * px + py * py);
            if (norm < kZeroGradientGuard) {
                out.set(i, j, {0.0, 0.0});
                out.set_degenerate(i, j);
            } else {
                out.set(i, j, {px / norm, py / norm});
            }
        }
    }
    return out;
}

ScalarField curvature(const ScalarField& field) {
    ScalarField out(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
    const double h = field.grid().h;
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.stencil_ok(i, j)) continue;
            double phi[9];
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di)
                    phi[stencil_slot(di, dj)] = field.value(i + di, j + dj);
            const double px = (phi[stencil_slot(1, 0)] - phi[stencil_slot(-1, 0)]) / (2.0 * h);
            const double py = (phi[stencil_slot(0, 1)] - phi[stencil_slot(0, -1)]) / (2.0 * h);
            if (std::sqrt(px * px + py * py) < kZeroGradientGuard) {
                out.set(i, j, 0.0);
                out.set_degenerate(i, j);
            } else {
                out.set(i, j, curvature_of_stencil(phi, h));
            }
        }
    }
    return out;
}

ScalarField reinitialize(const ScalarField& field, int nu) {
    const double h = field.grid().h;
    const double dtau = h / 2.0;

    // subcell distance targets for nodes next to Gamma (same quadratic-model
    // estimate as the parallel kernel)
    ScalarField subcell(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.stencil_ok(i, j)) continue;
            const double v = field.value(i, j);
            const bool crossing = v * field.value(i + 1, j) <= 0.0 ||
                                  v * field.value(i - 1, j) <= 0.0 ||
                                  v * field.value(i, j + 1) <= 0.0 ||
                                  v * field.value(i, j - 1) <= 0.0;
            if (!crossing) continue;
            const double gx = (field.value(i + 1, j) - field.value(i - 1, j)) / (2.0 * h);
            const double gy = (field.value(i, j + 1) - field.value(i, j - 1)) / (2.0 * h);
            const double g = std::max(std::sqrt(gx * gx + gy * gy), kZeroGradientGuard);
            const double nx = gx / g, ny = gy / g;
            const double hxx =
                (field.value(i + 1, j) - 2.0 * v + field.value(i - 1, j)) / (h * h);
            const double hyy =
                (field.value(i, j + 1) - 2.0 * v + field.value(i, j - 1)) / (h * h);
            const double hxy = (field.value(i + 1, j + 1) - field.value(i + 1, j - 1) -
                                field.value(i - 1, j + 1) + field.value(i - 1, j - 1)) /
                               (4.0 * h * h);
            const double q = nx * nx * hxx + 2.0 * nx * ny * hxy + ny * ny * hyy;
            subcell.set(i, j, normal_root_distance(v, g, q));
        }
    }

    // gradient-scaled smoothed signum of the input field
    ScalarField sgn0(field.grid(), field.i0(), field.j0(), field.nx(), field.ny());
    for (int j = field.j0(); j <= field.j1(); ++j) {
        for (int i = field.i0(); i <= field.i1(); ++i) {
            if (!field.has(i, j)) continue;
            const double v = field.value(i, j);
            double width = h;
            if (field.has(i - 1, j) && field.has(i + 1, j) && field.has(i, j - 1) &&
                field.has(i, j + 1)) {
                const double gx = (field.value(i + 1, j) - field.value(i - 1, j)) / (2.0 * h);
                const double gy = (field.value(i, j + 1) - field.value(i, j - 1)) / (2.0 * h);
                width = h * std::max(std::sqrt(gx * gx + gy * gy), kZeroGradientGuard);
            }
            sgn0.set(i, j, v / std::sqrt(v * v + width * width));
        }
    }

    ScalarField cur = field;
    auto stage = [&](const ScalarField& in) {
        ScalarField out = in;
        for (int j = in.j0(); j <= in.j1(); ++j) {
            for (int i = in.i0(); i <= in.i1(); ++i) {
                if (!in.has(i, j)) continue;
                if (!in.has(i - 1, j) || !in.has(i + 1, j) || !in.has(i, j - 1) ||
                    !in.has(i, j + 1))
                    continue;
                const double v = in.value(i, j);
                if (subcell.has(i, j)) {
                    const double hard = field.value(i, j) >= 0.0 ? 1.0 : -1.0;
                    out.set(i, j,
                            v - (dtau / h) * (hard * std::abs(v) - subcell.value(i, j)));
                    continue;
                }
                const double s = sgn0.value(i, j);
                const double a = (v - in.value(i - 1, j)) / h;
                const double b = (in.value(i + 1, j) - v) / h;
                const double c = (v - in.value(i, j - 1)) / h;
                const double d = (in.value(i, j + 1) - v) / h;
                const double g = kernels::godunov_grad_norm(a, b, c, d, s);
                out.set(i, j, v - dtau * s * (g - 1.0));
            }
        }
        return out;
    };
    for (int step = 0; step < nu; ++step) {
        ScalarField s2 = stage(stage(cur));
        auto& out = s2.raw();
        const auto& base = cur.raw();
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (base[k] + out[k]);
        cur = s2;
    }
    cur.refresh_stencil_flags();
    return cur;
}

} // namespace ref

} // namespace curvex
