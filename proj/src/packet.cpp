#include "curvex/packet.hpp"

#include <cmath>

namespace curvex {

std::array<double, kFeatureCount> DataPacket::features() const {
    std::array<double, kFeatureCount> f{};
    for (int k = 0; k < 9; ++k) f[k] = phi[k];
    for (int k = 0; k < 9; ++k) f[9 + k] = normal[k].x;
    for (int k = 0; k < 9; ++k) f[18 + k] = normal[k].y;
    f[27] = hk;
    return f;
}

DataPacket DataPacket::from_features(const std::array<double, kFeatureCount>& f) {
    DataPacket p;
    for (int k = 0; k < 9; ++k) p.phi[k] = f[k];
    for (int k = 0; k < 9; ++k) p.normal[k] = {f[9 + k], f[18 + k]};
    p.hk = f[27];
    return p;
}

const std::array<const char*, kFeatureCount>& feature_names() {
    static const std::array<const char*, kFeatureCount> names = {
        "phi_mm", "phi_0m", "phi_pm", "phi_m0", "phi_00", "phi_p0", "phi_mp", "phi_0p", "phi_pp",
        "nx_mm",  "nx_0m",  "nx_pm",  "nx_m0",  "nx_00",  "nx_p0",  "nx_mp",  "nx_0p",  "nx_pp",
        "ny_mm",  "ny_0m",  "ny_pm",  "ny_m0",  "ny_00",  "ny_p0",  "ny_mp",  "ny_0p",  "ny_pp",
        "hk"};
    return names;
}

DataPacket collect(const ScalarField& field, const VectorField& nrm, const ScalarField& kappa,
                   NodeIndex node) {
    const int i = node.i, j = node.j;
    if (!field.stencil_ok(i, j)) throw NumericalError("collect: incomplete stencil");
    if (nrm.degenerate(i, j) || !nrm.has(i, j))
        throw NumericalError("collect: degenerate normal");

    DataPacket p;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            const int s = stencil_slot(di, dj);
            if (!nrm.has(i + di, j + dj) || !kappa.has(i + di, j + dj))
                throw NumericalError("collect: incomplete stencil");
            p.phi[s] = field.value(i + di, j + dj);
            p.normal[s] = nrm.value(i + di, j + dj);
        }
    }
    const Vec2 pos = field.grid().pos(i, j);
    const Vec2 x_gamma = project_to_interface(pos, field.value(i, j), nrm.value(i, j));
    p.hk = field.grid().h * interpolate_bilinear(kappa, x_gamma);
    return p;
}

DataPacket negate(const DataPacket& p) {
    DataPacket q;
    for (int k = 0; k < 9; ++k) {
        q.phi[k] = -p.phi[k];
        q.normal[k] = {-p.normal[k].x, -p.normal[k].y};
    }
    q.hk = -p.hk;
    return q;
}

namespace {

// Lattice rotation of stencil offsets by k quarter turns, plus the matching
// exact vector rotation.
struct QuarterTurn {
    int k; // 0, +1, -1, +2, -2
    static void rotate_offset(int k, int di, int dj, int& ri, int& rj) {
        switch (k) {
        case 0: ri = di; rj = dj; break;
        case 1: ri = -dj; rj = di; break;  // +pi/2
        case -1: ri = dj; rj = -di; break; // -pi/2
        default: ri = -di; rj = -dj; break; // pi
        }
    }
    static Vec2 rotate_vec(int k, Vec2 v) {
        switch (k) {
        case 0: return v;
        case 1: return {-v.y, v.x};
        case -1: return {v.y, -v.x};
        default: return {-v.x, -v.y};
        }
    }
};

bool angle_in_first_quadrant(Vec2 v) { return v.x >= 0.0 && v.y >= 0.0; }

} // namespace

DataPacket reorient(const DataPacket& p) {
    // A suitable turn always exists; ties resolve to the positive angle.
    const int candidates[5] = {0, 1, -1, 2, -2};
    int chosen = 2;
    for (int k : candidates) {
        if (angle_in_first_quadrant(QuarterTurn::rotate_vec(k, p.normal[stencil_slot(0, 0)]))) {
            chosen = k;
            break;
        }
    }

    DataPacket q;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            int ri, rj;
            QuarterTurn::rotate_offset(chosen, di, dj, ri, rj);
            const int from = stencil_slot(di, dj);
            const int to = stencil_slot(ri, rj);
            q.phi[to] = p.phi[from];
            q.normal[to] = QuarterTurn::rotate_vec(chosen, p.normal[from]);
        }
    }
    q.hk = p.hk;
    return q;
}

DataPacket reflect(const DataPacket& p) {
    DataPacket q;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            const int from = stencil_slot(dj, di); // transpose
            const int to = stencil_slot(di, dj);
            q.phi[to] = p.phi[from];
            q.normal[to] = {p.normal[from].y, p.normal[from].x};
        }
    }
    q.hk = p.hk;
    return q;
}

} // namespace curvex
