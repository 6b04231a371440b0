#ifndef CURVEX_PRESETS_HPP
#define CURVEX_PRESETS_HPP

namespace curvex {

/// Architecture defaults per refinement level.
struct EtaPreset {
    int m_iota;
    int hidden_width;
    double l2_factor;
};

inline EtaPreset preset_for_eta(int eta) {
    switch (eta) {
    case 6: return {20, 130, 5e-6};
    case 7: return {18, 130, 5e-6};
    case 8: return {18, 120, 5e-6};
    case 9: return {18, 130, 5e-6};
    case 10: return {18, 130, 1e-5};
    case 11: return {18, 120, 7e-6};
    default: return {18, 130, 5e-6};
    }
}

} // namespace curvex

#endif
