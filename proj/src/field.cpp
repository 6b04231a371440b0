#include "curvex/field.hpp"

#include <cstdio>

namespace curvex {
namespace detail {

void Lattice::refresh_stencil_flags() {
    for (int j = j0_; j <= j1(); ++j) {
        for (int i = i0_; i <= i1(); ++i) {
            std::uint8_t& m = mask_[at(i, j)];
            m &= static_cast<std::uint8_t>(~StencilOk);
            if (!(m & Present)) continue;
            bool ok = true;
            for (int dj = -1; dj <= 1 && ok; ++dj)
                for (int di = -1; di <= 1 && ok; ++di)
                    if ((di || dj) && !has(i + di, j + dj)) ok = false;
            if (ok) m |= StencilOk;
        }
    }
}

std::size_t Lattice::count_present() const {
    std::size_t n = 0;
    for (std::uint8_t m : mask_)
        if (m & Present) ++n;
    return n;
}

} // namespace detail

void ScalarField::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot open for writing: " + path);
    std::fputs("i,j,x,y,phi\n", f);
    for (int j = j0_; j <= j1(); ++j) {
        for (int i = i0_; i <= i1(); ++i) {
            if (!has(i, j)) continue;
            Vec2 p = grid_.pos(i, j);
            std::fprintf(f, "%d,%d,%.17g,%.17g,%.17g\n", i, j, p.x, p.y, value(i, j));
        }
    }
    std::fclose(f);
}

} // namespace curvex
