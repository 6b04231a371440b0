#ifndef CURVEX_RNG_HPP
#define CURVEX_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

namespace curvex {

/// splitmix64 step; also used as the counter hash for deriving sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive an independent sub-seed from a seed and up to three work-item indices.
/// Work items seeded this way can run in any order and still merge reproducibly.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= b + 0xd1b54a32d192ed03ull;
    h ^= splitmix64(s);
    s ^= c + 0x8cb92ba72f3d8dd7ull;
    h ^= splitmix64(s);
    return h;
}

/// Small deterministic generator.  Distributions are hand-rolled so that
/// streams are identical across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed ^ 0x6a09e667f3bcc908ull) {
        // warm up so that small seeds decorrelate
        next();
        next();
    }

    std::uint64_t next() { return splitmix64(state_); }

    /// Uniform in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + u01() * (b - a); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift; bias is negligible for the ranges used here
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    template <class T> void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices drawn from [0, n), returned in increasing order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  private:
    std::uint64_t state_;
};

inline std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k >= n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return all;
    }
    // Floyd's algorithm, then sort for stable downstream ordering.
    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::vector<bool> in(n, false);
    for (std::size_t j = n - k; j < n; ++j) {
        std::size_t t = static_cast<std::size_t>(below(j + 1));
        if (in[t]) t = j;
        in[t] = true;
        picked.push_back(t);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

} // namespace curvex

#endif
