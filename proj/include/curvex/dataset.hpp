#ifndef CURVEX_DATASET_HPP
#define CURVEX_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "curvex/packet.hpp"

namespace curvex {

/// Tuning knobs of the circular/sinusoidal sample generators.
struct GenConfig {
    int eta = 6;
    double hk_min_star = 0.004;     // minimum target |h kappa*|
    double hk_max_star = 2.0 / 3.0; // maximum target |h kappa*| (r = 1.5h)
    int cph = 2;                    // circles per h
    double sph2 = 5.0;              // samples per h^2
    int keep_every_x = 4;           // probabilistic node filter
    int nu = 10;                    // redistancing steps
    int na = 34;                    // sine amplitudes
    int nt = 38;                    // sine tilts in [-pi/2, pi/2)
    double ease_mid_max_pr = 0.4;   // acceptance probability at mid-max |hk*|
    double scale = 1.0;             // desk-scale factor on sph2/na/nt
    std::uint64_t rng_seed = 0;

    void validate() const;
    double effective_sph2() const { return sph2 * scale; }
    int effective_na() const;
    int effective_nt() const;
};

/// Where a sample came from (generator bookkeeping, not persisted in CSV).
struct Provenance {
    enum Kind : std::uint8_t { Circle = 0, Sine = 1 };
    Kind kind = Circle;
    double p0 = 0.0; // circle: radius      sine: amplitude
    double p1 = 0.0; // circle: -            sine: frequency
    double p2 = 0.0; // circle: -            sine: tilt
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<Sample> samples;
    int eta = 6;
    std::vector<Provenance> provenance; // empty or parallel to samples

    std::size_t size() const { return samples.size(); }
};

/// Per-generator run counters for the manifest.
struct GenStats {
    std::size_t grids_drawn = 0;
    std::size_t nodes_visited = 0;
    std::size_t quota_warnings = 0;
    std::vector<std::size_t> per_class_counts; // per radius / per (A, w) task
};

/// Samples from randomly shifted circles with radii spaced uniformly in
/// target curvature; per-radius quotas follow a trapezoidal ramp.
Dataset generate_circles(const GenConfig& cfg, GenStats* stats = nullptr);

/// Samples from tilted, shifted sine waves with ease-off probabilistic
/// thinning of shallow-curvature nodes.
Dataset generate_sines(const GenConfig& cfg, GenStats* stats = nullptr);

/// Acceptance probability ramp between p_min at q=0 and p_mid_max at q=1.
double ease_off(double p_min, double p_mid_max, double q);

/// Subsample overpopulated target-histogram bins until every bin holds at
/// most two thirds of the current median count.
Dataset balance_histogram(const Dataset& ds, int bins, std::uint64_t seed);

struct SplitResult {
    Dataset train, test, valid;
};

/// 100-quantile stratified 70/10/10 split; the remaining 10% is discarded.
/// Classes with fewer than 10 members are merged with a neighbor.
SplitResult stratified_split(const Dataset& ds, std::uint64_t seed);

/// CSV persistence in the canonical 28-feature order plus `target`.
void write_csv(const Dataset& ds, const std::string& path);
Dataset read_csv(const std::string& path);

/// Generation manifest (config echo, counts, seed) as a JSON string.
std::string manifest_json(const GenConfig& cfg, const char* kind, const Dataset& ds,
                          const GenStats& stats);

/// Internal sizing helpers, exposed for tests against the published
/// arithmetic.
struct CircleLayout {
    int nc = 0;             // number of radii
    double avg_spr = 0.0;   // mean samples per radius
    std::vector<double> spr;       // per-radius sample quota ramp
    std::vector<double> target_k;  // per-radius target curvature
};
CircleLayout circle_layout(const GenConfig& cfg);

std::vector<double> linspace(double a, double b, int n);

} // namespace curvex

#endif
