#include "curvex/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>

#include <json.hpp>

#include "curvex/field_ops.hpp"
#include "curvex/rng.hpp"

namespace curvex {

namespace {
constexpr double kPi = 3.14159265358979323846;

// generator tags for sub-seed derivation
constexpr std::uint64_t kCircleDraw = 0x11;
constexpr std::uint64_t kCircleSubsample = 0x12;
constexpr std::uint64_t kSineTilt = 0x21;
constexpr std::uint64_t kBalance = 0x31;
constexpr std::uint64_t kSplit = 0x41;

constexpr int kMaxGridDraws = 50; // retry cap per radius/frequency
} // namespace

void GenConfig::validate() const {
    if (!(hk_min_star > 0.0 && hk_min_star < hk_max_star && hk_max_star <= 2.0 / 3.0 + 1e-12))
        throw DataError("gen config: need 0 < hk_min_star < hk_max_star <= 2/3");
    if (cph < 1 || keep_every_x < 1 || na < 1 || nt < 1)
        throw DataError("gen config: counts must be positive");
    if (!(sph2 > 0.0) || !(scale > 0.0)) throw DataError("gen config: sph2 and scale must be positive");
    if (nu < 0) throw DataError("gen config: nu must be non-negative");
    if (!(ease_mid_max_pr > 0.0 && ease_mid_max_pr <= 1.0))
        throw DataError("gen config: ease_mid_max_pr outside (0, 1]");
}

int GenConfig::effective_na() const {
    return std::max(1, static_cast<int>(std::lround(na * scale)));
}
int GenConfig::effective_nt() const {
    return std::max(1, static_cast<int>(std::lround(nt * scale)));
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    return v;
}

double ease_off(double p_min, double p_mid_max, double q) {
    const double qc = std::clamp(q, 0.0, 1.0);
    const double smooth = qc * qc * (3.0 - 2.0 * qc);
    return p_min + (p_mid_max - p_min) * smooth;
}

CircleLayout circle_layout(const GenConfig& cfg) {
    const double h = std::ldexp(1.0, -cfg.eta);
    const double k_min = cfg.hk_min_star / h;
    const double k_max = cfg.hk_max_star / h;
    const double r_min = 1.0 / k_max;
    const double r_max = 1.0 / k_min;

    CircleLayout lay;
    lay.nc = static_cast<int>(std::ceil(cfg.cph * ((r_max - r_min) / h + 1.0)));
    const double r_bar = 0.5 * (r_min + r_max);
    const double ring_area = kPi / (h * h) * (r_bar * r_bar - (r_bar - h) * (r_bar - h));
    lay.avg_spr = std::ceil(cfg.effective_sph2() * ring_area) / cfg.keep_every_x;
    lay.spr = linspace(0.75 * lay.avg_spr, 1.25 * lay.avg_spr, lay.nc);
    lay.target_k = linspace(k_max, k_min, lay.nc);
    return lay;
}

namespace {

/// Wraps a shape so that band marking stays within a disc; used by the sine
/// generator, whose curve crosses the whole region but is only sampled inside
/// the disc.  phi is untouched.
class DiscClippedShape : public ImplicitShape {
  public:
    DiscClippedShape(const ImplicitShape& inner, Vec2 center, double radius)
        : inner_(inner), center_(center), radius_(radius) {}
    double phi(Vec2 p) const override { return inner_.phi(p); }
    std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const override {
        auto pts = inner_.interface_polyline(spacing, region);
        std::vector<Vec2> kept;
        kept.reserve(pts.size());
        for (const Vec2& p : pts)
            if ((p - center_).norm2() <= radius_ * radius_) kept.push_back(p);
        return kept;
    }

  private:
    const ImplicitShape& inner_;
    Vec2 center_;
    double radius_;
};

struct FieldBundle {
    ScalarField phi;
    VectorField nrm;
    ScalarField kappa;
    std::vector<NodeIndex> nodes;
};

FieldBundle build_fields(const Grid& grid, const ImplicitShape& shape, const Box2& region,
                         int nu) {
    FieldBundle fb;
    fb.phi = reinitialize(evaluate(grid, shape, region), nu);
    fb.nrm = normals(fb.phi);
    fb.kappa = curvature(fb.phi);
    fb.nodes = interface_nodes(fb.phi);
    return fb;
}

/// Negate-if-needed, reorient, and emit the tuple plus its reflected twin.
void emit_standard_pair(DataPacket packet, double target, std::vector<Sample>& out) {
    if (target > 0.0) {
        packet = negate(packet);
        target = -target;
    }
    packet = reorient(packet);
    out.push_back({packet, target});
    out.push_back({reflect(packet), target});
}

} // namespace

Dataset generate_circles(const GenConfig& cfg, GenStats* stats) {
    cfg.validate();
    const Grid grid = Grid::from_eta(cfg.eta);
    const double h = grid.h;
    const CircleLayout lay = circle_layout(cfg);

    std::vector<std::vector<Sample>> per_radius(static_cast<std::size_t>(lay.nc));
    std::vector<std::vector<Provenance>> per_radius_prov(static_cast<std::size_t>(lay.nc));
    GenStats local;
    local.per_class_counts.assign(static_cast<std::size_t>(lay.nc), 0);

    std::size_t grids_drawn = 0, nodes_visited = 0, quota_warnings = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : grids_drawn, nodes_visited, quota_warnings)
    for (int c = 0; c < lay.nc; ++c) {
        const double k_star = lay.target_k[static_cast<std::size_t>(c)];
        const double r_c = 1.0 / k_star;
        const std::size_t quota =
            2 * static_cast<std::size_t>(std::max<long long>(
                    1, std::llround(lay.spr[static_cast<std::size_t>(c)])));

        std::vector<Sample>& samples = per_radius[static_cast<std::size_t>(c)];
        std::vector<Provenance>& prov = per_radius_prov[static_cast<std::size_t>(c)];

        for (int draw = 0; draw < kMaxGridDraws && samples.size() < quota; ++draw) {
            const std::uint64_t seed =
                sub_seed(cfg.rng_seed, kCircleDraw, static_cast<std::uint64_t>(c),
                         static_cast<std::uint64_t>(draw));
            Rng rng(seed);
            const Vec2 center{rng.uniform(-h / 2.0, h / 2.0), rng.uniform(-h / 2.0, h / 2.0)};
            const CircleShape shape(center, r_c);
            const Box2 region =
                Box2::centered(center, r_c + (grid.band_half_width + 1.0) * h);
            const FieldBundle fb = build_fields(grid, shape, region, cfg.nu);
            ++grids_drawn;

            for (const NodeIndex& node : fb.nodes) {
                ++nodes_visited;
                if (rng.u01() >= 1.0 / cfg.keep_every_x) continue;
                if (fb.nrm.degenerate(node.i, node.j)) continue;
                DataPacket packet;
                try {
                    packet = collect(fb.phi, fb.nrm, fb.kappa, node);
                } catch (const NumericalError&) {
                    continue;
                }
                const double target = h / r_c; // exact target, negated below
                emit_standard_pair(packet, target, samples);
                prov.push_back({Provenance::Circle, r_c, 0.0, 0.0, seed});
                prov.push_back({Provenance::Circle, r_c, 0.0, 0.0, seed});
            }
        }

        if (samples.size() < quota) {
            ++quota_warnings;
        } else if (samples.size() > quota) {
            Rng rsub(sub_seed(cfg.rng_seed, kCircleSubsample, static_cast<std::uint64_t>(c)));
            const auto keep = rsub.sample_without_replacement(samples.size(), quota);
            std::vector<Sample> trimmed;
            std::vector<Provenance> trimmed_prov;
            trimmed.reserve(keep.size());
            trimmed_prov.reserve(keep.size());
            for (std::size_t idx : keep) {
                trimmed.push_back(samples[idx]);
                trimmed_prov.push_back(prov[idx]);
            }
            samples = std::move(trimmed);
            prov = std::move(trimmed_prov);
        }
        local.per_class_counts[static_cast<std::size_t>(c)] = samples.size();
    }

    Dataset ds;
    ds.eta = cfg.eta;
    for (int c = 0; c < lay.nc; ++c) {
        auto& v = per_radius[static_cast<std::size_t>(c)];
        auto& p = per_radius_prov[static_cast<std::size_t>(c)];
        ds.samples.insert(ds.samples.end(), v.begin(), v.end());
        ds.provenance.insert(ds.provenance.end(), p.begin(), p.end());
    }
    if (stats) {
        stats->grids_drawn = grids_drawn;
        stats->nodes_visited = nodes_visited;
        stats->quota_warnings = quota_warnings;
        stats->per_class_counts = std::move(local.per_class_counts);
    }
    return ds;
}

Dataset generate_sines(const GenConfig& cfg, GenStats* stats) {
    cfg.validate();
    const Grid grid = Grid::from_eta(cfg.eta);
    const double h = grid.h;
    const double k_min = cfg.hk_min_star / h;
    const double k_max = cfg.hk_max_star / h;
    const double a_min = 4.0 / k_max;
    const double a_max = 1.0 / k_min;
    const double r_sam = 2.0 * a_max;
    const double hk_max_low = 0.5 * cfg.hk_max_star;
    const double hk_max_up = cfg.hk_max_star;
    const double hk_bar_max = 0.5 * (hk_max_low + hk_max_up);
    const int n_amp = cfg.effective_na();
    const int n_tilt = cfg.effective_nt();

    // Flatten the amplitude/frequency grid into independent tasks.
    struct Task {
        double amplitude;
        double frequency;
        std::size_t flat_index;
    };
    std::vector<Task> tasks;
    const auto amplitudes = linspace(a_min, a_max, n_amp);
    for (int ai = 0; ai < n_amp; ++ai) {
        const double A = amplitudes[static_cast<std::size_t>(ai)];
        const double w_min = std::sqrt(hk_max_low / (h * A));
        const double w_max = std::sqrt(hk_max_up / (h * A));
        const double w_dist = kPi / 2.0 * (1.0 / w_min - 1.0 / w_max);
        const int nf = static_cast<int>(std::ceil(w_dist / h)) + 1;
        const auto freqs = linspace(w_min, w_max, nf);
        for (double w : freqs) tasks.push_back({A, w, tasks.size()});
    }

    std::vector<std::vector<Sample>> per_task(tasks.size());
    std::vector<std::vector<Provenance>> per_task_prov(tasks.size());
    GenStats local;
    local.per_class_counts.assign(tasks.size(), 0);

    std::size_t grids_drawn = 0, nodes_visited = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : grids_drawn, nodes_visited)
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const Task& task = tasks[ti];
        std::vector<Sample>& samples = per_task[ti];
        std::vector<Provenance>& prov = per_task_prov[ti];

        for (int t_idx = 0; t_idx < n_tilt; ++t_idx) {
            const double tilt = -kPi / 2.0 + kPi * t_idx / n_tilt; // [-pi/2, pi/2)
            const std::uint64_t seed = sub_seed(cfg.rng_seed, kSineTilt, task.flat_index,
                                                static_cast<std::uint64_t>(t_idx));
            Rng rng(seed);
            const Vec2 shift{rng.uniform(-h / 2.0, h / 2.0), rng.uniform(-h / 2.0, h / 2.0)};
            SineShape shape(task.amplitude, task.frequency, shift, tilt);
            shape.set_bracket_slack(2.0 * h);
            const Box2 region =
                Box2::centered(shift, r_sam + (grid.band_half_width + 1.0) * h);
            // The curve only matters near the sampling disc; 14h of margin
            // keeps every value the redistancing steps can reach.
            const DiscClippedShape clipped(shape, shift, r_sam + 14.0 * h);
            const FieldBundle fb = build_fields(grid, clipped, region, cfg.nu);
            ++grids_drawn;

            for (const NodeIndex& node : fb.nodes) {
                ++nodes_visited;
                const Vec2 pos = grid.pos(node.i, node.j);
                const double t_near = shape.nearest_t(shape.to_canonical(pos));
                const double hk_star = h * shape.curvature_at(t_near);
                if ((pos - shift).norm2() > r_sam * r_sam ||
                    std::abs(hk_star) < cfg.hk_min_star)
                    continue;
                const double q =
                    std::min(1.0, (std::abs(hk_star) - cfg.hk_min_star) /
                                      (hk_bar_max - cfg.hk_min_star));
                if (rng.u01() > ease_off(0.01, cfg.ease_mid_max_pr, q)) continue;
                if (fb.nrm.degenerate(node.i, node.j)) continue;
                DataPacket packet;
                try {
                    packet = collect(fb.phi, fb.nrm, fb.kappa, node);
                } catch (const NumericalError&) {
                    continue;
                }
                emit_standard_pair(packet, hk_star, samples);
                prov.push_back(
                    {Provenance::Sine, task.amplitude, task.frequency, tilt, seed});
                prov.push_back(
                    {Provenance::Sine, task.amplitude, task.frequency, tilt, seed});
            }
        }
        local.per_class_counts[ti] = samples.size();
    }

    Dataset ds;
    ds.eta = cfg.eta;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        ds.samples.insert(ds.samples.end(), per_task[ti].begin(), per_task[ti].end());
        ds.provenance.insert(ds.provenance.end(), per_task_prov[ti].begin(),
                             per_task_prov[ti].end());
    }
    if (stats) {
        stats->grids_drawn = grids_drawn;
        stats->nodes_visited = nodes_visited;
        stats->quota_warnings = 0;
        stats->per_class_counts = std::move(local.per_class_counts);
    }
    return ds;
}

Dataset balance_histogram(const Dataset& ds, int bins, std::uint64_t seed) {
    if (ds.samples.empty()) throw DataError("balance: dataset is empty");
    if (bins < 1) throw DataError("balance: bins must be positive");

    double t_min = ds.samples[0].target, t_max = t_min;
    for (const Sample& s : ds.samples) {
        t_min = std::min(t_min, s.target);
        t_max = std::max(t_max, s.target);
    }
    if (t_max == t_min) return ds;

    const double width = t_max - t_min;
    auto bin_of = [&](double t) {
        return std::min(bins - 1, static_cast<int>((t - t_min) / width * bins));
    };

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(bins));
    for (std::size_t k = 0; k < ds.samples.size(); ++k)
        members[static_cast<std::size_t>(bin_of(ds.samples[k].target))].push_back(k);

    // The cap is two thirds of the incoming histogram's median; the median
    // must be bound before subsampling, since max >= median makes the bound
    // unsatisfiable against the capped histogram itself.
    Rng rng(sub_seed(seed, kBalance));
    std::vector<std::size_t> sorted(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) sorted[static_cast<std::size_t>(b)] = members[static_cast<std::size_t>(b)].size();
    std::sort(sorted.begin(), sorted.end());
    const std::size_t nb = sorted.size();
    const double median = (nb % 2 == 1) ? static_cast<double>(sorted[nb / 2])
                                        : 0.5 * (sorted[nb / 2 - 1] + sorted[nb / 2]);
    const double cap = 2.0 / 3.0 * median;
    for (int b = 0; b < bins; ++b) {
        auto& m = members[static_cast<std::size_t>(b)];
        if (static_cast<double>(m.size()) <= cap) continue;
        const std::size_t keep_n = static_cast<std::size_t>(std::floor(cap));
        const auto keep = rng.sample_without_replacement(m.size(), keep_n);
        std::vector<std::size_t> kept;
        kept.reserve(keep.size());
        for (std::size_t idx : keep) kept.push_back(m[idx]);
        m = std::move(kept);
    }

    std::vector<std::size_t> keep_all;
    for (const auto& m : members) keep_all.insert(keep_all.end(), m.begin(), m.end());
    std::sort(keep_all.begin(), keep_all.end());

    Dataset out;
    out.eta = ds.eta;
    out.samples.reserve(keep_all.size());
    const bool has_prov = ds.provenance.size() == ds.samples.size();
    for (std::size_t idx : keep_all) {
        out.samples.push_back(ds.samples[idx]);
        if (has_prov) out.provenance.push_back(ds.provenance[idx]);
    }
    return out;
}

SplitResult stratified_split(const Dataset& ds, std::uint64_t seed) {
    const std::size_t n = ds.samples.size();
    if (n < 1000) throw DataError("stratified_split: need at least 1000 samples");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ta = ds.samples[a].target, tb = ds.samples[b].target;
        return ta < tb || (ta == tb && a < b);
    });

    // 100 rank-quantile classes; undersized ones merge into their neighbor.
    constexpr std::size_t kClasses = 100;
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t k = 0; k < kClasses; ++k) {
        const std::size_t lo = k * n / kClasses;
        const std::size_t hi = (k + 1) * n / kClasses;
        classes.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(lo),
                             order.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    for (std::size_t k = 0; k + 1 < classes.size();) {
        if (classes[k].size() < 10) {
            classes[k + 1].insert(classes[k + 1].begin(), classes[k].begin(), classes[k].end());
            classes.erase(classes.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            ++k;
        }
    }
    if (classes.size() > 1 && classes.back().size() < 10) {
        auto& prev = classes[classes.size() - 2];
        prev.insert(prev.end(), classes.back().begin(), classes.back().end());
        classes.pop_back();
    }

    SplitResult res;
    res.train.eta = res.test.eta = res.valid.eta = ds.eta;
    const bool has_prov = ds.provenance.size() == n;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        auto& cls = classes[k];
        Rng rng(sub_seed(seed, kSplit, k));
        rng.shuffle(cls);
        const std::size_t m = cls.size();
        const std::size_t n_tr = static_cast<std::size_t>(std::floor(0.7 * m));
        const std::size_t n_te = static_cast<std::size_t>(std::floor(0.1 * m));
        const std::size_t n_va = static_cast<std::size_t>(std::floor(0.1 * m));
        auto push = [&](Dataset& dst, std::size_t lo, std::size_t hi) {
            for (std::size_t q = lo; q < hi; ++q) {
                dst.samples.push_back(ds.samples[cls[q]]);
                if (has_prov) dst.provenance.push_back(ds.provenance[cls[q]]);
            }
        };
        push(res.train, 0, n_tr);
        push(res.test, n_tr, n_tr + n_te);
        push(res.valid, n_tr + n_te, n_tr + n_te + n_va);
        // remaining 10% discarded
    }
    return res;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot open for writing: " + path);
    const auto& names = feature_names();
    for (int k = 0; k < kFeatureCount; ++k) std::fprintf(f, "%s,", names[static_cast<std::size_t>(k)]);
    std::fputs("target\n", f);
    for (const Sample& s : ds.samples) {
        const auto feat = s.packet.features();
        for (double v : feat) std::fprintf(f, "%.17g,", v);
        std::fprintf(f, "%.17g\n", s.target);
    }
    std::fclose(f);
}

Dataset read_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw DataError("cannot open: " + path);
    Dataset ds;
    char line[8192];
    std::size_t line_no = 0;

    // header
    if (!std::fgets(line, sizeof(line), f)) {
        std::fclose(f);
        throw DataError(path + ": empty file");
    }
    ++line_no;
    {
        std::string expected;
        for (const char* n : feature_names()) {
            expected += n;
            expected += ',';
        }
        expected += "target";
        std::string got(line);
        while (!got.empty() && (got.back() == '\n' || got.back() == '\r')) got.pop_back();
        if (got != expected) {
            std::fclose(f);
            throw DataError(path + ": line 1: header mismatch");
        }
    }

    while (std::fgets(line, sizeof(line), f)) {
        ++line_no;
        if (line[0] == '\n' || line[0] == '\0') continue;
        std::array<double, kFeatureCount> feat{};
        double target = 0.0;
        const char* p = line;
        char* end = nullptr;
        bool ok = true;
        for (int k = 0; k < kFeatureCount + 1 && ok; ++k) {
            const double v = std::strtod(p, &end);
            if (end == p) {
                ok = false;
                break;
            }
            if (k < kFeatureCount) feat[static_cast<std::size_t>(k)] = v;
            else target = v;
            p = end;
            if (k < kFeatureCount) {
                if (*p != ',') {
                    ok = false;
                    break;
                }
                ++p;
            }
        }
        if (ok && *p != '\n' && *p != '\r' && *p != '\0') ok = false;
        if (!ok) {
            std::fclose(f);
            throw DataError(path + ": line " + std::to_string(line_no) + ": malformed row");
        }
        ds.samples.push_back({DataPacket::from_features(feat), target});
    }
    std::fclose(f);
    return ds;
}

std::string manifest_json(const GenConfig& cfg, const char* kind, const Dataset& ds,
                          const GenStats& stats) {
    nlohmann::json j;
    j["kind"] = kind;
    j["eta"] = cfg.eta;
    j["h"] = std::ldexp(1.0, -cfg.eta);
    j["seed"] = cfg.rng_seed;
    j["config"] = {{"hk_min_star", cfg.hk_min_star},
                   {"hk_max_star", cfg.hk_max_star},
                   {"cph", cfg.cph},
                   {"sph2", cfg.sph2},
                   {"keep_every_x", cfg.keep_every_x},
                   {"nu", cfg.nu},
                   {"na", cfg.na},
                   {"nt", cfg.nt},
                   {"ease_mid_max_pr", cfg.ease_mid_max_pr},
                   {"scale", cfg.scale}};
    if (std::string(kind) == "circle") {
        const CircleLayout lay = circle_layout(cfg);
        j["layout"] = {{"nc", lay.nc}, {"avg_spr", lay.avg_spr}};
    } else {
        j["layout"] = {{"na", cfg.effective_na()}, {"nt", cfg.effective_nt()}};
    }
    j["counts"] = {{"samples", ds.samples.size()},
                   {"grids_drawn", stats.grids_drawn},
                   {"nodes_visited", stats.nodes_visited},
                   {"quota_warnings", stats.quota_warnings}};
    j["per_class_counts"] = stats.per_class_counts;
    return j.dump(2);
}

} // namespace curvex
