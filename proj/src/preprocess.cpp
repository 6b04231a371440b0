#include "curvex/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace curvex {

void symmetric_eigen(std::vector<double>& a, std::size_t n, std::vector<double>& values,
                     std::vector<double>& vectors) {
    // Cyclic Jacobi; fine for the 28x28 correlation matrix.
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(2.0 * s);
    };

    double frob = 0.0;
    for (double x : a) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = 1e-14 * std::max(frob, 1.0);

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

    values.assign(n, 0.0);
    vectors.assign(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t col = order[r];
        values[r] = a[col * n + col];
        for (std::size_t k = 0; k < n; ++k) vectors[r * n + k] = v[k * n + col];
    }
}

PcaResult fit_matrix(const std::vector<double>& X, std::size_t n, std::size_t dim,
                     std::size_t keep, const std::vector<std::string>& names) {
    if (n < 2) throw DataError("fit: need at least two rows");
    if (keep < 1 || keep > dim) throw DataError("fit: component count out of range");

    PcaResult res;
    res.means.assign(dim, 0.0);
    res.stds.assign(dim, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < dim; ++k) res.means[k] += X[r * dim + k];
    for (double& m : res.means) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = X[r * dim + k] - res.means[k];
            res.stds[k] += d * d;
        }
    for (std::size_t k = 0; k < dim; ++k) {
        res.stds[k] = std::sqrt(res.stds[k] / static_cast<double>(n));
        if (res.stds[k] < 1e-12) {
            const std::string name = k < names.size() ? names[k] : std::to_string(k);
            throw DataError("fit: zero-variance feature: " + name);
        }
    }

    // Correlation matrix = covariance of the standardized data.
    std::vector<double> corr(dim * dim, 0.0);
    std::vector<double> z(dim);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < dim; ++k)
            z[k] = (X[r * dim + k] - res.means[k]) / res.stds[k];
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) corr[i * dim + j] += z[i] * z[j];
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            corr[i * dim + j] /= static_cast<double>(n - 1);
            corr[j * dim + i] = corr[i * dim + j];
        }

    std::vector<double> values, vectors;
    symmetric_eigen(corr, dim, values, vectors);

    double total = 0.0, kept_sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) total += std::max(values[k], 0.0);
    res.components.resize(keep);
    res.explained_stds.resize(keep);
    for (std::size_t r = 0; r < keep; ++r) {
        res.components[r].assign(vectors.begin() + static_cast<std::ptrdiff_t>(r * dim),
                                 vectors.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim));
        // deterministic sign: largest-magnitude entry is positive
        std::size_t arg = 0;
        for (std::size_t k = 1; k < dim; ++k)
            if (std::abs(res.components[r][k]) > std::abs(res.components[r][arg])) arg = k;
        if (res.components[r][arg] < 0.0)
            for (double& x : res.components[r]) x = -x;
        res.explained_stds[r] = std::sqrt(std::max(values[r], 0.0));
        kept_sum += std::max(values[r], 0.0);
    }
    res.discarded_energy = total > 0.0 ? 1.0 - kept_sum / total : 0.0;
    return res;
}

PreprocessorState fit(const Dataset& train, double h, int m_iota) {
    if (train.samples.size() <= 28 * 10)
        throw DataError("fit: need more than 280 training samples");
    if (!(h > 0.0)) throw DataError("fit: h must be positive");

    const std::size_t n = train.samples.size();
    std::vector<double> X(n * kFeatureCount);
    for (std::size_t r = 0; r < n; ++r) {
        auto f = train.samples[r].packet.features();
        for (int k = 0; k < 9; ++k) f[static_cast<std::size_t>(k)] /= h;
        std::copy(f.begin(), f.end(), X.begin() + static_cast<std::ptrdiff_t>(r * kFeatureCount));
    }

    std::vector<std::string> names;
    for (const char* nm : feature_names()) names.emplace_back(nm);
    PcaResult pca = fit_matrix(X, n, kFeatureCount, static_cast<std::size_t>(m_iota), names);

    PreprocessorState st;
    st.h = h;
    st.m_iota = m_iota;
    st.means = std::move(pca.means);
    st.stds = std::move(pca.stds);
    st.components = std::move(pca.components);
    st.explained_stds = std::move(pca.explained_stds);
    st.discarded_energy = pca.discarded_energy;
    return st;
}

std::vector<double> transform(const PreprocessorState& state, const DataPacket& packet,
                              double h) {
    if (h != state.h) throw DataError("preprocess: state fitted for a different h");
    auto f = packet.features();
    for (int k = 0; k < 9; ++k) f[static_cast<std::size_t>(k)] /= h;
    double z[kFeatureCount];
    for (int k = 0; k < kFeatureCount; ++k)
        z[k] = (f[static_cast<std::size_t>(k)] - state.means[static_cast<std::size_t>(k)]) /
               state.stds[static_cast<std::size_t>(k)];
    std::vector<double> out(static_cast<std::size_t>(state.m_iota));
    for (int r = 0; r < state.m_iota; ++r) {
        const auto& row = state.components[static_cast<std::size_t>(r)];
        double acc = 0.0;
        for (int k = 0; k < kFeatureCount; ++k) acc += row[static_cast<std::size_t>(k)] * z[k];
        out[static_cast<std::size_t>(r)] = acc / state.explained_stds[static_cast<std::size_t>(r)];
    }
    return out;
}

void save_json(const PreprocessorState& state, const std::string& path) {
    nlohmann::json j;
    j["version"] = state.version;
    j["h"] = state.h;
    j["m_iota"] = state.m_iota;
    j["means"] = state.means;
    j["stds"] = state.stds;
    j["components"] = state.components;
    j["explained_stds"] = state.explained_stds;
    std::vector<std::string> names;
    for (const char* nm : feature_names()) names.emplace_back(nm);
    j["feature_order"] = names;
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

PreprocessorState load_preprocessor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    PreprocessorState st;
    try {
        st.version = j.at("version").get<int>();
        if (st.version != 1) throw DataError(path + ": unsupported schema version");
        st.h = j.at("h").get<double>();
        st.m_iota = j.at("m_iota").get<int>();
        st.means = j.at("means").get<std::vector<double>>();
        st.stds = j.at("stds").get<std::vector<double>>();
        st.components = j.at("components").get<std::vector<std::vector<double>>>();
        st.explained_stds = j.at("explained_stds").get<std::vector<double>>();
        const auto names = j.at("feature_order").get<std::vector<std::string>>();
        const auto& expected = feature_names();
        if (names.size() != expected.size())
            throw DataError(path + ": feature_order length mismatch");
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] != expected[k]) throw DataError(path + ": feature_order mismatch");
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": schema error: " + e.what());
    }
    if (st.means.size() != kFeatureCount || st.stds.size() != kFeatureCount ||
        st.components.size() != static_cast<std::size_t>(st.m_iota) ||
        st.explained_stds.size() != static_cast<std::size_t>(st.m_iota))
        throw DataError(path + ": schema error: array sizes inconsistent with m_iota");
    for (const auto& row : st.components)
        if (row.size() != kFeatureCount)
            throw DataError(path + ": schema error: component row size");
    return st;
}

} // namespace curvex
