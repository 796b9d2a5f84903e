#pragma once

#include <algorithm>
#include <random>

#include "core/hilbert.hpp"

namespace qcb::test {

// deterministic pseudo-random states; every test fixes its own seed
inline Vec random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cxd(n(rng), n(rng));
    v /= v.norm();
    return v;
}

inline Mat random_density(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd(n(rng), n(rng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

inline BlochVector random_bloch(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        BlochVector r{u(rng), u(rng), u(rng)};
        if (r.norm() <= 1.0) return r;
    }
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline double overlap(const PureState& a, const PureState& b) {
    return std::abs(a.amp.dot(b.amp));  // Eigen dot conjugates the first argument
}

// Brute-force partial trace by explicit multi-index contraction, kept
// independent of the Layout offset machinery it checks.
inline Mat brute_force_partial_trace(const Vec& amp, const std::vector<int>& dims,
                                     const std::vector<int>& keep_positions) {
    std::vector<int> rest_positions;
    for (int p = 0; p < static_cast<int>(dims.size()); ++p)
        if (std::find(keep_positions.begin(), keep_positions.end(), p) == keep_positions.end())
            rest_positions.push_back(p);

    const auto index_of = [&](const std::vector<int>& multi) {
        int f = 0;
        for (size_t p = 0; p < dims.size(); ++p) f = f * dims[p] + multi[p];
        return f;
    };
    int dk = 1;
    for (int p : keep_positions) dk *= dims[p];
    int dr = 1;
    for (int p : rest_positions) dr *= dims[p];

    const auto split = [&](int combined, const std::vector<int>& positions) {
        std::vector<int> multi(dims.size(), 0);
        for (int q = static_cast<int>(positions.size()) - 1; q >= 0; --q) {
            multi[positions[q]] = combined % dims[positions[q]];
            combined /= dims[positions[q]];
        }
        return multi;
    };

    Mat rho = Mat::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j)
            for (int r = 0; r < dr; ++r) {
                auto mi = split(i, keep_positions);
                auto mj = split(j, keep_positions);
                const auto mr = split(r, rest_positions);
                for (int p : rest_positions) mi[p] = mj[p] = mr[p];
                rho(i, j) += amp(index_of(mi)) * std::conj(amp(index_of(mj)));
            }
    return rho;
}

} // namespace qcb::test
