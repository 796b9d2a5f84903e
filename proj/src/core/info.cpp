#include "core/info.hpp"

#include <algorithm>
#include <cmath>

namespace qcb {

double entropy_bits(const Mat& rho) {
    const Eigen::VectorXd ev = clipped_eigenvalues(rho);
    double s = 0.0;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
    return s;
}

namespace {

std::vector<Sub> complement_of(const Layout& layout, const std::vector<Sub>& removed) {
    std::vector<Sub> keep;
    for (const auto& f : layout.factors()) {
        bool drop = false;
        for (Sub s : removed) drop = drop || (f.label == s);
        if (!drop) keep.push_back(f.label);
    }
    return keep;
}

} // namespace

ChannelEval channel_eval(const Mat& rho_in, const ModelParams& params,
                         const ProtocolSchedule& schedule, const PropagatorConfig& config) {
    PropagationLog log;
    const PureState final = run_protocol(rho_in, params, schedule, config, &log);
    const Sub out = stage_output(schedule.stage);
    ChannelEval ev;
    ev.s_out = entropy_bits(partial_trace(final, {out}).rho);
    ev.s_exchange = entropy_bits(partial_trace(final, {Sub::ref, out}).rho);
    ev.ic = ev.s_out - ev.s_exchange;
    ev.norm_drift = log.norm_drift;
    return ev;
}

double entropy_exchange(const Mat& rho_in, const ModelParams& params,
                        const ProtocolSchedule& schedule, const PropagatorConfig& config) {
    return channel_eval(rho_in, params, schedule, config).s_exchange;
}

double coherent_information(const Mat& rho_in, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config) {
    return channel_eval(rho_in, params, schedule, config).ic;
}

double entropy_exchange_complement(const Mat& rho_in, const ModelParams& params,
                                   const ProtocolSchedule& schedule,
                                   const PropagatorConfig& config) {
    const PureState final = run_protocol(rho_in, params, schedule, config);
    const auto rest = complement_of(final.layout, {Sub::ref, stage_output(schedule.stage)});
    return entropy_bits(partial_trace(final, rest).rho);
}

std::vector<BlochVector> q1_search_grid() {
    std::vector<BlochVector> pts;
    pts.push_back({0.0, 0.0, 0.0});
    const double axes[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (double r : {1.0, 0.75, 0.5, 0.25})
        for (const auto& d : axes) pts.push_back({r * d[0], r * d[1], r * d[2]});
    for (int k = 0; k < 8; ++k) {  // equatorial ring, offset from the axes
        const double phi = (2 * k + 1) * pi / 8.0;
        pts.push_back({std::cos(phi), std::sin(phi), 0.0});
    }
    for (int k = 0; k < 8; ++k) {  // ring at z = +-0.5
        const double phi = (2 * k + 1) * pi / 8.0;
        const double rho = std::sqrt(0.75);
        pts.push_back({rho * std::cos(phi), rho * std::sin(phi), (k % 2 == 0) ? 0.5 : -0.5});
    }
    for (double r : {1.0, 0.5})  // cube diagonals
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) {
                    const double w = r / std::sqrt(3.0);
                    pts.push_back({w * sx, w * sy, w * sz});
                }
    return pts;  // 57 points, rho_u first
}

namespace {

BlochVector clamp_to_ball(const Eigen::VectorXd& x) {
    BlochVector r{x(0), x(1), x(2)};
    const double n = r.norm();
    if (n > 1.0) {
        r.x /= n;
        r.y /= n;
        r.z /= n;
    }
    return r;
}

} // namespace

Q1Result q1_optimize(const ModelParams& params, const ProtocolSchedule& schedule,
                     const PropagatorConfig& config) {
    if (schedule.stage == Stage::e2_only)
        fail_invalid("q1_optimize: optimization domain is a qubit input (full or E1 stage)");

    const auto ic_of = [&](const BlochVector& r) {
        return coherent_information(dm_from_bloch(r), params, schedule, config);
    };

    const auto grid = q1_search_grid();
    std::vector<std::pair<double, int>> scored;
    scored.reserve(grid.size());
    for (int i = 0; i < static_cast<int>(grid.size()); ++i)
        scored.emplace_back(ic_of(grid[i]), i);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    Q1Result best;
    best.ic_best = scored[0].first;
    best.argmax = grid[scored[0].second];

    const Eigen::Vector3d lo(-1, -1, -1), hi(1, 1, 1);
    const Eigen::Vector3d step(0.1, 0.1, 0.1);
    SimplexOptions opts;  // cap 500, tolerances 1e-6 / 1e-9
    for (int seed = 0; seed < 3 && seed < static_cast<int>(scored.size()); ++seed) {
        const BlochVector& r0 = grid[scored[seed].second];
        Eigen::Vector3d x0(r0.x, r0.y, r0.z);
        const auto res = nelder_mead_max(
            [&](const Eigen::VectorXd& x) { return ic_of(clamp_to_ball(x)); }, x0, step, lo, hi,
            opts);
        if (res.value > best.ic_best) {
            best.ic_best = res.value;
            best.argmax = clamp_to_ball(res.x);
        }
        best.converged = best.converged && res.converged;
    }
    best.q1 = std::max(best.ic_best, 0.0);
    return best;
}

ProtocolSchedule schedule_from_candidate(const TimingCandidate& c, double g, CouplingWindow window,
                                         Stage stage) {
    if (g <= 0.0) fail_invalid("schedule_from_candidate: g must be > 0");
    const double tau = pi / (2.0 * g);
    return {c.u1 * tau, c.tc, c.u2 * tau, window, stage};
}

TimingResult optimize_timing(const ModelParams& params, const PropagatorConfig& config,
                             CouplingWindow window) {
    if (params.g <= 0.0) fail_invalid("optimize_timing: g must be > 0");
    const Mat rho_u = 0.5 * Mat::Identity(2, 2);
    const auto ic_of = [&](const TimingCandidate& c) {
        return coherent_information(rho_u, params,
                                    schedule_from_candidate(c, params.g, window), config);
    };

    // 5 x 5 x 8 grid; (1, 1, 0) -- the standard timing -- is a grid point
    std::vector<TimingCandidate> grid;
    for (double u1 : {0.8, 0.9, 1.0, 1.1, 1.2})
        for (double u2 : {0.8, 0.9, 1.0, 1.1, 1.2})
            for (int k = 0; k < 8; ++k)
                grid.push_back({u1, u2, 2.0 * pi * k / 7.0});

    std::vector<std::pair<double, int>> scored;
    scored.reserve(grid.size());
    for (int i = 0; i < static_cast<int>(grid.size()); ++i)
        scored.emplace_back(ic_of(grid[i]), i);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    TimingResult best;
    best.timing = grid[scored[0].second];
    best.ic = scored[0].first;

    const Eigen::Vector3d lo(0.8, 0.8, 0.0), hi(1.2, 1.2, 2.0 * pi);
    const Eigen::Vector3d step(0.04, 0.04, 0.25);
    SimplexOptions opts;
    for (int seed = 0; seed < 3 && seed < static_cast<int>(scored.size()); ++seed) {
        const TimingCandidate& c0 = grid[scored[seed].second];
        Eigen::Vector3d x0(c0.u1, c0.u2, c0.tc);
        const auto res = nelder_mead_max(
            [&](const Eigen::VectorXd& x) {
                return ic_of({x(0), x(1), x(2)});
            },
            x0, step, lo, hi, opts);
        if (res.value > best.ic) {
            best.ic = res.value;
            best.timing = {res.x(0), res.x(1), res.x(2)};
        }
        best.converged = best.converged && res.converged;
    }

    // by construction never worse than the standard timing
    const double ic_std = ic_of({1.0, 1.0, 0.0});
    if (ic_std > best.ic) {
        best.ic = ic_std;
        best.timing = {1.0, 1.0, 0.0};
    }
    return best;
}

double transmission_rate(double ic, const ProtocolSchedule& schedule) {
    const double total = schedule.total();
    if (total <= 0.0) fail_invalid("transmission_rate: protocol duration is zero");
    return ic / total;
}

} // namespace qcb
