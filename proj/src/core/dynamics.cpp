#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qcb {

double window_value(const CouplingWindow& window, double t_k, double duration) {
    if (duration <= 0.0) fail_invalid("window_value: duration must be > 0");
    if (t_k < 0.0 || t_k > duration) return 0.0;
    if (window.family == WindowFamily::rectangular) return 1.0;
    return 1.0 - window.xi * std::cos(2.0 * pi * t_k / duration);
}

ProtocolSchedule standard_schedule(double g, CouplingWindow window, Stage stage) {
    if (g <= 0.0) fail_invalid("standard_schedule: g must be > 0");
    const double tau = pi / (2.0 * g);
    return {tau, 0.0, tau, window, stage};
}

double BusHamiltonian::f1(double t) const {
    if (!active_[0] || schedule_.t1 <= 0.0) return 0.0;
    return window_value(schedule_.window, t, schedule_.t1);
}

double BusHamiltonian::f2(double t) const {
    if (!active_[1] || schedule_.t2 <= 0.0) return 0.0;
    return window_value(schedule_.window, t - (schedule_.t1 + schedule_.tc), schedule_.t2);
}

BusHamiltonian::Phase BusHamiltonian::phase_of(double t) const {
    if (t < 0.0 || t >= schedule_.total()) return Phase::off;
    if (t < schedule_.t1) return active_[0] ? Phase::drive1 : Phase::off;
    if (t < schedule_.t1 + schedule_.tc) return Phase::off;
    return active_[1] ? Phase::drive2 : Phase::off;
}

BusHamiltonian::BusHamiltonian(const Layout& layout, const ModelParams& params,
                               const ProtocolSchedule& schedule)
    : layout_(layout), params_(params), schedule_(schedule) {
    params_.validate();
    schedule_.validate();
    if (!layout.has(Sub::cavity)) fail_invalid("BusHamiltonian: layout lacks a cavity");

    const int dim = layout.dim();
    const int dc = layout.dim_of(Sub::cavity);
    const int cav_pos = layout.pos_of(Sub::cavity);

    energies_ = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < dim; ++k) {
        const auto idx = layout.unflatten(k);
        double e = params_.omega * idx[cav_pos];
        for (int p = 0; p < layout.size(); ++p) {
            const Sub s = layout.factors()[p].label;
            if (s == Sub::qubit1 || s == Sub::qubit2)
                e += (idx[p] == qubit_e) ? 0.5 * params_.omega : -0.5 * params_.omega;
        }
        energies_(k) = e;
    }

    const Sub qubits[2] = {Sub::qubit1, Sub::qubit2};
    for (int q = 0; q < 2; ++q) {
        if (!layout.has(qubits[q])) continue;
        active_[q] = true;
        const int q_pos = layout.pos_of(qubits[q]);
        for (int k = 0; k < dim; ++k) {
            auto idx = layout.unflatten(k);
            if (idx[q_pos] != qubit_g) continue;
            const int n = idx[cav_pos];
            // A = s+ a : |g, n> -> sqrt(n) |e, n-1>
            if (n >= 1) {
                auto to = idx;
                to[q_pos] = qubit_e;
                to[cav_pos] = n - 1;
                rotating_[q].row.push_back(layout.flat(to));
                rotating_[q].col.push_back(k);
                rotating_[q].val.push_back(std::sqrt(static_cast<double>(n)));
            }
            // B = s+ adag : |g, n> -> sqrt(n+1) |e, n+1>, truncated above n_max
            if (n + 1 < dc) {
                auto to = idx;
                to[q_pos] = qubit_e;
                to[cav_pos] = n + 1;
                counter_[q].row.push_back(layout.flat(to));
                counter_[q].col.push_back(k);
                counter_[q].val.push_back(std::sqrt(static_cast<double>(n + 1)));
            }
        }
    }
}

std::pair<double, double> BusHamiltonian::window_factors(double t, Phase phase) const {
    switch (phase) {
        case Phase::drive1: return {window_value(schedule_.window, t, schedule_.t1), 0.0};
        case Phase::drive2:
            return {0.0, window_value(schedule_.window, t - (schedule_.t1 + schedule_.tc),
                                      schedule_.t2)};
        case Phase::off: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

void BusHamiltonian::apply_minus_i_h(double t, Phase phase, const Vec& psi, Vec& out) const {
    out.setZero();
    const auto [fa, fb] = window_factors(t, phase);
    const double fs[2] = {fa, fb};
    const cxd phase_cr = std::polar(1.0, 2.0 * params_.omega * t);
    for (int q = 0; q < 2; ++q) {
        if (!active_[q] || fs[q] == 0.0) continue;
        const cxd c = -im_unit * (fs[q] * params_.g);
        const auto& a = rotating_[q];
        for (size_t m = 0; m < a.val.size(); ++m) {
            out(a.row[m]) += c * a.val[m] * psi(a.col[m]);
            out(a.col[m]) += c * a.val[m] * psi(a.row[m]);
        }
        if (params_.rwa) continue;
        const auto& b = counter_[q];
        const cxd cb = c * phase_cr;
        const cxd cbc = c * std::conj(phase_cr);
        for (size_t m = 0; m < b.val.size(); ++m) {
            out(b.row[m]) += cb * b.val[m] * psi(b.col[m]);
            out(b.col[m]) += cbc * b.val[m] * psi(b.row[m]);
        }
    }
}

Mat BusHamiltonian::dense_schroedinger_coupling(double f1v, double f2v) const {
    const int dim = layout_.dim();
    Mat h = Mat::Zero(dim, dim);
    const double fs[2] = {f1v, f2v};
    for (int q = 0; q < 2; ++q) {
        if (!active_[q] || fs[q] == 0.0) continue;
        const double c = fs[q] * params_.g;
        const auto& a = rotating_[q];
        for (size_t m = 0; m < a.val.size(); ++m) {
            h(a.row[m], a.col[m]) += c * a.val[m];
            h(a.col[m], a.row[m]) += c * a.val[m];
        }
        if (params_.rwa) continue;
        const auto& b = counter_[q];
        for (size_t m = 0; m < b.val.size(); ++m) {
            h(b.row[m], b.col[m]) += c * b.val[m];
            h(b.col[m], b.row[m]) += c * b.val[m];
        }
    }
    return h;
}

Mat BusHamiltonian::dense_interaction_picture(double t) const {
    Mat h = dense_schroedinger_coupling(f1(t), f2(t));
    const int dim = layout_.dim();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if (h(i, j) == cxd(0.0, 0.0)) continue;
            h(i, j) *= std::polar(1.0, (energies_(i) - energies_(j)) * t);
        }
    return h;
}

Mat interaction_hamiltonian(double t, const ModelParams& params, const ProtocolSchedule& schedule,
                            FockCutoff cutoff, const Layout& layout) {
    if (layout.has(Sub::cavity) && layout.dim_of(Sub::cavity) != cutoff.dim())
        fail_invalid("interaction_hamiltonian: layout cavity dimension != cutoff");
    if (t < 0.0) fail_invalid("interaction_hamiltonian: t must be >= 0");
    return BusHamiltonian(layout, params, schedule).dense_interaction_picture(t);
}

PureState propagate(const PureState& psi, double t0, double t1, const ModelParams& params,
                    const ProtocolSchedule& schedule, const PropagatorConfig& config,
                    PropagationLog* log) {
    if (t1 < t0) fail_invalid("propagate: t1 < t0");
    psi.validate();
    config.validate();

    BusHamiltonian ham(psi.layout, params, schedule);
    Vec y = psi.amp;
    StepControl ctl{config.tol, config.dt_init};

    // split at coupling switch points; the active term set is constant on
    // each open sub-interval and chosen from its midpoint
    std::vector<double> cuts{t0, t1, schedule.t1, schedule.t1 + schedule.tc, schedule.total()};
    std::sort(cuts.begin(), cuts.end());

    double drift = 0.0;
    bool integrated = false;
    IntegrationStats stats;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], t0);
        const double b = std::min(cuts[i + 1], t1);
        if (b <= a) continue;
        const auto phase = ham.phase_of(0.5 * (a + b));
        if (phase == BusHamiltonian::Phase::off) continue;  // free evolution: exact no-op here
        dopri5([&](double t, const Vec& v, Vec& out) { ham.apply_minus_i_h(t, phase, v, out); }, y,
               a, b, ctl, &stats);
        drift = std::max(drift, std::abs(1.0 - y.norm()));
        integrated = true;
    }

    if (drift > 1e-6)
        fail_numerical("propagate: norm drift " + std::to_string(drift) + " exceeds 1e-6");
    if (log) {
        log->norm_drift = std::max(log->norm_drift, drift);
        log->stats.accepted += stats.accepted;
        log->stats.rejected += stats.rejected;
        log->stats.rhs_evals += stats.rhs_evals;
    }

    PureState out{std::move(y), psi.layout};
    if (integrated) out.amp /= out.amp.norm();
    return out;
}

PureState exact_step_oracle(const PureState& psi, double t0, double t1, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config) {
    (void)config;
    if (t1 < t0) fail_invalid("exact_step_oracle: t1 < t0");
    psi.validate();
    if (schedule.window.family != WindowFamily::rectangular)
        fail_invalid("exact_step_oracle: only rectangular windows give a constant H");
    if (t1 == t0) return psi;
    for (double cut : {schedule.t1, schedule.t1 + schedule.tc, schedule.total()})
        if (t0 < cut - 1e-12 && t1 > cut + 1e-12)
            fail_invalid("exact_step_oracle: interval crosses a stage boundary");

    BusHamiltonian ham(psi.layout, params, schedule);
    const auto phase = ham.phase_of(0.5 * (t0 + t1));
    const auto [fa, fb] = ham.window_factors(0.5 * (t0 + t1), phase);

    const Eigen::VectorXd& e0 = ham.energies();
    Mat h = ham.dense_schroedinger_coupling(fa, fb);
    h += e0.cast<cxd>().asDiagonal();

    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Mat& v = es.eigenvectors();

    Vec y = psi.amp;
    const double dt = t1 - t0;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) *= std::polar(1.0, -e0(i) * t0);
    Vec z = v.adjoint() * y;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) *= std::polar(1.0, -lam(i) * dt);
    y = v * z;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) *= std::polar(1.0, e0(i) * t1);

    PureState out{std::move(y), psi.layout};
    out.amp /= out.amp.norm();
    return out;
}

Vec coefficient_ode_oracle(double g, double omega, const Vec& c0, double duration,
                           const PropagatorConfig& config) {
    if (duration < 0.0) fail_invalid("coefficient_ode_oracle: negative duration");
    if (c0.size() % 2 != 0) fail_invalid("coefficient_ode_oracle: need a [Q1, C] vector");
    const int dc = static_cast<int>(c0.size()) / 2;
    if (std::abs(c0.norm() - 1.0) > 1e-10) fail_invalid("coefficient_ode_oracle: not normalized");

    // c(e, n) = c0[n], c(g, n) = c0[dc + n]  ({|e>, |g>} qubit order, cavity fastest)
    auto rabi = [&](int n) {
        return (n >= 1 && n <= dc - 1) ? g * std::sqrt(static_cast<double>(n)) : 0.0;
    };

    Vec y = c0;
    StepControl ctl{config.tol, config.dt_init};
    dopri5(
        [&](double t, const Vec& c, Vec& dcdt) {
            const cxd ep = std::polar(1.0, 2.0 * omega * t);  // e^{+2iwt}
            const cxd em = std::conj(ep);
            dcdt.setZero();
            for (int n = 0; n < dc; ++n) {
                // i dC_{g,n} = W_n C_{e,n-1} + W_{n+1} e^{-2iwt} C_{e,n+1}
                cxd acc = 0.0;
                if (n >= 1) acc += rabi(n) * c(n - 1);
                if (n + 1 <= dc - 1) acc += rabi(n + 1) * em * c(n + 1);
                dcdt(dc + n) = -im_unit * acc;
                // i dC_{e,n} = W_{n+1} C_{g,n+1} + W_n e^{+2iwt} C_{g,n-1}
                acc = 0.0;
                if (n + 1 <= dc - 1) acc += rabi(n + 1) * c(dc + n + 1);
                if (n >= 1) acc += rabi(n) * ep * c(dc + n - 1);
                dcdt(n) = -im_unit * acc;
            }
        },
        y, 0.0, duration, ctl);

    const double drift = std::abs(1.0 - y.norm());
    if (drift > 1e-6) fail_numerical("coefficient_ode_oracle: normalization drift > 1e-6");
    return y;
}

PureState protocol_initial_state(const Mat& rho_in, const ProtocolSchedule& schedule,
                                 FockCutoff cutoff) {
    const int dc = cutoff.dim();
    Layout sys;
    int input_dim = 0;
    switch (schedule.stage) {
        case Stage::full:
            sys = Layout{{Sub::qubit1, 2}, {Sub::cavity, dc}, {Sub::qubit2, 2}};
            input_dim = 2;
            break;
        case Stage::e1_only:
            sys = Layout{{Sub::qubit1, 2}, {Sub::cavity, dc}};
            input_dim = 2;
            break;
        case Stage::e2_only:
            sys = Layout{{Sub::cavity, dc}, {Sub::qubit2, 2}};
            input_dim = dc;
            break;
    }
    if (rho_in.rows() != input_dim || rho_in.cols() != input_dim)
        fail_invalid("protocol_initial_state: input state dimension mismatch for stage");

    const Sub input_sub = (schedule.stage == Stage::e2_only) ? Sub::cavity : Sub::qubit1;
    PureState input = purify(DensityMatrix{rho_in, Layout{{input_sub, input_dim}}});

    // tensor the purified input (reference slowest) with the ground-state rest
    PureState psi;
    psi.layout = sys.with_reference_prepended(input_dim);
    psi.amp = Vec::Zero(psi.layout.dim());
    std::vector<int> idx(psi.layout.size(), 0);
    for (int p = 0; p < psi.layout.size(); ++p) {
        const Sub s = psi.layout.factors()[p].label;
        if (s == Sub::qubit1 && input_sub != Sub::qubit1) idx[p] = qubit_g;
        if (s == Sub::qubit2) idx[p] = qubit_g;
    }
    const int in_pos = psi.layout.pos_of(input_sub);
    for (int r = 0; r < input_dim; ++r)
        for (int s = 0; s < input_dim; ++s) {
            const cxd a = input.amp(r * input_dim + s);
            if (a == cxd(0.0, 0.0)) continue;
            idx[0] = r;
            idx[in_pos] = s;
            psi.amp(psi.layout.flat(idx)) = a;
        }
    return psi;
}

PureState run_protocol_from(const PureState& initial, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config,
                            PropagationLog* log) {
    schedule.validate();
    switch (schedule.stage) {
        case Stage::full:
            return propagate(initial, 0.0, schedule.total(), params, schedule, config, log);
        case Stage::e1_only:
            return propagate(initial, 0.0, schedule.t1, params, schedule, config, log);
        case Stage::e2_only:
            return propagate(initial, schedule.t1 + schedule.tc, schedule.total(), params, schedule,
                             config, log);
    }
    fail_invalid("run_protocol: bad stage");
}

PureState run_protocol(const Mat& rho_in, const ModelParams& params,
                       const ProtocolSchedule& schedule, const PropagatorConfig& config,
                       PropagationLog* log) {
    return run_protocol_from(protocol_initial_state(rho_in, schedule, config.cutoff()), params,
                             schedule, config, log);
}

DensityMatrix run_protocol_traced(const Mat& rho_in, const ModelParams& params,
                                  const ProtocolSchedule& schedule, const PropagatorConfig& config) {
    PureState out = run_protocol(rho_in, params, schedule, config);
    std::vector<Sub> keep;
    for (const auto& f : out.layout.factors())
        if (f.label != Sub::ref) keep.push_back(f.label);
    return partial_trace(out, keep);
}

double dce_photons(const ModelParams& params, const ProtocolSchedule& schedule,
                   const PropagatorConfig& config, DceObservable which) {
    if (params.g <= 0.0) fail_invalid("dce_photons: g must be > 0");
    if (which == DceObservable::pure_dce) {
        const int dc = config.cutoff().dim();
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::cavity, dc}};
        psi.amp = Vec::Zero(psi.layout.dim());
        psi.amp(psi.layout.flat({qubit_g, 0})) = 1.0;
        PureState out = propagate(psi, 0.0, schedule.t1, params, schedule, config);
        return mean_photon_number(out);
    }
    const Mat rho_u = 0.5 * Mat::Identity(2, 2);
    ProtocolSchedule full = schedule;
    full.stage = Stage::full;
    PureState out = run_protocol(rho_u, params, full, config);
    return mean_photon_number(out);
}

} // namespace qcb
