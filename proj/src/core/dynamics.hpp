#pragma once

#include <utility>
#include <vector>

#include "core/hilbert.hpp"
#include "core/integrate.hpp"

namespace qcb {

struct ModelParams {
    double omega = 1.0;  // shared qubit/cavity frequency, hbar = 1
    double g = 0.0;      // real coupling strength, same for both qubits
    bool rwa = false;    // true drops the counter-rotating terms s+adag, s-a

    void validate() const {
        if (omega <= 0.0) fail_invalid("ModelParams: omega must be > 0");
        if (g < 0.0) fail_invalid("ModelParams: g must be >= 0");
    }
};

enum class WindowFamily { rectangular, hamming };

struct CouplingWindow {
    WindowFamily family = WindowFamily::rectangular;
    double xi = 0.0;  // Hamming depth; xi = 0 reproduces the rectangular window

    void validate() const {
        if (xi < 0.0 || xi > 1.0) fail_invalid("CouplingWindow: xi must lie in [0, 1]");
    }
};

// f(t_k) on [0, T_k], zero outside. Hamming: 1 - xi*cos(2 pi t_k / T_k); its
// area equals the rectangular window's, so the swap pulse area is unchanged.
double window_value(const CouplingWindow& window, double t_k, double duration);

enum class Stage { full, e1_only, e2_only };

struct ProtocolSchedule {
    double t1 = 0.0;  // Q1-C interaction time
    double tc = 0.0;  // idle time
    double t2 = 0.0;  // C-Q2 interaction time
    CouplingWindow window;
    Stage stage = Stage::full;

    double total() const { return t1 + tc + t2; }
    void validate() const {
        if (t1 < 0.0 || tc < 0.0 || t2 < 0.0) fail_invalid("ProtocolSchedule: negative time");
        window.validate();
    }
};

// T1 = T2 = pi/(2g) (the RWA swap time tau), Tc = 0.
ProtocolSchedule standard_schedule(double g, CouplingWindow window = {}, Stage stage = Stage::full);

struct PropagatorConfig {
    int n_max = 32;                        // starting Fock cutoff
    int n_max_cap = 128;                   // doubling stops here
    double tol = 1e-10;                    // local integration tolerance
    double dt_init = 1e-3;
    double convergence_threshold = 1e-6;   // cutoff-doubling acceptance on observables

    FockCutoff cutoff() const { return FockCutoff(n_max); }
    void validate() const {
        if (n_max < 1) fail_invalid("PropagatorConfig: n_max must be >= 1");
        if (tol <= 0.0 || dt_init <= 0.0) fail_invalid("PropagatorConfig: tol and dt_init must be > 0");
    }
    PropagatorConfig at_cutoff(int n) const {
        PropagatorConfig c = *this;
        c.n_max = n;
        return c;
    }
};

// Precomputed coupling structure for one layout. The interaction picture
// Hamiltonian factorizes into
//   H(t) = sum_k f_k(t) g [ A_k + A_k^dag + e^{+2iwt} B_k + e^{-2iwt} B_k^dag ]
// with A_k = s+^(k) a (rotating) and B_k = s+^(k) adag (counter-rotating);
// the RWA keeps only the A terms. Phases come from conjugation with the
// diagonal e^{iH0 t}, where H0 assigns +w/2 to |e>, -w/2 to |g>, n*w to |n>.
class BusHamiltonian {
  public:
    BusHamiltonian(const Layout& layout, const ModelParams& params, const ProtocolSchedule& schedule);

    const Layout& layout() const { return layout_; }

    // Which coupling is active. Decided once per integration sub-interval
    // (from its midpoint) so a switching instant never leaks the neighboring
    // stage's coupling into an endpoint evaluation.
    enum class Phase { off, drive1, drive2 };
    Phase phase_of(double t) const;
    std::pair<double, double> window_factors(double t, Phase phase) const;

    // out = -i H(t) psi  (interaction picture)
    void apply_minus_i_h(double t, Phase phase, const Vec& psi, Vec& out) const;

    // Dense interaction-picture Hamiltonian built the generic way: assemble
    // the Schroedinger-picture H_I(t) and conjugate entry (i,j) by
    // e^{i(E_i - E_j)t}. Used for tests and for small spaces.
    Mat dense_interaction_picture(double t) const;

    // Dense Schroedinger-picture H_I at fixed window values (per active qubit).
    Mat dense_schroedinger_coupling(double f1, double f2) const;

    const Eigen::VectorXd& energies() const { return energies_; }

    // Window factors at absolute time t: f1 active on [0, T1], f2 active on
    // [T1+Tc, T1+Tc+T2] (absent subsystems always give 0).
    double f1(double t) const;
    double f2(double t) const;

  private:
    struct Term {                 // sparse |row><col| entries, real amplitudes
        std::vector<int> row, col;
        std::vector<double> val;
    };
    Term rotating_[2], counter_[2];  // index 0: qubit1, 1: qubit2
    bool active_[2] = {false, false};
    Layout layout_;
    ModelParams params_;
    ProtocolSchedule schedule_;
    Eigen::VectorXd energies_;  // H0 diagonal (zero-point constant dropped)
};

// H(t) as a dense matrix on the given layout (pointwise window values).
Mat interaction_hamiltonian(double t, const ModelParams& params, const ProtocolSchedule& schedule,
                            FockCutoff cutoff, const Layout& layout);

struct PropagationLog {
    double norm_drift = 0.0;     // max |1 - ||psi||| seen before renormalization
    IntegrationStats stats;
};

// Integrates i d|psi>/dt = H(t)|psi> from t0 to t1, splitting at stage
// boundaries so the integrator never crosses a coupling discontinuity.
// The returned state is renormalized; drift beyond 1e-6 is a hard error.
PureState propagate(const PureState& psi, double t0, double t1, const ModelParams& params,
                    const ProtocolSchedule& schedule, const PropagatorConfig& config,
                    PropagationLog* log = nullptr);

// Exact single-stage step for rectangular windows: eigendecomposition of the
// time-independent H0 + H_I in the Schroedinger picture, then frame rotation
// back to the interaction picture. Independent of the ODE integrator.
PureState exact_step_oracle(const PureState& psi, double t0, double t1, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config);

// Coefficient equations for a single qubit-cavity pair with constant (unit)
// window, integrated directly with the explicit e^{+-2iwt} phases:
//   i dC_{g,n}   = W_n C_{e,n-1} + W_{n+1} e^{-2iwt} C_{e,n+1}
//   i dC_{e,n-1} = W_n C_{g,n}   + W_{n-1} e^{+2iwt} C_{g,n-2}
// with W_n = g sqrt(n) and C_{l,m} = 0 for m < 0 or m > n_max.
// Coefficients are ordered as a [Q1, C] state vector.
Vec coefficient_ode_oracle(double g, double omega, const Vec& c0, double duration,
                           const PropagatorConfig& config);

// Joint initial state of the protocol: cavity in |0>, idle qubit(s) in |g>,
// input subsystem carrying rho_in purified onto a prepended reference.
// Stage full: layout [R, Q1, C, Q2]; e1_only: [R, Q1, C]; e2_only: [R, C, Q2]
// (rho_in is then a cavity state). Reference dimension equals dim(rho_in).
PureState protocol_initial_state(const Mat& rho_in, const ProtocolSchedule& schedule,
                                 FockCutoff cutoff);

// Runs the staged protocol on the purified input and returns the final joint
// pure state (reference included; callers reduce with partial_trace).
// Stage e1_only covers [0, T1]; e2_only covers [T1+Tc, T1+Tc+T2] so that the
// absolute-time phases match the full protocol's second stage.
PureState run_protocol(const Mat& rho_in, const ModelParams& params,
                       const ProtocolSchedule& schedule, const PropagatorConfig& config,
                       PropagationLog* log = nullptr);

// Same staging, but starting from a caller-built joint state (e.g. a
// maximally entangled reference for Choi extraction).
PureState run_protocol_from(const PureState& initial, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config,
                            PropagationLog* log = nullptr);

// Same, tracing the reference out (the "no reference attached" form).
DensityMatrix run_protocol_traced(const Mat& rho_in, const ModelParams& params,
                                  const ProtocolSchedule& schedule, const PropagatorConfig& config);

enum class DceObservable { pure_dce, end_of_protocol };

// pure_dce: <n> after evolving |g>_1|0> on [Q1, C] up to T1 (vacuum
// amplification only). end_of_protocol: cavity <n> in the final joint state
// of the full protocol with the unpolarized input.
double dce_photons(const ModelParams& params, const ProtocolSchedule& schedule,
                   const PropagatorConfig& config, DceObservable which);

} // namespace qcb
