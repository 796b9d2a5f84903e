#pragma once

#include "core/channel.hpp"
#include "core/optim.hpp"

namespace qcb {

// von Neumann entropy in bits, with 0 log 0 = 0 on clipped eigenvalues.
double entropy_bits(const Mat& rho);

struct ChannelEval {
    double s_out = 0.0;        // S(E(rho))
    double s_exchange = 0.0;   // S of reference (x) output
    double ic = 0.0;           // coherent information, bits
    double norm_drift = 0.0;
};

// One joint propagation of the purified input; both entropies come from the
// same final state.
ChannelEval channel_eval(const Mat& rho_in, const ModelParams& params,
                         const ProtocolSchedule& schedule, const PropagatorConfig& config);

double entropy_exchange(const Mat& rho_in, const ModelParams& params,
                        const ProtocolSchedule& schedule, const PropagatorConfig& config);
double coherent_information(const Mat& rho_in, const ModelParams& params,
                            const ProtocolSchedule& schedule, const PropagatorConfig& config);

// Entropy exchange via the complementary reduction of the joint pure state
// (Schmidt symmetry). Independent read used by the property tests.
double entropy_exchange_complement(const Mat& rho_in, const ModelParams& params,
                                   const ProtocolSchedule& schedule,
                                   const PropagatorConfig& config);

// Deterministic sampling of the Bloch ball for the Q1 search: ball center,
// axes at several radii, two rings and the cube diagonals (57 points).
std::vector<BlochVector> q1_search_grid();

struct Q1Result {
    double q1 = 0.0;          // max(best coherent information, 0)
    double ic_best = 0.0;     // unfloored optimum
    BlochVector argmax;
    bool converged = true;
};

// Maximizes coherent information over the Bloch ball (grid + simplex
// refinement from the three best grid points). Works for the full stage and
// for E1 (qubit input either way).
Q1Result q1_optimize(const ModelParams& params, const ProtocolSchedule& schedule,
                     const PropagatorConfig& config);

struct TimingCandidate {
    double u1 = 1.0;  // T1 in units of tau = pi/(2g)
    double u2 = 1.0;  // T2 in units of tau
    double tc = 0.0;  // idle time, absolute
};

ProtocolSchedule schedule_from_candidate(const TimingCandidate& c, double g, CouplingWindow window,
                                         Stage stage = Stage::full);

struct TimingResult {
    TimingCandidate timing;
    double ic = 0.0;
    bool converged = true;
};

// Protocol P2: maximize Ic(rho_u) over T1, T2 in [0.8, 1.2] tau and
// Tc in [0, 2 pi]. Never returns less than the standard-timing value
// (the standard timing is a grid point and a final fallback).
TimingResult optimize_timing(const ModelParams& params, const PropagatorConfig& config,
                             CouplingWindow window = {});

// bits per unit time: Ic / (T1 + Tc + T2)
double transmission_rate(double ic, const ProtocolSchedule& schedule);

} // namespace qcb
