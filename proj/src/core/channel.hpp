#pragma once

#include "core/dynamics.hpp"

namespace qcb {

// Bloch-ball action r' = M r + a of a qubit channel (Fano representation).
struct AffineMap {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
};

// Channel state (I (x) E)(|Phi+><Phi+|), stored with unit trace; row/column
// index is input*d_out + output (reference slowest). Trace preservation
// reads Tr_out = I/d_in in this normalization.
struct ChoiMatrix {
    Mat sigma;
    int d_in = 0;
    int d_out = 0;

    // max |Tr_out(sigma) - I/d_in|
    double trace_preservation_defect() const;
    // smallest eigenvalue (complete positivity check: >= -1e-8)
    double min_eigenvalue() const;
    // eigenvalues above `threshold` (numerical Kraus rank)
    int rank(double threshold = 1e-6) const;
};

// Which subsystem carries the channel output for a stage.
Sub stage_output(Stage stage);

// Bloch vector of the stage output for a given single-qubit input (input on
// Q1 for full/E1 stages). Channel-level building block for tomography.
BlochVector protocol_output_bloch(const Mat& rho_in, const ModelParams& params,
                                  const ProtocolSchedule& schedule, const PropagatorConfig& config);

// Affine map of the qubit -> qubit channel, measured from the four canonical
// inputs rho_u and (I + sigma_i)/2: a is the image of the Bloch origin and
// column i of M the displaced image of the i-th Bloch axis. Exact by
// linearity of the dynamics.
AffineMap tomography(const ModelParams& params, const ProtocolSchedule& schedule,
                     const PropagatorConfig& config);

// Choi state of the protocol stage, from a maximally entangled reference.
ChoiMatrix choi_of_protocol(const ModelParams& params, const ProtocolSchedule& schedule,
                            const PropagatorConfig& config);

DensityMatrix apply_affine(const AffineMap& map, const DensityMatrix& rho);

// Composition E2 after E1 (dimension-checked), via transfer matrices.
ChoiMatrix stage_compose(const ChoiMatrix& e1, const ChoiMatrix& e2);

// E(rho) for an arbitrary input on the Choi's input space.
Mat apply_choi(const ChoiMatrix& choi, const Mat& rho);

// Reshuffles: vec(E(rho)) = T vec(rho) with row-major vec.
Mat transfer_of_choi(const ChoiMatrix& choi);
ChoiMatrix choi_of_transfer(const Mat& transfer, int d_in, int d_out);

// Choi state of a qubit affine map (used for CP checks and Kraus synthesis).
ChoiMatrix choi_of_affine(const AffineMap& map);

} // namespace qcb
