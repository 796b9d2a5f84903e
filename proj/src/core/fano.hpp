#pragma once

#include "core/channel.hpp"

namespace qcb {

// Residuals of the six entries that vanish for this protocol's channels:
// M_xz, M_zx, M_yz, M_zy, a_x, a_y. Measured, never enforced.
Eigen::Matrix<double, 6, 1> structural_residuals(const AffineMap& map);

struct DisplacementParams {
    double theta = 0.0;   // sin^2(theta) = |a_z|
    int direction = 1;    // +1: displacement toward +z (ground-state pole), -1: toward -z
};

// M = M1 * M' with M1 the z-displacement and M' unital with a zeroed offset.
// Inverse extraction: m'_xy-block = m_xy-block / cos(theta), m'_zz = m_zz / cos^2(theta).
std::pair<DisplacementParams, AffineMap> split_displacement(const AffineMap& map);

struct SvdSplit {
    double angle1 = 0.0;           // O1 = Rz(angle1)
    Eigen::Vector3d d;             // diagonal of D (xy signs may absorb a reflection)
    double angle2 = 0.0;           // O2 = Rz(angle2), M' = O1 D O2^T
};

// SVD of the block-structured unital part: proper z-rotations left and
// right, reflections pushed into the signs of D's xy entries, m'_zz kept on
// the diagonal untouched.
SvdSplit svd_split(const Eigen::Matrix3d& m_prime);

// Displacement, rotation, scaling, rotation: M = M1 M2 M3 M4 (M4 acts first).
// Six real parameters overall.
struct ElementaryMaps {
    DisplacementParams m1;
    double rot2 = 0.0;             // M2: z-rotation angle
    Eigen::Vector3d scale;         // M3: diagonal deformation
    double rot4 = 0.0;             // M4: z-rotation angle
};

ElementaryMaps elementary_sequence(const AffineMap& map);

// Affine reconstruction M1*M2*M3*M4 (the test oracle for the decomposition).
AffineMap compose(const ElementaryMaps& seq);
AffineMap affine_of_rotation(double angle);
AffineMap affine_of_scaling(const Eigen::Vector3d& d);
AffineMap affine_of_displacement(const DisplacementParams& p);

using KrausSet = std::vector<Eigen::Matrix2cd>;

KrausSet kraus_of_rotation(double angle);                 // single unitary
KrausSet kraus_of_displacement(const DisplacementParams& p);  // generalized amplitude-type pair
KrausSet kraus_of_scaling(const Eigen::Vector3d& d);      // from the Choi eigendecomposition

// Pairwise products of the four elementary Kraus sets, rank-truncated back
// to at most four operators through the composed Choi matrix.
KrausSet kraus_from_sequence(const ElementaryMaps& seq);

Mat kraus_apply(const KrausSet& ks, const Mat& rho);
double kraus_completeness_defect(const KrausSet& ks);     // max |sum K^dag K - I|

// Deterministic well-spread Bloch probes (golden-angle spiral, radii cycling
// through 1, 2/3, 1/3) used by the reconstruction checks.
std::vector<BlochVector> probe_bloch_vectors(int count);

} // namespace qcb
