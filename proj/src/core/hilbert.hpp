#pragma once

#include <initializer_list>
#include <vector>

#include "core/types.hpp"

namespace qcb {

// Subsystems of the qubit-cavity-qubit bus. The reference system holds
// purifications and Choi states; the Hamiltonian acts on it as identity.
enum class Sub : int { ref = 0, qubit1 = 1, cavity = 2, qubit2 = 3 };

const char* sub_name(Sub s);

// Highest retained Fock occupation; cavity dimension is n_max + 1.
struct FockCutoff {
    int n_max;
    explicit FockCutoff(int n) : n_max(n) {
        if (n < 1) fail_invalid("FockCutoff: n_max must be >= 1");
    }
    int dim() const { return n_max + 1; }
};

struct Factor {
    Sub label;
    int dim;
};

// Ordered tensor factorization of a state space. The first factor is the
// slowest index (row-major flattening). Convention used throughout:
// reference (when present), then qubit 1, then cavity, then qubit 2.
// Qubit basis order is {|e>, |g>}: index 0 = excited, index 1 = ground.
class Layout {
  public:
    Layout() = default;
    Layout(std::initializer_list<Factor> fs) : factors_(fs) { init(); }
    explicit Layout(std::vector<Factor> fs) : factors_(std::move(fs)) { init(); }

    const std::vector<Factor>& factors() const { return factors_; }
    int size() const { return static_cast<int>(factors_.size()); }
    int dim() const { return dim_; }

    bool has(Sub s) const { return pos_of(s) >= 0; }
    int pos_of(Sub s) const;             // factor position, -1 if absent
    int dim_of(Sub s) const;             // errors if absent
    int stride_of(Sub s) const;          // errors if absent

    // Flat index from one per-factor index vector (same order as factors()).
    int flat(const std::vector<int>& idx) const;
    // Per-factor index of one flat index.
    std::vector<int> unflatten(int flat_index) const;

    Layout with_reference_prepended(int ref_dim) const;
    Layout subset(const std::vector<Sub>& keep) const;  // keeps factor order

    bool operator==(const Layout& other) const;

  private:
    void init();
    std::vector<Factor> factors_;
    std::vector<int> strides_;
    int dim_ = 1;
};

constexpr int qubit_e = 0;
constexpr int qubit_g = 1;

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct PureState {
    Vec amp;
    Layout layout;

    // Checks normalization (1e-10) and dimension consistency.
    void validate() const;
};

struct DensityMatrix {
    Mat rho;
    Layout layout;

    // Hermiticity and unit trace within 1e-10, eigenvalues >= -1e-10.
    void validate() const;
};

// max-norm Hermiticity defect, used by the Hermitian-flag invariant (1e-12).
double hermiticity_defect(const Mat& a);

// Annihilation / creation operators on the truncated Fock space.
// a|n> = sqrt(n)|n-1>; adag|n> = sqrt(n+1)|n+1> with adag|n_max> -> 0.
std::pair<Mat, Mat> fock_ladder(FockCutoff cutoff);

// Qubit operators in the {|e>, |g>} basis order, satisfying
// sp|g> = |e>, sm|e> = |g>, s_pm = (sx -/+ i sy)/2, and H0 = -(w/2) sz
// placing |e> one quantum above |g> (so sz = |g><g| - |e><e|).
struct QubitOps {
    Mat sx, sy, sz, sp, sm, id;
};
QubitOps qubit_ops();

// op acting on `target` tensored with identity on every other factor.
Mat embed(const Mat& op, Sub target, const Layout& layout);

DensityMatrix partial_trace(const PureState& psi, const std::vector<Sub>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Sub>& keep);

// Spectral purification |psi> = sum_i sqrt(l_i)|i>_R |v_i>, reference
// prepended with dimension equal to dim(rho).
PureState purify(const DensityMatrix& rho);

double mean_photon_number(const PureState& psi);
double mean_photon_number(const DensityMatrix& rho);

// Eigenvalues of a Hermitian matrix, ascending, clipped at -1e-12 before use
// in logs/square roots. PSD matrices pick up tiny negative values numerically.
Eigen::VectorXd clipped_eigenvalues(const Mat& herm);

BlochVector bloch_of(const Mat& rho2);       // single-qubit density matrix
Mat dm_from_bloch(const BlochVector& r);     // (I + r.sigma)/2

} // namespace qcb
