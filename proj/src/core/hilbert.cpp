#include "core/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qcb {

const char* sub_name(Sub s) {
    switch (s) {
        case Sub::ref: return "R";
        case Sub::qubit1: return "Q1";
        case Sub::cavity: return "C";
        case Sub::qubit2: return "Q2";
    }
    return "?";
}

void Layout::init() {
    if (factors_.empty()) fail_invalid("Layout: no factors");
    dim_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1) fail_invalid("Layout: factor dimension must be >= 1");
        for (const auto& g : factors_)
            if (&f != &g && f.label == g.label) fail_invalid("Layout: duplicate subsystem label");
        dim_ *= f.dim;
    }
    strides_.assign(factors_.size(), 1);
    for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
        strides_[i] = strides_[i + 1] * factors_[i + 1].dim;
}

int Layout::pos_of(Sub s) const {
    for (int i = 0; i < size(); ++i)
        if (factors_[i].label == s) return i;
    return -1;
}

int Layout::dim_of(Sub s) const {
    int p = pos_of(s);
    if (p < 0) fail_invalid(std::string("Layout: subsystem not present: ") + sub_name(s));
    return factors_[p].dim;
}

int Layout::stride_of(Sub s) const {
    int p = pos_of(s);
    if (p < 0) fail_invalid(std::string("Layout: subsystem not present: ") + sub_name(s));
    return strides_[p];
}

int Layout::flat(const std::vector<int>& idx) const {
    int f = 0;
    for (int i = 0; i < size(); ++i) f += idx[i] * strides_[i];
    return f;
}

std::vector<int> Layout::unflatten(int flat_index) const {
    std::vector<int> idx(factors_.size());
    for (int i = 0; i < size(); ++i) {
        idx[i] = (flat_index / strides_[i]) % factors_[i].dim;
    }
    return idx;
}

Layout Layout::with_reference_prepended(int ref_dim) const {
    if (has(Sub::ref)) fail_invalid("Layout: reference already present");
    std::vector<Factor> fs;
    fs.push_back({Sub::ref, ref_dim});
    fs.insert(fs.end(), factors_.begin(), factors_.end());
    return Layout(fs);
}

Layout Layout::subset(const std::vector<Sub>& keep) const {
    std::vector<Factor> fs;
    for (const auto& f : factors_)
        if (std::find(keep.begin(), keep.end(), f.label) != keep.end()) fs.push_back(f);
    if (fs.size() != keep.size()) fail_invalid("Layout: subset label not present");
    return Layout(fs);
}

bool Layout::operator==(const Layout& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i)
        if (factors_[i].label != other.factors_[i].label || factors_[i].dim != other.factors_[i].dim)
            return false;
    return true;
}

void PureState::validate() const {
    if (amp.size() != layout.dim()) fail_invalid("PureState: amplitude length != layout dimension");
    if (std::abs(amp.norm() - 1.0) > 1e-10) fail_invalid("PureState: not normalized");
}

void DensityMatrix::validate() const {
    if (rho.rows() != rho.cols() || rho.rows() != layout.dim())
        fail_invalid("DensityMatrix: shape mismatch with layout");
    if (hermiticity_defect(rho) > 1e-10) fail_invalid("DensityMatrix: not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        fail_invalid("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) fail_invalid("DensityMatrix: negative eigenvalue");
}

double hermiticity_defect(const Mat& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

std::pair<Mat, Mat> fock_ladder(FockCutoff cutoff) {
    const int d = cutoff.dim();
    Mat a = Mat::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    // adag = a^T here; the row that would create |n_max+1> is simply absent,
    // so adag|n_max> = 0 (truncation is not renormalized).
    return {a, a.adjoint()};
}

QubitOps qubit_ops() {
    QubitOps q;
    q.sp = Mat::Zero(2, 2);
    q.sp(qubit_e, qubit_g) = 1.0;
    q.sm = q.sp.adjoint();
    q.sx = q.sp + q.sm;
    q.sy = im_unit * (q.sp - q.sm);
    q.sz = Mat::Zero(2, 2);
    q.sz(qubit_e, qubit_e) = -1.0;
    q.sz(qubit_g, qubit_g) = 1.0;
    q.id = Mat::Identity(2, 2);
    return q;
}

Mat embed(const Mat& op, Sub target, const Layout& layout) {
    const int d_t = layout.dim_of(target);
    if (op.rows() != d_t || op.cols() != d_t) fail_invalid("embed: operator/subsystem dimension mismatch");
    const int stride = layout.stride_of(target);
    const int dim = layout.dim();
    Mat full = Mat::Zero(dim, dim);
    // flat = outer*stride*d_t + t*stride + inner
    const int n_outer = dim / (stride * d_t);
    for (int outer = 0; outer < n_outer; ++outer) {
        for (int i = 0; i < d_t; ++i) {
            for (int j = 0; j < d_t; ++j) {
                if (op(i, j) == cxd(0.0, 0.0)) continue;
                const int row0 = outer * stride * d_t + i * stride;
                const int col0 = outer * stride * d_t + j * stride;
                for (int inner = 0; inner < stride; ++inner)
                    full(row0 + inner, col0 + inner) = op(i, j);
            }
        }
    }
    return full;
}

namespace {

// Flat offsets for a subset of factors: offsets[k] enumerates the subset's
// combined index with the correct strides in the full space.
std::vector<int> subset_offsets(const Layout& layout, const std::vector<int>& positions) {
    std::vector<int> offsets{0};
    for (int p : positions) {
        const int d = layout.factors()[p].dim;
        const int stride = [&] {
            int s = 1;
            for (int q = p + 1; q < layout.size(); ++q) s *= layout.factors()[q].dim;
            return s;
        }();
        std::vector<int> next;
        next.reserve(offsets.size() * d);
        for (int base : offsets)
            for (int i = 0; i < d; ++i) next.push_back(base + i * stride);
        offsets = std::move(next);
    }
    return offsets;
}

std::pair<std::vector<int>, std::vector<int>> keep_trace_offsets(const Layout& layout,
                                                                 const std::vector<Sub>& keep) {
    if (keep.empty()) fail_invalid("partial_trace: empty keep set");
    std::vector<int> keep_pos, rest_pos;
    for (int p = 0; p < layout.size(); ++p) {
        const Sub s = layout.factors()[p].label;
        if (std::find(keep.begin(), keep.end(), s) != keep.end())
            keep_pos.push_back(p);
        else
            rest_pos.push_back(p);
    }
    if (static_cast<int>(keep_pos.size()) != static_cast<int>(keep.size()))
        fail_invalid("partial_trace: keep label not present in layout");
    return {subset_offsets(layout, keep_pos), subset_offsets(layout, rest_pos)};
}

} // namespace

DensityMatrix partial_trace(const PureState& psi, const std::vector<Sub>& keep) {
    auto [keep_off, rest_off] = keep_trace_offsets(psi.layout, keep);
    const int dk = static_cast<int>(keep_off.size());
    Mat rho = Mat::Zero(dk, dk);
    Vec col(dk);
    for (int r : rest_off) {
        for (int i = 0; i < dk; ++i) col(i) = psi.amp(keep_off[i] + r);
        rho.noalias() += col * col.adjoint();
    }
    return {std::move(rho), psi.layout.subset(keep)};
}

DensityMatrix partial_trace(const DensityMatrix& dm, const std::vector<Sub>& keep) {
    auto [keep_off, rest_off] = keep_trace_offsets(dm.layout, keep);
    const int dk = static_cast<int>(keep_off.size());
    Mat rho = Mat::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cxd acc = 0.0;
            for (int r : rest_off) acc += dm.rho(keep_off[i] + r, keep_off[j] + r);
            rho(i, j) = acc;
        }
    return {std::move(rho), dm.layout.subset(keep)};
}

PureState purify(const DensityMatrix& rho) {
    rho.validate();
    const int d = rho.layout.dim();
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.rho);
    PureState psi;
    psi.layout = rho.layout.with_reference_prepended(d);
    psi.amp = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) {
        const double lam = std::max(es.eigenvalues()(i), 0.0);
        if (lam == 0.0) continue;
        const double w = std::sqrt(lam);
        for (int k = 0; k < d; ++k) psi.amp(i * d + k) = w * es.eigenvectors()(k, i);
    }
    psi.amp /= psi.amp.norm();
    return psi;
}

namespace {

double photon_expectation(const Layout& layout, const std::function<double(int)>& pop) {
    const int dc = layout.dim_of(Sub::cavity);
    const int stride = layout.stride_of(Sub::cavity);
    const int dim = layout.dim();
    const int n_outer = dim / (stride * dc);
    double acc = 0.0;
    for (int outer = 0; outer < n_outer; ++outer)
        for (int n = 1; n < dc; ++n) {
            const int base = outer * stride * dc + n * stride;
            for (int inner = 0; inner < stride; ++inner) acc += n * pop(base + inner);
        }
    return acc;
}

} // namespace

double mean_photon_number(const PureState& psi) {
    return photon_expectation(psi.layout, [&](int k) { return std::norm(psi.amp(k)); });
}

double mean_photon_number(const DensityMatrix& rho) {
    return photon_expectation(rho.layout, [&](int k) { return rho.rho(k, k).real(); });
}

Eigen::VectorXd clipped_eigenvalues(const Mat& herm) {
    Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) {
            if (ev(i) < -1e-12) {
                // keep going only for harmless round-off; anything bigger is a bug upstream
                if (ev(i) < -1e-8) fail_numerical("clipped_eigenvalues: matrix is not PSD");
            }
            ev(i) = 0.0;
        }
    return ev;
}

BlochVector bloch_of(const Mat& rho2) {
    if (rho2.rows() != 2 || rho2.cols() != 2) fail_invalid("bloch_of: need a 2x2 density matrix");
    const QubitOps q = qubit_ops();
    return {(rho2 * q.sx).trace().real(), (rho2 * q.sy).trace().real(), (rho2 * q.sz).trace().real()};
}

Mat dm_from_bloch(const BlochVector& r) {
    if (r.norm() > 1.0 + 1e-10) fail_invalid("dm_from_bloch: Bloch vector outside the ball");
    const QubitOps q = qubit_ops();
    return 0.5 * (q.id + r.x * q.sx + r.y * q.sy + r.z * q.sz);
}

} // namespace qcb
