#include "core/channel.hpp"

namespace qcb {

double ChoiMatrix::trace_preservation_defect() const {
    Mat tr_out = Mat::Zero(d_in, d_in);
    for (int i = 0; i < d_in; ++i)
        for (int j = 0; j < d_in; ++j) {
            cxd acc = 0.0;
            for (int r = 0; r < d_out; ++r) acc += sigma(i * d_out + r, j * d_out + r);
            tr_out(i, j) = acc;
        }
    tr_out -= Mat::Identity(d_in, d_in) / static_cast<double>(d_in);
    return tr_out.cwiseAbs().maxCoeff();
}

double ChoiMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

int ChoiMatrix::rank(double threshold) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
    int r = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > threshold) ++r;
    return r;
}

Sub stage_output(Stage stage) {
    switch (stage) {
        case Stage::full: return Sub::qubit2;
        case Stage::e1_only: return Sub::cavity;
        case Stage::e2_only: return Sub::qubit2;
    }
    fail_invalid("stage_output: bad stage");
}

BlochVector protocol_output_bloch(const Mat& rho_in, const ModelParams& params,
                                  const ProtocolSchedule& schedule,
                                  const PropagatorConfig& config) {
    const Sub out = stage_output(schedule.stage);
    if (out == Sub::cavity) fail_invalid("protocol_output_bloch: output is not a qubit");
    PureState final = run_protocol(rho_in, params, schedule, config);
    return bloch_of(partial_trace(final, {out}).rho);
}

AffineMap tomography(const ModelParams& params, const ProtocolSchedule& schedule,
                     const PropagatorConfig& config) {
    if (schedule.stage != Stage::full) fail_invalid("tomography: requires the full stage");
    const auto run = [&](const BlochVector& r) {
        return protocol_output_bloch(dm_from_bloch(r), params, schedule, config);
    };
    const BlochVector a = run({0.0, 0.0, 0.0});
    AffineMap map;
    map.a = Eigen::Vector3d(a.x, a.y, a.z);
    const BlochVector axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i) {
        const BlochVector ri = run(axes[i]);
        map.m.col(i) = Eigen::Vector3d(ri.x - a.x, ri.y - a.y, ri.z - a.z);
    }
    return map;
}

ChoiMatrix choi_of_protocol(const ModelParams& params, const ProtocolSchedule& schedule,
                            const PropagatorConfig& config) {
    const FockCutoff cutoff = config.cutoff();
    // canonical |Phi+> on reference (x) input, rest in the ground state
    const int d_in = (schedule.stage == Stage::e2_only) ? cutoff.dim() : 2;
    PureState psi;
    switch (schedule.stage) {
        case Stage::full:
            psi.layout = Layout{{Sub::ref, 2}, {Sub::qubit1, 2}, {Sub::cavity, cutoff.dim()},
                                {Sub::qubit2, 2}};
            break;
        case Stage::e1_only:
            psi.layout = Layout{{Sub::ref, 2}, {Sub::qubit1, 2}, {Sub::cavity, cutoff.dim()}};
            break;
        case Stage::e2_only:
            psi.layout = Layout{{Sub::ref, cutoff.dim()}, {Sub::cavity, cutoff.dim()},
                                {Sub::qubit2, 2}};
            break;
    }
    psi.amp = Vec::Zero(psi.layout.dim());
    const Sub input_sub = (schedule.stage == Stage::e2_only) ? Sub::cavity : Sub::qubit1;
    std::vector<int> idx(psi.layout.size(), 0);
    for (int p = 0; p < psi.layout.size(); ++p) {
        const Sub s = psi.layout.factors()[p].label;
        if ((s == Sub::qubit1 && input_sub != Sub::qubit1) || s == Sub::qubit2) idx[p] = qubit_g;
    }
    const int in_pos = psi.layout.pos_of(input_sub);
    const double w = 1.0 / std::sqrt(static_cast<double>(d_in));
    for (int i = 0; i < d_in; ++i) {
        idx[0] = i;
        idx[in_pos] = i;
        psi.amp(psi.layout.flat(idx)) = w;
    }

    PureState final = run_protocol_from(psi, params, schedule, config);
    DensityMatrix joint = partial_trace(final, {Sub::ref, stage_output(schedule.stage)});
    return {joint.rho, d_in, joint.layout.dim() / d_in};
}

DensityMatrix apply_affine(const AffineMap& map, const DensityMatrix& rho) {
    if (rho.layout.dim() != 2) fail_invalid("apply_affine: need a single-qubit state");
    const BlochVector r = bloch_of(rho.rho);
    const Eigen::Vector3d rp = map.m * Eigen::Vector3d(r.x, r.y, r.z) + map.a;
    DensityMatrix out{dm_from_bloch({rp(0), rp(1), rp(2)}), rho.layout};
    out.validate();  // fails when the map is not a physical channel
    return out;
}

Mat transfer_of_choi(const ChoiMatrix& choi) {
    const int di = choi.d_in, dout = choi.d_out;
    Mat t(dout * dout, di * di);
    for (int r = 0; r < dout; ++r)
        for (int s = 0; s < dout; ++s)
            for (int i = 0; i < di; ++i)
                for (int j = 0; j < di; ++j)
                    t(r * dout + s, i * di + j) =
                        static_cast<double>(di) * choi.sigma(i * dout + r, j * dout + s);
    return t;
}

ChoiMatrix choi_of_transfer(const Mat& transfer, int d_in, int d_out) {
    if (transfer.rows() != d_out * d_out || transfer.cols() != d_in * d_in)
        fail_invalid("choi_of_transfer: shape mismatch");
    Mat sigma(d_in * d_out, d_in * d_out);
    for (int r = 0; r < d_out; ++r)
        for (int s = 0; s < d_out; ++s)
            for (int i = 0; i < d_in; ++i)
                for (int j = 0; j < d_in; ++j)
                    sigma(i * d_out + r, j * d_out + s) =
                        transfer(r * d_out + s, i * d_in + j) / static_cast<double>(d_in);
    return {std::move(sigma), d_in, d_out};
}

Mat apply_choi(const ChoiMatrix& choi, const Mat& rho) {
    if (rho.rows() != choi.d_in || rho.cols() != choi.d_in)
        fail_invalid("apply_choi: input dimension mismatch");
    const Mat t = transfer_of_choi(choi);
    Mat out = Mat::Zero(choi.d_out, choi.d_out);
    for (int r = 0; r < choi.d_out; ++r)
        for (int s = 0; s < choi.d_out; ++s) {
            cxd acc = 0.0;
            for (int i = 0; i < choi.d_in; ++i)
                for (int j = 0; j < choi.d_in; ++j)
                    acc += t(r * choi.d_out + s, i * choi.d_in + j) * rho(i, j);
            out(r, s) = acc;
        }
    return out;
}

ChoiMatrix stage_compose(const ChoiMatrix& e1, const ChoiMatrix& e2) {
    if (e1.d_out != e2.d_in) fail_invalid("stage_compose: E1 output dimension != E2 input dimension");
    const Mat t = transfer_of_choi(e2) * transfer_of_choi(e1);
    return choi_of_transfer(t, e1.d_in, e2.d_out);
}

ChoiMatrix choi_of_affine(const AffineMap& map) {
    const QubitOps q = qubit_ops();
    const Mat paulis[4] = {q.id, q.sx, q.sy, q.sz};
    // images of the Pauli basis under the affine action
    Mat img[4];
    img[0] = q.id + map.a(0) * q.sx + map.a(1) * q.sy + map.a(2) * q.sz;
    for (int k = 0; k < 3; ++k) {
        Mat m = Mat::Zero(2, 2);
        const Mat sig[3] = {q.sx, q.sy, q.sz};
        for (int j = 0; j < 3; ++j) m += map.m(j, k) * sig[j];
        img[k + 1] = m;
    }
    Mat sigma = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            // |i><j| = sum_p (sigma_p(j,i)/2) sigma_p
            Mat e_ij = Mat::Zero(2, 2);
            for (int p = 0; p < 4; ++p) e_ij += 0.5 * paulis[p](j, i) * img[p];
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) sigma(i * 2 + r, j * 2 + s) = 0.5 * e_ij(r, s);
        }
    return {std::move(sigma), 2, 2};
}

} // namespace qcb
