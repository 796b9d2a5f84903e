#include "core/fano.hpp"

#include <cmath>

namespace qcb {

Eigen::Matrix<double, 6, 1> structural_residuals(const AffineMap& map) {
    Eigen::Matrix<double, 6, 1> r;
    r << map.m(0, 2), map.m(2, 0), map.m(1, 2), map.m(2, 1), map.a(0), map.a(1);
    return r.cwiseAbs();
}

namespace {

void require_structure(const AffineMap& map, const char* who) {
    if (structural_residuals(map).maxCoeff() > 1e-7)
        fail_invalid(std::string(who) + ": map lacks the xy-block + zz structure");
}

Eigen::Matrix3d rz(double angle) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(0, 0) = std::cos(angle);
    r(0, 1) = -std::sin(angle);
    r(1, 0) = std::sin(angle);
    r(1, 1) = std::cos(angle);
    return r;
}

} // namespace

std::pair<DisplacementParams, AffineMap> split_displacement(const AffineMap& map) {
    require_structure(map, "split_displacement");
    const double az = map.a(2);
    if (std::abs(az) > 1.0 + 1e-10) fail_invalid("split_displacement: |a_z| > 1");

    DisplacementParams p;
    AffineMap unital;
    unital.a.setZero();
    if (std::abs(az) < 1e-10) {  // no displacement stage in the near-RWA regime
        p.theta = 0.0;
        p.direction = 1;
        unital.m = map.m;
        return {p, unital};
    }
    p.direction = (az > 0.0) ? 1 : -1;
    p.theta = std::asin(std::sqrt(std::min(std::abs(az), 1.0)));
    const double c = std::cos(p.theta);
    const double xy_max = map.m.topLeftCorner<2, 2>().cwiseAbs().maxCoeff();
    if (c < 1e-12) {
        if (xy_max > 1e-10 || std::abs(map.m(2, 2)) > 1e-10)
            fail_invalid("split_displacement: cos(theta)=0 with nonzero M (singular factorization)");
        unital.m.setZero();
        return {p, unital};
    }
    unital.m.setZero();
    unital.m.topLeftCorner<2, 2>() = map.m.topLeftCorner<2, 2>() / c;
    unital.m(2, 2) = map.m(2, 2) / (c * c);
    return {p, unital};
}

SvdSplit svd_split(const Eigen::Matrix3d& m_prime) {
    AffineMap probe{m_prime, Eigen::Vector3d::Zero()};
    require_structure(probe, "svd_split");

    const Eigen::Matrix2d a = m_prime.topLeftCorner<2, 2>();
    SvdSplit out;
    out.d(2) = m_prime(2, 2);

    const double s_gap = [&] {
        Eigen::JacobiSVD<Eigen::Matrix2d> probe_svd(a);
        return probe_svd.singularValues()(0) - probe_svd.singularValues()(1);
    }();

    if (s_gap < 1e-12) {
        // degenerate pair: polar gauge, O2 = identity
        const double s = std::sqrt(std::abs(a.determinant()));
        out.angle2 = 0.0;
        if (s < 1e-15) {
            out.angle1 = 0.0;
            out.d(0) = out.d(1) = 0.0;
            return out;
        }
        Eigen::Matrix2d o1 = a / s;
        double sign = 1.0;
        if (o1.determinant() < 0.0) {  // reflection absorbed into D's second entry
            o1.col(1) *= -1.0;
            sign = -1.0;
        }
        out.angle1 = std::atan2(o1(1, 0), o1(0, 0));
        out.d(0) = s;
        out.d(1) = sign * s;
        return out;
    }

    Eigen::JacobiSVD<Eigen::Matrix2d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2d u = svd.matrixU();
    Eigen::Matrix2d v = svd.matrixV();
    Eigen::Vector2d s = svd.singularValues();  // descending
    if (u.determinant() < 0.0) {
        u.col(1) *= -1.0;
        s(1) *= -1.0;
    }
    if (v.determinant() < 0.0) {
        v.col(1) *= -1.0;
        s(1) *= -1.0;
    }
    out.angle1 = std::atan2(u(1, 0), u(0, 0));
    out.angle2 = std::atan2(v(1, 0), v(0, 0));
    out.d(0) = s(0);
    out.d(1) = s(1);
    return out;
}

ElementaryMaps elementary_sequence(const AffineMap& map) {
    auto [disp, unital] = split_displacement(map);
    const SvdSplit svd = svd_split(unital.m);
    ElementaryMaps seq;
    seq.m1 = disp;
    seq.rot2 = svd.angle1;
    seq.scale = svd.d;
    seq.rot4 = -svd.angle2;  // M4 = O2^T = Rz(-angle2)
    return seq;
}

AffineMap affine_of_rotation(double angle) { return {rz(angle), Eigen::Vector3d::Zero()}; }

AffineMap affine_of_scaling(const Eigen::Vector3d& d) {
    return {d.asDiagonal().toDenseMatrix(), Eigen::Vector3d::Zero()};
}

AffineMap affine_of_displacement(const DisplacementParams& p) {
    const double c = std::cos(p.theta);
    const double s2 = std::sin(p.theta) * std::sin(p.theta);
    AffineMap m;
    m.m = Eigen::Vector3d(c, c, c * c).asDiagonal();
    m.a = Eigen::Vector3d(0.0, 0.0, p.direction * s2);
    return m;
}

namespace {

AffineMap affine_compose(const AffineMap& outer, const AffineMap& inner) {
    return {outer.m * inner.m, outer.m * inner.a + outer.a};
}

} // namespace

AffineMap compose(const ElementaryMaps& seq) {
    AffineMap m = affine_of_rotation(seq.rot4);
    m = affine_compose(affine_of_scaling(seq.scale), m);
    m = affine_compose(affine_of_rotation(seq.rot2), m);
    m = affine_compose(affine_of_displacement(seq.m1), m);
    return m;
}

KrausSet kraus_of_rotation(double angle) {
    // exp(-i angle sz / 2) with sz = |g><g| - |e><e|
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    u(qubit_e, qubit_e) = std::polar(1.0, +0.5 * angle);
    u(qubit_g, qubit_g) = std::polar(1.0, -0.5 * angle);
    return {u};
}

KrausSet kraus_of_displacement(const DisplacementParams& p) {
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero(), k1 = Eigen::Matrix2cd::Zero();
    if (p.direction >= 0) {  // damping toward |g> (the +z pole)
        k0(qubit_g, qubit_g) = 1.0;
        k0(qubit_e, qubit_e) = c;
        k1(qubit_g, qubit_e) = s;
    } else {  // pumping toward |e>
        k0(qubit_e, qubit_e) = 1.0;
        k0(qubit_g, qubit_g) = c;
        k1(qubit_e, qubit_g) = s;
    }
    if (p.theta == 0.0) return {k0};
    return {k0, k1};
}

namespace {

// Kraus operators of a qubit channel from its (unit-trace) Choi state;
// eigenvalues below `keep` are dropped.
KrausSet kraus_of_choi(const ChoiMatrix& choi, double keep) {
    if (choi.d_in != 2 || choi.d_out != 2) fail_invalid("kraus_of_choi: qubit channels only");
    Eigen::SelfAdjointEigenSolver<Mat> es(2.0 * choi.sigma);  // d_in-scaled
    KrausSet ks;
    for (int k = 3; k >= 0; --k) {  // descending eigenvalues
        const double lam = es.eigenvalues()(k);
        if (lam < -1e-8)
            fail_invalid("kraus_of_choi: negative Choi eigenvalue (map is not completely positive)");
        if (lam <= keep) continue;
        const double w = std::sqrt(std::max(lam, 0.0));
        Eigen::Matrix2cd op;
        for (int i = 0; i < 2; ++i)
            for (int r = 0; r < 2; ++r) op(r, i) = w * es.eigenvectors()(i * 2 + r, k);
        ks.push_back(op);
    }
    return ks;
}

} // namespace

KrausSet kraus_of_scaling(const Eigen::Vector3d& d) {
    return kraus_of_choi(choi_of_affine(affine_of_scaling(d)), 1e-12);
}

KrausSet kraus_from_sequence(const ElementaryMaps& seq) {
    const KrausSet sets[4] = {kraus_of_displacement(seq.m1), kraus_of_rotation(seq.rot2),
                              kraus_of_scaling(seq.scale), kraus_of_rotation(seq.rot4)};
    KrausSet prod{Eigen::Matrix2cd::Identity()};
    for (const auto& set : sets) {
        KrausSet next;
        next.reserve(prod.size() * set.size());
        for (const auto& left : prod)
            for (const auto& right : set) next.push_back(left * right);
        prod = std::move(next);
    }
    // rank truncation through the composed Choi matrix (at most 4 survive)
    Mat sigma = Mat::Zero(4, 4);
    for (const auto& k : prod) {
        Vec v(4);
        for (int i = 0; i < 2; ++i)
            for (int r = 0; r < 2; ++r) v(i * 2 + r) = k(r, i);
        sigma.noalias() += v * v.adjoint();
    }
    KrausSet out = kraus_of_choi({sigma / 2.0, 2, 2}, 1e-10);
    return out;
}

Mat kraus_apply(const KrausSet& ks, const Mat& rho) {
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : ks) out.noalias() += k * rho * k.adjoint();
    return out;
}

double kraus_completeness_defect(const KrausSet& ks) {
    Mat acc = Mat::Zero(2, 2);
    for (const auto& k : ks) acc.noalias() += k.adjoint() * k;
    return (acc - Mat::Identity(2, 2)).cwiseAbs().maxCoeff();
}

std::vector<BlochVector> probe_bloch_vectors(int count) {
    std::vector<BlochVector> pts;
    pts.reserve(count);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    const double radii[3] = {1.0, 2.0 / 3.0, 1.0 / 3.0};
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        const double r = radii[k % 3];
        pts.push_back({r * rho * std::cos(phi), r * rho * std::sin(phi), r * z});
    }
    return pts;
}

} // namespace qcb
