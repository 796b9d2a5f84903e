#include <doctest.h>

#include "core/hilbert.hpp"
#include "helpers.hpp"

using namespace qcb;
using namespace qcb::test;

TEST_CASE("fock ladder operators") {
    const auto [a, adag] = fock_ladder(FockCutoff(5));

    Vec vac = Vec::Zero(6);
    vac(0) = 1.0;
    CHECK(max_abs(a * vac) == 0.0);  // a|0> = 0

    Vec one = Vec::Zero(6);
    one(1) = 1.0;
    CHECK((adag * vac - one).norm() == doctest::Approx(0.0).epsilon(1e-15));  // adag|0> = |1>

    const Mat number = adag * a;
    for (int n = 0; n <= 5; ++n) {
        Vec fock = Vec::Zero(6);
        fock(n) = 1.0;
        CHECK((number * fock - double(n) * fock).norm() < 1e-14);
    }

    // creation above the cutoff is annihilated, not renormalized
    Vec top = Vec::Zero(6);
    top(5) = 1.0;
    CHECK(max_abs(adag * top) == 0.0);
}

TEST_CASE("qubit operators and sign conventions") {
    const QubitOps q = qubit_ops();

    Vec e = Vec::Zero(2), g = Vec::Zero(2);
    e(qubit_e) = 1.0;
    g(qubit_g) = 1.0;

    CHECK((q.sp * g - e).norm() < 1e-15);  // s+|g> = |e>
    CHECK(max_abs(q.sp * e) == 0.0);       // s+|e> = 0
    CHECK((q.sm * e - g).norm() < 1e-15);
    CHECK(max_abs(q.sm * g) == 0.0);

    CHECK(max_abs(q.sp * q.sm + q.sm * q.sp - q.id) < 1e-15);

    // s_pm = (sx -/+ i sy)/2
    CHECK(max_abs(q.sp - 0.5 * (q.sx - im_unit * q.sy)) < 1e-15);
    CHECK(max_abs(q.sm - 0.5 * (q.sx + im_unit * q.sy)) < 1e-15);

    // H0 = -(w/2) sz must put |e> one quantum above |g>
    const Mat h0 = -0.5 * q.sz;
    CHECK(h0(qubit_e, qubit_e).real() == doctest::Approx(0.5));
    CHECK(h0(qubit_g, qubit_g).real() == doctest::Approx(-0.5));

    // direct 2x2 multiplication fixes the commutator sign in this convention
    CHECK(max_abs(q.sz * q.sp - q.sp * q.sz + 2.0 * q.sp) < 1e-15);  // [sz, s+] = -2 s+

    // right-handed Pauli algebra survives the relabeling
    CHECK(max_abs(q.sx * q.sy - im_unit * q.sz) < 1e-15);

    for (const Mat* m : {&q.sx, &q.sy, &q.sz}) CHECK(hermiticity_defect(*m) < 1e-12);

    // reproducible bit-identically
    const QubitOps q2 = qubit_ops();
    CHECK((q.sy - q2.sy).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed") {
    const Layout layout{{Sub::qubit1, 2}, {Sub::cavity, 4}, {Sub::qubit2, 2}};
    const QubitOps q = qubit_ops();

    CHECK(max_abs(embed(Mat::Identity(2, 2), Sub::qubit1, layout) -
                  Mat::Identity(layout.dim(), layout.dim())) == 0.0);

    // product state |e>|0>|g>: sz on Q1 acts with its single-subsystem eigenvalue
    Vec psi = Vec::Zero(layout.dim());
    psi(layout.flat({qubit_e, 0, qubit_g})) = 1.0;
    const Mat sz1 = embed(q.sz, Sub::qubit1, layout);
    CHECK((sz1 * psi + psi).norm() < 1e-15);  // sz|e> = -|e> in this convention

    const auto [a, adag] = fock_ladder(FockCutoff(3));
    const Mat num = embed(adag * a, Sub::cavity, layout);
    Vec three = Vec::Zero(layout.dim());
    three(layout.flat({qubit_g, 3, qubit_g})) = 1.0;
    CHECK(std::abs((three.adjoint() * num * three)(0, 0).real() - 3.0) < 1e-14);

    SUBCASE("hermiticity and spectrum per factor") {
        const Mat op = embed(q.sy, Sub::qubit2, layout);
        CHECK(hermiticity_defect(op) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat> es(op, Eigen::EigenvaluesOnly);
        // eigenvalues of sy are +-1, each with the co-dimension multiplicity
        int plus = 0, minus = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-12) ++plus;
            if (std::abs(es.eigenvalues()(i) + 1.0) < 1e-12) ++minus;
        }
        CHECK(plus == layout.dim() / 2);
        CHECK(minus == layout.dim() / 2);
    }

    CHECK_THROWS_AS(embed(Mat::Identity(3, 3), Sub::qubit1, layout), Error);
    CHECK_THROWS_AS(embed(Mat::Identity(2, 2), Sub::ref, layout), Error);
}

TEST_CASE("partial trace") {
    SUBCASE("product state") {
        const Vec a = random_state(2, 11), b = random_state(5, 12);
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::cavity, 5}};
        psi.amp = Vec::Zero(10);
        for (int i = 0; i < 2; ++i)
            for (int n = 0; n < 5; ++n) psi.amp(i * 5 + n) = a(i) * b(n);
        const DensityMatrix rho = partial_trace(psi, {Sub::qubit1});
        CHECK(max_abs(rho.rho - a * a.adjoint()) < 1e-14);
    }

    SUBCASE("maximally entangled pair reduces to I/2") {
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::qubit2, 2}};
        psi.amp = Vec::Zero(4);
        psi.amp(0) = psi.amp(3) = 1.0 / std::sqrt(2.0);
        const DensityMatrix rho = partial_trace(psi, {Sub::qubit2});
        CHECK(max_abs(rho.rho - 0.5 * Mat::Identity(2, 2)) < 1e-15);
    }

    SUBCASE("random tripartite state against brute-force contraction") {
        const std::vector<int> dims{2, 4, 3};
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::cavity, 4}, {Sub::qubit2, 3}};
        psi.amp = random_state(24, 21);

        const DensityMatrix r1 = partial_trace(psi, {Sub::qubit1});
        CHECK(std::abs(r1.rho.trace().real() - 1.0) < 1e-12);
        CHECK(max_abs(r1.rho - brute_force_partial_trace(psi.amp, dims, {0})) < 1e-13);

        const DensityMatrix r13 = partial_trace(psi, {Sub::qubit1, Sub::qubit2});
        CHECK(max_abs(r13.rho - brute_force_partial_trace(psi.amp, dims, {0, 2})) < 1e-13);

        const DensityMatrix r2 = partial_trace(psi, {Sub::cavity});
        CHECK(max_abs(r2.rho - brute_force_partial_trace(psi.amp, dims, {1})) < 1e-13);
    }

    SUBCASE("empty keep set rejected") {
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::qubit2, 2}};
        psi.amp = random_state(4, 5);
        CHECK_THROWS_AS(partial_trace(psi, {}), Error);
    }

    SUBCASE("density-matrix input") {
        PureState psi;
        psi.layout = Layout{{Sub::qubit1, 2}, {Sub::cavity, 3}};
        psi.amp = random_state(6, 31);
        const DensityMatrix full{psi.amp * psi.amp.adjoint(), psi.layout};
        const DensityMatrix via_dm = partial_trace(full, {Sub::cavity});
        const DensityMatrix via_pure = partial_trace(psi, {Sub::cavity});
        CHECK(max_abs(via_dm.rho - via_pure.rho) < 1e-13);
    }
}

TEST_CASE("purification") {
    SUBCASE("pure input stays unentangled") {
        const Vec v = random_state(2, 41);
        const DensityMatrix rho{v * v.adjoint(), Layout{{Sub::qubit1, 2}}};
        const PureState psi = purify(rho);
        const DensityMatrix red = partial_trace(psi, {Sub::ref});
        Eigen::SelfAdjointEigenSolver<Mat> es(red.rho, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("maximally mixed input gives equal Schmidt weights") {
        const DensityMatrix rho{0.5 * Mat::Identity(2, 2), Layout{{Sub::qubit1, 2}}};
        const PureState psi = purify(rho);
        const DensityMatrix red = partial_trace(psi, {Sub::ref});
        CHECK(max_abs(red.rho - 0.5 * Mat::Identity(2, 2)) < 1e-12);
    }

    SUBCASE("rank-2 spectrum and round trip") {
        const QubitOps q = qubit_ops();
        const Mat rho2 = 0.9 * (q.id + q.sz) / 2.0 + 0.1 * (q.id - q.sz) / 2.0;
        const DensityMatrix rho{rho2, Layout{{Sub::qubit1, 2}}};
        const PureState psi = purify(rho);
        Eigen::VectorXd sq = psi.amp.cwiseAbs2();
        std::sort(sq.data(), sq.data() + sq.size());
        // Schmidt weights 0.9 and 0.1, i.e. coefficients sqrt(0.9), sqrt(0.1)
        CHECK(sq(sq.size() - 1) == doctest::Approx(0.9).epsilon(1e-10));
        CHECK(sq(sq.size() - 2) == doctest::Approx(0.1).epsilon(1e-10));

        const DensityMatrix back = partial_trace(psi, {Sub::qubit1});
        CHECK(max_abs(back.rho - rho.rho) < 1e-10);
    }

    SUBCASE("round trip on random mixed states") {
        for (unsigned seed : {7u, 8u, 9u}) {
            const Mat rho = random_density(4, seed);
            const DensityMatrix dm{rho, Layout{{Sub::cavity, 4}}};
            const DensityMatrix back = partial_trace(purify(dm), {Sub::cavity});
            CHECK(max_abs(back.rho - rho) < 1e-10);
        }
    }

    SUBCASE("invalid input rejected") {
        const Mat bad = Mat::Identity(2, 2);  // trace 2
        CHECK_THROWS_AS(purify(DensityMatrix{bad, Layout{{Sub::qubit1, 2}}}), Error);
    }
}

TEST_CASE("mean photon number") {
    const Layout layout{{Sub::qubit1, 2}, {Sub::cavity, 4}, {Sub::qubit2, 2}};
    PureState psi;
    psi.layout = layout;

    psi.amp = Vec::Zero(layout.dim());
    psi.amp(layout.flat({qubit_g, 0, qubit_g})) = 1.0;
    CHECK(mean_photon_number(psi) == 0.0);

    psi.amp = Vec::Zero(layout.dim());
    psi.amp(layout.flat({qubit_g, 2, qubit_g})) = 1.0;
    CHECK(mean_photon_number(psi) == doctest::Approx(2.0).epsilon(1e-14));

    psi.amp = Vec::Zero(layout.dim());
    psi.amp(layout.flat({qubit_e, 0, qubit_g})) = 1.0 / std::sqrt(2.0);
    psi.amp(layout.flat({qubit_e, 1, qubit_g})) = 1.0 / std::sqrt(2.0);
    CHECK(mean_photon_number(psi) == doctest::Approx(0.5).epsilon(1e-14));

    const DensityMatrix rho = partial_trace(psi, {Sub::cavity});
    CHECK(mean_photon_number(rho) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("schmidt symmetry of bipartite entropy") {
    PureState psi;
    psi.layout = Layout{{Sub::qubit1, 2}, {Sub::cavity, 6}, {Sub::qubit2, 2}};
    psi.amp = random_state(24, 77);
    const auto lhs = clipped_eigenvalues(partial_trace(psi, {Sub::qubit1}).rho);
    const auto rhs = clipped_eigenvalues(partial_trace(psi, {Sub::cavity, Sub::qubit2}).rho);
    const auto h = [](const Eigen::VectorXd& ev) {
        double s = 0.0;
        for (int i = 0; i < ev.size(); ++i)
            if (ev(i) > 0) s -= ev(i) * std::log2(ev(i));
        return s;
    };
    CHECK(h(lhs) == doctest::Approx(h(rhs)).epsilon(1e-9));
}

TEST_CASE("bloch round trip") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const BlochVector r = random_bloch(seed);
        const BlochVector back = bloch_of(dm_from_bloch(r));
        CHECK(back.x == doctest::Approx(r.x).epsilon(1e-13));
        CHECK(back.y == doctest::Approx(r.y).epsilon(1e-13));
        CHECK(back.z == doctest::Approx(r.z).epsilon(1e-13));
    }
    // the +z pole is the sz = +1 eigenstate
    const Mat pole = dm_from_bloch({0.0, 0.0, 1.0});
    const QubitOps q = qubit_ops();
    CHECK(max_abs(q.sz * pole - pole) < 1e-14);
    CHECK_THROWS_AS(dm_from_bloch({1.0, 1.0, 0.0}), Error);
}
