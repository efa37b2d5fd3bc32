#include <doctest.h>

#include <cmath>

#include "pdlab/hc.hpp"

using namespace pdlab;

namespace {

struct Fixture {
    DomainSpec s;
    GradedLieAlgebra L;
    RootSystem rs;
    Fixture(int n, std::vector<int> h) : s(build_domain_spec(n, h)), L(s), rs(compute_root_system(L, 1)) {}
};

CMat random_p0_exp(const GradedLieAlgebra& L, Rng& rng, double scale, CMat* X_out = nullptr)
{
    const auto p0 = L.extract_subspace(SubspaceName::p0).basis;
    CMat X = CMat::Zero(L.spec().dim(), L.spec().dim());
    for (const auto& b : p0)
        X += rng.normal() * b;
    X *= scale / L.norm(X);
    if (X_out)
        *X_out = X;
    return expm(RMat(X.real())).cast<cplx>();
}

}  // namespace

TEST_CASE("sl2 three-factor identity")
{
    Fixture w1(1, {1, 1});
    const auto zero = sl2_factorization(w1.rs.frame, 0, 0.0);
    CHECK((zero.product - CMat::Identity(2, 2)).norm() == 0.0);
    CHECK(zero.w == cplx(0.0));

    for (cplx z : {cplx(0.3), cplx(1.0, 1.0), cplx(0.0, -2.0), cplx(2.5, 0.1)}) {
        const auto f = sl2_factorization(w1.rs.frame, 0, z);
        CHECK(f.residual < 1e-12);
        CHECK(std::abs(f.w - z / std::abs(z) * std::tanh(std::abs(z))) < 1e-15);
    }
    // Real z: the target is the hyperbolic rotation with cosh and sinh entries.
    const auto f = sl2_factorization(w1.rs.frame, 0, 0.7);
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (f.target + f.target.adjoint())));
    CHECK(es.eigenvalues()(1) == doctest::Approx(std::exp(0.7)).epsilon(1e-12));

    CHECK_THROWS_AS(sl2_factorization(w1.rs.frame, 1, 1.0), InvalidSpec);
}

TEST_CASE("iota and the Lambda coordinates")
{
    Fixture d(2, {1, 3, 1});
    REQUIRE(d.rs.frame.rank() == 2);
    const auto io = iota_hc(d.L, d.rs.frame, {1.0, 0.5});
    REQUIRE(io.lambda_coords.size() == 2);
    CHECK(io.lambda_coords[0].real() == doctest::Approx(0.76159).epsilon(1e-5));
    CHECK(io.lambda_coords[1].real() == doctest::Approx(0.46212).epsilon(1e-5));
    // exp(X) o = exp(Y) o
    const FlagPoint a = flag_from_group(d.s, expm(io.X));
    const FlagPoint b = nplus_point(d.L, io.Y);
    CHECK(flag_distance(a, b) < 1e-9);
    const auto rep = hc_report(d.L, d.rs.frame, io.Y);
    CHECK(std::abs(rep.lambda_coords[0] - std::tanh(1.0)) < 1e-12);
    CHECK(std::abs(rep.lambda_coords[1] - std::tanh(0.5)) < 1e-12);
    CHECK(rep.inside);
    CHECK(rep.euclid_dist < std::sqrt(2.0));

    const auto z = iota_hc(d.L, d.rs.frame, {0.0, 0.0});
    CHECK(z.Y.norm() == 0.0);
    CHECK(hc_report(d.L, d.rs.frame, z.Y).euclid_dist == 0.0);

    CHECK_THROWS_AS(iota_hc(d.L, d.rs.frame, {1.0}), InvalidSpec);
}

TEST_CASE("random_k lies in K and iota checks its argument")
{
    Fixture d(2, {2, 1, 2});
    Rng rng(5);
    const auto k0 = d.L.extract_subspace(SubspaceName::k0).basis;
    for (int i = 0; i < 5; ++i)
        CHECK(k_membership_residual(d.s, random_k(k0, rng)) < 1e-10);
    const CMat notk = 2.0 * CMat::Identity(5, 5);
    CHECK(k_membership_residual(d.s, notk) > 1.0);
    std::vector<double> t(d.rs.frame.rank(), 0.3);
    CHECK_THROWS_AS(iota_hc(d.L, d.rs.frame, t, &notk), NotInAlgebra);

    // Conjugating by k in V keeps exp(X) o = exp(Y) o.
    const CMat v = random_k(d.L.extract_subspace(SubspaceName::v0).basis, rng);
    const auto iv = iota_hc(d.L, d.rs.frame, t, &v);
    CHECK(flag_distance(flag_from_group(d.s, expm(iv.X)), nplus_point(d.L, iv.Y)) < 1e-9);
    // Here dim g^{-2} = 1, so K is larger than V and a generic k moves o; the
    // identity then fails.
    const CMat k = random_k(k0, rng);
    CHECK(flag_distance(flag_from_group(d.s, k), base_point(d.s)) > 1e-3);
    const auto ik = iota_hc(d.L, d.rs.frame, t, &k);
    CHECK(flag_distance(flag_from_group(d.s, expm(ik.X)), nplus_point(d.L, ik.Y)) > 1e-3);

    Fixture e(2, {1, 3, 1});
    const CMat ke = random_k(e.L, rng);
    CHECK(flag_distance(flag_from_group(e.s, ke), base_point(e.s)) < 1e-10);
    const auto ie = iota_hc(e.L, e.rs.frame, {0.4, 1.1}, &ke);
    CHECK(flag_distance(flag_from_group(e.s, expm(ie.X)), nplus_point(e.L, ie.Y)) < 1e-9);
}

TEST_CASE("group element from a filtration")
{
    for (auto [n, h] : std::vector<std::pair<int, std::vector<int>>>{{1, {1, 1}}, {1, {2, 2}}, {2, {2, 1, 2}}, {2, {1, 3, 1}}}) {
        Fixture d(n, h);
        Rng rng(12);
        for (int i = 0; i < 3; ++i) {
            CMat X;
            const CMat g0 = random_p0_exp(d.L, rng, 1.0, &X);
            const FlagPoint pt = flag_from_group(d.s, g0);
            const CMat g = group_point_from_filtration(to_hodge_structure(pt));
            CHECK(g.imag().norm() == 0.0);
            CHECK((g.transpose() * d.s.Q() * g - d.s.Q()).norm() < 1e-9);
            CHECK(flag_distance(flag_from_group(d.s, g), pt) < 1e-9);
            // The polar part is independent of the representative.
            const auto sp = project_pi(to_hodge_structure(pt));
            CHECK((sp.polar - g0).norm() < 1e-8 * g0.norm());
            CHECK(k_membership_residual(d.s, sp.k) < 1e-8);
        }
        // Outside D there is no real representative. The ray is scanned because
        // for weight 2 it can re-enter D through the conjugate component, and on
        // (2,[2,1,2]) it may never leave.
        CMat dir = CMat::Zero(d.s.dim(), d.s.dim());
        for (const auto& b : d.L.extract_subspace(SubspaceName::p_plus).basis)
            dir += rng.complex_normal() * b;
        dir /= d.L.norm(dir);
        double t = 0.5;
        while (t < 100.0 && in_period_domain(d.L, nplus_point(d.L, CMat(t * dir))).in_D)
            t += 0.5;
        if (t < 100.0)
            CHECK_THROWS_AS(group_point_from_filtration(to_hodge_structure(nplus_point(d.L, CMat(t * dir)))),
                            NotInPeriodDomain);
    }
}

TEST_CASE("projection diagram where it holds")
{
    Fixture w1(1, {1, 1});
    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        const CMat g = random_p0_exp(w1.L, rng, 1.2) * random_k(w1.L, rng);
        const auto rep = check_diagram(w1.L, flag_from_group(w1.s, g));
        CHECK(rep.pplus_in_D);
        CHECK(rep.residual < 1e-9);
    }
    // exp(Y) o with Y in p_plus is fixed by the projection.
    Fixture d(2, {2, 1, 2});
    const auto io = iota_hc(d.L, d.rs.frame, std::vector<double>(d.rs.frame.rank(), 0.8));
    CHECK(check_diagram(d.L, nplus_point(d.L, io.Y)).residual < 1e-10);
    // Without a K factor the square also closes on this domain.
    for (int i = 0; i < 5; ++i) {
        const auto rep = check_diagram(d.L, flag_from_group(d.s, random_p0_exp(d.L, rng, 1.0)));
        REQUIRE(rep.pplus_in_D);
        CHECK(rep.residual < 1e-8);
    }
}
