#include <doctest.h>

#include "pdlab/flag.hpp"

using namespace pdlab;

namespace {

// Leading principal minors by Gaussian elimination with partial pivoting inside each minor.
double det_by_elimination(CMat A)
{
    const Eigen::Index n = A.rows();
    cplx det = 1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index p = c;
        for (Eigen::Index r = c + 1; r < n; ++r)
            if (std::abs(A(r, c)) > std::abs(A(p, c)))
                p = r;
        if (A(p, c) == 0.0)
            return 0.0;
        if (p != c) {
            A.row(p).swap(A.row(c));
            det = -det;
        }
        det *= A(c, c);
        for (Eigen::Index r = c + 1; r < n; ++r)
            A.row(r) -= (A(r, c) / A(c, c)) * A.row(c);
    }
    return std::abs(det);
}

bool leading_minors_nonzero(const DomainSpec& s, const CMat& A, double rel)
{
    for (const auto& b : block_partition(s)) {
        if (b.second == b.first)
            continue;
        const CMat M = A.topLeftCorner(b.second, b.second);
        // Hadamard ratio: |det| over the product of column norms.
        double hp = 1.0;
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            hp *= M.col(j).norm();
        if (det_by_elimination(M) <= rel * hp)
            return false;
    }
    return true;
}

CMat random_block_upper(const DomainSpec& s, Rng& rng)
{
    const int m = s.dim();
    CMat U = CMat::Zero(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            if (s.column_type(i) >= s.column_type(j))
                U(i, j) = rng.complex_normal();
    U += 3.0 * CMat::Identity(m, m);
    return U;
}

CMat random_nplus(const GradedLieAlgebra& L, Rng& rng, double scale)
{
    CMat X = CMat::Zero(L.spec().dim(), L.spec().dim());
    for (const auto& b : L.extract_subspace(SubspaceName::n_plus).basis)
        X += scale * rng.complex_normal() * b;
    return X;
}

}  // namespace

TEST_CASE("block partition")
{
    using P = std::vector<std::pair<int, int>>;
    CHECK(block_partition(build_domain_spec(2, {1, 19, 1})) == P{{0, 1}, {1, 20}, {20, 21}});
    CHECK(block_partition(build_domain_spec(1, {1, 1})) == P{{0, 1}, {1, 2}});
    CHECK(block_partition(build_domain_spec(2, {2, 1, 2})) == P{{0, 2}, {2, 3}, {3, 5}});
}

TEST_CASE("weight 1 membership examples")
{
    const auto s = build_domain_spec(1, {1, 1});
    GradedLieAlgebra L(s);
    {
        const auto r = nplus_membership_lu(base_point(s));
        REQUIRE(r.lu);
        CHECK((r.lu->L - CMat::Identity(2, 2)).norm() == 0.0);
        CHECK((r.lu->U - CMat::Identity(2, 2)).norm() == 0.0);
        CHECK(nplus_coordinates(L, base_point(s)).norm() == 0.0);
    }
    {
        CMat g(2, 2);
        g << 0.0, 1.0, -1.0, 0.0;
        const auto r = nplus_membership_lu({s, g});
        CHECK(r.status == Membership::not_in_nplus);
        CHECK(r.min_abs_minor == 0.0);
        CHECK_FALSE(r.lu);
        CHECK_THROWS_AS(nplus_log(L, {s, g}), NotInNplus);
    }
    {
        const cplx tau(0.3, -0.2);
        CMat g(2, 2);
        g << 1.0, 0.0, tau, 1.0;
        const auto r = nplus_membership_lu({s, g});
        REQUIRE(r.lu);
        CHECK((r.lu->L - g).norm() < 1e-15);
        CHECK((r.lu->U - CMat::Identity(2, 2)).norm() < 1e-15);
        CMat e = CMat::Zero(2, 2);
        e(1, 0) = 1.0;
        CHECK((r.lu->log_L - tau * e).norm() < 1e-15);
        // The single n_plus coordinate reproduces tau e.
        const CVec c = nplus_coordinates(L, {s, g});
        REQUIRE(c.size() == 1);
        const CMat& b = L.basis()[L.indices_of_grade(-1)[0]];
        CHECK((L.to_adapted(CMat(c(0) * b)) - tau * e).norm() < 1e-14);
    }
}

TEST_CASE("borderline band is reported separately")
{
    const auto s = build_domain_spec(1, {1, 1});
    CMat g(2, 2);
    g << 1e-8, 1.0, -1.0, 0.0;
    const auto r = nplus_membership_lu({s, g});
    CHECK(r.status == Membership::borderline);
    CHECK(r.lu);
    g(0, 0) = 1e-12;
    CHECK(nplus_membership_lu({s, g}).status == Membership::not_in_nplus);
}

TEST_CASE("factorization: reconstruction, representative independence, exp/log")
{
    for (auto [n, h] : std::vector<std::pair<int, std::vector<int>>>{{1, {2, 2}}, {2, {2, 1, 2}}, {2, {1, 3, 1}}}) {
        const auto s = build_domain_spec(n, h);
        GradedLieAlgebra L(s);
        Rng rng(21);
        for (int t = 0; t < 10; ++t) {
            const CMat X = random_nplus(L, rng, 0.7);
            const FlagPoint pt = nplus_point(L, X);
            // log(exp X) = X.
            CHECK((nplus_log(L, pt) - X).norm() < 1e-12 * (1.0 + X.norm()));
            CHECK((exp_nilpotent(log_unipotent(pt.matrix)) - pt.matrix).norm() < 1e-12 * pt.matrix.norm());

            const CMat U = random_block_upper(s, rng);
            const FlagPoint moved{s, pt.matrix * U};
            const auto r = nplus_membership_lu(moved);
            REQUIRE(r.lu);
            CHECK((r.lu->L * r.lu->U - moved.matrix).norm() < 1e-10 * moved.matrix.norm());
            CHECK((r.lu->L - pt.matrix).norm() < 1e-10 * pt.matrix.norm());
            CHECK((nplus_coordinates(L, moved) - nplus_coordinates(L, pt)).norm() < 1e-9);
        }
    }
}

TEST_CASE("membership agrees with a leading-minor determinant check")
{
    for (auto [n, h] : std::vector<std::pair<int, std::vector<int>>>{{1, {1, 1}}, {2, {2, 1, 2}}, {2, {1, 3, 1}}}) {
        const auto s = build_domain_spec(n, h);
        Rng rng(33);
        const int m = s.dim();
        int agree = 0, total = 0;
        for (int t = 0; t < 200; ++t) {
            CMat A(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    A(i, j) = rng.complex_normal();
            if (t % 2) {
                // Kill a leading minor: swap a column of the first block with a later one.
                const int j = static_cast<int>(rng.next_u64() % m);
                A.col(0).swap(A.col(j));
                A.col(0) *= 0.0;
                A.col(0)(m - 1) = 1.0;
            }
            const auto r = nplus_membership_lu({s, A});
            if (r.status == Membership::borderline)
                continue;
            ++total;
            agree += (r.status == Membership::in_nplus) == leading_minors_nonzero(s, A, 1e-8) ? 1 : 0;
        }
        CHECK(agree == total);
    }
}

TEST_CASE("period domain membership")
{
    const auto s = build_domain_spec(1, {1, 1});
    GradedLieAlgebra L(s);
    CHECK(in_period_domain(L, base_point(s)).in_D);
    for (double r : {0.0, 0.5, 0.9}) {
        CMat g(2, 2);
        g << 1.0, 0.0, std::polar(r, 0.4), 1.0;
        CHECK(in_period_domain(L, {s, g}).in_D);
    }
    CMat g(2, 2);
    g << 1.0, 0.0, 1.1, 1.0;
    CHECK_FALSE(in_period_domain(L, {s, g}).in_D);

    // The disc, on a grid.
    const CMat& b = L.basis()[L.indices_of_grade(-1)[0]];
    const cplx unit = L.to_adapted(b)(1, 0);
    int mismatches = 0;
    for (int i = -15; i <= 15; ++i)
        for (int j = -15; j <= 15; ++j) {
            const cplx tau(0.1 * i, 0.1 * j);
            if (std::abs(std::abs(tau) - 1.0) < 1e-6)
                continue;
            const auto rep = in_period_domain(L, nplus_point(L, CMat(tau / unit * b)));
            mismatches += rep.in_D != (std::abs(tau) < 1.0) ? 1 : 0;
        }
    CHECK(mismatches == 0);

    for (auto [n, h] : std::vector<std::pair<int, std::vector<int>>>{{1, {2, 2}}, {2, {1, 3, 1}}, {2, {2, 1, 2}}, {2, {1, 19, 1}}})
        CHECK(in_period_domain(GradedLieAlgebra(build_domain_spec(n, h)), base_point(build_domain_spec(n, h))).in_D);

    const auto s2 = build_domain_spec(2, {1, 3, 1});
    GradedLieAlgebra L2(s2);
    Rng rng(4);
    CMat X = random_nplus(L2, rng, 1.0);
    X *= 10.0 / L2.norm(X);
    CHECK_FALSE(in_period_domain(L2, nplus_point(L2, X)).in_D);
}

TEST_CASE("projectors")
{
    GradedLieAlgebra w1(build_domain_spec(1, {1, 1}));
    Rng rng(8);
    const CMat X1 = random_nplus(w1, rng, 1.0);
    const auto P1 = Projector::p_plus(w1);
    CHECK((P1.apply(X1) - X1).norm() < 1e-14);

    GradedLieAlgebra L(build_domain_spec(2, {2, 1, 2}));
    const auto P = Projector::p_plus(L);
    CHECK(P.dim() == 2);
    const CMat X = random_nplus(L, rng, 1.0);
    const CMat odd = L.grade_component(X, -1);
    CHECK((P.apply(X) - odd).norm() < 1e-12);
    CHECK((P.apply(P.apply(X)) - P.apply(X)).norm() < 1e-12);
    const FlagPoint pt = nplus_point(L, X);
    const FlagPoint once = P.apply_group(pt);
    CHECK((P.apply_group(once).matrix - once.matrix).norm() < 1e-12);

    // Custom subspaces must be abelian and inside g^{-1,1}.
    const auto u = L.indices_of_grade(-1);
    CHECK_THROWS_AS(Projector::custom(L, {L.basis()[u[0]], L.basis()[u[1]]}), InvalidSpec);
    CHECK_THROWS_AS(Projector::custom(L, {L.basis()[L.indices_of_grade(-2)[0]]}), InvalidSpec);
    const auto a = Projector::custom(L, {CMat(2.0 * L.basis()[u[0]])});
    CHECK(a.dim() == 1);
    CHECK((a.apply(L.basis()[u[0]]) - L.basis()[u[0]]).norm() < 1e-12);
}
