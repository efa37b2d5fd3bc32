#include <doctest.h>

#include "pdlab/roots.hpp"

using namespace pdlab;

namespace {

const std::vector<std::pair<int, std::vector<int>>> kDomains{
    {1, {1, 1}}, {1, {2, 2}}, {2, {1, 1, 1}}, {2, {1, 3, 1}}, {2, {2, 1, 2}}};

// Real rank of G_R: min(p, q) for SO(p, q) read off the signature of Q, m/2 for Sp(m).
int real_rank_oracle(const DomainSpec& s)
{
    if (s.weight() % 2)
        return s.dim() / 2;
    Eigen::SelfAdjointEigenSolver<RMat> es(s.Q().real());
    int pos = 0;
    for (int i = 0; i < s.dim(); ++i)
        pos += es.eigenvalues()(i) > 0 ? 1 : 0;
    return std::min(pos, s.dim() - pos);
}

// Largest set of positive noncompact roots whose x_phi pairwise commute, by exhaustive search.
int brute_force_commuting(const RootDatum& rd)
{
    std::vector<CMat> xs;
    for (const auto& r : rd.roots)
        if (r.positive && !r.compact)
            xs.push_back(r.vector + rd.roots[r.negative].vector);
    const int k = static_cast<int>(xs.size());
    REQUIRE(k <= 20);
    int best = 0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size <= best)
            continue;
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1))
                    ok = bracket(xs[i], xs[j]).norm() < 1e-9 * xs[i].norm() * xs[j].norm();
        if (ok)
            best = size;
    }
    return best;
}

}  // namespace

TEST_CASE("root counts and Cartan rank")
{
    for (auto [n, h] : kDomains) {
        GradedLieAlgebra L(build_domain_spec(n, h));
        const auto rs = compute_root_system(L, 1);
        const int l = static_cast<int>(rs.datum.cartan.size());
        CHECK(l == L.spec().dim() / 2);
        CHECK(centralizer_dim(L, rs.datum.cartan) == l);
        CHECK(static_cast<int>(rs.datum.roots.size()) == L.dim() - l);
    }
    GradedLieAlgebra w1(build_domain_spec(1, {1, 1}));
    CHECK(compute_root_system(w1).datum.roots.size() == 2);
    GradedLieAlgebra b2(build_domain_spec(2, {2, 1, 2}));
    CHECK(compute_root_system(b2).datum.roots.size() == 8);
}

TEST_CASE("root vectors: eigen relation, purity, sl2 and conjugation")
{
    for (auto [n, h] : kDomains) {
        GradedLieAlgebra L(build_domain_spec(n, h));
        const auto rs = compute_root_system(L, 2);
        const auto& rd = rs.datum;
        int npos = 0, noncompact = 0;
        for (const auto& r : rd.roots) {
            const CMat& e = r.vector;
            for (size_t i = 0; i < rd.cartan.size(); ++i)
                CHECK((bracket(rd.cartan[i], e) - r.values(static_cast<Eigen::Index>(i)) * e).norm() < 1e-9 * e.norm());
            CHECK((e - L.grade_component(e, r.grade)).norm() < 1e-9 * e.norm());
            CHECK(r.compact == (r.grade % 2 == 0));
            // Delta = -Delta.
            REQUIRE(r.negative >= 0);
            CHECK((rd.roots[r.negative].values + r.values).norm() < 1e-6);
            const CMat& f = rd.roots[r.negative].vector;
            const CMat& hh = r.coroot;
            CHECK((bracket(hh, e) - 2.0 * e).norm() < 1e-10 * e.norm());
            CHECK((bracket(hh, f) + 2.0 * f).norm() < 1e-10 * f.norm());
            CHECK((bracket(e, f) - hh).norm() < 1e-10 * hh.norm());
            CHECK(std::abs(evaluate_root(L, r, hh) - 2.0) < 1e-10);
            // conj(e_phi) = -e_{-phi} for compact, +e_{-phi} for noncompact.
            const double sign = r.compact ? -1.0 : 1.0;
            CHECK((CMat(e.conjugate()) - sign * f).norm() < 1e-10 * e.norm());
            if (!r.compact)
                CHECK(CMat(e + f).imag().norm() < 1e-10 * e.norm());
            npos += r.positive ? 1 : 0;
            noncompact += r.compact ? 0 : 1;
        }
        CHECK(2 * npos == static_cast<int>(rd.roots.size()));
        int dim_p = 0;
        for (int k = -n; k <= n; ++k)
            if (k % 2)
                dim_p += L.grade_dim(k);
        CHECK(noncompact == dim_p);
    }
}

TEST_CASE("weight 1, h = (1,1): the positive root is noncompact")
{
    GradedLieAlgebra L(build_domain_spec(1, {1, 1}));
    const auto rs = compute_root_system(L);
    for (const auto& r : rs.datum.roots)
        if (r.positive)
            CHECK_FALSE(r.compact);
}

TEST_CASE("strongly orthogonal frame: rank against oracles")
{
    const std::vector<int> expected{1, 2, 1, 2, 1};
    for (size_t d = 0; d < kDomains.size(); ++d) {
        auto [n, h] = kDomains[d];
        GradedLieAlgebra L(build_domain_spec(n, h));
        const auto rs = compute_root_system(L, 3);
        const auto& fr = rs.frame;
        CAPTURE(d);
        CHECK(fr.rank() == expected[d]);
        CHECK(fr.rank() == real_rank_oracle(L.spec()));
        CHECK(fr.rank() == brute_force_commuting(rs.datum));
        CHECK(fr.centralizer_dim == fr.rank());
        for (int i = 0; i < fr.rank(); ++i) {
            CHECK(fr.grades[i] < 0);
            CHECK((L.grade_component(fr.e[i], fr.grades[i]) - fr.e[i]).norm() < 1e-10 * fr.e[i].norm());
            CHECK((fr.x[i] - (fr.e[i] + fr.f[i])).norm() < 1e-12 * fr.x[i].norm());
            CHECK((fr.y[i] - kI * (fr.e[i] - fr.f[i])).norm() < 1e-12 * fr.y[i].norm());
            for (int j = 0; j < fr.rank(); ++j) {
                if (i == j)
                    continue;
                CHECK(bracket(fr.e[i], fr.e[j]).norm() < 1e-10);
                CHECK(bracket(fr.e[i], fr.f[j]).norm() < 1e-10);
                CHECK(bracket(fr.h[i], fr.h[j]).norm() < 1e-10);
                const RVec& a = rs.datum.roots[fr.lambda[i]].values;
                const RVec& b = rs.datum.roots[fr.lambda[j]].values;
                CHECK(find_root(rs.datum, a + b, 1e-5) < 0);
                CHECK(find_root(rs.datum, a - b, 1e-5) < 0);
            }
        }
    }
}

TEST_CASE("frame rank does not depend on the seed")
{
    GradedLieAlgebra L(build_domain_spec(2, {1, 3, 1}));
    for (std::uint64_t seed : {1u, 17u, 123u})
        CHECK(compute_root_system(L, seed).frame.rank() == 2);
}

TEST_CASE("lexicographic order")
{
    RVec a(3), b(3);
    a << 0.0, 1.0, -5.0;
    b << 0.0, -1.0, 5.0;
    CHECK(lex_positive(a, 1e-9));
    CHECK_FALSE(lex_positive(b, 1e-9));
}
