#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pdlab/vhs.hpp"

using namespace pdlab;

namespace {

struct Fixture {
    DomainSpec s;
    GradedLieAlgebra L;
    RootSystem rs;
    Fixture(int n, std::vector<int> h) : s(build_domain_spec(n, h)), L(s), rs(compute_root_system(L, 1)) {}
};

}  // namespace

TEST_CASE("abelian horizontal family")
{
    Fixture d(1, {2, 2});
    const auto fam = build_family(d.L, 3, 7);
    REQUIRE(fam.dim() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK((fam.frame[i] - d.L.grade_component(fam.frame[i], -1)).norm() < 1e-12);
        CHECK(d.L.norm(fam.frame[i]) == doctest::Approx(1.0).epsilon(1e-10));
        for (int j = i + 1; j < 3; ++j) {
            CHECK(bracket(fam.frame[i], fam.frame[j]).norm() < 1e-10);
            CHECK(std::abs(d.L.inner(fam.frame[i], fam.frame[j])) < 1e-10);
        }
    }
    CHECK(fam.chart_radius > 0.0);
    CHECK_THROWS_AS(build_family(d.L, 4, 7), InvalidSpec);

    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        CVec q(3);
        for (int k = 0; k < 3; ++k)
            q(k) = std::polar(fam.chart_radius * rng.uniform(), 6.28 * rng.uniform());
        CHECK(in_period_domain(d.L, family_point(d.L, fam, q)).in_D);
        const auto r = psi_affine(d.L, fam, q);
        CHECK(r.reproduction_error < 1e-10);
        CHECK(r.sv_min > 0.9);
        CHECK(r.singular_values(0) < 1.1);
    }
}

TEST_CASE("weight 1 paths stay in the disc")
{
    Fixture w1(1, {1, 1});
    PathOptions po;
    po.steps = 300;
    const auto tr = horizontal_path(w1.L, w1.rs.frame, po);
    CHECK(tr.accepted_steps == 300);
    CHECK_FALSE(tr.truncated);
    for (const auto& ps : tr.samples)
        CHECK(ps.pplus_dist < 1.0);
    CHECK(tr.max_horiz_defect < 1e-12);
}

TEST_CASE("constant field follows tanh")
{
    Fixture w1(1, {1, 1});
    PathOptions po;
    po.field = FieldKind::constant;
    po.steps = 200;
    const auto tr = horizontal_path(w1.L, w1.rs.frame, po);
    REQUIRE(tr.samples.size() > 10);
    const auto& ref = tr.samples[10];
    const double kappa = std::atanh(ref.pplus_dist) / ref.t;
    for (const auto& ps : tr.samples)
        CHECK(ps.pplus_dist == doctest::Approx(std::tanh(kappa * ps.t)).epsilon(1e-8));
}

TEST_CASE("zero field stays at the base point")
{
    Fixture d(2, {1, 3, 1});
    PathOptions po;
    po.field = FieldKind::zero;
    po.steps = 20;
    const auto tr = horizontal_path(d.L, d.rs.frame, po);
    for (const auto& ps : tr.samples) {
        CHECK(ps.coords.norm() == 0.0);
        CHECK(ps.pplus_dist == 0.0);
    }
    const auto b = boundedness_report(tr, d.rs.frame.rank());
    CHECK(b.max_lambda_dist == 0.0);
    CHECK(b.all_within);
}

TEST_CASE("smooth traces on a rank two domain respect the bound")
{
    Fixture d(2, {1, 3, 1});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        PathOptions po;
        po.seed = seed;
        po.steps = 300;
        const auto tr = horizontal_path(d.L, d.rs.frame, po);
        const auto b = boundedness_report(tr, d.rs.frame.rank());
        CHECK(b.sqrt_r == doctest::Approx(std::sqrt(2.0)));
        CHECK(b.all_within);
        CHECK(b.max_lambda_dist <= std::sqrt(2.0));
        CHECK(tr.max_horiz_defect < 1e-6 * po.step_size);
        for (const auto& ps : tr.samples) {
            CHECK(ps.min_eig > 0.0);
            CHECK(ps.min_minor > d.L.tolerances().minor_borderline);
        }
    }
}

TEST_CASE("trace CSV layout")
{
    Fixture w1(1, {1, 1});
    PathOptions po;
    po.steps = 3;
    const auto csv = trace_to_csv(horizontal_path(w1.L, w1.rs.frame, po));
    CHECK(csv.rfind("t,coord_0_re,coord_0_im,min_minor,min_eig,pplus_dist,psi_0_re,psi_0_im,sv_min\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK_THROWS_AS(parse_field_kind("wavy"), InvalidSpec);
}
