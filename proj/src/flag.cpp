#include "pdlab/flag.hpp"

#include <cmath>

namespace pdlab {

FlagPoint base_point(const DomainSpec& spec)
{
    return {spec, CMat::Identity(spec.dim(), spec.dim())};
}

FlagPoint flag_from_group(const DomainSpec& spec, const CMat& g)
{
    const CMat& E = spec.reference_basis();
    return {spec, E.adjoint() * g * E};
}

HodgeStructure to_hodge_structure(const FlagPoint& pt)
{
    return HodgeStructure(pt.spec, pt.spec.reference_basis() * pt.matrix);
}

const char* to_string(Membership m)
{
    switch (m) {
    case Membership::in_nplus: return "in_nplus";
    case Membership::borderline: return "borderline";
    case Membership::not_in_nplus: return "not_in_nplus";
    }
    return "?";
}

std::vector<std::pair<int, int>> block_partition(const DomainSpec& spec)
{
    const int n = spec.weight();
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a <= n; ++a)
        out.emplace_back(spec.f(n - a + 1), spec.f(n - a));
    return out;
}

namespace {

// Block Doolittle, one block column at a time. Assumes nonsingular leading minors.
std::pair<CMat, CMat> block_doolittle(const DomainSpec& spec, const CMat& A)
{
    const int m = spec.dim();
    std::vector<std::pair<int, int>> blocks;
    for (const auto& b : block_partition(spec))
        if (b.second > b.first)
            blocks.push_back(b);
    const size_t nb = blocks.size();
    CMat Lm = CMat::Identity(m, m);
    CMat Um = CMat::Zero(m, m);
    auto sz = [&](size_t i) { return blocks[i].second - blocks[i].first; };
    auto off = [&](size_t i) { return blocks[i].first; };
    for (size_t j = 0; j < nb; ++j) {
        for (size_t i = 0; i <= j; ++i) {
            CMat acc = A.block(off(i), off(j), sz(i), sz(j));
            for (size_t k = 0; k < i; ++k)
                acc -= Lm.block(off(i), off(k), sz(i), sz(k)) * Um.block(off(k), off(j), sz(k), sz(j));
            Um.block(off(i), off(j), sz(i), sz(j)) = acc;
        }
        const CMat Ujj = Um.block(off(j), off(j), sz(j), sz(j));
        const Eigen::PartialPivLU<CMat> lut(CMat(Ujj.transpose()));
        for (size_t i = j + 1; i < nb; ++i) {
            CMat acc = A.block(off(i), off(j), sz(i), sz(j));
            for (size_t k = 0; k < j; ++k)
                acc -= Lm.block(off(i), off(k), sz(i), sz(k)) * Um.block(off(k), off(j), sz(k), sz(j));
            // acc * Ujj^{-1}
            Lm.block(off(i), off(j), sz(i), sz(j)) = lut.solve(CMat(acc.transpose())).transpose();
        }
    }
    return {Lm, Um};
}

}  // namespace

MembershipResult nplus_membership_lu(const FlagPoint& pt, const Tolerances& tol)
{
    const CMat& A = pt.matrix;
    const int m = pt.spec.dim();
    if (A.rows() != m || A.cols() != m)
        throw InvalidSpec("flag matrix has wrong size");
    std::vector<std::pair<int, int>> blocks;
    for (const auto& b : block_partition(pt.spec))
        if (b.second > b.first)
            blocks.push_back(b);
    // The last leading minor is A itself.
    Eigen::JacobiSVD<CMat> full_svd(A);
    const RVec& sv = full_svd.singularValues();
    if (sv(0) == 0.0 || sv(m - 1) / sv(0) <= tol.minor_singular)
        throw SingularBasis("flag matrix is singular");

    // Smallest singular value of the leading s x s minor relative to the first s
    // columns, so a 1 x 1 minor is measured against its column too.
    MembershipResult res;
    res.min_abs_minor = 1.0;
    for (size_t k = 0; k < blocks.size(); ++k) {
        const int s = blocks[k].second;
        double ic = 0.0;
        if (s == m) {
            ic = sv(m - 1) / A.norm();
        } else {
            Eigen::JacobiSVD<CMat> svd(A.topLeftCorner(s, s));
            ic = svd.singularValues()(s - 1) / A.leftCols(s).norm();
        }
        if (ic < res.min_abs_minor) {
            res.min_abs_minor = ic;
            res.failing_block = static_cast<int>(k);
        }
    }
    if (res.min_abs_minor < tol.minor_singular) {
        res.status = Membership::not_in_nplus;
        return res;
    }
    res.status = res.min_abs_minor <= tol.minor_borderline ? Membership::borderline : Membership::in_nplus;
    if (res.status == Membership::in_nplus)
        res.failing_block = -1;

    auto [Lm, Um] = block_doolittle(pt.spec, A);
    BlockLU out;
    out.log_L = log_unipotent(Lm);
    out.L = std::move(Lm);
    out.U = std::move(Um);
    res.lu = std::move(out);
    return res;
}

CMat nplus_factor_unchecked(const FlagPoint& pt) { return block_doolittle(pt.spec, pt.matrix).first; }

CMat nplus_log(const GradedLieAlgebra& L, const FlagPoint& pt)
{
    const auto r = nplus_membership_lu(pt, L.tolerances());
    if (!r.lu)
        throw NotInNplus("point is not in the big cell (min minor " + std::to_string(r.min_abs_minor) + ")");
    return L.from_adapted(r.lu->log_L);
}

CVec nplus_coordinates(const GradedLieAlgebra& L, const FlagPoint& pt)
{
    const CVec c = L.coordinates(nplus_log(L, pt));
    std::vector<int> idx;
    for (int i = 0; i < L.dim(); ++i)
        if (L.grades()[i] < 0)
            idx.push_back(i);
    CVec out(static_cast<Eigen::Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j)
        out(static_cast<Eigen::Index>(j)) = c(idx[j]);
    return out;
}

FlagPoint nplus_point(const GradedLieAlgebra& L, const CMat& X)
{
    return {L.spec(), exp_nilpotent(L.to_adapted(X))};
}

DomainReport in_period_domain(const GradedLieAlgebra& L, const FlagPoint& pt)
{
    DomainReport rep;
    const auto r = nplus_membership_lu(pt, L.tolerances());
    rep.status = r.status;
    rep.min_abs_minor = r.min_abs_minor;
    rep.in_nplus = r.status == Membership::in_nplus;
    CMat rep_matrix = pt.matrix;
    if (r.lu) {
        rep_matrix = r.lu->L;
        const CVec c = L.coordinates(L.from_adapted(r.lu->log_L));
        std::vector<cplx> coords;
        for (int i = 0; i < L.dim(); ++i)
            if (L.grades()[i] < 0)
                coords.push_back(c(i));
        rep.nplus_coords = Eigen::Map<CVec>(coords.data(), static_cast<Eigen::Index>(coords.size()));
    }
    const HodgeStructure hs(pt.spec, pt.spec.reference_basis() * rep_matrix);
    const auto hr = check_hodge_riemann(hs, L.tolerances().rank);
    rep.in_D = hr.in_D();
    rep.min_eig = hr.min_eigenvalue;
    return rep;
}

Projector Projector::p_plus(const GradedLieAlgebra& L)
{
    Projector P;
    P.L_ = &L;
    std::vector<int> idx;
    for (int i = 0; i < L.dim(); ++i)
        if (L.grades()[i] < 0 && L.grades()[i] % 2 != 0)
            idx.push_back(i);
    P.coord_rows_ = CMat::Zero(static_cast<Eigen::Index>(idx.size()), L.dim());
    for (size_t j = 0; j < idx.size(); ++j) {
        P.basis_.push_back(L.basis()[idx[j]]);
        P.coord_rows_(static_cast<Eigen::Index>(j), idx[j]) = 1.0;
    }
    return P;
}

Projector Projector::custom(const GradedLieAlgebra& L, const std::vector<CMat>& a)
{
    const double tol = L.tolerances().algebra;
    for (const auto& x : a) {
        L.require_member(x);
        if ((x - L.grade_component(x, -1)).norm() > tol * x.norm())
            throw InvalidSpec("custom subspace is not inside g^{-1,1}");
    }
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (bracket(a[i], a[j]).norm() > tol * std::max(1.0, a[i].norm() * a[j].norm()))
                throw InvalidSpec("custom subspace is not abelian");
    CMat C(L.dim(), static_cast<Eigen::Index>(a.size()));
    for (size_t j = 0; j < a.size(); ++j)
        C.col(static_cast<Eigen::Index>(j)) = L.coordinates(a[j]);
    const CMat O = orth(C, L.tolerances().rank);
    if (O.cols() != C.cols())
        throw InvalidSpec("custom subspace frame is degenerate");
    Projector P;
    P.L_ = &L;
    P.coord_rows_ = O.adjoint();
    for (Eigen::Index j = 0; j < O.cols(); ++j)
        P.basis_.push_back(L.from_coordinates(O.col(j)));
    return P;
}

CVec Projector::coordinates(const CMat& X) const { return coord_rows_ * L_->coordinates(X); }

CMat Projector::apply(const CMat& X) const
{
    const CVec c = coordinates(X);
    CMat Y = CMat::Zero(X.rows(), X.cols());
    for (int j = 0; j < dim(); ++j)
        Y += c(j) * basis_[j];
    return Y;
}

FlagPoint Projector::apply_group(const FlagPoint& pt) const
{
    return nplus_point(*L_, apply(nplus_log(*L_, pt)));
}

}  // namespace pdlab
