#include "pdlab/hc.hpp"

#include <cmath>
#include <limits>

namespace pdlab {

namespace {

cplx ipow(int k)
{
    switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

}  // namespace

SL2Factors sl2_factorization(const SOFrame& frame, int i, cplx z)
{
    if (i < 0 || i >= frame.rank())
        throw InvalidSpec("triple index out of range");
    const CMat& e = frame.e[i];
    const CMat& f = frame.f[i];
    const CMat& h = frame.h[i];
    const Eigen::Index m = e.rows();
    SL2Factors out;
    const double r = std::abs(z);
    if (r == 0.0) {
        out.upper = out.middle = out.lower = out.product = out.target = CMat::Identity(m, m);
        out.w = 0.0;
        return out;
    }
    out.w = z / r * std::tanh(r);
    out.upper = expm(CMat(out.w * e));
    out.middle = expm(CMat(-std::log(std::cosh(r)) * h));
    out.lower = expm(CMat(std::conj(out.w) * f));
    out.product = out.upper * out.middle * out.lower;
    out.target = expm(CMat(z * e + std::conj(z) * f));
    out.residual = (out.product - out.target).norm() / out.target.norm();
    return out;
}

double k_membership_residual(const DomainSpec& spec, const CMat& k)
{
    const CMat& Q = spec.Q();
    const Eigen::Index m = k.rows();
    double r = (k.transpose() * Q * k - Q).norm();
    r = std::max(r, (k.adjoint() * k - CMat::Identity(m, m)).norm());
    r = std::max(r, k.imag().norm());
    return r;
}

CMat random_k(const GradedLieAlgebra& L, Rng& rng, double scale)
{
    return random_k(L.extract_subspace(SubspaceName::k0).basis, rng, scale);
}

CMat random_k(const std::vector<CMat>& k0_basis, Rng& rng, double scale)
{
    if (k0_basis.empty())
        throw InvalidSpec("empty k0 basis");
    CMat X = CMat::Zero(k0_basis[0].rows(), k0_basis[0].cols());
    for (const auto& b : k0_basis)
        X += scale * rng.normal() * b;
    return expm(RMat(X.real())).cast<cplx>();
}

IotaResult iota_hc(const GradedLieAlgebra& L, const SOFrame& frame, const std::vector<double>& t,
                   const CMat* k)
{
    if (static_cast<int>(t.size()) != frame.rank())
        throw InvalidSpec("t has length " + std::to_string(t.size()) + ", frame rank is " +
                          std::to_string(frame.rank()));
    const int m = L.spec().dim();
    CMat kk = CMat::Identity(m, m);
    if (k) {
        const double res = k_membership_residual(L.spec(), *k);
        if (res > 1e-8)
            throw NotInAlgebra("k is not in K (residual " + std::to_string(res) + ")");
        kk = *k;
    }
    const CMat kinv = kk.adjoint();
    IotaResult out;
    out.X = CMat::Zero(m, m);
    out.Y = CMat::Zero(m, m);
    for (int i = 0; i < frame.rank(); ++i) {
        out.X += t[i] * (kinv * frame.x[i] * kk);
        const double c = std::tanh(t[i]);
        out.Y += c * (kinv * frame.e[i] * kk);
        out.lambda_coords.emplace_back(c);
    }
    return out;
}

double flag_distance(const FlagPoint& a, const FlagPoint& b)
{
    const CMat& E = a.spec.reference_basis();
    const CMat A = E * a.matrix;
    const CMat B = E * b.matrix;
    double d = 0.0;
    for (int k = 1; k <= a.spec.weight(); ++k) {
        const int c = a.spec.f(k);
        if (c == 0 || c == a.spec.dim())
            continue;
        d = std::max(d, subspace_distance(A.leftCols(c), B.leftCols(c)));
    }
    return d;
}

CMat group_point_from_filtration(const HodgeStructure& pt, double tol)
{
    const DomainSpec& s = pt.spec();
    const int n = s.weight();
    const int m = s.dim();
    const auto hr = check_hodge_riemann(pt, tol);
    if (!hr.in_D())
        throw NotInPeriodDomain("point is not in the period domain");
    const auto H = hodge_decomposition(pt, tol);
    const CMat& Q = s.Q();
    CMat W = CMat::Zero(m, m);
    for (int p = n; 2 * p > n; --p) {
        const auto [lo, hi] = s.block_range(p);
        if (hi == lo)
            continue;
        const CMat& Hp = H[p];
        CMat G = ipow(2 * p - n) * (Hp.transpose() * Q * Hp.conjugate());
        G = (0.5 * (G + G.adjoint())).eval();
        const CMat Wp = Hp * inv_sqrt_hermitian(G).conjugate();
        const int plo = s.block_range(n - p).first;
        W.middleCols(lo, hi - lo) = Wp;
        W.middleCols(plo, hi - lo) = Wp.conjugate();
    }
    if (n % 2 == 0 && s.hodge(n / 2) > 0) {
        const auto [lo, hi] = s.block_range(n / 2);
        std::vector<CMat> parts;
        for (Eigen::Index j = 0; j < H[n / 2].cols(); ++j) {
            parts.push_back(H[n / 2].col(j).real().cast<cplx>());
            parts.push_back(H[n / 2].col(j).imag().cast<cplx>());
        }
        const auto rb = real_span_basis(parts, 1e-8);
        if (static_cast<int>(rb.size()) != hi - lo)
            throw DecompositionError("middle Hodge piece is not defined over the reals");
        RMat R(m, hi - lo);
        for (int j = 0; j < hi - lo; ++j)
            R.col(j) = rb[j].real();
        RMat G = R.transpose() * Q.real() * R;
        G = (0.5 * (G + G.transpose())).eval();
        Eigen::SelfAdjointEigenSolver<RMat> es(G);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw NotInPeriodDomain("polarization is not positive on the middle piece");
        const RMat Gis = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                         es.eigenvectors().transpose();
        W.middleCols(lo, hi - lo) = (R * Gis).cast<cplx>();
    }
    const CMat g = W * s.reference_basis().adjoint();
    if (g.imag().cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, g.norm()))
        throw NumericalFailure("group element is not real");
    return g.real().cast<cplx>();
}

SymmetricSpacePoint polar_decompose(const CMat& g)
{
    SymmetricSpacePoint out;
    out.g = g;
    CMat U = g;
    for (out.iterations = 1; out.iterations <= 50; ++out.iterations) {
        const CMat next = 0.5 * (U + U.adjoint().inverse());
        out.residual = (next - U).norm() / next.norm();
        U = next;
        if (out.residual <= 1e-12)
            break;
    }
    if (out.residual > 1e-12)
        throw NumericalFailure("polar iteration did not converge (residual " + std::to_string(out.residual) + ")");
    out.k = U;
    CMat P = g * U.adjoint();
    P = (0.5 * (P + P.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(P);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NumericalFailure("polar part is not positive definite");
    out.polar = P;
    out.X = es.eigenvectors() * es.eigenvalues().array().log().matrix().asDiagonal() * es.eigenvectors().adjoint();
    return out;
}

SymmetricSpacePoint project_pi(const HodgeStructure& pt, double tol)
{
    return polar_decompose(group_point_from_filtration(pt, tol));
}

double lambda_unit(const GradedLieAlgebra& L, const SOFrame& frame)
{
    double nu = 0.0;
    for (const auto& e : frame.e)
        nu = std::max(nu, L.norm(e));
    return nu;
}

HCReport hc_report(const GradedLieAlgebra& L, const SOFrame& frame, const CMat& Y)
{
    HCReport rep;
    rep.rank_r = frame.rank();
    const CVec cy = L.coordinates(Y);
    for (const auto& e : frame.e) {
        const CVec ce = L.coordinates(e);
        rep.lambda_coords.push_back(ce.dot(cy) / ce.squaredNorm());
        rep.sup_norm = std::max(rep.sup_norm, std::abs(rep.lambda_coords.back()));
    }
    const double nu = lambda_unit(L, frame);
    rep.euclid_dist = nu > 0 ? cy.norm() / nu : 0.0;
    rep.inside = rep.sup_norm < 1.0;
    return rep;
}

DiagramReport check_diagram(const GradedLieAlgebra& L, const FlagPoint& pt)
{
    DiagramReport rep;
    const auto P = Projector::p_plus(L);
    const FlagPoint pp = P.apply_group(pt);
    const auto dr = in_period_domain(L, pp);
    rep.pplus_in_D = dr.in_D;
    rep.pplus_min_eig = dr.min_eig;
    if (!dr.in_D) {
        rep.residual = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    const auto a = project_pi(to_hodge_structure(pt));
    const auto b = project_pi(to_hodge_structure(pp));
    rep.residual = (a.polar - b.polar).norm() / a.polar.norm();
    return rep;
}

}  // namespace pdlab
