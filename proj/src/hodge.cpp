#include "pdlab/hodge.hpp"

#include <cmath>
#include <string>

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

int sign_pow(int k) { return (((k % 2) + 2) % 2 == 0) ? 1 : -1; }

}  // namespace

int DomainSpec::hodge(int p) const
{
    if (p < 0 || p > n_)
        return 0;
    return h_[n_ - p];
}

int DomainSpec::f(int k) const
{
    if (k <= 0)
        return m_;
    if (k > n_)
        return 0;
    return f_[k];
}

std::vector<int> DomainSpec::filtration_ranks() const { return f_; }

std::pair<int, int> DomainSpec::block_range(int p) const { return {f(p + 1), f(p)}; }

int DomainSpec::column_type(int col) const
{
    for (int p = n_; p >= 0; --p)
        if (col < f(p))
            return p;
    return -1;
}

DomainSpec build_domain_spec(int weight, const std::vector<int>& hodge_numbers)
{
    if (weight < 0)
        throw InvalidSpec("weight must be nonnegative");
    if (static_cast<int>(hodge_numbers.size()) != weight + 1)
        throw InvalidSpec("expected " + std::to_string(weight + 1) + " Hodge numbers, got " +
                          std::to_string(hodge_numbers.size()));
    int m = 0;
    for (int i = 0; i <= weight; ++i) {
        if (hodge_numbers[i] < 0)
            throw InvalidSpec("negative Hodge number");
        if (hodge_numbers[i] != hodge_numbers[weight - i])
            throw InvalidSpec("Hodge numbers are not symmetric");
        m += hodge_numbers[i];
    }
    if (m == 0)
        throw InvalidSpec("zero total dimension");
    if (m < 2)
        throw InvalidSpec("total dimension must be at least 2");

    DomainSpec s;
    s.n_ = weight;
    s.m_ = m;
    s.h_ = hodge_numbers;
    s.f_.assign(weight + 2, 0);
    s.f_[weight + 1] = 0;
    for (int k = weight; k >= 0; --k)
        s.f_[k] = s.f_[k + 1] + hodge_numbers[weight - k];

    const int n = weight;
    const double r = 1.0 / std::sqrt(2.0);
    RMat Q = RMat::Zero(m, m);
    s.E_ = CMat::Zero(m, m);
    s.partner_.assign(m, -1);
    for (int p = n; 2 * p >= n; --p) {
        const auto [lo, hi] = s.block_range(p);
        if (2 * p == n) {
            for (int c = lo; c < hi; ++c) {
                s.E_(c, c) = 1.0;
                s.partner_[c] = c;
                Q(c, c) = 1.0;
            }
            continue;
        }
        const int plo = s.block_range(n - p).first;
        for (int j = 0; j < hi - lo; ++j) {
            const int a = lo + j;
            const int b = plo + j;
            s.E_(a, a) = r;
            s.E_(b, a) = cplx(0, r);
            s.E_(a, b) = r;
            s.E_(b, b) = cplx(0, -r);
            s.partner_[a] = b;
            s.partner_[b] = a;
            // Chosen so that Q(v, conj v) = i^{n-2p} on v = (e_a + i e_b)/sqrt2,
            // which makes the base Hermitian form the identity.
            if (n % 2 == 0) {
                Q(a, a) = Q(b, b) = sign_pow(n / 2 - p);
            } else {
                Q(b, a) = sign_pow((n - 2 * p - 1) / 2);
                Q(a, b) = -Q(b, a);
            }
        }
    }
    s.Q_ = Q.cast<cplx>();
    return s;
}

DomainSpec domain_spec_from_parts(int weight, const std::vector<int>& hodge_numbers, const CMat& Q)
{
    DomainSpec s = build_domain_spec(weight, hodge_numbers);
    if (Q.rows() != s.dim() || Q.cols() != s.dim())
        throw InvalidSpec("polarization has wrong size");
    if (Q.imag().cwiseAbs().maxCoeff() > 0.0)
        throw InvalidSpec("polarization must be real");
    if ((Q - s.Q()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidSpec("polarization differs from the canonical form for these Hodge numbers");
    return s;
}

HodgeStructure::HodgeStructure(DomainSpec spec, CMat basis, double rank_tol)
    : spec_(std::move(spec)), basis_(std::move(basis))
{
    if (basis_.rows() != spec_.dim() || basis_.cols() != spec_.dim())
        throw InvalidSpec("basis matrix has wrong size");
    if (!basis_.allFinite())
        throw SingularBasis("basis matrix has non-finite entries");
    if (inverse_condition(basis_) <= rank_tol)
        throw SingularBasis("basis matrix is singular");
}

CMat HodgeStructure::filtration(int k) const { return basis_.leftCols(spec_.f(k)); }

HodgeStructure reference_structure(const DomainSpec& spec)
{
    return HodgeStructure(spec, spec.reference_basis());
}

HodgeRiemannReport check_hodge_riemann(const HodgeStructure& hs, double tol)
{
    const DomainSpec& s = hs.spec();
    const int n = s.weight();
    const CMat& B = hs.basis();
    const CMat& Q = s.Q();
    HodgeRiemannReport rep;
    rep.in_compact_dual_ok = true;

    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
        const int a = s.f(i);
        const int b = s.f(n - i + 1);
        if (a == 0 || b == 0)
            continue;
        const CMat Fa = B.leftCols(a);
        const CMat Fb = B.leftCols(b);
        const CMat R = Fa.transpose() * Q * Fb;
        const double scale = Fa.norm() * Fb.norm();
        worst = std::max(worst, R.norm() / scale);
    }
    rep.hr1_residual = worst;
    rep.hr1 = worst <= tol;
    rep.in_compact_dual_ok = rep.hr1;

    // sigma(x, y) = x^* Hm y is the form S(y, x) = i^{-n} Q(y, conj x).
    const CMat Hm = ipow(-n) * Q.transpose();
    double min_raw = std::numeric_limits<double>::infinity();
    double min_rel = std::numeric_limits<double>::infinity();
    for (int p = n; p >= 0; --p) {
        const auto [lo, hi] = s.block_range(p);
        if (hi == lo)
            continue;
        CMat W = B.middleCols(lo, hi - lo);
        if (lo > 0) {
            const CMat A = B.leftCols(lo);
            const CMat G = A.adjoint() * Hm * A;
            Eigen::FullPivLU<CMat> lu(G);
            if (inverse_condition(G) <= tol) {
                min_raw = std::min(min_raw, 0.0);
                min_rel = std::min(min_rel, 0.0);
                continue;
            }
            W -= A * lu.solve(CMat(A.adjoint() * Hm * W));
        }
        CMat M = (sign_pow(p) * (W.adjoint() * Hm * W)).eval();
        M = (0.5 * (M + M.adjoint())).eval();
        CMat Ge = W.adjoint() * W;
        Ge = (0.5 * (Ge + Ge.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<CMat> raw(M, Eigen::EigenvaluesOnly);
        min_raw = std::min(min_raw, raw.eigenvalues()(0));
        Eigen::GeneralizedSelfAdjointEigenSolver<CMat> rel(M, Ge, Eigen::EigenvaluesOnly);
        if (rel.info() != Eigen::Success) {
            min_rel = std::min(min_rel, 0.0);
            continue;
        }
        min_rel = std::min(min_rel, rel.eigenvalues()(0));
    }
    rep.min_eigenvalue = min_raw;
    rep.hr2 = min_rel > tol;
    return rep;
}

std::vector<CMat> hodge_decomposition(const HodgeStructure& hs, double tol)
{
    const DomainSpec& s = hs.spec();
    const int n = s.weight();
    const int m = s.dim();
    std::vector<CMat> H(n + 1);
    CMat all(m, 0);
    for (int p = 0; p <= n; ++p) {
        const int want = s.hodge(p);
        if (want == 0) {
            H[p] = CMat(m, 0);
            continue;
        }
        const CMat Fp = hs.filtration(p);
        const CMat Fq = hs.filtration(n - p).conjugate();
        H[p] = intersect(Fp, Fq, tol);
        if (H[p].cols() != want)
            throw DecompositionError("dim H^{" + std::to_string(p) + "," + std::to_string(n - p) +
                                     "} is " + std::to_string(H[p].cols()) + ", expected " +
                                     std::to_string(want));
        CMat next(m, all.cols() + want);
        next << all, H[p];
        all = next;
    }
    if (inverse_condition(all) <= tol)
        throw DecompositionError("Hodge pieces do not form a direct sum");
    return H;
}

CMat weil_operator(const HodgeStructure& hs, double tol)
{
    const DomainSpec& s = hs.spec();
    const int n = s.weight();
    const auto H = hodge_decomposition(hs, tol);
    const int m = s.dim();
    CMat W(m, m);
    CVec d(m);
    int col = 0;
    for (int p = n; p >= 0; --p) {
        for (int j = 0; j < H[p].cols(); ++j) {
            W.col(col) = H[p].col(j);
            d(col) = ipow(2 * p - n);
            ++col;
        }
    }
    return W * d.asDiagonal() * W.inverse();
}

HodgeStructure decomposition_roundtrip(const HodgeStructure& hs, double tol)
{
    const DomainSpec& s = hs.spec();
    const int n = s.weight();
    const auto H = hodge_decomposition(hs, tol);
    const auto rep = check_hodge_riemann(hs, tol);
    if (!rep.in_D())
        throw NotInPeriodDomain("point fails the Hodge-Riemann relations (min eigenvalue " +
                                std::to_string(rep.min_eigenvalue) + ")");
    CMat B(s.dim(), s.dim());
    int col = 0;
    for (int p = n; p >= 0; --p) {
        B.middleCols(col, H[p].cols()) = H[p];
        col += static_cast<int>(H[p].cols());
    }
    return HodgeStructure(s, B);
}

double filtration_distance(const HodgeStructure& a, const HodgeStructure& b)
{
    double d = 0.0;
    for (int k = 1; k <= a.spec().weight(); ++k)
        d = std::max(d, subspace_distance(a.filtration(k), b.filtration(k)));
    return d;
}

}  // namespace pdlab
