#include "pdlab/lie.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace pdlab {

namespace {

CMat stack_vecs(const std::vector<CMat>& mats, bool transpose_each)
{
    if (mats.empty())
        return CMat(0, 0);
    const Eigen::Index sz = mats[0].size();
    CMat V(sz, static_cast<Eigen::Index>(mats.size()));
    for (size_t j = 0; j < mats.size(); ++j)
        V.col(static_cast<Eigen::Index>(j)) =
            transpose_each ? vec(CMat(mats[j].transpose())) : vec(mats[j]);
    return V;
}

// For square m x m matrices: vec(A^T) = P vec(A).
CVec transpose_vec(const CVec& v, Eigen::Index m) { return vec(CMat(unvec(v, m).transpose())); }

}  // namespace

SubspaceName parse_subspace_name(const std::string& s)
{
    if (s == "b") return SubspaceName::b;
    if (s == "v0") return SubspaceName::v0;
    if (s == "n_plus") return SubspaceName::n_plus;
    if (s == "k") return SubspaceName::k;
    if (s == "p") return SubspaceName::p;
    if (s == "k0") return SubspaceName::k0;
    if (s == "p0") return SubspaceName::p0;
    if (s == "p_plus") return SubspaceName::p_plus;
    if (s == "g_c") return SubspaceName::g_c;
    if (s == "g0") return SubspaceName::g0;
    throw InvalidSpec("unknown subspace name '" + s + "'");
}

std::string to_string(SubspaceName s)
{
    switch (s) {
    case SubspaceName::b: return "b";
    case SubspaceName::v0: return "v0";
    case SubspaceName::n_plus: return "n_plus";
    case SubspaceName::k: return "k";
    case SubspaceName::p: return "p";
    case SubspaceName::k0: return "k0";
    case SubspaceName::p0: return "p0";
    case SubspaceName::p_plus: return "p_plus";
    case SubspaceName::g_c: return "g_c";
    case SubspaceName::g0: return "g0";
    }
    return "?";
}

GradedLieAlgebra::GradedLieAlgebra(DomainSpec spec, Tolerances tol)
    : spec_(std::move(spec)), tol_(tol)
{
    const int m = spec_.dim();
    const int n = spec_.weight();
    const CMat& E = spec_.reference_basis();
    const CMat QE = E.transpose() * spec_.Q() * E;

    // Per grade, solve QE Y + Y^T QE = 0 over Y supported on the grade-k blocks.
    std::vector<CMat> fbasis;
    std::vector<int> fgrades;
    for (int k = -n; k <= n; ++k) {
        std::vector<std::pair<int, int>> pos;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                if (spec_.column_type(i) - spec_.column_type(j) == k)
                    pos.emplace_back(i, j);
        if (pos.empty())
            continue;
        CMat M(m * m, static_cast<Eigen::Index>(pos.size()));
        for (size_t u = 0; u < pos.size(); ++u) {
            CMat Y = CMat::Zero(m, m);
            Y(pos[u].first, pos[u].second) = 1.0;
            M.col(static_cast<Eigen::Index>(u)) = vec(CMat(QE * Y + Y.transpose() * QE));
        }
        const CMat N = null_space(M, tol_.rank);
        for (Eigen::Index c = 0; c < N.cols(); ++c) {
            CMat Y = CMat::Zero(m, m);
            for (size_t u = 0; u < pos.size(); ++u)
                Y(pos[u].first, pos[u].second) = N(static_cast<Eigen::Index>(u), c);
            fbasis.push_back(from_adapted(Y));
            fgrades.push_back(k);
        }
    }

    // Killing form from a Frobenius-orthonormal basis without forming ad matrices.
    R_ = CMat::Zero(m, m);
    Rp_ = CMat::Zero(m, m);
    T_ = CMat::Zero(m * m, m * m);
    for (const auto& b : fbasis) {
        R_ += b * b.adjoint();
        Rp_ += b.adjoint() * b;
        T_ += Eigen::kroneckerProduct(CMat(b.transpose()), CMat(b.adjoint()));
    }

    // Re-orthonormalize each grade for <X,Y> = -B(theta X, tau0 Y).
    for (int k = -n; k <= n; ++k) {
        std::vector<CMat> group;
        for (size_t i = 0; i < fbasis.size(); ++i)
            if (fgrades[i] == k)
                group.push_back(fbasis[i]);
        if (group.empty())
            continue;
        std::vector<CMat> th, cj;
        for (const auto& b : group) {
            th.push_back(((k % 2 == 0) ? 1.0 : -1.0) * b);
            cj.push_back(b.conjugate());
        }
        CMat G = -killing_matrix(th, cj);
        const double herm = (G - G.adjoint()).norm();
        if (herm > 1e-8 * std::max(1.0, G.norm()))
            throw NumericalFailure("inner product Gram is not Hermitian");
        G = (0.5 * (G + G.adjoint())).eval();
        const CMat Mx = inv_sqrt_hermitian(G).conjugate();
        for (size_t i = 0; i < group.size(); ++i) {
            CMat x = CMat::Zero(m, m);
            for (size_t j = 0; j < group.size(); ++j)
                x += Mx(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * group[j];
            basis_.push_back(x);
            grades_.push_back(k);
        }
    }

    basis_mat_ = stack_vecs(basis_, false);
    pinv_ = (basis_mat_.adjoint() * basis_mat_).ldlt().solve(basis_mat_.adjoint());
    killing_gram_ = killing_matrix(basis_, basis_);

    for (const auto& b : basis_) {
        const cplx tr = (b * b.conjugate()).trace();
        if (std::abs(tr) > 1e-6) {
            trace_ratio_ = (killing_raw(b, b.conjugate()) / tr).real();
            break;
        }
    }
}

std::vector<int> GradedLieAlgebra::indices_of_grade(int k) const
{
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (grades_[i] == k)
            out.push_back(i);
    return out;
}

int GradedLieAlgebra::grade_dim(int k) const { return static_cast<int>(indices_of_grade(k).size()); }

CMat GradedLieAlgebra::to_adapted(const CMat& X) const
{
    const CMat& E = spec_.reference_basis();
    return E.adjoint() * X * E;
}

CMat GradedLieAlgebra::from_adapted(const CMat& Y) const
{
    const CMat& E = spec_.reference_basis();
    return E * Y * E.adjoint();
}

double GradedLieAlgebra::skew_residual(const CMat& X) const
{
    const CMat& Q = spec_.Q();
    return (Q * X + X.transpose() * Q).norm();
}

bool GradedLieAlgebra::contains(const CMat& X) const
{
    if (X.rows() != spec_.dim() || X.cols() != spec_.dim())
        return false;
    // The absolute floor covers brackets that cancel to rounding noise.
    return skew_residual(X) <= tol_.algebra * X.norm() + 1e-14;
}

void GradedLieAlgebra::require_member(const CMat& X) const
{
    if (!contains(X))
        throw NotInAlgebra("matrix is not Q-skew (residual " + std::to_string(skew_residual(X)) + ")");
}

std::vector<CMat> GradedLieAlgebra::grade_decompose(const CMat& X) const
{
    require_member(X);
    const int n = spec_.weight();
    const int m = spec_.dim();
    const CMat Y = to_adapted(X);
    std::vector<CMat> comps(2 * n + 1, CMat::Zero(m, m));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const int k = spec_.column_type(i) - spec_.column_type(j);
            comps[k + n](i, j) = Y(i, j);
        }
    for (auto& c : comps)
        c = from_adapted(c);
    return comps;
}

CMat GradedLieAlgebra::grade_component(const CMat& X, int k) const
{
    const int n = spec_.weight();
    if (k < -n || k > n)
        return CMat::Zero(spec_.dim(), spec_.dim());
    const int m = spec_.dim();
    const CMat Y = to_adapted(X);
    CMat Z = CMat::Zero(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            if (spec_.column_type(i) - spec_.column_type(j) == k)
                Z(i, j) = Y(i, j);
    return from_adapted(Z);
}

CMat GradedLieAlgebra::apply_involution(Involution kind, const CMat& X) const
{
    require_member(X);
    auto theta = [&](const CMat& A) {
        const int m = spec_.dim();
        CMat Y = to_adapted(A);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                if ((spec_.column_type(i) - spec_.column_type(j)) % 2 != 0)
                    Y(i, j) = -Y(i, j);
        return from_adapted(Y);
    };
    switch (kind) {
    case Involution::theta: return theta(X);
    case Involution::tau0: return X.conjugate();
    case Involution::tauc: return theta(CMat(X.conjugate()));
    }
    return X;
}

cplx GradedLieAlgebra::killing_raw(const CMat& X, const CMat& Y) const
{
    const Eigen::Index m = X.rows();
    const CMat TX = unvec(T_ * vec(X), m);
    const CMat TY = unvec(T_ * vec(Y), m);
    return (X * Y * R_).trace() + (Y * X * Rp_).trace() - (Y * TX).trace() - (X * TY).trace();
}

CMat GradedLieAlgebra::killing_matrix(const std::vector<CMat>& A, const std::vector<CMat>& B) const
{
    const Eigen::Index m = spec_.dim();
    if (A.empty() || B.empty())
        return CMat(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(B.size()));
    // tr(XY) = vec(X^T) . vec(Y), so each of the four terms is one matrix product.
    const CMat At = stack_vecs(A, true);
    const CMat Bv = stack_vecs(B, false);
    std::vector<CMat> BR, ARp;
    for (const auto& y : B)
        BR.push_back(y * R_);
    for (const auto& x : A)
        ARp.push_back(CMat((x * Rp_).transpose()));
    const CMat TA = T_ * stack_vecs(A, false);
    CMat TAt(TA.rows(), TA.cols());
    for (Eigen::Index j = 0; j < TA.cols(); ++j)
        TAt.col(j) = transpose_vec(TA.col(j), m);
    return At.transpose() * stack_vecs(BR, false) + stack_vecs(ARp, false).transpose() * Bv -
           TAt.transpose() * Bv - At.transpose() * (T_ * Bv);
}

cplx GradedLieAlgebra::killing_form(const CMat& X, const CMat& Y) const { return killing_raw(X, Y); }

cplx GradedLieAlgebra::inner(const CMat& X, const CMat& Y) const
{
    return -killing_raw(apply_involution(Involution::theta, X), Y.conjugate());
}

CVec GradedLieAlgebra::coordinates(const CMat& X) const { return pinv_ * vec(X); }

CMat GradedLieAlgebra::from_coordinates(const CVec& c) const
{
    return unvec(basis_mat_ * c, spec_.dim());
}

double GradedLieAlgebra::norm(const CMat& X) const { return coordinates(X).norm(); }

std::vector<CMat> real_span_basis(const std::vector<CMat>& mats, double tol)
{
    if (mats.empty())
        return {};
    const Eigen::Index rows = mats[0].rows();
    const Eigen::Index sz = mats[0].size();
    RMat V(2 * sz, static_cast<Eigen::Index>(mats.size()));
    for (size_t j = 0; j < mats.size(); ++j) {
        const CVec v = vec(mats[j]);
        V.col(static_cast<Eigen::Index>(j)) << v.real(), v.imag();
    }
    const RMat O = orth(V, tol);
    std::vector<CMat> out;
    for (Eigen::Index j = 0; j < O.cols(); ++j) {
        CVec v(sz);
        v.real() = O.col(j).head(sz);
        v.imag() = O.col(j).tail(sz);
        out.push_back(unvec(v, rows));
    }
    return out;
}

Subspace GradedLieAlgebra::extract_subspace(SubspaceName name) const
{
    Subspace s{name, false, {}};
    auto select = [&](auto pred) {
        std::vector<CMat> out;
        for (int i = 0; i < dim(); ++i)
            if (pred(grades_[i]))
                out.push_back(basis_[i]);
        return out;
    };
    auto realify = [&](const std::vector<CMat>& mats) {
        std::vector<CMat> parts;
        for (const auto& x : mats) {
            parts.push_back(x.real().cast<cplx>());
            parts.push_back(x.imag().cast<cplx>());
        }
        return real_span_basis(parts, tol_.rank);
    };
    auto even = [](int k) { return k % 2 == 0; };
    auto odd = [](int k) { return k % 2 != 0; };
    switch (name) {
    case SubspaceName::b: s.basis = select([](int k) { return k >= 0; }); break;
    case SubspaceName::n_plus: s.basis = select([](int k) { return k < 0; }); break;
    case SubspaceName::k: s.basis = select(even); break;
    case SubspaceName::p: s.basis = select(odd); break;
    case SubspaceName::p_plus: s.basis = select([](int k) { return k < 0 && k % 2 != 0; }); break;
    case SubspaceName::v0:
        s.real_span = true;
        s.basis = realify(select([](int k) { return k == 0; }));
        break;
    case SubspaceName::k0:
        s.real_span = true;
        s.basis = realify(select(even));
        break;
    case SubspaceName::p0:
        s.real_span = true;
        s.basis = realify(select(odd));
        break;
    case SubspaceName::g0:
        s.real_span = true;
        s.basis = realify(basis_);
        break;
    case SubspaceName::g_c: {
        s.real_span = true;
        s.basis = realify(select(even));
        for (const auto& x : realify(select(odd)))
            s.basis.push_back(kI * x);
        break;
    }
    }
    return s;
}

}  // namespace pdlab
