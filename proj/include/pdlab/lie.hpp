#pragma once

#include <string>
#include <vector>

#include "pdlab/hodge.hpp"

namespace pdlab {

enum class Involution { theta, tau0, tauc };

enum class SubspaceName { b, v0, n_plus, k, p, k0, p0, p_plus, g_c, g0 };

SubspaceName parse_subspace_name(const std::string& s);
std::string to_string(SubspaceName s);

struct Subspace {
    SubspaceName name;
    // Real subspaces (v0, k0, p0, g0, g_c) are the real span of the basis.
    bool real_span = false;
    std::vector<CMat> basis;
};

// Complex Lie algebra of Q-isometries, graded by the reference decomposition.
// Matrices are in the real standard basis unless a name says otherwise.
class GradedLieAlgebra {
public:
    explicit GradedLieAlgebra(DomainSpec spec, Tolerances tol = {});

    const DomainSpec& spec() const { return spec_; }
    const Tolerances& tolerances() const { return tol_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int weight() const { return spec_.weight(); }

    // Orthonormal for <X,Y> = -B(theta X, tau0 Y); each element has a single grade.
    const std::vector<CMat>& basis() const { return basis_; }
    const std::vector<int>& grades() const { return grades_; }
    std::vector<int> indices_of_grade(int k) const;
    int grade_dim(int k) const;

    CMat to_adapted(const CMat& X) const;
    CMat from_adapted(const CMat& Y) const;

    double skew_residual(const CMat& X) const;
    bool contains(const CMat& X) const;
    void require_member(const CMat& X) const;

    // Components indexed by k + n, k = -n..n.
    std::vector<CMat> grade_decompose(const CMat& X) const;
    CMat grade_component(const CMat& X, int k) const;
    CMat apply_involution(Involution kind, const CMat& X) const;

    cplx killing_form(const CMat& X, const CMat& Y) const;
    // Matrix of B(A_i, B_j), computed in one batch.
    CMat killing_matrix(const std::vector<CMat>& A, const std::vector<CMat>& B) const;
    cplx inner(const CMat& X, const CMat& Y) const;
    const CMat& killing_gram() const { return killing_gram_; }
    // The Killing form scales the trace form by this constant: B(X,Y) = c tr(XY).
    double trace_form_ratio() const { return trace_ratio_; }

    // Coordinates in basis(); for X in g, <X, b_j> = coordinates(X)(j).
    CVec coordinates(const CMat& X) const;
    CMat from_coordinates(const CVec& c) const;
    double norm(const CMat& X) const;

    Subspace extract_subspace(SubspaceName name) const;

private:
    DomainSpec spec_;
    Tolerances tol_;
    std::vector<CMat> basis_;
    std::vector<int> grades_;
    CMat pinv_;      // dim x m^2, acting on vec(X)
    CMat basis_mat_; // m^2 x dim
    CMat R_, Rp_;    // sums of b b^* and b^* b over a Frobenius-orthonormal basis
    CMat T_;         // m^2 x m^2 superoperator A -> sum b^* A b
    CMat killing_gram_;
    double trace_ratio_ = 0.0;

    cplx killing_raw(const CMat& X, const CMat& Y) const;
};

// Real orthonormal basis (as complex matrices) of the real span of the given matrices.
std::vector<CMat> real_span_basis(const std::vector<CMat>& mats, double tol);

}  // namespace pdlab
