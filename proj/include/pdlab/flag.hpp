#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pdlab/lie.hpp"

namespace pdlab {

// A point of the compact dual: the filtration spanned by the leading columns of
// E * matrix, E the reference adapted basis. matrix is in adapted coordinates.
struct FlagPoint {
    DomainSpec spec;
    CMat matrix;
};

FlagPoint base_point(const DomainSpec& spec);
// g in standard coordinates acting on the base point.
FlagPoint flag_from_group(const DomainSpec& spec, const CMat& g);
HodgeStructure to_hodge_structure(const FlagPoint& pt);

struct BlockLU {
    CMat L;      // block-lower unipotent
    CMat U;      // block-upper
    CMat log_L;  // in adapted coordinates, strictly block-lower
};

enum class Membership { in_nplus, borderline, not_in_nplus };
const char* to_string(Membership m);

struct MembershipResult {
    Membership status = Membership::not_in_nplus;
    double min_abs_minor = 0.0;  // min over blocks of sigma_min(leading minor) / |leading columns|_F
    int failing_block = -1;
    std::optional<BlockLU> lu;   // present unless status is not_in_nplus
};

// Column ranges per block alpha = 0..n: [f^{n-alpha+1}, f^{n-alpha}).
std::vector<std::pair<int, int>> block_partition(const DomainSpec& spec);

MembershipResult nplus_membership_lu(const FlagPoint& pt, const Tolerances& tol = {});
// L factor without the minor tests, for points already known to be well inside N+.
CMat nplus_factor_unchecked(const FlagPoint& pt);

// Coordinates of log L in the n_plus part of the graded basis (indices of grades < 0).
CVec nplus_coordinates(const GradedLieAlgebra& L, const FlagPoint& pt);
// log L in standard coordinates.
CMat nplus_log(const GradedLieAlgebra& L, const FlagPoint& pt);
// exp(X) o for X in n_plus (standard coordinates).
FlagPoint nplus_point(const GradedLieAlgebra& L, const CMat& X);

struct DomainReport {
    bool in_nplus = false;
    Membership status = Membership::not_in_nplus;
    double min_abs_minor = 0.0;
    bool in_D = false;
    double min_eig = 0.0;
    CVec nplus_coords;
};

DomainReport in_period_domain(const GradedLieAlgebra& L, const FlagPoint& pt);

// Orthogonal projection onto a subspace of n_plus for <,>.
class Projector {
public:
    // Odd-graded part of n_plus.
    static Projector p_plus(const GradedLieAlgebra& L);
    // Custom abelian subspace of g^{-1,1}; orthonormalized before use.
    static Projector custom(const GradedLieAlgebra& L, const std::vector<CMat>& a);

    CMat apply(const CMat& X) const;
    CVec coordinates(const CMat& X) const;
    const std::vector<CMat>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    // exp(proj(log L)) o
    FlagPoint apply_group(const FlagPoint& pt) const;

private:
    const GradedLieAlgebra* L_ = nullptr;
    std::vector<CMat> basis_;
    CMat coord_rows_;  // dim x dim(g), rows are conj coordinates of basis elements
};

}  // namespace pdlab
