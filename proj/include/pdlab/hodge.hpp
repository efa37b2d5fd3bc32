#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pdlab/linalg.hpp"

namespace pdlab {

// Hodge numbers are stored as (h^{n,0}, ..., h^{0,n}). Adapted column order puts
// H^{n,0} first, so F^k is spanned by the first f^k columns.
class DomainSpec {
public:
    DomainSpec() = default;

    int weight() const { return n_; }
    int dim() const { return m_; }
    const std::vector<int>& hodge_numbers() const { return h_; }
    // h^{p,n-p}
    int hodge(int p) const;
    // f^k for k in [0, n+1]; clamps outside.
    int f(int k) const;
    std::vector<int> filtration_ranks() const;
    // Columns of H^{p,n-p} in adapted order: [f^{p+1}, f^p).
    std::pair<int, int> block_range(int p) const;
    // Hodge index p of an adapted column.
    int column_type(int col) const;

    const CMat& Q() const { return Q_; }
    // Unitary matrix whose columns are the reference adapted basis.
    const CMat& reference_basis() const { return E_; }
    // Column index of the conjugate partner of each adapted column.
    const std::vector<int>& conj_partner() const { return partner_; }

    friend DomainSpec build_domain_spec(int weight, const std::vector<int>& hodge_numbers);
    friend DomainSpec domain_spec_from_parts(int weight, const std::vector<int>& hodge_numbers,
                                             const CMat& Q);

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<int> h_;
    std::vector<int> f_;
    CMat Q_;
    CMat E_;
    std::vector<int> partner_;
};

DomainSpec build_domain_spec(int weight, const std::vector<int>& hodge_numbers);
// Reload path: rebuilds the canonical spec and requires the stored Q to match it.
DomainSpec domain_spec_from_parts(int weight, const std::vector<int>& hodge_numbers, const CMat& Q);

class HodgeStructure {
public:
    HodgeStructure(DomainSpec spec, CMat basis, double rank_tol = 1e-9);

    const DomainSpec& spec() const { return spec_; }
    const CMat& basis() const { return basis_; }
    // Columns 0..f^k-1 of the basis.
    CMat filtration(int k) const;

private:
    DomainSpec spec_;
    CMat basis_;
};

HodgeStructure reference_structure(const DomainSpec& spec);

struct HodgeRiemannReport {
    bool in_compact_dual_ok = false;
    bool hr1 = false;
    bool hr2 = false;
    double min_eigenvalue = 0.0;
    double hr1_residual = 0.0;
    bool in_D() const { return hr1 && hr2; }
};

HodgeRiemannReport check_hodge_riemann(const HodgeStructure& hs, double tol = 1e-9);

// H^{p,n-p} = F^p ∩ conj(F^{n-p}) for p = 0..n; throws DecompositionError on
// wrong dimensions or a non-direct sum.
std::vector<CMat> hodge_decomposition(const HodgeStructure& hs, double tol = 1e-9);

CMat weil_operator(const HodgeStructure& hs, double tol = 1e-9);

HodgeStructure decomposition_roundtrip(const HodgeStructure& hs, double tol = 1e-9);

// Max over k of the principal-angle distance between the F^k of two structures.
double filtration_distance(const HodgeStructure& a, const HodgeStructure& b);

}  // namespace pdlab
