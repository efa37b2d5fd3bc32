#pragma once

#include <vector>

#include "pdlab/flag.hpp"
#include "pdlab/roots.hpp"

namespace pdlab {

struct SL2Factors {
    CMat upper;    // exp(w e)
    CMat middle;   // exp(-log cosh|z| h)
    CMat lower;    // exp(conj(w) f)
    CMat product;
    CMat target;   // exp(a x + b y), z = a + ib
    cplx w;        // (z/|z|) tanh|z|, the big-cell coordinate
    double residual = 0.0;  // relative Frobenius error of product vs target
};

SL2Factors sl2_factorization(const SOFrame& frame, int i, cplx z);

struct IotaResult {
    CMat X;  // in p0
    CMat Y;  // sum tanh(t_i) Ad(k^-1) e_i
    std::vector<cplx> lambda_coords;  // tanh(t_i)
};

// k defaults to the identity; throws NotInAlgebra if k is not in K.
IotaResult iota_hc(const GradedLieAlgebra& L, const SOFrame& frame, const std::vector<double>& t,
                   const CMat* k = nullptr);

// Deviation of k from K: max of Q-preservation, unitarity and realness residuals.
double k_membership_residual(const DomainSpec& spec, const CMat& k);
CMat random_k(const GradedLieAlgebra& L, Rng& rng, double scale = 1.0);
// Same, with the k0 basis precomputed.
CMat random_k(const std::vector<CMat>& k0_basis, Rng& rng, double scale = 1.0);

// Max principal-angle distance between the filtrations of two flag points.
double flag_distance(const FlagPoint& a, const FlagPoint& b);

// Real Q-preserving g with g o = pt.
CMat group_point_from_filtration(const HodgeStructure& pt, double tol = 1e-9);

struct SymmetricSpacePoint {
    CMat g;       // representative
    CMat polar;   // exp(X), positive definite
    CMat X;       // in p0
    CMat k;       // g = polar * k
    int iterations = 0;
    double residual = 0.0;
};

SymmetricSpacePoint polar_decompose(const CMat& g);
SymmetricSpacePoint project_pi(const HodgeStructure& pt, double tol = 1e-9);

struct HCReport {
    std::vector<cplx> lambda_coords;
    double sup_norm = 0.0;
    double euclid_dist = 0.0;
    bool inside = false;
    int rank_r = 0;
};

// Lambda-frame report for Y in p_plus: coordinates are projections onto the e_i,
// distance is |Y| divided by the common norm of the e_i.
HCReport hc_report(const GradedLieAlgebra& L, const SOFrame& frame, const CMat& Y);
// Norm used to turn <,> into the Lambda frame.
double lambda_unit(const GradedLieAlgebra& L, const SOFrame& frame);

struct DiagramReport {
    bool pplus_in_D = false;
    double residual = 0.0;
    double pplus_min_eig = 0.0;
};

DiagramReport check_diagram(const GradedLieAlgebra& L, const FlagPoint& pt);

}  // namespace pdlab
