#pragma once

#include <cstdint>
#include <vector>

#include "pdlab/lie.hpp"

namespace pdlab {

struct Root {
    RVec values;           // phi(h_i) over the Cartan basis
    CMat vector;           // e_phi
    CMat coroot;           // h_phi, set by weyl_normalize
    int grade = 0;         // the unique k with e_phi in g^{k,-k}
    double purity = 0.0;   // norm of e_phi outside its grade, relative
    double eig_residual = 0.0;
    bool compact = false;
    bool positive = false;
    int negative = -1;     // index of -phi
};

struct RootDatum {
    std::vector<CMat> cartan;  // h_i in sqrt(-1) h_0, Hermitian
    std::vector<Root> roots;
    bool normalized = false;
    bool classified = false;
    double cluster_gap = 0.0;  // smallest distance between distinct eigenvalue clusters
    int attempts = 0;
};

struct SOFrame {
    std::vector<int> lambda;  // root indices, orientation applied
    std::vector<CMat> e, f, h;
    std::vector<CMat> x, y;
    // Grade of e_i after orientation; always negative.
    std::vector<int> grades;
    int rank() const { return static_cast<int>(lambda.size()); }
    int centralizer_dim = 0;  // dim of the centralizer of A0 in p0
};

// Maximal abelian subalgebra of v0 (real skew matrices); throws NumericalFailure
// if neither the generic-element iteration nor the rotation torus works.
std::vector<CMat> cartan_subalgebra(const GradedLieAlgebra& L, std::uint64_t seed = 1);
// Torus of rotations in the conjugate-paired reference basis.
std::vector<CMat> rotation_torus(const GradedLieAlgebra& L);
int centralizer_dim(const GradedLieAlgebra& L, const std::vector<CMat>& elems);

RootDatum root_decomposition(const GradedLieAlgebra& L, const std::vector<CMat>& cartan_h0,
                             std::uint64_t seed = 1);
RootDatum weyl_normalize(const GradedLieAlgebra& L, RootDatum rd);
RootDatum positive_and_classify(const GradedLieAlgebra& L, RootDatum rd);
SOFrame strongly_orthogonal_frame(const GradedLieAlgebra& L, const RootDatum& rd);

// Everything above in order.
struct RootSystem {
    RootDatum datum;
    SOFrame frame;
};
RootSystem compute_root_system(const GradedLieAlgebra& L, std::uint64_t seed = 1);

// Value of phi on any element of the complexified Cartan, via its eigenvalue on e_phi.
cplx evaluate_root(const GradedLieAlgebra& L, const Root& r, const CMat& h);
// Index of the root with these values, or -1.
int find_root(const RootDatum& rd, const RVec& values, double tol);
bool lex_positive(const RVec& v, double tol);

// Thrown when the greedy frame is not maximal abelian.
struct MaximalityError : Error {
    using Error::Error;
    CMat candidate;
};

}  // namespace pdlab
