#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pdlab {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline const cplx kI{0.0, 1.0};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct SingularBasis : Error {
    using Error::Error;
};
struct NotInPeriodDomain : Error {
    using Error::Error;
};
// Hodge decomposition has wrong intersection dimensions or is not direct.
struct DecompositionError : NotInPeriodDomain {
    using NotInPeriodDomain::NotInPeriodDomain;
};
struct NotInAlgebra : Error {
    using Error::Error;
};
struct NotInNplus : Error {
    using Error::Error;
};
struct NumericalFailure : Error {
    using Error::Error;
};

// Rank and orthogonality threshold defaults; every check takes these by value.
struct Tolerances {
    double rank = 1e-9;
    double algebra = 1e-8;
    double minor_singular = 1e-10;
    double minor_borderline = 1e-6;
    double cluster = 1e-6;
    double bound = 1e-8;
};

// Deterministic across platforms; std distributions are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform();  // [0,1)
    double uniform(double lo, double hi);
    double normal();
    cplx complex_normal();
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline double norm(const CMat& A) { return A.norm(); }
inline CMat bracket(const CMat& X, const CMat& Y) { return X * Y - Y * X; }

// Orthonormal basis of ker A; singular values below rel_tol * sigma_max count as zero.
CMat null_space(const CMat& A, double rel_tol);
RMat null_space(const RMat& A, double rel_tol);

// Orthonormal basis of the column span.
CMat orth(const CMat& A, double rel_tol);
RMat orth(const RMat& A, double rel_tol);

// Sine of the largest principal angle between column spans; 1 if dimensions differ.
double subspace_distance(const CMat& A, const CMat& B, double rel_tol = 1e-9);

// Column basis of span(A) ∩ span(B).
CMat intersect(const CMat& A, const CMat& B, double rel_tol);

double inverse_condition(const CMat& A);

// exp of a nilpotent matrix by its terminating Taylor series.
CMat exp_nilpotent(const CMat& N);
// log of a unipotent matrix by its terminating Mercator series.
CMat log_unipotent(const CMat& U);
// Dense matrix exponential.
CMat expm(const CMat& A);
RMat expm(const RMat& A);

// Hermitian square root inverse, for Löwdin orthonormalization.
CMat inv_sqrt_hermitian(const CMat& G);

// vec/unvec in column-major order.
CVec vec(const CMat& A);
CMat unvec(const CVec& v, Eigen::Index rows);

}  // namespace pdlab
