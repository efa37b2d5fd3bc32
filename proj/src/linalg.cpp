#include "pdlab/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace pdlab {

namespace {

std::uint64_t splitmix(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

template <typename Mat>
Mat null_space_impl(const Mat& A, double rel_tol)
{
    const Eigen::Index c = A.cols();
    if (c == 0)
        return Mat(0, 0);
    if (A.rows() == 0)
        return Mat::Identity(c, c);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    if (smax > 0.0)
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rel_tol * smax)
                ++rank;
    return svd.matrixV().rightCols(c - rank);
}

template <typename Mat>
Mat orth_impl(const Mat& A, double rel_tol)
{
    if (A.cols() == 0 || A.rows() == 0)
        return Mat(A.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    Eigen::Index rank = 0;
    if (smax > 0.0)
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rel_tol * smax)
                ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace

Rng::Rng(std::uint64_t seed)
{
    std::uint64_t x = seed;
    for (auto& s : s_)
        s = splitmix(x);
}

std::uint64_t Rng::next_u64()
{
    // xoshiro256**
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

cplx Rng::complex_normal()
{
    const double a = normal();
    const double b = normal();
    return {a / std::sqrt(2.0), b / std::sqrt(2.0)};
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t x = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
    return splitmix(x);
}

CMat null_space(const CMat& A, double rel_tol) { return null_space_impl(A, rel_tol); }
RMat null_space(const RMat& A, double rel_tol) { return null_space_impl(A, rel_tol); }
CMat orth(const CMat& A, double rel_tol) { return orth_impl(A, rel_tol); }
RMat orth(const RMat& A, double rel_tol) { return orth_impl(A, rel_tol); }

double subspace_distance(const CMat& A, const CMat& B, double rel_tol)
{
    const CMat Qa = orth(A, rel_tol);
    const CMat Qb = orth(B, rel_tol);
    if (Qa.cols() != Qb.cols())
        return 1.0;
    if (Qa.cols() == 0)
        return 0.0;
    const CMat R = Qb - Qa * (Qa.adjoint() * Qb);
    Eigen::JacobiSVD<CMat> svd(R);
    return std::min(1.0, svd.singularValues()(0));
}

CMat intersect(const CMat& A, const CMat& B, double rel_tol)
{
    const CMat Qa = orth(A, rel_tol);
    const CMat Qb = orth(B, rel_tol);
    if (Qa.cols() == 0 || Qb.cols() == 0)
        return CMat(A.rows(), 0);
    CMat M(Qa.rows(), Qa.cols() + Qb.cols());
    M << Qa, -Qb;
    const CMat K = null_space(M, rel_tol);
    if (K.cols() == 0)
        return CMat(A.rows(), 0);
    return orth(CMat(Qa * K.topRows(Qa.cols())), rel_tol);
}

double inverse_condition(const CMat& A)
{
    if (A.size() == 0)
        return 1.0;
    Eigen::JacobiSVD<CMat> svd(A);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0)
        return 0.0;
    return s(s.size() - 1) / s(0);
}

CMat exp_nilpotent(const CMat& N)
{
    const Eigen::Index m = N.rows();
    CMat result = CMat::Identity(m, m);
    CMat term = CMat::Identity(m, m);
    for (Eigen::Index k = 1; k <= m; ++k) {
        term = term * N / static_cast<double>(k);
        if (term.cwiseAbs().maxCoeff() == 0.0)
            break;
        result += term;
    }
    return result;
}

CMat log_unipotent(const CMat& U)
{
    const Eigen::Index m = U.rows();
    const CMat N = U - CMat::Identity(m, m);
    CMat result = CMat::Zero(m, m);
    CMat power = CMat::Identity(m, m);
    for (Eigen::Index k = 1; k <= m; ++k) {
        power = power * N;
        if (power.cwiseAbs().maxCoeff() == 0.0)
            break;
        result += ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(k) * power;
    }
    return result;
}

CMat expm(const CMat& A) { return A.exp(); }
RMat expm(const RMat& A) { return A.exp(); }

CMat inv_sqrt_hermitian(const CMat& G)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(G);
    const RVec& ev = es.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() <= 0.0)
        throw NumericalFailure("Gram matrix is not positive definite");
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().adjoint();
}

CVec vec(const CMat& A) { return Eigen::Map<const CVec>(A.data(), A.size()); }

CMat unvec(const CVec& v, Eigen::Index rows)
{
    return Eigen::Map<const CMat>(v.data(), rows, v.size() / rows);
}

}  // namespace pdlab
