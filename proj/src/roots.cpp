#include "pdlab/roots.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <numeric>

namespace pdlab {

namespace {

RMat real_vecs(const std::vector<CMat>& mats)
{
    const Eigen::Index sz = mats.empty() ? 0 : mats[0].size();
    RMat V(2 * sz, static_cast<Eigen::Index>(mats.size()));
    for (size_t j = 0; j < mats.size(); ++j) {
        const CVec v = vec(mats[j]);
        V.col(static_cast<Eigen::Index>(j)) << v.real(), v.imag();
    }
    return V;
}

bool is_abelian(const std::vector<CMat>& elems, double tol)
{
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i + 1; j < elems.size(); ++j)
            if (bracket(elems[i], elems[j]).norm() > tol * elems[i].norm() * elems[j].norm())
                return false;
    return true;
}

// Real centralizer of the element h inside the real span of basis.
std::vector<CMat> centralizer_in(const std::vector<CMat>& basis, const std::vector<CMat>& elems,
                                 double tol)
{
    if (basis.empty())
        return {};
    const Eigen::Index sz = basis[0].size();
    RMat M(2 * sz * static_cast<Eigen::Index>(elems.size()), static_cast<Eigen::Index>(basis.size()));
    for (size_t a = 0; a < basis.size(); ++a) {
        std::vector<CMat> br;
        for (const auto& h : elems)
            br.push_back(bracket(h, basis[a]));
        const RMat V = real_vecs(br);
        M.col(static_cast<Eigen::Index>(a)) = Eigen::Map<const RVec>(V.data(), V.size());
    }
    const RMat K = null_space(M, tol);
    std::vector<CMat> out;
    for (Eigen::Index c = 0; c < K.cols(); ++c) {
        CMat X = CMat::Zero(basis[0].rows(), basis[0].cols());
        for (size_t a = 0; a < basis.size(); ++a)
            X += K(static_cast<Eigen::Index>(a), c) * basis[a];
        out.push_back(X);
    }
    return real_span_basis(out, tol);
}

// Lexicographic comparison with tolerance; returns -1, 0, 1.
int lex_compare(const RVec& a, const RVec& b, double tol)
{
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > b(i) + tol)
            return 1;
        if (a(i) < b(i) - tol)
            return -1;
    }
    return 0;
}

}  // namespace

bool lex_positive(const RVec& v, double tol)
{
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) > tol)
            return true;
        if (v(i) < -tol)
            return false;
    }
    return false;
}

int find_root(const RootDatum& rd, const RVec& values, double tol)
{
    for (size_t i = 0; i < rd.roots.size(); ++i)
        if ((rd.roots[i].values - values).cwiseAbs().maxCoeff() <= tol)
            return static_cast<int>(i);
    return -1;
}

int centralizer_dim(const GradedLieAlgebra& L, const std::vector<CMat>& elems)
{
    const auto& B = L.basis();
    const Eigen::Index sz = B[0].size();
    CMat M(sz * static_cast<Eigen::Index>(elems.size()), L.dim());
    for (int j = 0; j < L.dim(); ++j)
        for (size_t i = 0; i < elems.size(); ++i)
            M.col(j).segment(static_cast<Eigen::Index>(i) * sz, sz) = vec(bracket(elems[i], B[j]));
    return static_cast<int>(null_space(M, L.tolerances().rank).cols());
}

std::vector<CMat> rotation_torus(const GradedLieAlgebra& L)
{
    const DomainSpec& s = L.spec();
    const int m = s.dim();
    const int n = s.weight();
    std::vector<CMat> out;
    for (int p = n; 2 * p > n; --p) {
        const auto [lo, hi] = s.block_range(p);
        for (int a = lo; a < hi; ++a) {
            const int b = s.conj_partner()[a];
            CMat J = CMat::Zero(m, m);
            J(b, a) = -1.0;
            J(a, b) = 1.0;
            out.push_back(J / std::sqrt(2.0));
        }
    }
    if (n % 2 == 0) {
        const auto [lo, hi] = s.block_range(n / 2);
        for (int c = lo; c + 1 < hi; c += 2) {
            CMat J = CMat::Zero(m, m);
            J(c + 1, c) = -1.0;
            J(c, c + 1) = 1.0;
            out.push_back(J / std::sqrt(2.0));
        }
    }
    return out;
}

std::vector<CMat> cartan_subalgebra(const GradedLieAlgebra& L, std::uint64_t seed)
{
    const double tol = L.tolerances().rank;
    const auto v0 = L.extract_subspace(SubspaceName::v0).basis;
    Rng rng(seed);
    for (int attempt = 0; attempt < 5 && !v0.empty(); ++attempt) {
        std::vector<CMat> cur = v0;
        for (int it = 0; it < 20 && !is_abelian(cur, 1e-9); ++it) {
            CMat h = CMat::Zero(cur[0].rows(), cur[0].cols());
            for (const auto& u : cur)
                h += rng.normal() * u;
            cur = centralizer_in(cur, {h}, tol);
        }
        if (!cur.empty() && is_abelian(cur, 1e-9) && centralizer_dim(L, cur) == static_cast<int>(cur.size()))
            return cur;
    }
    auto torus = rotation_torus(L);
    if (!torus.empty() && is_abelian(torus, 1e-12) &&
        centralizer_dim(L, torus) == static_cast<int>(torus.size()))
        return torus;
    throw NumericalFailure("Cartan subalgebra search did not stabilize");
}

cplx evaluate_root(const GradedLieAlgebra& L, const Root& r, const CMat& h)
{
    const CVec ce = L.coordinates(r.vector);
    const CVec cb = L.coordinates(bracket(h, r.vector));
    return ce.dot(cb) / ce.squaredNorm();
}

RootDatum root_decomposition(const GradedLieAlgebra& L, const std::vector<CMat>& cartan_h0,
                             std::uint64_t seed)
{
    const double tol = L.tolerances().cluster;
    const int N = L.dim();
    const int l = static_cast<int>(cartan_h0.size());
    RootDatum rd;
    for (const auto& h0 : cartan_h0)
        rd.cartan.push_back(kI * h0);

    std::vector<CMat> ad(l, CMat(N, N));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < N; ++j)
            ad[i].col(j) = L.coordinates(bracket(rd.cartan[i], L.basis()[j]));

    Rng rng(Rng::mix(seed, 0x726f6f74));
    for (int attempt = 1; attempt <= 8; ++attempt) {
        rd.attempts = attempt;
        CMat H = CMat::Zero(N, N);
        for (int i = 0; i < l; ++i)
            H += rng.normal() * ad[i];
        if ((H - H.adjoint()).norm() > 1e-8 * H.norm())
            throw NumericalFailure("ad(h) is not self-adjoint for the inner product");
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
        const RVec& ev = es.eigenvalues();

        // Group sorted eigenvalues into clusters.
        std::vector<std::pair<int, int>> clusters;
        int start = 0;
        for (int i = 1; i <= N; ++i)
            if (i == N || ev(i) - ev(i - 1) > tol) {
                clusters.emplace_back(start, i);
                start = i;
            }
        bool ok = true;
        int zero_size = 0;
        for (const auto& c : clusters) {
            const double center = ev(c.first);
            if (std::abs(center) <= tol)
                zero_size += c.second - c.first;
            else if (c.second - c.first != 1)
                ok = false;
        }
        double gap = std::numeric_limits<double>::infinity();
        for (size_t c = 1; c < clusters.size(); ++c)
            gap = std::min(gap, ev(clusters[c].first) - ev(clusters[c - 1].second - 1));
        rd.cluster_gap = gap;
        if (!ok || zero_size != l || gap < 100.0 * tol)
            continue;

        rd.roots.clear();
        for (int i = 0; i < N; ++i) {
            if (std::abs(ev(i)) <= tol)
                continue;
            const CVec v = es.eigenvectors().col(i);
            Root r;
            r.values.resize(l);
            double res = 0.0;
            for (int k = 0; k < l; ++k) {
                const CVec Av = ad[k] * v;
                r.values(k) = v.dot(Av).real();
                res = std::max(res, (Av - r.values(k) * v).norm());
            }
            r.eig_residual = res;
            // Grade of the eigenvector from its coordinate mass.
            std::map<int, double> mass;
            for (int j = 0; j < N; ++j)
                mass[L.grades()[j]] += std::norm(v(j));
            int best = 0;
            double bestm = -1.0;
            for (const auto& [k, w] : mass)
                if (w > bestm) {
                    bestm = w;
                    best = k;
                }
            r.grade = best;
            r.purity = std::sqrt(std::max(0.0, v.squaredNorm() - bestm)) / v.norm();
            r.vector = L.from_coordinates(v);
            rd.roots.push_back(std::move(r));
        }
        for (auto& r : rd.roots) {
            r.negative = find_root(rd, -r.values, 10 * tol);
            if (r.negative < 0)
                throw NumericalFailure("root system is not symmetric under negation");
        }
        return rd;
    }
    throw NumericalFailure("root eigenvalue clusters are ambiguous (smallest gap " +
                           std::to_string(rd.cluster_gap) + ")");
}

RootDatum weyl_normalize(const GradedLieAlgebra& L, RootDatum rd)
{
    const double tol = L.tolerances().cluster;
    for (size_t i = 0; i < rd.roots.size(); ++i) {
        Root& r = rd.roots[i];
        if (!lex_positive(r.values, tol))
            continue;
        CMat e = r.vector;
        Eigen::Index bi = 0, bj = 0;
        e.cwiseAbs().maxCoeff(&bi, &bj);
        e *= std::conj(e(bi, bj)) / std::abs(e(bi, bj));
        e /= L.norm(e);

        const CMat ebar = e.conjugate();
        r.vector = e;
        const double val0 = evaluate_root(L, r, bracket(e, ebar)).real();
        // Compact roots need e_{-phi} = -conj(e_phi) for phi([e, e_{-phi}]) > 0.
        const double eps = val0 > 0 ? 1.0 : -1.0;
        const bool compact_by_grade = r.grade % 2 == 0;
        if ((eps < 0) != compact_by_grade || std::abs(val0) < 1e-12)
            throw NumericalFailure("compact/noncompact flag disagrees with conjugation behavior");
        CMat f = eps * ebar;
        CMat h = bracket(e, f);
        const double val = evaluate_root(L, r, h).real();
        const double s = std::sqrt(2.0 / val);
        e *= s;
        f *= s;
        h *= s * s;
        r.vector = e;
        r.coroot = h;
        Root& nr = rd.roots[r.negative];
        nr.vector = f;
        nr.coroot = -h;
    }
    rd.normalized = true;
    return rd;
}

RootDatum positive_and_classify(const GradedLieAlgebra& L, RootDatum rd)
{
    const double tol = L.tolerances().cluster;
    int npos = 0;
    for (auto& r : rd.roots) {
        if (r.values.cwiseAbs().maxCoeff() <= tol)
            throw NumericalFailure("root vanishes on the Cartan basis");
        r.positive = lex_positive(r.values, tol);
        npos += r.positive ? 1 : 0;
        r.compact = r.grade % 2 == 0;
        const CMat th = L.apply_involution(Involution::theta, r.vector);
        const CMat diff = r.compact ? CMat(th - r.vector) : CMat(th + r.vector);
        const double dev = diff.norm() / r.vector.norm();
        if (dev > 1e-8)
            throw NumericalFailure("root vector is not an eigenvector of theta");
    }
    if (2 * npos != static_cast<int>(rd.roots.size()))
        throw NumericalFailure("positive roots are not half of all roots");
    rd.classified = true;
    return rd;
}

SOFrame strongly_orthogonal_frame(const GradedLieAlgebra& L, const RootDatum& rd)
{
    const double tol = L.tolerances().cluster;
    std::vector<int> cand;
    for (size_t i = 0; i < rd.roots.size(); ++i)
        if (rd.roots[i].positive && !rd.roots[i].compact)
            cand.push_back(static_cast<int>(i));
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
        return lex_compare(rd.roots[a].values, rd.roots[b].values, tol) > 0;
    });

    std::vector<int> sel;
    for (int c : cand) {
        bool ok = true;
        for (int s : sel) {
            const RVec& a = rd.roots[c].values;
            const RVec& b = rd.roots[s].values;
            if (find_root(rd, a + b, 10 * tol) >= 0 || find_root(rd, a - b, 10 * tol) >= 0 ||
                (a - b).cwiseAbs().maxCoeff() <= tol) {
                ok = false;
                break;
            }
        }
        if (ok)
            sel.push_back(c);
    }

    SOFrame fr;
    for (int c : sel) {
        const Root& r = rd.roots[c];
        CMat e = r.vector;
        CMat f = rd.roots[r.negative].vector;
        CMat h = r.coroot;
        int idx = c;
        int grade = r.grade;
        if (grade > 0) {
            std::swap(e, f);
            h = -h;
            idx = r.negative;
            grade = -grade;
        }
        fr.lambda.push_back(idx);
        fr.e.push_back(e);
        fr.f.push_back(f);
        fr.h.push_back(h);
        fr.grades.push_back(grade);
        fr.x.push_back(e + f);
        fr.y.push_back(kI * (e - f));
    }

    const auto p0 = L.extract_subspace(SubspaceName::p0).basis;
    const auto cent = centralizer_in(p0, fr.x, L.tolerances().rank);
    fr.centralizer_dim = static_cast<int>(cent.size());
    if (fr.centralizer_dim != fr.rank()) {
        MaximalityError err("centralizer of A0 in p0 has dimension " + std::to_string(fr.centralizer_dim) +
                            ", frame has " + std::to_string(fr.rank()));
        // Component of a centralizer element orthogonal to the frame.
        for (const auto& z : cent) {
            CMat w = z;
            for (const auto& x : fr.x)
                w -= (x.cwiseProduct(w.conjugate()).sum() / x.squaredNorm()).real() * x;
            if (w.norm() > 1e-6) {
                err.candidate = w;
                break;
            }
        }
        throw err;
    }
    return fr;
}

RootSystem compute_root_system(const GradedLieAlgebra& L, std::uint64_t seed)
{
    RootSystem rs;
    const auto h0 = cartan_subalgebra(L, seed);
    rs.datum = positive_and_classify(L, weyl_normalize(L, root_decomposition(L, h0, seed)));
    rs.frame = strongly_orthogonal_frame(L, rs.datum);
    return rs;
}

}  // namespace pdlab
