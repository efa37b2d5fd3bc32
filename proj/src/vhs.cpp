#include "pdlab/vhs.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pdlab {

namespace {

bool point_in_D(const GradedLieAlgebra& L, const FlagPoint& pt)
{
    const auto r = in_period_domain(L, pt);
    return r.status == Membership::in_nplus && r.in_D;
}

std::vector<CMat> grade_basis(const GradedLieAlgebra& L, int k)
{
    std::vector<CMat> out;
    for (int i : L.indices_of_grade(k))
        out.push_back(L.basis()[i]);
    return out;
}

}  // namespace

FieldKind parse_field_kind(const std::string& s)
{
    if (s == "smooth") return FieldKind::smooth;
    if (s == "constant") return FieldKind::constant;
    if (s == "zero") return FieldKind::zero;
    throw InvalidSpec("unknown field kind '" + s + "'");
}

FlagPoint family_point(const GradedLieAlgebra& L, const HorizontalFamily& fam, const CVec& q)
{
    if (q.size() != fam.dim())
        throw InvalidSpec("parameter has wrong length");
    CMat Z = CMat::Zero(L.spec().dim(), L.spec().dim());
    for (int i = 0; i < fam.dim(); ++i)
        Z += q(i) * fam.frame[i];
    return nplus_point(L, Z);
}

HorizontalFamily build_family(const GradedLieAlgebra& L, int d, std::uint64_t seed)
{
    const auto u = grade_basis(L, -1);
    if (d < 1 || d > static_cast<int>(u.size()))
        throw InvalidSpec("family dimension " + std::to_string(d) + " exceeds dim g^{-1,1} = " +
                          std::to_string(u.size()));
    const int N = static_cast<int>(u.size());
    Rng rng(Rng::mix(seed, 0x66616d));
    HorizontalFamily fam;
    fam.spec = L.spec();
    // Frame as coordinate vectors over u (orthonormal, so <,> is the Euclidean product).
    std::vector<CVec> coords;
    for (int step = 0; step < d; ++step) {
        // Centralizer of the current frame inside g^{-1,1}.
        CMat C = CMat::Identity(N, N);
        if (!coords.empty()) {
            const Eigen::Index sz = u[0].size();
            CMat M(sz * static_cast<Eigen::Index>(fam.frame.size()), N);
            for (int j = 0; j < N; ++j)
                for (size_t i = 0; i < fam.frame.size(); ++i)
                    M.col(j).segment(static_cast<Eigen::Index>(i) * sz, sz) = vec(bracket(fam.frame[i], u[j]));
            C = null_space(M, L.tolerances().rank);
        }
        // Remove the span of the frame.
        CMat F(N, static_cast<Eigen::Index>(coords.size()));
        for (size_t i = 0; i < coords.size(); ++i)
            F.col(static_cast<Eigen::Index>(i)) = coords[i];
        bool found = false;
        for (int attempt = 0; attempt < 20 && !found; ++attempt) {
            CVec c = CVec::Zero(N);
            for (Eigen::Index j = 0; j < C.cols(); ++j)
                c += rng.complex_normal() * C.col(j);
            if (F.cols() > 0)
                c -= F * (F.adjoint() * c);
            if (c.norm() < 1e-6)
                continue;
            c /= c.norm();
            CMat xi = CMat::Zero(L.spec().dim(), L.spec().dim());
            for (int j = 0; j < N; ++j)
                xi += c(j) * u[j];
            coords.push_back(c);
            fam.frame.push_back(xi);
            found = true;
        }
        if (!found)
            throw NumericalFailure("no commuting extension of the frame at dimension " + std::to_string(step + 1));
    }
    for (size_t i = 0; i < fam.frame.size(); ++i)
        for (size_t j = i + 1; j < fam.frame.size(); ++j)
            if (bracket(fam.frame[i], fam.frame[j]).norm() > 1e-10)
                throw NumericalFailure("frame is not abelian");

    // Largest real s with exp(s xi_j) o in D, by bisection.
    double smin = std::numeric_limits<double>::infinity();
    for (const auto& xi : fam.frame) {
        double lo = 0.0, hi = 1.0;
        while (hi < 1e3 && point_in_D(L, nplus_point(L, CMat(hi * xi))))
            hi *= 2.0;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            (point_in_D(L, nplus_point(L, CMat(mid * xi))) ? lo : hi) = mid;
        }
        smin = std::min(smin, lo);
    }
    fam.chart_radius = 0.5 * smin / d;
    return fam;
}

PathTrace horizontal_path(const GradedLieAlgebra& L, const SOFrame& frame, const PathOptions& opt)
{
    const DomainSpec& s = L.spec();
    const int m = s.dim();
    const auto u = grade_basis(L, -1);
    const int N = static_cast<int>(u.size());
    Rng rng(Rng::mix(opt.seed, 0x70617468));

    CVec alpha = CVec::Zero(N), beta = CVec::Zero(N);
    RVec omega = RVec::Zero(N);
    for (int j = 0; j < N; ++j) {
        alpha(j) = rng.complex_normal();
        beta(j) = rng.complex_normal();
        omega(j) = rng.uniform(0.2, 1.0);
    }
    if (N > 0) {
        alpha /= alpha.norm();
        beta /= beta.norm();
    }
    if (opt.field == FieldKind::constant) {
        beta.setZero();
        omega.setZero();
    } else if (opt.field == FieldKind::zero) {
        alpha.setZero();
        beta.setZero();
    }
    auto xi = [&](double t) {
        CMat X = CMat::Zero(m, m);
        for (int j = 0; j < N; ++j)
            X += (alpha(j) * std::cos(omega(j) * t) + beta(j) * std::sin(omega(j) * t)) * u[j];
        return X;
    };
    auto xreal = [&](double t) {
        const CMat z = xi(t);
        return RMat(2.0 * z.real());
    };

    PathTrace tr;
    tr.rank_r = frame.rank();
    const CMat xi0 = xi(0.0);
    std::optional<Projector> psi_proj;
    if (xi0.norm() > 0.0)
        psi_proj = Projector::custom(L, {CMat(xi0 / L.norm(xi0))});
    const Projector pplus = Projector::p_plus(L);
    std::vector<RMat> gs;

    // Fourth-order Magnus step from t0 to t0 + h.
    auto magnus = [&](double t0, double h) {
        const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
        const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
        const RMat x1 = xreal(t0 + c1 * h);
        const RMat x2 = xreal(t0 + c2 * h);
        const RMat Om = 0.5 * h * (x1 + x2) + (std::sqrt(3.0) / 12.0) * h * h * (x2 * x1 - x1 * x2);
        return RMat(expm(Om));
    };

    auto record = [&](double t, const CMat& g) -> bool {
        const FlagPoint pt = flag_from_group(s, g);
        const auto mr = nplus_membership_lu(pt, L.tolerances());
        if (mr.status != Membership::in_nplus)
            return false;
        const HodgeStructure hs(s, s.reference_basis() * mr.lu->L);
        const auto hr = check_hodge_riemann(hs, L.tolerances().rank);
        if (!hr.in_D())
            return false;
        PathSample ps;
        ps.t = t;
        const CMat X = L.from_adapted(mr.lu->log_L);
        const CVec c = L.coordinates(X);
        std::vector<cplx> nc;
        for (int i = 0; i < L.dim(); ++i)
            if (L.grades()[i] < 0)
                nc.push_back(c(i));
        ps.coords = Eigen::Map<CVec>(nc.data(), static_cast<Eigen::Index>(nc.size()));
        ps.min_minor = mr.min_abs_minor;
        ps.min_eig = hr.min_eigenvalue;
        ps.pplus_dist = frame.rank() > 0 ? hc_report(L, frame, pplus.apply(X)).euclid_dist : 0.0;
        ps.psi = psi_proj ? psi_proj->coordinates(X) : CVec::Zero(1);
        tr.samples.push_back(std::move(ps));
        gs.push_back(g.real());
        return true;
    };

    RMat g = RMat::Identity(m, m);
    record(0.0, g.cast<cplx>());
    double t = 0.0;
    double h = opt.step_size;
    while (tr.accepted_steps < opt.steps) {
        const RMat gn = g * magnus(t, h);
        if (record(t + h, gn.cast<cplx>())) {
            g = gn;
            t += h;
            ++tr.accepted_steps;
            h = std::min(2.0 * h, opt.step_size);
            continue;
        }
        tr.rejections.push_back({t, h, tr.samples.back().pplus_dist});
        h *= 0.5;
        if (h < opt.min_step) {
            tr.truncated = true;
            break;
        }
    }

    // |d psi / dt| by central differences on the recorded samples.
    const size_t ns = tr.samples.size();
    for (size_t k = 0; k < ns; ++k) {
        const size_t a = k == 0 ? 0 : k - 1;
        const size_t b = k + 1 < ns ? k + 1 : k;
        if (a == b)
            continue;
        const double dt = tr.samples[b].t - tr.samples[a].t;
        tr.samples[k].sv_min = (tr.samples[b].psi - tr.samples[a].psi).norm() / dt;
    }
    // Tangent probe: central difference of L at t +- delta, left-translated to the identity.
    const double delta = 1e-2 * opt.step_size;
    for (size_t k = 0; k < ns; ++k) {
        const double tk = tr.samples[k].t;
        auto factor = [&](const RMat& gg) { return nplus_factor_unchecked(flag_from_group(s, gg.cast<cplx>())); };
        const CMat Lp = factor(gs[k] * magnus(tk, delta));
        const CMat Lm = factor(gs[k] * magnus(tk, -delta));
        const CMat Z = L.from_adapted(CMat(factor(gs[k]).inverse() * (Lp - Lm) / (2.0 * delta)));
        const double zn = Z.norm();
        if (zn > 0.0) {
            const CMat off = Z - L.grade_component(Z, -1);
            tr.samples[k].horiz_defect = off.norm() / zn;
            tr.max_horiz_defect = std::max(tr.max_horiz_defect, tr.samples[k].horiz_defect);
        }
    }
    return tr;
}

PsiResult psi_affine(const GradedLieAlgebra& L, const HorizontalFamily& fam, const CVec& q,
                     const CMat* right_factor)
{
    const auto a = Projector::custom(L, fam.frame);
    auto psi = [&](const CVec& qq) {
        FlagPoint pt = family_point(L, fam, qq);
        if (right_factor)
            pt.matrix = pt.matrix * *right_factor;
        return a.coordinates(nplus_log(L, pt));
    };
    {
        FlagPoint pt = family_point(L, fam, q);
        const auto rep = in_period_domain(L, pt);
        if (!rep.in_D)
            throw NotInPeriodDomain("family point is outside the period domain");
    }
    const int d = fam.dim();
    // a.coordinates are relative to an orthonormalized copy of the frame, which for an
    // orthonormal frame differs by a unitary; map back to frame coordinates.
    CMat Tm(d, d);
    for (int j = 0; j < d; ++j)
        Tm.col(j) = a.coordinates(fam.frame[j]);
    const Eigen::PartialPivLU<CMat> tlu(Tm);

    PsiResult out;
    out.coords = tlu.solve(psi(q));
    out.reproduction_error = (out.coords - q).norm();
    const double hs = 1e-5 * std::max(1.0, q.norm());
    CMat J(d, d);
    for (int k = 0; k < d; ++k) {
        CVec qp = q, qm = q;
        qp(k) += hs;
        qm(k) -= hs;
        J.col(k) = tlu.solve(CVec(psi(qp) - psi(qm))) / (2.0 * hs);
    }
    Eigen::JacobiSVD<CMat> svd(J);
    out.singular_values = svd.singularValues();
    out.sv_min = out.singular_values(d - 1);
    return out;
}

BoundednessSummary boundedness_report(const PathTrace& trace, int rank_r, double tol)
{
    BoundednessSummary s;
    s.sqrt_r = std::sqrt(static_cast<double>(rank_r));
    for (const auto& ps : trace.samples) {
        s.max_nplus_norm = std::max(s.max_nplus_norm, ps.coords.norm());
        s.max_lambda_dist = std::max(s.max_lambda_dist, ps.pplus_dist);
        if (ps.pplus_dist > s.sqrt_r + tol)
            s.all_within = false;
        ++s.samples;
    }
    return s;
}

std::string trace_to_csv(const PathTrace& trace)
{
    std::ostringstream os;
    const Eigen::Index nc = trace.samples.empty() ? 0 : trace.samples[0].coords.size();
    const Eigen::Index np = trace.samples.empty() ? 0 : trace.samples[0].psi.size();
    os << "t";
    for (Eigen::Index j = 0; j < nc; ++j)
        os << ",coord_" << j << "_re,coord_" << j << "_im";
    os << ",min_minor,min_eig,pplus_dist";
    for (Eigen::Index j = 0; j < np; ++j)
        os << ",psi_" << j << "_re,psi_" << j << "_im";
    os << ",sv_min\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        os << buf;
    };
    for (const auto& ps : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", ps.t);
        os << buf;
        for (Eigen::Index j = 0; j < nc; ++j) {
            put(ps.coords(j).real());
            put(ps.coords(j).imag());
        }
        put(ps.min_minor);
        put(ps.min_eig);
        put(ps.pplus_dist);
        for (Eigen::Index j = 0; j < np; ++j) {
            put(ps.psi(j).real());
            put(ps.psi(j).imag());
        }
        put(ps.sv_min);
        os << "\n";
    }
    return os.str();
}

}  // namespace pdlab
