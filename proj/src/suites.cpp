#include "pdlab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace pdlab {

bool SuiteReport::pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* SuiteReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

json SuiteReport::to_json() const
{
    json cj = json::array();
    for (const auto& c : checks) {
        json j = {{"name", c.name}, {"pass", c.pass}, {"threshold", c.threshold}, {"detail", c.detail}};
        // NaN is not valid JSON.
        j["value"] = std::isfinite(c.value) ? json(c.value) : json(nullptr);
        cj.push_back(j);
    }
    return {{"suite", suite},
            {"domain", {{"weight", weight}, {"hodge_numbers", hodge_numbers}}},
            {"pass", pass()},
            {"checks", cj},
            {"metrics", metrics}};
}

Workspace::Workspace(const DomainSpec& spec, Tolerances tol, std::uint64_t seed)
    : L_(spec, tol), seed_(seed)
{
}

const RootSystem& Workspace::roots()
{
    if (!roots_)
        roots_ = compute_root_system(L_, seed_);
    return *roots_;
}

int thread_count()
{
    if (const char* env = std::getenv("PDLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& f)
{
    const int nt = std::min(thread_count(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err)
                        err = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

namespace {

SuiteReport start(const std::string& name, const DomainSpec& s)
{
    SuiteReport r;
    r.suite = name;
    r.weight = s.weight();
    r.hodge_numbers = s.hodge_numbers();
    return r;
}

// value <= threshold passes.
void add_max(SuiteReport& r, const std::string& name, double value, double threshold, std::string detail = {})
{
    r.checks.push_back({name, std::isfinite(value) && value <= threshold, value, threshold, std::move(detail)});
}

void add_bool(SuiteReport& r, const std::string& name, bool ok, double value, std::string detail = {})
{
    r.checks.push_back({name, ok, value, 0.0, std::move(detail)});
}

void add_error(SuiteReport& r, const std::string& name, const std::exception& e)
{
    r.checks.push_back({name, false, std::nan(""), 0.0, e.what()});
}

int count_or(const SuiteOptions& opt, int dflt) { return opt.count >= 0 ? opt.count : dflt; }

double rel(const CMat& a, double scale) { return a.norm() / std::max(scale, 1e-300); }

// Rank of so(m) or sp(m): the Cartan subalgebra dimension.
int classical_rank(const DomainSpec& s) { return s.dim() / 2; }

// Real Q-preserving element with a random K part and a random p0 part.
CMat random_group_element(const GradedLieAlgebra& L, const std::vector<CMat>& p0, const std::vector<CMat>& k0,
                          Rng& rng, double scale, CMat* k_out = nullptr)
{
    CMat X = CMat::Zero(L.spec().dim(), L.spec().dim());
    for (const auto& b : p0)
        X += rng.normal() * b;
    const double nx = L.norm(X);
    if (nx > 0)
        X *= scale / nx;
    const CMat k = random_k(k0, rng);
    if (k_out)
        *k_out = k;
    return CMat(expm(RMat(X.real())).cast<cplx>()) * k;
}

}  // namespace

SuiteReport lie_suite(Workspace& ws, const SuiteOptions& opt)
{
    const auto& L = ws.algebra();
    const auto& s = L.spec();
    const int n = s.weight();
    const int m = s.dim();
    const double tol = 1e-8;
    SuiteReport rep = start("lie", s);
    const auto& B = L.basis();

    const int expect_dim = n % 2 ? m * (m + 1) / 2 : m * (m - 1) / 2;
    add_bool(rep, "dimension", L.dim() == expect_dim, L.dim(), "expected " + std::to_string(expect_dim));

    double skew = 0.0;
    for (const auto& b : B)
        skew = std::max(skew, rel(s.Q() * b + b.transpose() * s.Q(), b.norm()));
    add_max(rep, "q_skew", skew, tol);

    // Grade purity of the basis itself.
    double purity = 0.0;
    for (int i = 0; i < L.dim(); ++i)
        purity = std::max(purity, rel(B[i] - L.grade_component(B[i], L.grades()[i]), B[i].norm()));
    add_max(rep, "basis_grade_purity", purity, tol);

    // Bracket rule [g^a, g^b] in g^{a+b}, and closure.
    std::vector<std::pair<int, int>> pairs;
    const int d = L.dim();
    if (d <= 40) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                pairs.emplace_back(i, j);
    } else {
        Rng rng(Rng::mix(opt.seed, 11));
        const int np = count_or(opt, 3000);
        for (int t = 0; t < np; ++t)
            pairs.emplace_back(static_cast<int>(rng.next_u64() % d), static_cast<int>(rng.next_u64() % d));
    }
    double grading = 0.0, closure = 0.0;
    for (auto [i, j] : pairs) {
        const CMat Z = bracket(B[i], B[j]);
        const double sc = B[i].norm() * B[j].norm();
        closure = std::max(closure, rel(s.Q() * Z + Z.transpose() * s.Q(), sc));
        grading = std::max(grading, rel(Z - L.grade_component(Z, L.grades()[i] + L.grades()[j]), sc));
    }
    add_max(rep, "bracket_closure", closure, tol, std::to_string(pairs.size()) + " pairs");
    add_max(rep, "bracket_grading", grading, tol, std::to_string(pairs.size()) + " pairs");

    // Involutions on the basis: squares, commutation, action on grades, automorphism property.
    double inv = 0.0;
    for (int i = 0; i < d; ++i) {
        const CMat& X = B[i];
        const int k = L.grades()[i];
        const CMat th = L.apply_involution(Involution::theta, X);
        const CMat t0 = L.apply_involution(Involution::tau0, X);
        const CMat tc = L.apply_involution(Involution::tauc, X);
        const double sc = X.norm();
        inv = std::max(inv, rel(L.apply_involution(Involution::theta, th) - X, sc));
        inv = std::max(inv, rel(L.apply_involution(Involution::tau0, t0) - X, sc));
        inv = std::max(inv, rel(L.apply_involution(Involution::tauc, tc) - X, sc));
        inv = std::max(inv, rel(L.apply_involution(Involution::theta, t0) - L.apply_involution(Involution::tau0, th), sc));
        inv = std::max(inv, rel(th - (k % 2 ? -1.0 : 1.0) * X, sc));
        inv = std::max(inv, rel(t0 - L.grade_component(t0, -k), sc));
    }
    {
        Rng rng(Rng::mix(opt.seed, 12));
        for (int t = 0; t < std::min(200, d * d); ++t) {
            const CMat& X = B[rng.next_u64() % d];
            const CMat& Y = B[rng.next_u64() % d];
            const double sc = X.norm() * Y.norm();
            for (auto kind : {Involution::theta, Involution::tau0, Involution::tauc}) {
                const CMat lhs = L.apply_involution(kind, bracket(X, Y));
                const CMat rhs = bracket(L.apply_involution(kind, X), L.apply_involution(kind, Y));
                inv = std::max(inv, rel(lhs - rhs, sc));
            }
        }
    }
    add_max(rep, "involutions", inv, tol);

    // Killing form against tr(XY) times the classical constant.
    const double ratio_expected = n % 2 ? m + 2.0 : m - 2.0;
    add_max(rep, "killing_trace_ratio", std::abs(L.trace_form_ratio() - ratio_expected) / ratio_expected, tol,
            "ratio " + std::to_string(L.trace_form_ratio()));

    // Negative definiteness on the compact real form g_c.
    const auto gc = L.extract_subspace(SubspaceName::g_c).basis;
    const CMat K = L.killing_matrix(gc, gc);
    const double imag = K.imag().norm() / std::max(K.norm(), 1e-300);
    RMat Kr = K.real();
    Kr = 0.5 * (Kr + Kr.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(Kr);
    const double top = es.eigenvalues().maxCoeff();
    const double bottom = es.eigenvalues().minCoeff();
    const bool neg_def = static_cast<int>(gc.size()) == d && top < -tol * std::abs(bottom);
    add_bool(rep, "killing_negative_definite_gc", neg_def && imag < tol, top / std::abs(bottom),
             "dim g_c " + std::to_string(gc.size()) + ", imaginary part " + std::to_string(imag));

    // The graded basis is orthonormal for <,>.
    CMat G(d, d);
    std::vector<CMat> thB, conjB;
    for (const auto& b : B) {
        thB.push_back(L.apply_involution(Involution::theta, b));
        conjB.push_back(b.conjugate());
    }
    G = -L.killing_matrix(thB, conjB);
    add_max(rep, "inner_gram_identity", (G - CMat::Identity(d, d)).norm(), tol);

    rep.metrics = {{"dim", d}, {"trace_ratio", L.trace_form_ratio()}};
    json grades = json::object();
    for (int k = -n; k <= n; ++k)
        grades[std::to_string(k)] = L.grade_dim(k);
    rep.metrics["grade_dims"] = grades;
    return rep;
}

SuiteReport roots_suite(Workspace& ws, const SuiteOptions&)
{
    const auto& L = ws.algebra();
    SuiteReport rep = start("roots", L.spec());
    const RootSystem* rs = nullptr;
    try {
        rs = &ws.roots();
    } catch (const Error& e) {
        add_error(rep, "root_system", e);
        return rep;
    }
    const auto& rd = rs->datum;
    const int l = static_cast<int>(rd.cartan.size());
    add_bool(rep, "cartan_rank", l == classical_rank(L.spec()), l,
             "expected " + std::to_string(classical_rank(L.spec())));
    const int nroots = static_cast<int>(rd.roots.size());
    add_bool(rep, "root_count", nroots == L.dim() - l, nroots, "dim g - dim h = " + std::to_string(L.dim() - l));

    // One-dimensional root spaces: distinct values and the vectors together with h span g.
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nroots; ++i)
        for (int j = i + 1; j < nroots; ++j)
            min_sep = std::min(min_sep, (rd.roots[i].values - rd.roots[j].values).cwiseAbs().maxCoeff());
    {
        CMat M(L.spec().dim() * L.spec().dim(), nroots + l);
        for (int i = 0; i < nroots; ++i)
            M.col(i) = vec(rd.roots[i].vector / rd.roots[i].vector.norm());
        for (int i = 0; i < l; ++i)
            M.col(nroots + i) = vec(rd.cartan[i] / rd.cartan[i].norm());
        Eigen::JacobiSVD<CMat> svd(M);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        add_bool(rep, "root_spaces_one_dimensional", min_sep > 1e-6 && smin > 1e-8, min_sep,
                 "min singular value of [roots | h] " + std::to_string(smin));
    }

    double purity = 0.0, eig = 0.0, sl2 = 0.0, tau = 0.0;
    for (const auto& r : rd.roots) {
        const CMat& e = r.vector;
        purity = std::max(purity, rel(e - L.grade_component(e, r.grade), e.norm()));
        // [h, e] = phi(h) e on the Cartan basis.
        for (int i = 0; i < l; ++i)
            eig = std::max(eig, rel(bracket(rd.cartan[i], e) - r.values(i) * e, e.norm() * rd.cartan[i].norm()));
        const Root& nr = rd.roots[r.negative];
        const CMat& f = nr.vector;
        const CMat& h = r.coroot;
        const double sc = std::max({e.norm(), f.norm(), h.norm()});
        sl2 = std::max(sl2, rel(bracket(h, e) - 2.0 * e, sc * sc));
        sl2 = std::max(sl2, rel(bracket(h, f) + 2.0 * f, sc * sc));
        sl2 = std::max(sl2, rel(bracket(e, f) - h, sc * sc));
        // conj e_phi is a multiple of e_{-phi}, with the sign set by compactness.
        const double sign = r.compact ? -1.0 : 1.0;
        tau = std::max(tau, rel(CMat(e.conjugate()) - sign * f, e.norm()));
    }
    add_max(rep, "root_vector_purity", purity, 1e-8);
    add_max(rep, "root_eigen_relation", eig, 1e-8);
    add_max(rep, "sl2_relations", sl2, 1e-10);
    add_max(rep, "conjugation_relation", tau, 1e-8);

    int noncompact = 0, pos = 0, pos_nc = 0;
    for (const auto& r : rd.roots) {
        noncompact += r.compact ? 0 : 1;
        pos += r.positive ? 1 : 0;
        pos_nc += (r.positive && !r.compact) ? 1 : 0;
    }
    int dim_p = 0;
    for (int k = -L.weight(); k <= L.weight(); ++k)
        if (k % 2 != 0)
            dim_p += L.grade_dim(k);
    add_bool(rep, "noncompact_count", noncompact == dim_p && 2 * pos_nc == dim_p, noncompact,
             "dim p = " + std::to_string(dim_p) + ", positive noncompact " + std::to_string(pos_nc));
    add_bool(rep, "positive_half", 2 * pos == nroots, pos);
    rep.metrics = {{"rank_l", l},
                   {"roots", nroots},
                   {"noncompact", noncompact},
                   {"positive_noncompact", pos_nc},
                   {"cluster_gap", rd.cluster_gap},
                   {"attempts", rd.attempts}};
    return rep;
}

SuiteReport lambda_suite(Workspace& ws, const SuiteOptions&)
{
    const auto& L = ws.algebra();
    SuiteReport rep = start("lambda", L.spec());
    const RootSystem* rs = nullptr;
    try {
        rs = &ws.roots();
    } catch (const MaximalityError& e) {
        add_error(rep, "centralizer_maximality", e);
        return rep;
    } catch (const Error& e) {
        add_error(rep, "root_system", e);
        return rep;
    }
    const auto& fr = rs->frame;
    const int r = fr.rank();
    add_bool(rep, "rank_positive", r > 0, r);

    double so = 0.0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if (i == j)
                continue;
            const double sc = fr.e[i].norm() * fr.e[j].norm();
            so = std::max(so, rel(bracket(fr.e[i], fr.e[j]), sc));
            so = std::max(so, rel(bracket(fr.e[i], fr.f[j]), sc));
            so = std::max(so, rel(bracket(fr.x[i], fr.x[j]), sc));
        }
    add_max(rep, "strong_orthogonality", so, 1e-8);

    // x_i in p0: real, Q-skew, odd.
    double inp0 = 0.0;
    for (int i = 0; i < r; ++i) {
        const CMat& x = fr.x[i];
        inp0 = std::max(inp0, rel(x.imag().cast<cplx>(), x.norm()));
        inp0 = std::max(inp0, rel(L.apply_involution(Involution::theta, x) + x, x.norm()));
    }
    add_max(rep, "frame_in_p0", inp0, 1e-8);

    // Independent maximality certificate: the centralizer of span{x_i} in p0 has dimension r.
    const auto p0 = L.extract_subspace(SubspaceName::p0).basis;
    const Eigen::Index sz = L.spec().dim() * L.spec().dim();
    RMat M(2 * sz * std::max(r, 1), static_cast<Eigen::Index>(p0.size()));
    M.setZero();
    for (size_t j = 0; j < p0.size(); ++j)
        for (int i = 0; i < r; ++i) {
            const CVec v = vec(bracket(fr.x[i], p0[j]));
            M.col(static_cast<Eigen::Index>(j)).segment(2 * sz * i, sz) = v.real();
            M.col(static_cast<Eigen::Index>(j)).segment(2 * sz * i + sz, sz) = v.imag();
        }
    const int cdim = static_cast<int>(null_space(M, L.tolerances().rank).cols());
    add_bool(rep, "centralizer_maximality", cdim == r, cdim,
             "centralizer of A0 in p0 has dimension " + std::to_string(cdim));

    json lam = json::array();
    for (int i = 0; i < r; ++i) {
        const auto& v = rs->datum.roots[fr.lambda[i]].values;
        lam.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    rep.metrics = {{"rank_r", r}, {"centralizer_dim", cdim}, {"lambda", lam}, {"grades", fr.grades}};
    return rep;
}

SuiteReport hc_suite(Workspace& ws, const SuiteOptions& opt)
{
    const auto& L = ws.algebra();
    const auto& s = L.spec();
    SuiteReport rep = start("hc", s);
    const RootSystem* rs = nullptr;
    try {
        rs = &ws.roots();
    } catch (const Error& e) {
        add_error(rep, "root_system", e);
        return rep;
    }
    const auto& fr = rs->frame;
    const int r = fr.rank();

    // Three-factor identity.
    const int nz = 1000;
    std::vector<double> res(static_cast<size_t>(r) * nz, 0.0), coord(res.size(), 0.0);
    parallel_for(r, [&](int i) {
        Rng rng(Rng::mix(opt.seed, 100 + i));
        for (int t = 0; t < nz; ++t) {
            const double rad = 3.0 * rng.uniform();
            const double ang = 2.0 * M_PI * rng.uniform();
            const cplx z = std::polar(rad, ang);
            const auto f = sl2_factorization(fr, i, z);
            res[i * nz + t] = f.residual;
            const cplx w = rad > 0 ? z / rad * std::tanh(rad) : cplx(0.0);
            // N+ coordinate of the product: exp(w e) o.
            const auto a = flag_from_group(s, f.product);
            const auto b = nplus_point(L, CMat(w * fr.e[i]));
            coord[i * nz + t] = flag_distance(a, b);
        }
    });
    const double max_res = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    const double max_coord = coord.empty() ? 0.0 : *std::max_element(coord.begin(), coord.end());
    add_max(rep, "three_factor_identity", max_res, 1e-9, std::to_string(nz) + " z per triple");
    add_max(rep, "three_factor_nplus_coordinate", max_coord, 1e-8);

    // Tanh correspondence over sampled (k, t).
    const int ns = count_or(opt, 200);
    const auto k0 = L.extract_subspace(SubspaceName::k0).basis;
    struct Sample {
        double dist_k = 0.0, dist_id = 0.0, sup = 0.0, euclid = 0.0, coord_err = 0.0;
    };
    std::vector<Sample> out(ns);
    parallel_for(ns, [&](int j) {
        Rng rng(Rng::mix(opt.seed, 5000 + j));
        std::vector<double> t(r);
        for (auto& x : t)
            x = 3.0 * rng.uniform();
        const CMat k = random_k(k0, rng);
        Sample& sm = out[j];
        for (int pass = 0; pass < 2; ++pass) {
            const auto io = iota_hc(L, fr, t, pass ? &k : nullptr);
            const auto a = flag_from_group(s, expm(RMat(io.X.real())).cast<cplx>());
            const auto b = nplus_point(L, io.Y);
            (pass ? sm.dist_k : sm.dist_id) = flag_distance(a, b);
            if (!pass) {
                const auto hr = hc_report(L, fr, io.Y);
                sm.sup = hr.sup_norm;
                sm.euclid = hr.euclid_dist;
                for (int i = 0; i < r; ++i)
                    sm.coord_err = std::max(sm.coord_err, std::abs(hr.lambda_coords[i] - std::tanh(t[i])));
            }
        }
    });
    double dk = 0.0, did = 0.0, sup = 0.0, eu = 0.0, ce = 0.0;
    int bad_k = 0;
    for (const auto& sm : out) {
        dk = std::max(dk, sm.dist_k);
        did = std::max(did, sm.dist_id);
        sup = std::max(sup, sm.sup);
        eu = std::max(eu, sm.euclid);
        ce = std::max(ce, sm.coord_err);
        bad_k += sm.dist_k > 1e-8 ? 1 : 0;
    }
    add_max(rep, "iota_flag_identity_k_identity", did, 1e-8, std::to_string(ns) + " samples");
    add_max(rep, "iota_flag_identity_random_k", dk, 1e-8,
            std::to_string(bad_k) + " of " + std::to_string(ns) + " samples above threshold");
    add_max(rep, "lambda_coordinates_tanh", ce, 1e-9);
    rep.checks.push_back({"lambda_sup_norm_below_one", sup < 1.0, sup, 1.0, {}});
    add_max(rep, "lambda_euclid_within_sqrt_r", eu, std::sqrt(double(r)) + 1e-8);
    rep.metrics = {{"rank_r", r},
                   {"max_three_factor_residual", max_res},
                   {"max_flag_distance_random_k", dk},
                   {"max_flag_distance_k_identity", did},
                   {"max_sup_norm", sup}};
    return rep;
}

SuiteReport diagram_suite(Workspace& ws, const SuiteOptions& opt)
{
    const auto& L = ws.algebra();
    const auto& s = L.spec();
    SuiteReport rep = start("diagram", s);
    const int want = count_or(opt, 100);
    const int max_tries = 20 * std::max(want, 1);
    const auto p0 = L.extract_subspace(SubspaceName::p0).basis;
    const auto k0 = L.extract_subspace(SubspaceName::k0).basis;

    struct Out {
        bool landed = false;
        double residual = 0.0;
        bool error = false;
        double residual_p0 = 0.0;  // same sample without its K factor
    };
    // Batches keep the result independent of the thread count.
    std::vector<Out> results;
    int landed = 0;
    const int batch = std::max(want, 16);
    while (landed < want && static_cast<int>(results.size()) < max_tries) {
        const int base = static_cast<int>(results.size());
        std::vector<Out> bo(batch);
        parallel_for(batch, [&](int j) {
            Rng rng(Rng::mix(opt.seed, 20000 + base + j));
            const double scale = 1.5 * rng.uniform();
            CMat kpart;
            const CMat g = random_group_element(L, p0, k0, rng, scale, &kpart);
            try {
                const auto d = check_diagram(L, flag_from_group(s, g));
                bo[j].landed = d.pplus_in_D;
                bo[j].residual = d.residual;
                const auto d0 = check_diagram(L, flag_from_group(s, CMat(g * kpart.adjoint())));
                bo[j].residual_p0 = d0.pplus_in_D ? d0.residual : std::nan("");
            } catch (const Error&) {
                bo[j].error = true;
            }
        });
        for (const auto& o : bo) {
            if (landed >= want)
                break;
            results.push_back(o);
            landed += o.landed ? 1 : 0;
        }
    }
    double maxres = 0.0, maxres_p0 = 0.0;
    int errors = 0;
    for (const auto& o : results) {
        if (o.landed)
            maxres = std::max(maxres, o.residual);
        if (!std::isnan(o.residual_p0))
            maxres_p0 = std::max(maxres_p0, o.residual_p0);
        errors += o.error ? 1 : 0;
    }
    const double rate = results.empty() ? 0.0 : double(landed) / double(results.size());
    add_bool(rep, "landed_samples", landed >= want, landed,
             std::to_string(landed) + " of " + std::to_string(results.size()) + " samples landed in D");
    add_max(rep, "diagram_residual", landed > 0 ? maxres : std::nan(""), 1e-8);
    rep.metrics = {{"landing_rate", rate},
                   {"samples", results.size()},
                   {"landed", landed},
                   {"errors", errors},
                   {"max_residual_without_k", maxres_p0}};
    return rep;
}

SuiteReport bound_suite(Workspace& ws, const SuiteOptions& opt)
{
    const auto& L = ws.algebra();
    const auto& s = L.spec();
    SuiteReport rep = start("bound", s);
    const RootSystem* rs = nullptr;
    try {
        rs = &ws.roots();
    } catch (const Error& e) {
        add_error(rep, "root_system", e);
        return rep;
    }
    const int r = rs->frame.rank();
    const int ntr = count_or(opt, 10);
    std::vector<PathTrace> traces(ntr);
    parallel_for(ntr, [&](int j) {
        PathOptions po;
        po.seed = Rng::mix(opt.seed, 300 + j);
        po.steps = opt.steps;
        po.step_size = opt.step_size;
        traces[j] = horizontal_path(L, rs->frame, po);
    });
    const double bound = std::sqrt(double(r)) + L.tolerances().bound;
    double maxd = 0.0, maxn = 0.0, min_minor = 1.0, min_eig = std::numeric_limits<double>::infinity(), defect = 0.0;
    int min_steps = opt.steps, samples = 0;
    bool within = true;
    json per = json::array();
    for (const auto& tr : traces) {
        const auto b = boundedness_report(tr, r, L.tolerances().bound);
        maxd = std::max(maxd, b.max_lambda_dist);
        maxn = std::max(maxn, b.max_nplus_norm);
        within = within && b.all_within;
        min_steps = std::min(min_steps, tr.accepted_steps);
        samples += b.samples;
        defect = std::max(defect, tr.max_horiz_defect);
        for (const auto& ps : tr.samples) {
            min_minor = std::min(min_minor, ps.min_minor);
            min_eig = std::min(min_eig, ps.min_eig);
        }
        per.push_back(boundedness_to_json(b));
    }
    add_bool(rep, "accepted_steps", ntr > 0 && min_steps >= opt.steps, min_steps,
             "minimum accepted steps over " + std::to_string(ntr) + " traces");
    add_max(rep, "pplus_lambda_distance", maxd, bound, "sqrt(r) + tol with r = " + std::to_string(r));
    rep.checks.back().pass = rep.checks.back().pass && within;
    rep.checks.push_back({"nplus_minor_test", min_minor > L.tolerances().minor_borderline, min_minor,
                          L.tolerances().minor_borderline, {}});
    rep.checks.push_back({"hodge_riemann", min_eig > 0.0, min_eig, 0.0, "smallest HR2 eigenvalue"});
    add_max(rep, "horizontality_defect", defect, 1e-6 * opt.step_size);

    if (s.weight() == 1 && s.hodge_numbers() == std::vector<int>{1, 1}) {
        // Drive straight at the boundary; the only rejections must come from the rim of the disc.
        PathOptions po;
        po.seed = Rng::mix(opt.seed, 999);
        po.field = FieldKind::constant;
        po.steps = 3000;
        po.step_size = opt.step_size;
        const auto tr = horizontal_path(L, rs->frame, po);
        double min_from = tr.rejections.empty() ? std::nan("") : 1.0;
        for (const auto& rj : tr.rejections)
            min_from = std::min(min_from, rj.from_dist);
        double max_tau = 0.0;
        for (const auto& ps : tr.samples)
            max_tau = std::max(max_tau, ps.pplus_dist);
        rep.checks.push_back({"disc_rejections_at_rim", !tr.rejections.empty() && min_from > 1.0 - 1e-3, min_from,
                              1.0 - 1e-3,
                              std::to_string(tr.rejections.size()) + " rejections, " +
                                  std::to_string(tr.accepted_steps) + " accepted"});
        rep.checks.push_back({"disc_samples_inside", max_tau < 1.0, max_tau, 1.0, {}});
        rep.metrics["disc_run"] = {{"rejections", tr.rejections.size()},
                                   {"accepted", tr.accepted_steps},
                                   {"truncated", tr.truncated},
                                   {"max_tau", max_tau}};
    }
    rep.metrics["rank_r"] = r;
    rep.metrics["sqrt_r"] = std::sqrt(double(r));
    rep.metrics["max_lambda_dist"] = maxd;
    rep.metrics["max_nplus_norm"] = maxn;
    rep.metrics["samples"] = samples;
    rep.metrics["traces"] = per;
    return rep;
}

SuiteReport affine_suite(Workspace& ws, const SuiteOptions& opt)
{
    const auto& L = ws.algebra();
    SuiteReport rep = start("affine", L.spec());
    const int npts = count_or(opt, 100);
    json fams = json::array();
    for (int d = 1; d <= 3; ++d) {
        HorizontalFamily fam;
        try {
            fam = build_family(L, d, Rng::mix(opt.seed, 40 + d));
        } catch (const Error& e) {
            fams.push_back({{"d", d}, {"available", false}, {"reason", e.what()}});
            continue;
        }
        std::vector<PsiResult> res(npts);
        std::vector<int> err(npts, 0);
        parallel_for(npts, [&](int j) {
            Rng rng(Rng::mix(opt.seed, 50000 + 1000 * d + j));
            CVec q(d);
            for (int i = 0; i < d; ++i)
                q(i) = std::polar(fam.chart_radius * rng.uniform(), 2.0 * M_PI * rng.uniform());
            try {
                res[j] = psi_affine(L, fam, q);
            } catch (const Error&) {
                err[j] = 1;
            }
        });
        double svmin = std::numeric_limits<double>::infinity(), repro = 0.0;
        int errors = 0;
        for (int j = 0; j < npts; ++j) {
            if (err[j]) {
                ++errors;
                continue;
            }
            svmin = std::min(svmin, res[j].sv_min);
            repro = std::max(repro, res[j].reproduction_error);
        }
        const std::string tag = "d" + std::to_string(d);
        add_bool(rep, tag + "_points_in_D", errors == 0 && npts > 0, npts - errors,
                 std::to_string(errors) + " chart points left D");
        rep.checks.push_back({tag + "_immersion", svmin > 1e-3, svmin, 1e-3, "smallest singular value"});
        add_max(rep, tag + "_reproduction", repro, 1e-10);
        fams.push_back({{"d", d}, {"available", true}, {"chart_radius", fam.chart_radius}, {"min_sv", svmin},
                        {"max_reproduction", repro}});
    }
    if (rep.checks.empty())
        rep.checks.push_back({"family_available", false, 0.0, 0.0, "no abelian horizontal family of dimension 1..3"});
    rep.metrics = {{"families", fams}, {"points_per_family", npts}};
    return rep;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"lie", "roots", "lambda", "hc", "diagram", "bound", "affine"};
    return names;
}

SuiteReport run_suite(const std::string& name, Workspace& ws, const SuiteOptions& opt)
{
    if (name == "lie") return lie_suite(ws, opt);
    if (name == "roots") return roots_suite(ws, opt);
    if (name == "lambda") return lambda_suite(ws, opt);
    if (name == "hc") return hc_suite(ws, opt);
    if (name == "diagram") return diagram_suite(ws, opt);
    if (name == "bound") return bound_suite(ws, opt);
    if (name == "affine") return affine_suite(ws, opt);
    throw InvalidSpec("unknown suite '" + name + "'");
}

}  // namespace pdlab
