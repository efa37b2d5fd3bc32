#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pdlab/suites.hpp"

using namespace pdlab;

namespace {

struct DomainArgs {
    std::string file;
    int weight = -1;
    std::string hodge;
};

struct Config {
    DomainArgs dom;
    std::uint64_t seed = 1;
    int count = -1;
    int steps = 500;
    double step_size = 0.01;
    std::string field = "smooth";
    std::string out;
    std::string summary;
    std::string suite;
    int dim = 1;
    Tolerances tol;
};

std::vector<int> parse_hodge(const std::string& s)
{
    std::vector<int> h;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            h.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidSpec("bad Hodge number '" + item + "'");
        }
    }
    return h;
}

DomainSpec load_domain(const DomainArgs& a)
{
    if (!a.file.empty()) {
        json j;
        try {
            j = json::parse(read_file(a.file));
        } catch (const json::exception& e) {
            throw InvalidSpec("cannot parse " + a.file + ": " + e.what());
        }
        return domain_from_json(j);
    }
    if (a.weight < 0 || a.hodge.empty())
        throw InvalidSpec("give --domain FILE or both --weight and --hodge");
    return build_domain_spec(a.weight, parse_hodge(a.hodge));
}

void emit(const Config& c, const std::string& text)
{
    if (c.out.empty() || c.out == "-")
        std::cout << text;
    else
        write_file(c.out, text);
}

void emit_json(const Config& c, const json& j) { emit(c, j.dump(2) + "\n"); }

void add_domain_options(CLI::App* sub, Config& c)
{
    sub->add_option("--domain", c.dom.file, "domain JSON file");
    sub->add_option("--weight", c.dom.weight, "weight n");
    sub->add_option("--hodge", c.dom.hodge, "Hodge numbers, comma separated");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out,-o", c.out, "output file (default stdout)");
    sub->add_option("--tol-rank", c.tol.rank, "rank tolerance");
    sub->add_option("--tol-algebra", c.tol.algebra, "Lie algebra membership tolerance");
    sub->add_option("--tol-minor-singular", c.tol.minor_singular, "N+ singular minor threshold");
    sub->add_option("--tol-minor-borderline", c.tol.minor_borderline, "N+ borderline band upper end");
    sub->add_option("--tol-cluster", c.tol.cluster, "root eigenvalue clustering tolerance");
    sub->add_option("--tol-bound", c.tol.bound, "slack on the sqrt(r) bound");
}

int cmd_domain(const Config& c)
{
    const DomainSpec s = load_domain(c.dom);
    const json j = domain_to_json(s);
    // Self-check: the written file must reload to the same domain.
    const DomainSpec back = domain_from_json(json::parse(j.dump()));
    if ((back.Q() - s.Q()).norm() != 0.0)
        throw NumericalFailure("domain JSON does not round-trip");
    emit_json(c, j);
    return 0;
}

int cmd_roots(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    const auto& rs = ws.roots();
    json j = root_datum_to_json(rs.datum);
    j["graded_basis"] = graded_basis_to_json(ws.algebra());
    emit_json(c, j);
    return 0;
}

int cmd_lambda(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    const auto& rs = ws.roots();
    emit_json(c, so_frame_to_json(rs.frame, rs.datum));
    return 0;
}

int cmd_sample(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    const auto& L = ws.algebra();
    const auto& rs = ws.roots();
    const auto k0 = L.extract_subspace(SubspaceName::k0).basis;
    const auto p0 = L.extract_subspace(SubspaceName::p0).basis;
    const int n = c.count >= 0 ? c.count : 10;
    const auto P = Projector::p_plus(L);
    std::vector<json> rows(n);
    parallel_for(n, [&](int i) {
        Rng rng(Rng::mix(c.seed, 70000 + i));
        CMat X = CMat::Zero(L.spec().dim(), L.spec().dim());
        for (const auto& b : p0)
            X += rng.normal() * b;
        if (L.norm(X) > 0)
            X *= 1.5 * rng.uniform() / L.norm(X);
        const CMat g = CMat(expm(RMat(X.real())).cast<cplx>()) * random_k(k0, rng);
        const FlagPoint pt = flag_from_group(L.spec(), g);
        json row = flag_point_to_json(pt);
        const auto dr = in_period_domain(L, pt);
        row["report"] = domain_report_to_json(dr);
        if (dr.in_nplus)
            row["hc"] = hc_report_to_json(hc_report(L, rs.frame, P.apply(nplus_log(L, pt))));
        rows[i] = row;
    });
    emit_json(c, {{"domain", domain_to_json(L.spec())}, {"samples", rows}});
    return 0;
}

int cmd_verify(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    SuiteOptions opt;
    opt.seed = c.seed;
    opt.count = c.count;
    opt.steps = c.steps;
    opt.step_size = c.step_size;
    const auto rep = run_suite(c.suite, ws, opt);
    emit_json(c, rep.to_json());
    for (const auto& ch : rep.checks)
        std::fprintf(stderr, "%s %s value=%.6g threshold=%.6g%s%s\n", ch.pass ? "PASS" : "FAIL", ch.name.c_str(),
                     ch.value, ch.threshold, ch.detail.empty() ? "" : " ", ch.detail.c_str());
    return rep.pass() ? 0 : 1;
}

int cmd_path(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    const auto& rs = ws.roots();
    PathOptions po;
    po.seed = c.seed;
    po.steps = c.steps;
    po.step_size = c.step_size;
    po.field = parse_field_kind(c.field);
    const auto tr = horizontal_path(ws.algebra(), rs.frame, po);
    emit(c, trace_to_csv(tr));
    const auto b = boundedness_report(tr, rs.frame.rank(), c.tol.bound);
    if (!c.summary.empty()) {
        json j = boundedness_to_json(b);
        j["accepted_steps"] = tr.accepted_steps;
        j["rejections"] = tr.rejections.size();
        j["truncated"] = tr.truncated;
        j["max_horizontality_defect"] = tr.max_horiz_defect;
        write_file(c.summary, j.dump(2) + "\n");
    }
    return b.all_within ? 0 : 1;
}

int cmd_affine(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    const auto& L = ws.algebra();
    const auto fam = build_family(L, c.dim, c.seed);
    const int n = c.count >= 0 ? c.count : 100;
    std::vector<json> rows(n);
    std::vector<int> ok(n, 0);
    parallel_for(n, [&](int i) {
        Rng rng(Rng::mix(c.seed, 80000 + i));
        CVec q(c.dim);
        for (int k = 0; k < c.dim; ++k)
            q(k) = std::polar(fam.chart_radius * rng.uniform(), 2.0 * M_PI * rng.uniform());
        const auto r = psi_affine(L, fam, q);
        std::vector<double> sv(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
        rows[i] = {{"q", complex_list(q)},
                   {"psi", complex_list(r.coords)},
                   {"singular_values", sv},
                   {"reproduction_error", r.reproduction_error}};
        ok[i] = r.sv_min > 1e-3 && r.reproduction_error < 1e-10;
    });
    emit_json(c, {{"dim", c.dim}, {"chart_radius", fam.chart_radius}, {"points", rows}});
    for (int v : ok)
        if (!v)
            return 1;
    return 0;
}

int cmd_report(const Config& c)
{
    Workspace ws(load_domain(c.dom), c.tol, c.seed);
    SuiteOptions opt;
    opt.seed = c.seed;
    opt.count = c.count;
    opt.steps = c.steps;
    opt.step_size = c.step_size;
    json all = json::array();
    bool pass = true;
    for (const auto& name : suite_names()) {
        const auto rep = run_suite(name, ws, opt);
        pass = pass && rep.pass();
        std::fprintf(stderr, "%s %s\n", rep.pass() ? "PASS" : "FAIL", name.c_str());
        all.push_back(rep.to_json());
    }
    emit_json(c, {{"domain", domain_to_json(ws.spec())}, {"pass", pass}, {"suites", all}});
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Period domain lab: Hodge structures, root data and boundedness checks"};
    app.require_subcommand(1);
    Config c;

    auto* dom = app.add_subcommand("domain", "build a domain and write its JSON");
    add_domain_options(dom, c);
    auto* roots = app.add_subcommand("roots", "root datum and graded basis as JSON");
    add_domain_options(roots, c);
    auto* lam = app.add_subcommand("lambda", "strongly orthogonal frame as JSON");
    add_domain_options(lam, c);
    auto* sample = app.add_subcommand("sample", "random period domain points with their reports");
    add_domain_options(sample, c);
    sample->add_option("--count", c.count, "number of samples");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_domain_options(verify, c);
    verify->add_option("--suite", c.suite, "lie, roots, lambda, hc, diagram, bound or affine")->required();
    verify->add_option("--count", c.count, "samples or traces");
    verify->add_option("--steps", c.steps, "accepted steps per trace");
    verify->add_option("--step-size", c.step_size, "nominal step");
    auto* path = app.add_subcommand("path", "horizontal path trace as CSV");
    add_domain_options(path, c);
    path->add_option("--steps", c.steps, "accepted steps");
    path->add_option("--step-size", c.step_size, "nominal step");
    path->add_option("--field", c.field, "smooth, constant or zero");
    path->add_option("--summary", c.summary, "summary JSON file");
    auto* affine = app.add_subcommand("affine", "affine chart Psi on an abelian horizontal family");
    add_domain_options(affine, c);
    affine->add_option("--dim", c.dim, "family dimension");
    affine->add_option("--count", c.count, "chart points");
    auto* report = app.add_subcommand("report", "run every suite");
    add_domain_options(report, c);
    report->add_option("--count", c.count, "samples or traces");
    report->add_option("--steps", c.steps, "accepted steps per trace");
    report->add_option("--step-size", c.step_size, "nominal step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*dom) return cmd_domain(c);
        if (*roots) return cmd_roots(c);
        if (*lam) return cmd_lambda(c);
        if (*sample) return cmd_sample(c);
        if (*verify) return cmd_verify(c);
        if (*path) return cmd_path(c);
        if (*affine) return cmd_affine(c);
        if (*report) return cmd_report(c);
    } catch (const InvalidSpec& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
