#include "pdlab/io.hpp"

#include <fstream>
#include <sstream>

namespace pdlab {

json matrix_to_json(const CMat& A)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.push_back({A(i, j).real(), A(i, j).imag()});
    return out;
}

namespace {

cplx entry_from_json(const json& e)
{
    if (e.is_number())
        return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw InvalidSpec("matrix entry must be a number or an [re, im] pair");
}

}  // namespace

CMat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols)
{
    if (!j.is_array())
        throw InvalidSpec("matrix must be an array");
    CMat A(rows, cols);
    const bool nested = j.size() == static_cast<size_t>(rows) && rows > 0 && j[0].is_array() &&
                        j[0].size() == static_cast<size_t>(cols) && !(cols == 2 && j[0][0].is_number());
    if (nested) {
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index c = 0; c < cols; ++c)
                A(i, c) = entry_from_json(j[i][c]);
        return A;
    }
    if (j.size() != static_cast<size_t>(rows * cols))
        throw InvalidSpec("matrix has " + std::to_string(j.size()) + " entries, expected " +
                          std::to_string(rows * cols));
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            A(i, c) = entry_from_json(j[i * cols + c]);
    return A;
}

json complex_list(const CVec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json complex_list(const std::vector<cplx>& v)
{
    json out = json::array();
    for (const auto& z : v)
        out.push_back({z.real(), z.imag()});
    return out;
}

json domain_to_json(const DomainSpec& s)
{
    return {{"weight", s.weight()}, {"hodge_numbers", s.hodge_numbers()}, {"Q", matrix_to_json(s.Q())}};
}

DomainSpec domain_from_json(const json& j)
{
    try {
        const int n = j.at("weight").get<int>();
        const auto h = j.at("hodge_numbers").get<std::vector<int>>();
        DomainSpec tmp = build_domain_spec(n, h);
        if (!j.contains("Q"))
            return tmp;
        return domain_spec_from_parts(n, h, matrix_from_json(j.at("Q"), tmp.dim(), tmp.dim()));
    } catch (const json::exception& e) {
        throw InvalidSpec(std::string("malformed domain JSON: ") + e.what());
    }
}

json flag_point_to_json(const FlagPoint& pt) { return {{"matrix", matrix_to_json(pt.matrix)}}; }

FlagPoint flag_point_from_json(const DomainSpec& s, const json& j)
{
    return {s, matrix_from_json(j.at("matrix"), s.dim(), s.dim())};
}

json hodge_riemann_to_json(const HodgeRiemannReport& r)
{
    return {{"in_compact_dual_ok", r.in_compact_dual_ok},
            {"hr1", r.hr1},
            {"hr2", r.hr2},
            {"min_eigenvalue", r.min_eigenvalue},
            {"hr1_residual", r.hr1_residual}};
}

json domain_report_to_json(const DomainReport& r)
{
    return {{"in_nplus", r.in_nplus},
            {"status", to_string(r.status)},
            {"min_abs_minor", r.min_abs_minor},
            {"in_D", r.in_D},
            {"min_eig", r.min_eig},
            {"nplus_coords", complex_list(r.nplus_coords)}};
}

json hc_report_to_json(const HCReport& r)
{
    return {{"lambda_coords", complex_list(r.lambda_coords)},
            {"sup_norm", r.sup_norm},
            {"euclid_dist", r.euclid_dist},
            {"inside", r.inside},
            {"rank_r", r.rank_r}};
}

json graded_basis_to_json(const GradedLieAlgebra& L)
{
    json out = json::array();
    for (int i = 0; i < L.dim(); ++i)
        out.push_back({{"grade", L.grades()[i]}, {"matrix", matrix_to_json(L.basis()[i])}});
    return out;
}

json root_datum_to_json(const RootDatum& rd)
{
    json roots = json::array();
    for (const auto& r : rd.roots) {
        std::vector<double> v(r.values.data(), r.values.data() + r.values.size());
        json jr = {{"values", v},
                   {"grade", r.grade},
                   {"type", r.compact ? "compact" : "noncompact"},
                   {"sign", r.positive ? "positive" : "negative"},
                   {"negative_index", r.negative},
                   {"vector", matrix_to_json(r.vector)}};
        if (r.coroot.size() > 0)
            jr["coroot"] = matrix_to_json(r.coroot);
        roots.push_back(jr);
    }
    json cartan = json::array();
    for (const auto& h : rd.cartan)
        cartan.push_back(matrix_to_json(h));
    return {{"cartan_basis", cartan}, {"roots", roots}, {"cluster_gap", rd.cluster_gap}};
}

json so_frame_to_json(const SOFrame& fr, const RootDatum& rd)
{
    json lam = json::array();
    for (int i = 0; i < fr.rank(); ++i) {
        const auto& v = rd.roots[fr.lambda[i]].values;
        lam.push_back({{"root_index", fr.lambda[i]},
                       {"values", std::vector<double>(v.data(), v.data() + v.size())},
                       {"grade", fr.grades[i]},
                       {"e", matrix_to_json(fr.e[i])},
                       {"f", matrix_to_json(fr.f[i])},
                       {"h", matrix_to_json(fr.h[i])},
                       {"x", matrix_to_json(fr.x[i])},
                       {"y", matrix_to_json(fr.y[i])}});
    }
    return {{"rank", fr.rank()}, {"centralizer_dim", fr.centralizer_dim}, {"lambda", lam}};
}

json boundedness_to_json(const BoundednessSummary& s)
{
    return {{"max_nplus_norm", s.max_nplus_norm},
            {"max_lambda_dist", s.max_lambda_dist},
            {"sqrt_r", s.sqrt_r},
            {"all_within", s.all_within},
            {"samples", s.samples}};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidSpec("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidSpec("cannot write " + path);
    out << contents;
}

}  // namespace pdlab
