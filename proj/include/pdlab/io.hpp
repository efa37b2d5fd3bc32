#pragma once

#include <string>

#include <json.hpp>

#include "pdlab/vhs.hpp"

namespace pdlab {

using json = nlohmann::json;

// Matrices are row-major lists of [re, im] pairs. Readers also accept nested rows.
json matrix_to_json(const CMat& A);
CMat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols);
json complex_list(const CVec& v);
json complex_list(const std::vector<cplx>& v);

json domain_to_json(const DomainSpec& s);
DomainSpec domain_from_json(const json& j);

json flag_point_to_json(const FlagPoint& pt);
FlagPoint flag_point_from_json(const DomainSpec& s, const json& j);

json hodge_riemann_to_json(const HodgeRiemannReport& r);
json domain_report_to_json(const DomainReport& r);
json hc_report_to_json(const HCReport& r);
json graded_basis_to_json(const GradedLieAlgebra& L);
json root_datum_to_json(const RootDatum& rd);
json so_frame_to_json(const SOFrame& fr, const RootDatum& rd);
json boundedness_to_json(const BoundednessSummary& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pdlab
