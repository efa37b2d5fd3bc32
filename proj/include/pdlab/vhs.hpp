#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdlab/hc.hpp"

namespace pdlab {

struct HorizontalFamily {
    DomainSpec spec;
    std::vector<CMat> frame;  // commuting, <,>-orthonormal, in g^{-1,1}
    // Points with sum |q_i| <= d * chart_radius stay inside D.
    double chart_radius = 0.0;
    int dim() const { return static_cast<int>(frame.size()); }
};

HorizontalFamily build_family(const GradedLieAlgebra& L, int d, std::uint64_t seed);
FlagPoint family_point(const GradedLieAlgebra& L, const HorizontalFamily& fam, const CVec& q);

enum class FieldKind { smooth, constant, zero };
FieldKind parse_field_kind(const std::string& s);

struct PathOptions {
    std::uint64_t seed = 1;
    int steps = 500;
    double step_size = 0.01;
    FieldKind field = FieldKind::smooth;
    double min_step = 1e-8;
};

struct PathSample {
    double t = 0.0;
    CVec coords;           // n_plus coordinates
    double min_minor = 0.0;
    double min_eig = 0.0;
    double pplus_dist = 0.0;
    CVec psi;              // coordinates in a = span(xi(0))
    double sv_min = 0.0;   // |d psi / dt|
    double horiz_defect = 0.0;
};

struct Rejection {
    double t = 0.0;
    double step = 0.0;
    double from_dist = 0.0;  // Lambda distance of the point the step started from
};

struct PathTrace {
    std::vector<PathSample> samples;
    std::vector<Rejection> rejections;
    int accepted_steps = 0;
    bool truncated = false;
    int rank_r = 0;
    double max_horiz_defect = 0.0;
};

// Integrates g' = g x(t) in G_R, x(t) = xi(t) + conj xi(t) with xi(t) in g^{-1,1},
// and reads the big-cell coordinates of g o at each accepted step.
PathTrace horizontal_path(const GradedLieAlgebra& L, const SOFrame& frame, const PathOptions& opt);

struct PsiResult {
    CVec coords;
    RVec singular_values;
    double sv_min = 0.0;
    double reproduction_error = 0.0;  // |coords - q|
};

// Psi(q) in a-coordinates and its finite-difference Jacobian. Throws
// NotInPeriodDomain if the family point leaves D.
PsiResult psi_affine(const GradedLieAlgebra& L, const HorizontalFamily& fam, const CVec& q,
                     const CMat* right_factor = nullptr);

struct BoundednessSummary {
    double max_nplus_norm = 0.0;
    double max_lambda_dist = 0.0;
    double sqrt_r = 0.0;
    bool all_within = true;
    int samples = 0;
};

BoundednessSummary boundedness_report(const PathTrace& trace, int rank_r, double tol = 1e-8);

std::string trace_to_csv(const PathTrace& trace);

}  // namespace pdlab
