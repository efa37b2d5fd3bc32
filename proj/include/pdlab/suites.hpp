#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdlab/io.hpp"

namespace pdlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    int weight = 0;
    std::vector<int> hodge_numbers;
    std::vector<CheckResult> checks;
    json metrics = json::object();

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
    json to_json() const;
};

// The Lie algebra and, on first use, its root system for one domain.
class Workspace {
public:
    Workspace(const DomainSpec& spec, Tolerances tol = {}, std::uint64_t seed = 1);
    const DomainSpec& spec() const { return L_.spec(); }
    const GradedLieAlgebra& algebra() const { return L_; }
    const RootSystem& roots();

private:
    GradedLieAlgebra L_;
    std::uint64_t seed_;
    std::optional<RootSystem> roots_;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int count = -1;  // per-suite default when negative
    int steps = 500;
    double step_size = 0.01;
};

const std::vector<std::string>& suite_names();
// Throws InvalidSpec for an unknown name.
SuiteReport run_suite(const std::string& name, Workspace& ws, const SuiteOptions& opt = {});

SuiteReport lie_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport roots_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport lambda_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport hc_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport diagram_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport bound_suite(Workspace& ws, const SuiteOptions& opt);
SuiteReport affine_suite(Workspace& ws, const SuiteOptions& opt);

// PDLAB_THREADS if set and positive, else the hardware concurrency.
int thread_count();
// Runs f(0..n-1) on up to thread_count() threads. Exceptions are rethrown after joining.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace pdlab
