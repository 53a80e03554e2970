#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eplab {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    double budget_seconds = 0.0;

    bool passed() const;
    // One line: status, id, title, runtime and the failing checks if any.
    std::string summary_line() const;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    // Criterion ids to run; empty runs all.
    std::vector<int> only;
};

CriterionResult criterion_splitting();
CriterionResult criterion_exact_vs_near_resonance();
CriterionResult criterion_imprecision_flatness();
CriterionResult criterion_weak_force(std::uint64_t seed);
CriterionResult criterion_nonmarkovian_reduction();
CriterionResult criterion_phase_sensitive();
CriterionResult criterion_stochastic(std::uint64_t seed);
CriterionResult criterion_identities();

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace eplab
