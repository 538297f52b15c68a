#pragma once

#include "nodalkit/shooting.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nodalkit {

struct AcceptanceOptions {
    SolverConfig solver;
    std::filesystem::path scratch_dir; // empty: a fresh directory under the system temp dir
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details; // one line per individual check
    double seconds = 0.0;
};

// Criteria 1..10.
std::vector<int> criterion_ids();
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

// "criterion <id> <PASS|FAIL> <title> (<seconds>s)"
std::string summary_line(const CriterionResult& r);

} // namespace nodalkit
