#include "nodalkit/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// Runs the given criteria (default: all) and prints one pass/fail line each.
int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i)
        ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        ids = nodalkit::criterion_ids();
    bool all = true;
    for (int id : ids) {
        const nodalkit::CriterionResult r = nodalkit::run_criterion(id);
        for (const std::string& line : r.details)
            std::cout << line << '\n';
        std::cout << nodalkit::summary_line(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
