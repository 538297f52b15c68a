#pragma once

#include <stdexcept>
#include <string>

namespace nodalkit {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iterative procedure stopped short of its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nodalkit
