#pragma once

#include "nodalkit/shooting.hpp"

#include <filesystem>
#include <string>

namespace nodalkit {

struct CacheKey {
    int N = 3;
    double p = 5.0;
    int k = 0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double r_max = 100.0;

    // Stable text form; two keys are equal iff their canonical strings are.
    std::string canonical() const;
    // File stem derived from the canonical string.
    std::string name() const;
};

CacheKey cache_key(int k, int N, double p, const SolverConfig& cfg);

// $NODALKIT_CACHE if set, else ./.nodalkit-cache.
std::filesystem::path default_cache_dir();

// Writes atomically (temporary file plus rename); returns the key name.
std::string cache_store(const RadialSolution& u, const CacheKey& key, const std::filesystem::path& dir);

// NotFoundError when absent or stored under a different key, IntegrityError on a bad checksum.
RadialSolution cache_load(const CacheKey& key, const std::filesystem::path& dir);

// find_nodal through the cache.
RadialSolution solve_cached(int k, int N, double p, const SolverConfig& cfg, const std::filesystem::path& dir);

} // namespace nodalkit
