#pragma once

#include "nodalkit/reduction.hpp"
#include "nodalkit/shooting.hpp"
#include "nodalkit/spectrum.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace nodalkit {

typedef nlohmann::ordered_json Json;

constexpr int kSchemaVersion = 1;

// Non-finite doubles become null and read back as NaN (or +inf where noted).
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const RadialSolution& u);
RadialSolution radial_from_json(const Json& j);

Json to_json(const ReductionConstants& rc);
Json to_json(const ReducedEnergyReport& r);
Json to_json(const SpectrumReport& r, bool with_vectors = false);
Json to_json(const ScanResult& r);

// Top-level document: {"schema": 1, "command": ..., <body>}.
Json document(const std::string& command, const Json& body);

// Serialized text: two-space indent, trailing newline.
std::string dump(const Json& j);

// Header alpha_lo,alpha_hi,tag,crossings.
void write_sweep_csv(std::ostream& os, const std::vector<SweepInterval>& rows);

} // namespace nodalkit
