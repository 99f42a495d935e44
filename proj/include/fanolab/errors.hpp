#pragma once

#include <stdexcept>
#include <string>

namespace fanolab {

// Structural inconsistency in a geometric object (bad decomposition,
// non-exact division, failed transversality); distinct from plain
// precondition violations, which use std::domain_error.
struct StructureError : std::runtime_error {
    explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// The seeded instance generator exhausted its resampling budget.
struct SamplingFailure : std::runtime_error {
    explicit SamplingFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Text parse error carrying the offending position.
struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

}  // namespace fanolab
