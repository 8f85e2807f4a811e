#pragma once

#include "supercurve/elliptic.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace supercurve {

// Input document failed schema or element validation.
struct JobParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully validated job: algebra signature, command name, and the parsed
// command-specific payload fields.
struct JobDescription {
    AlgebraSignature algebra;
    std::string command;

    std::optional<SuperEllipticCurve> curve;
    std::optional<Space> space;
    std::optional<EllipticOneForm> one_form;
    std::optional<EllipticMultiplier> multiplier;
    std::optional<std::pair<EllipticMultiplier, Space>> first;
    std::optional<std::pair<EllipticMultiplier, Space>> second;
};

struct JobResult {
    std::string structured;  // canonical machine-readable document
    std::string rendered;    // human-readable text
};

// Parses and validates a YAML job document with top-level keys `algebra`,
// `command`, `payload`.  Throws JobParseError with a located message.
JobDescription parse_job(const std::string& text);

// Runs a validated job.  Domain failures propagate as std::domain_error /
// std::invalid_argument with command context.
JobResult run_job(const JobDescription& job);

} // namespace supercurve
