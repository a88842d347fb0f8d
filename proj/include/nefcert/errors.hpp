#pragma once

#include <stdexcept>
#include <string>

namespace nefcert {

// Malformed external data: unparsable rationals, unknown embeddings,
// mismatched datum references, bad JSON documents.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition of an operation does not hold for otherwise well-formed
// data (e.g. asking for the gap of a slot that is not signature 1).
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Stratum-specific violations: a chosen subset covers a whole
// signature-1 cycle where a proper subset is required, and similar.
struct stratum_error : std::runtime_error {
  explicit stratum_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nefcert
