#pragma once

#include <iosfwd>
#include <memory>
#include <set>
#include <string>

#include "nefcert/certify.hpp"
#include "nefcert/cone.hpp"
#include "nefcert/datum.hpp"

namespace nefcert {

// Parsed form of the single structured input document:
//   {
//     "p": 2,
//     "blocks": [{"name": "p1", "f": 4, "signature": [1, 1, 1, 1]}],
//     "weights": {"p1.1": "4", "p1.2": "3/2", ...}
//   }
// Slots are 1-indexed and rationals are strings "a/b" or "a".  The
// weights object is optional (commands that do not need weights accept
// documents without it); when present its keys must name signature-1
// slots.
struct InputDocument {
  std::shared_ptr<const ShimuraDatum> datum;
  WeightTuple weights;
};

// Throws input_error on malformed JSON or schema violations.
InputDocument parse_input_text(const std::string& text);
InputDocument parse_input(std::istream& in);

// "name.slot" -> EmbeddingId; the block must exist and the slot must lie
// in [1, f].  Throws input_error otherwise.
EmbeddingId parse_embedding_token(const ShimuraDatum& datum, const std::string& token);

// Comma-separated tokens -> set; every slot must have signature 1.
std::set<EmbeddingId> parse_stratum_tokens(const ShimuraDatum& datum, const std::string& text);

// Certificate serialization: a versioned JSON document listing every
// distinct reachable certificate once, as an entry table
//   {"format": "nefcert-certificate", "version": 1, "root": 0,
//    "entries": [{"id", "datum", "weights", "sections"}, ...]}
// with child certificates referenced by entry id.  Ids are assigned in
// breadth-first order from the root, so serialization is deterministic
// and parse -> serialize round-trips byte-identically.
std::string serialize_certificate(const CertificatePtr& root);

// Throws input_error on malformed JSON, schema violations, unknown ids,
// duplicate ids, or cyclic references.  Semantic defects (wrong
// arithmetic, bad witnesses) are left to verify_certificate.
CertificatePtr parse_certificate_text(const std::string& text);

}  // namespace nefcert
