#include "nefcert/io.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "nefcert/errors.hpp"
#include "nefcert/strata.hpp"

namespace nefcert {

using ordered_json = nlohmann::ordered_json;

namespace {

const ordered_json& field(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw input_error(std::string("missing field '") + key + "'");
  return *it;
}

long integer_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_number_integer()) throw input_error(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

std::string string_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_string()) throw input_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Rational rational_field(const ordered_json& v, const std::string& what) {
  if (!v.is_string()) throw input_error(what + " must be a rational string \"a/b\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw input_error(what + ": " + e.what());
  }
}

std::shared_ptr<const ShimuraDatum> parse_datum_json(const ordered_json& j) {
  if (!j.is_object()) throw input_error("datum must be an object");
  const long p = integer_field(j, "p");
  const ordered_json& blocks_json = field(j, "blocks");
  if (!blocks_json.is_array() || blocks_json.empty())
    throw input_error("'blocks' must be a nonempty array");
  std::vector<PrimeBlock> blocks;
  std::vector<std::vector<int>> signature;
  for (const ordered_json& bj : blocks_json) {
    if (!bj.is_object()) throw input_error("each block must be an object");
    PrimeBlock block;
    block.name = string_field(bj, "name");
    block.f = static_cast<int>(integer_field(bj, "f"));
    const ordered_json& sig = field(bj, "signature");
    if (!sig.is_array()) throw input_error("'signature' must be an array");
    std::vector<int> row;
    for (const ordered_json& s : sig) {
      if (!s.is_number_integer()) throw input_error("signature entries must be integers");
      row.push_back(s.get<int>());
    }
    blocks.push_back(std::move(block));
    signature.push_back(std::move(row));
  }
  try {
    return std::make_shared<ShimuraDatum>(p, std::move(blocks), std::move(signature));
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw input_error(e.what());
  }
}

ordered_json datum_json(const ShimuraDatum& datum) {
  ordered_json j;
  j["p"] = datum.p();
  ordered_json blocks = ordered_json::array();
  for (int b = 0; b < datum.block_count(); ++b) {
    ordered_json bj;
    bj["name"] = datum.block(b).name;
    bj["f"] = datum.block(b).f;
    bj["signature"] = datum.signature_table()[static_cast<std::size_t>(b)];
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

WeightTuple parse_weights_json(const ShimuraDatum& datum, const ordered_json& j,
                               bool require_signature_one) {
  if (!j.is_object()) throw input_error("'weights' must be an object");
  WeightTuple weights;
  for (const auto& [key, value] : j.items()) {
    const EmbeddingId tau = parse_embedding_token(datum, key);
    if (require_signature_one && datum.signature(tau) != 1)
      throw input_error("weight key '" + key + "' is not a signature-1 slot");
    weights.emplace(tau, rational_field(value, "weight '" + key + "'"));
  }
  return weights;
}

ordered_json weights_json(const ShimuraDatum& datum, const WeightTuple& weights) {
  ordered_json j = ordered_json::object();
  for (const auto& [tau, w] : weights) j[format_embedding(datum, tau)] = w.str();
  return j;
}

}  // namespace

EmbeddingId parse_embedding_token(const ShimuraDatum& datum, const std::string& token) {
  const std::size_t dot = token.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == token.size())
    throw input_error("slot token '" + token + "' is not of the form name.slot");
  const std::string name = token.substr(0, dot);
  const std::string digits = token.substr(dot + 1);
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw input_error("slot token '" + token + "' has a non-numeric slot");
  int block = -1;
  for (int b = 0; b < datum.block_count(); ++b)
    if (datum.block(b).name == name) block = b;
  if (block < 0) throw input_error("slot token '" + token + "' names an unknown block");
  long slot = 0;
  try {
    slot = std::stol(digits);
  } catch (const std::exception&) {
    throw input_error("slot token '" + token + "' has an out-of-range slot");
  }
  if (slot < 1 || slot > datum.block(block).f)
    throw input_error("slot token '" + token + "' is outside 1.." +
                      std::to_string(datum.block(block).f));
  return EmbeddingId{block, static_cast<int>(slot)};
}

std::set<EmbeddingId> parse_stratum_tokens(const ShimuraDatum& datum, const std::string& text) {
  std::set<EmbeddingId> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    // trim surrounding spaces
    const auto begin = token.find_first_not_of(" \t");
    const auto end = token.find_last_not_of(" \t");
    if (begin == std::string::npos) throw input_error("empty stratum token");
    token = token.substr(begin, end - begin + 1);
    const EmbeddingId tau = parse_embedding_token(datum, token);
    if (datum.signature(tau) != 1)
      throw input_error("stratum token '" + token + "' is not a signature-1 slot");
    out.insert(tau);
  }
  if (out.empty()) throw input_error("stratum set is empty");
  return out;
}

InputDocument parse_input_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw input_error("input document must be a JSON object");
  InputDocument doc;
  doc.datum = parse_datum_json(j);
  if (j.contains("weights")) doc.weights = parse_weights_json(*doc.datum, j["weights"], true);
  return doc;
}

InputDocument parse_input(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_input_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Certificate serialization
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kCertificateFormat = "nefcert-certificate";
constexpr int kCertificateVersion = 1;

std::vector<const Certificate*> breadth_first_entries(const CertificatePtr& root) {
  std::vector<const Certificate*> order;
  std::set<const Certificate*> seen;
  std::deque<const Certificate*> queue;
  queue.push_back(root.get());
  seen.insert(root.get());
  while (!queue.empty()) {
    const Certificate* cert = queue.front();
    queue.pop_front();
    order.push_back(cert);
    auto visit = [&](const CertificatePtr& child) {
      if (child && seen.insert(child.get()).second) queue.push_back(child.get());
    };
    for (const auto& section : cert->sections) {
      for (const auto& node : section.strata) {
        if (const auto* adj = std::get_if<AdjacentReductionNode>(&node)) visit(adj->child);
        if (const auto* sparse = std::get_if<SparseDecompositionNode>(&node))
          for (const auto& child : sparse->children) visit(child);
        if (const auto* fiber = std::get_if<FiberLeafNode>(&node)) visit(fiber->child);
        if (const auto* tight = std::get_if<TightReductionNode>(&node)) visit(tight->child);
      }
    }
  }
  return order;
}

ordered_json solution_json(const ShimuraDatum& datum, const SparseSolution& sol) {
  ordered_json j;
  ordered_json chosen = ordered_json::array();
  for (const EmbeddingId& tau : sol.chosen) chosen.push_back(format_embedding(datum, tau));
  j["chosen"] = std::move(chosen);
  auto rationals = [](const std::vector<Rational>& values) {
    ordered_json arr = ordered_json::array();
    for (const Rational& v : values) arr.push_back(v.str());
    return arr;
  };
  j["U"] = rationals(sol.U);
  j["V"] = rationals(sol.V);
  j["S"] = sol.S.str();
  j["A"] = rationals(sol.A);
  ordered_json b = ordered_json::object();
  for (const auto& [tau, value] : sol.B) b[format_embedding(datum, tau)] = value.str();
  j["B"] = std::move(b);
  return j;
}

SparseSolution parse_solution_json(const ShimuraDatum& datum, const ordered_json& j) {
  if (!j.is_object()) throw input_error("'solution' must be an object");
  SparseSolution sol;
  const ordered_json& chosen = field(j, "chosen");
  if (!chosen.is_array()) throw input_error("'chosen' must be an array");
  for (const ordered_json& token : chosen) {
    if (!token.is_string()) throw input_error("'chosen' entries must be slot tokens");
    sol.chosen.push_back(parse_embedding_token(datum, token.get<std::string>()));
  }
  auto rationals = [&](const char* key) {
    const ordered_json& arr = field(j, key);
    if (!arr.is_array()) throw input_error(std::string("'") + key + "' must be an array");
    std::vector<Rational> values;
    for (const ordered_json& v : arr) values.push_back(rational_field(v, key));
    return values;
  };
  sol.U = rationals("U");
  sol.V = rationals("V");
  sol.S = rational_field(field(j, "S"), "S");
  sol.A = rationals("A");
  const ordered_json& b = field(j, "B");
  if (!b.is_object()) throw input_error("'B' must be an object");
  for (const auto& [key, value] : b.items())
    sol.B.emplace(parse_embedding_token(datum, key), rational_field(value, "B '" + key + "'"));
  return sol;
}

ordered_json node_json(const ShimuraDatum& datum, const StratumNode& node,
                       const std::map<const Certificate*, std::size_t>& ids) {
  auto id_of = [&](const CertificatePtr& child) {
    return ids.at(child.get());
  };
  ordered_json j;
  if (const auto* full = std::get_if<FullVanishingNode>(&node)) {
    j["kind"] = "full_vanishing";
    j["stratum"] = format_stratum_set(datum, full->stratum);
  } else if (const auto* adj = std::get_if<AdjacentReductionNode>(&node)) {
    j["kind"] = "adjacent_reduction";
    j["stratum"] = format_stratum_set(datum, adj->stratum);
    j["first"] = format_embedding(datum, adj->first);
    j["second"] = format_embedding(datum, adj->second);
    j["child"] = id_of(adj->child);
  } else if (const auto* sparse = std::get_if<SparseDecompositionNode>(&node)) {
    j["kind"] = "sparse_decomposition";
    j["stratum"] = format_stratum_set(datum, sparse->stratum);
    j["solution"] = solution_json(datum, sparse->solution);
    ordered_json children = ordered_json::array();
    for (const auto& child : sparse->children) children.push_back(id_of(child));
    j["children"] = std::move(children);
  } else if (const auto* fiber = std::get_if<FiberLeafNode>(&node)) {
    j["kind"] = "fiber_leaf";
    j["stratum"] = format_stratum_set(datum, fiber->stratum);
    j["chosen"] = format_embedding(datum, fiber->chosen);
    j["degree"] = fiber->degree.str();
    j["child"] = id_of(fiber->child);
  } else if (const auto* tight = std::get_if<TightReductionNode>(&node)) {
    j["kind"] = "tight_reduction";
    j["stratum"] = format_stratum_set(datum, tight->stratum);
    j["chosen"] = format_embedding(datum, tight->chosen);
    j["child"] = id_of(tight->child);
  }
  return j;
}

StratumNode parse_node_json(const ShimuraDatum& datum, const ordered_json& j,
                            const std::map<long, CertificatePtr>& by_id) {
  if (!j.is_object()) throw input_error("stratum node must be an object");
  const std::string kind = string_field(j, "kind");
  const std::set<EmbeddingId> stratum = parse_stratum_tokens(datum, string_field(j, "stratum"));
  auto child_of = [&](const ordered_json& v) {
    if (!v.is_number_integer()) throw input_error("child reference must be an integer id");
    const auto it = by_id.find(v.get<long>());
    if (it == by_id.end())
      throw input_error("child reference " + v.dump() + " is not a known entry id");
    return it->second;
  };
  if (kind == "full_vanishing") return FullVanishingNode{stratum};
  if (kind == "adjacent_reduction") {
    return AdjacentReductionNode{stratum,
                                 parse_embedding_token(datum, string_field(j, "first")),
                                 parse_embedding_token(datum, string_field(j, "second")),
                                 child_of(field(j, "child"))};
  }
  if (kind == "sparse_decomposition") {
    SparseDecompositionNode node;
    node.stratum = stratum;
    node.solution = parse_solution_json(datum, field(j, "solution"));
    const ordered_json& children = field(j, "children");
    if (!children.is_array()) throw input_error("'children' must be an array");
    for (const ordered_json& c : children) node.children.push_back(child_of(c));
    return node;
  }
  if (kind == "fiber_leaf") {
    return FiberLeafNode{stratum, parse_embedding_token(datum, string_field(j, "chosen")),
                         rational_field(field(j, "degree"), "degree"),
                         child_of(field(j, "child"))};
  }
  if (kind == "tight_reduction") {
    return TightReductionNode{stratum, parse_embedding_token(datum, string_field(j, "chosen")),
                              child_of(field(j, "child"))};
  }
  throw input_error("unknown stratum node kind '" + kind + "'");
}

int block_index_by_name(const ShimuraDatum& datum, const std::string& name) {
  for (int b = 0; b < datum.block_count(); ++b)
    if (datum.block(b).name == name) return b;
  throw input_error("section names unknown block '" + name + "'");
}

}  // namespace

std::string serialize_certificate(const CertificatePtr& root) {
  if (!root) throw input_error("cannot serialize a null certificate");
  const std::vector<const Certificate*> order = breadth_first_entries(root);
  std::map<const Certificate*, std::size_t> ids;
  for (std::size_t i = 0; i < order.size(); ++i) ids.emplace(order[i], i);

  ordered_json doc;
  doc["format"] = kCertificateFormat;
  doc["version"] = kCertificateVersion;
  doc["root"] = 0;
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Certificate& cert = *order[i];
    const ShimuraDatum& d = *cert.datum;
    ordered_json e;
    e["id"] = i;
    e["datum"] = datum_json(d);
    e["weights"] = weights_json(d, cert.weights);
    ordered_json sections = ordered_json::array();
    for (const BlockSection& section : cert.sections) {
      ordered_json s;
      s["block"] = d.block(section.block).name;
      ordered_json lambda = ordered_json::array();
      for (Eigen::Index r = 0; r < section.generic.lambda.size(); ++r)
        lambda.push_back(section.generic.lambda(r).str());
      s["lambda"] = std::move(lambda);
      ordered_json strata = ordered_json::array();
      for (const StratumNode& node : section.strata) strata.push_back(node_json(d, node, ids));
      s["strata"] = std::move(strata);
      sections.push_back(std::move(s));
    }
    e["sections"] = std::move(sections);
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc.dump();
}

CertificatePtr parse_certificate_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw input_error("certificate must be a JSON object");
  if (string_field(doc, "format") != kCertificateFormat)
    throw input_error("not a certificate document");
  if (integer_field(doc, "version") != kCertificateVersion)
    throw input_error("unsupported certificate version");
  const long root_id = integer_field(doc, "root");
  const ordered_json& entries = field(doc, "entries");
  if (!entries.is_array() || entries.empty())
    throw input_error("'entries' must be a nonempty array");

  std::map<long, const ordered_json*> pending;
  for (const ordered_json& e : entries) {
    if (!e.is_object()) throw input_error("each entry must be an object");
    const long id = integer_field(e, "id");
    if (!pending.emplace(id, &e).second)
      throw input_error("duplicate entry id " + std::to_string(id));
  }
  if (!pending.count(root_id)) throw input_error("root id has no entry");

  // Children-first construction: repeatedly build every entry whose
  // child references are already resolved; a stuck pass means a cycle
  // or dangling reference.
  std::map<long, CertificatePtr> by_id;
  auto ready = [&](const ordered_json& e) {
    const auto it = e.find("sections");
    if (it == e.end() || !it->is_array()) return true;  // reported below
    for (const ordered_json& s : *it) {
      if (!s.is_object() || !s.contains("strata") || !s["strata"].is_array()) continue;
      for (const ordered_json& node : s["strata"]) {
        if (!node.is_object()) continue;
        auto resolved = [&](const ordered_json& ref) {
          return ref.is_number_integer() && by_id.count(ref.get<long>());
        };
        if (node.contains("child") && !resolved(node["child"])) return false;
        if (node.contains("children"))
          for (const ordered_json& c : node["children"])
            if (!resolved(c)) return false;
      }
    }
    return true;
  };
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const ordered_json& e = *it->second;
      if (!ready(e)) {
        ++it;
        continue;
      }
      auto cert = std::make_shared<Certificate>();
      cert->datum = parse_datum_json(field(e, "datum"));
      cert->weights = parse_weights_json(*cert->datum, field(e, "weights"), false);
      const ordered_json& sections = field(e, "sections");
      if (!sections.is_array()) throw input_error("'sections' must be an array");
      for (const ordered_json& s : sections) {
        if (!s.is_object()) throw input_error("each section must be an object");
        BlockSection section;
        section.block = block_index_by_name(*cert->datum, string_field(s, "block"));
        const ordered_json& lambda = field(s, "lambda");
        if (!lambda.is_array()) throw input_error("'lambda' must be an array");
        section.generic.lambda.resize(static_cast<Eigen::Index>(lambda.size()));
        for (std::size_t r = 0; r < lambda.size(); ++r)
          section.generic.lambda(static_cast<Eigen::Index>(r)) =
              rational_field(lambda[r], "lambda");
        const ordered_json& strata = field(s, "strata");
        if (!strata.is_array()) throw input_error("'strata' must be an array");
        for (const ordered_json& node : strata)
          section.strata.push_back(parse_node_json(*cert->datum, node, by_id));
        cert->sections.push_back(std::move(section));
      }
      by_id.emplace(it->first, std::move(cert));
      it = pending.erase(it);
      progressed = true;
    }
    if (!progressed)
      throw input_error("certificate entries contain a cycle or dangling child reference");
  }
  return by_id.at(root_id);
}

}  // namespace nefcert
