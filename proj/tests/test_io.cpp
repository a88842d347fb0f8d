#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "fixtures.hpp"
#include "json.hpp"
#include "nefcert/errors.hpp"
#include "nefcert/io.hpp"

using namespace nefcert;
using nlohmann::ordered_json;

namespace {

const char* kDoc = R"({
  "p": 2,
  "blocks": [{"name": "p1", "f": 4, "signature": [1, 1, 1, 1]}],
  "weights": {"p1.1": "4", "p1.2": "3/2", "p1.3": "4", "p1.4": "3"}
})";

}  // namespace

TEST_CASE("parsing a full input document") {
  const InputDocument doc = parse_input_text(kDoc);
  CHECK(doc.datum->p() == 2);
  REQUIRE(doc.datum->block_count() == 1);
  CHECK(doc.datum->block(0).name == "p1");
  CHECK(doc.datum->block(0).f == 4);
  CHECK(doc.datum->signature(EmbeddingId{0, 2}) == 1);
  REQUIRE(doc.weights.size() == 4);
  CHECK(doc.weights.at(EmbeddingId{0, 2}) == Rational(3, 2));
  CHECK(doc.weights.at(EmbeddingId{0, 4}) == Rational(3));
}

TEST_CASE("the weights object is optional") {
  const InputDocument doc = parse_input_text(
      R"({"p": 3, "blocks": [{"name": "q", "f": 2, "signature": [1, 0]}]})");
  CHECK(doc.datum->p() == 3);
  CHECK(doc.weights.empty());
}

TEST_CASE("input document schema violations") {
  CHECK_THROWS_AS(parse_input_text("{"), input_error);
  CHECK_THROWS_AS(parse_input_text("[]"), input_error);
  CHECK_THROWS_AS(parse_input_text("{}"), input_error);
  CHECK_THROWS_AS(parse_input_text(R"({"p": 2})"), input_error);
  CHECK_THROWS_AS(parse_input_text(R"({"p": 2, "blocks": []})"), input_error);
  // Composite p.
  CHECK_THROWS_AS(
      parse_input_text(R"({"p": 4, "blocks": [{"name": "a", "f": 1, "signature": [1]}]})"),
      input_error);
  // Signature length mismatch, bad signature values, non-integer entries.
  CHECK_THROWS_AS(
      parse_input_text(R"({"p": 2, "blocks": [{"name": "a", "f": 2, "signature": [1]}]})"),
      input_error);
  CHECK_THROWS_AS(
      parse_input_text(R"({"p": 2, "blocks": [{"name": "a", "f": 1, "signature": [3]}]})"),
      input_error);
  CHECK_THROWS_AS(
      parse_input_text(R"({"p": 2, "blocks": [{"name": "a", "f": 1, "signature": ["x"]}]})"),
      input_error);
  // Missing block fields.
  CHECK_THROWS_AS(parse_input_text(R"({"p": 2, "blocks": [{"f": 1, "signature": [1]}]})"),
                  input_error);
}

TEST_CASE("weight object violations") {
  const std::string head = R"({"p": 2, "blocks": [{"name": "a", "f": 2, "signature": [1, 0]}], )";
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": 5})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"a.1": 4}})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"a.1": "x"}})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"a.1": "1/0"}})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"a.2": "1"}})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"a.3": "1"}})"), input_error);
  CHECK_THROWS_AS(parse_input_text(head + R"("weights": {"b.1": "1"}})"), input_error);
  CHECK_NOTHROW(parse_input_text(head + R"("weights": {"a.1": "-7/3"}})"));
}

TEST_CASE("embedding tokens") {
  const InputDocument doc = parse_input_text(kDoc);
  const ShimuraDatum& d = *doc.datum;
  CHECK(parse_embedding_token(d, "p1.3") == EmbeddingId{0, 3});
  CHECK_THROWS_AS(parse_embedding_token(d, "p13"), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, "p1."), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, "p1.x"), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, "p1.0"), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, "p1.5"), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, "zz.1"), input_error);
  CHECK_THROWS_AS(parse_embedding_token(d, ""), input_error);

  // Block names may themselves contain dots; the last dot splits.
  const InputDocument dotted = parse_input_text(
      R"({"p": 2, "blocks": [{"name": "a.b", "f": 2, "signature": [1, 1]}]})");
  CHECK(parse_embedding_token(*dotted.datum, "a.b.2") == EmbeddingId{0, 2});
}

TEST_CASE("stratum token lists") {
  const InputDocument doc = parse_input_text(kDoc);
  const ShimuraDatum& d = *doc.datum;
  const std::set<EmbeddingId> expect{{0, 1}, {0, 3}};
  CHECK(parse_stratum_tokens(d, "p1.1,p1.3") == expect);
  CHECK(parse_stratum_tokens(d, "  p1.1 , p1.3 ") == expect);
  CHECK(parse_stratum_tokens(d, "p1.3,p1.1") == expect);
  CHECK_THROWS_AS(parse_stratum_tokens(d, ""), input_error);
  CHECK_THROWS_AS(parse_stratum_tokens(d, "p1.1,,p1.3"), input_error);
  CHECK_THROWS_AS(parse_stratum_tokens(d, "p1.9"), input_error);

  const InputDocument mixed = parse_input_text(
      R"({"p": 2, "blocks": [{"name": "a", "f": 2, "signature": [1, 0]}]})");
  CHECK_THROWS_AS(parse_stratum_tokens(*mixed.datum, "a.2"), input_error);
}

TEST_CASE("certificate serialization round-trips byte for byte") {
  const auto d = fixtures::all_one_block(2, 4);
  const WeightTuple t = fixtures::integer_weights(d, {1, 2, 1, 2});  // all node kinds
  const auto cert = build_certificate(d, t);
  const std::string text = serialize_certificate(cert);

  const CertificatePtr parsed = parse_certificate_text(text);
  CHECK(certificate_entry_count(parsed) == certificate_entry_count(cert));
  CHECK(*parsed->datum == *cert->datum);
  CHECK(parsed->weights == cert->weights);
  CHECK(verify_certificate(parsed).ok);
  CHECK(serialize_certificate(parsed) == text);
}

TEST_CASE("multi-block certificates round-trip") {
  const auto d = std::make_shared<ShimuraDatum>(
      2, std::vector<PrimeBlock>{{"a", 2}, {"b", 3}},
      std::vector<std::vector<int>>{{1, 1}, {1, 0, 1}});
  WeightTuple t{{{0, 1}, Rational(2)}, {{0, 2}, Rational(2)},
                {{1, 1}, Rational(3)}, {{1, 3}, Rational(4)}};
  const auto cert = build_certificate(d, t);
  const std::string text = serialize_certificate(cert);
  const CertificatePtr parsed = parse_certificate_text(text);
  CHECK(verify_certificate(parsed).ok);
  CHECK(serialize_certificate(parsed) == text);
}

TEST_CASE("certificate document structure is validated") {
  const auto d = fixtures::all_one_block(2, 2);
  const auto cert = build_certificate(d, fixtures::integer_weights(d, {1, 1}));
  const std::string text = serialize_certificate(cert);

  CHECK_THROWS_AS(parse_certificate_text("{"), input_error);
  CHECK_THROWS_AS(parse_certificate_text("[1]"), input_error);

  SUBCASE("format and version guards") {
    ordered_json doc = ordered_json::parse(text);
    doc["format"] = "something-else";
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
    doc = ordered_json::parse(text);
    doc["version"] = 99;
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("root id must exist") {
    ordered_json doc = ordered_json::parse(text);
    doc["root"] = 42;
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("duplicate entry ids are rejected") {
    ordered_json doc = ordered_json::parse(text);
    doc["entries"][1]["id"] = 0;
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("dangling child references are rejected") {
    ordered_json doc = ordered_json::parse(text);
    doc["entries"][0]["sections"][0]["strata"][0]["child"] = 99;
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("cyclic references are rejected") {
    ordered_json doc = ordered_json::parse(text);
    doc["entries"][0]["sections"][0]["strata"][0]["child"] = 0;
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("child references must be integers") {
    ordered_json doc = ordered_json::parse(text);
    doc["entries"][0]["sections"][0]["strata"][0]["child"] = "zero";
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
  SUBCASE("unknown node kinds are rejected") {
    ordered_json doc = ordered_json::parse(text);
    doc["entries"][0]["sections"][0]["strata"][0]["kind"] = "mystery";
    CHECK_THROWS_AS(parse_certificate_text(doc.dump()), input_error);
  }
}

TEST_CASE("serializing a null certificate is refused") {
  CHECK_THROWS_AS(serialize_certificate(nullptr), input_error);
}

TEST_CASE("parsed certificates still fail verification when semantically wrong") {
  const auto d = fixtures::all_one_block(2, 2);
  const auto cert = build_certificate(d, fixtures::integer_weights(d, {1, 1}));
  ordered_json doc = ordered_json::parse(serialize_certificate(cert));
  // Corrupt one lambda coordinate: structurally fine, semantically wrong.
  doc["entries"][0]["sections"][0]["lambda"][0] = "17/5";
  const CertificatePtr parsed = parse_certificate_text(doc.dump());
  REQUIRE(parsed);
  CHECK_FALSE(verify_certificate(parsed).ok);
}
