#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "snipfit/pipeline/session.hpp"
#include "snipfit/repair/candidate.hpp"
#include "snipfit/runtime/sandbox.hpp"

namespace snipfit::testkit {

enum class SignatureSource { suggested, user };

struct TypeSignature {
  std::vector<std::string> arg_types;  // non-empty
  std::string ret_type;
  SignatureSource source = SignatureSource::suggested;

  friend bool operator==(const TypeSignature&, const TypeSignature&) = default;
};

/// "(String)->int"
std::string to_string(const TypeSignature& sig);
/// Parses "(String, int)->boolean". Throws Error(invalid_argument).
TypeSignature parse_signature(std::string_view text);

struct TestableFunction {
  std::string source;   // `public static <ret> snippet(<args>) { ... }`
  std::string imports;  // newline-separated import lines
  TypeSignature signature;
  std::string origin_candidate;
  std::vector<std::string> arg_vars;
  std::string return_var;
};

struct TestCase {
  std::string source;  // one @Test method calling `snippet`
  bool editable = true;
};

/// Return type from the variable assigned last; argument types from the
/// other variables the snippet declares, in declaration order. Considers
/// variables declared at the snippet's top level. Absent when the candidate
/// has errors or fewer than two such variables. `max_args` > 0 keeps only
/// the first `max_args` argument types.
std::optional<TypeSignature> suggest_types(const repair::Candidate& c, std::size_t max_args = 0);

/// Wraps the body into `snippet(...)`: the last top-level variable of the
/// return type is returned, argument variables are bound from the start of
/// the snippet and their declarations removed. Absent when variables are
/// missing or the result does not check cleanly.
std::optional<TestableFunction> synthesize_function(const repair::Candidate& c, const TypeSignature& sig);

/// Default value expression for a supported type; throws
/// Error(invalid_argument) for anything else.
std::string default_value(std::string_view type);

/// One assertion comparing snippet(defaults...) against the return default.
TestCase generate_test_skeleton(const TypeSignature& sig);

/// `public static <ret> snippet(<args>)` returning defaults.
std::string stub_function(const TypeSignature& sig);

/// Empty when `test` compiles against a stub of `sig`; otherwise the
/// compiler messages.
std::vector<std::string> check_test(const TestCase& test, const TypeSignature& sig);

struct TestOptions {
  runtime::Budget budget;
  std::size_t limit = 0;  // max candidates tested; 0 = all
};

/// Runs `test` against every compilable, non-degenerate candidate that can be
/// synthesized for `sig`, then re-ranks the session: passing candidates
/// first, previous order kept within each group. Throws
/// Error(invalid_argument) when the test does not check against a stub.
std::vector<std::pair<std::string, pipeline::TestRecord>> test_candidates(pipeline::TaskSession& session,
                                                                          const TestCase& test,
                                                                          const TypeSignature& sig,
                                                                          const TestOptions& opts = {});

/// Distinct suggestions over the session's compilable candidates, most
/// frequent first, ties by first appearance in rank order.
std::vector<TypeSignature> suggest_for_session(const pipeline::TaskSession& session, std::size_t limit = 5);

nlohmann::json to_json(const TypeSignature& sig);
TypeSignature signature_from_json(const nlohmann::json& j);

}  // namespace snipfit::testkit
