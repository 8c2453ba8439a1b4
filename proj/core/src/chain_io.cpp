#include "specgap/chain_io.hpp"

#include "json.hpp"

#include "specgap/errors.hpp"

namespace specgap::io {
namespace {

constexpr char kModule[] = "input";

nlohmann::json parse_object(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(kModule, "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw DomainError(kModule, "expected a JSON object");
  return doc;
}

std::vector<double> numbers(const nlohmann::json& node, const char* key) {
  if (!node.is_array()) throw DomainError(kModule, std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : node) {
    if (!x.is_number()) throw DomainError(kModule, std::string("'") + key + "' holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

forms::ReversibleChain parse_chain(std::string_view json_text) {
  const auto doc = parse_object(json_text);
  if (doc.contains("Q")) {
    const auto& rows = doc["Q"];
    if (!rows.is_array() || rows.empty()) throw DomainError(kModule, "'Q' must be a nonempty array");
    const auto n = static_cast<Eigen::Index>(rows.size());
    forms::Matrix q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = numbers(rows[i], "Q");
      if (static_cast<Eigen::Index>(row.size()) != n) throw DomainError(kModule, "'Q' must be square");
      for (Eigen::Index j = 0; j < n; ++j) q(i, j) = row[j];
    }
    return forms::build_chain(q);
  }
  if (doc.contains("birth") && doc.contains("death")) {
    const auto b = numbers(doc["birth"], "birth");
    const auto a = numbers(doc["death"], "death");
    return forms::birth_death_chain(b, a);
  }
  throw DomainError(kModule, "chain JSON needs 'Q' or both 'birth' and 'death'");
}

FamilySpec parse_family(std::string_view json_text) {
  const auto doc = parse_object(json_text);
  FamilySpec spec;
  if (!doc.contains("b") || !doc["b"].is_string() || !doc.contains("a") || !doc["a"].is_string()) {
    throw DomainError(kModule, "family JSON needs string fields 'b' and 'a'");
  }
  spec.birth = doc["b"].get<std::string>();
  spec.death = doc["a"].get<std::string>();
  if (doc.contains("sizes")) {
    for (const double s : numbers(doc["sizes"], "sizes")) {
      if (s != static_cast<int>(s) || s < 2) throw DomainError(kModule, "sizes must be integers >= 2");
      spec.sizes.push_back(static_cast<int>(s));
    }
  }
  return spec;
}

}  // namespace specgap::io
