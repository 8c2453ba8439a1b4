#pragma once

// JSON readers for chain and truncation-family descriptors.

#include <string>
#include <string_view>
#include <vector>

#include "specgap/forms.hpp"

namespace specgap::io {

/// {"Q": [[...]]} or {"birth": [b0 .. b_{n-2}], "death": [a1 .. a_{n-1}]}.
/// Malformed JSON raises DomainError carrying the byte offset.
forms::ReversibleChain parse_chain(std::string_view json_text);

struct FamilySpec {
  std::string birth;  // expression in i
  std::string death;
  std::vector<int> sizes;
};

/// {"b": "expr", "a": "expr", "sizes": [...]}
FamilySpec parse_family(std::string_view json_text);

}  // namespace specgap::io
