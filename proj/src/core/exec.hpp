#pragma once

#include <string>
#include <vector>

#include "core/jsonio.hpp"

namespace olab {

// Execute one JSON-encoded operation. Every config is an object with
// "schema": 1 and a "kind" discriminator naming the operation; the remaining
// fields are the operation's inputs (game operations take the game's fields
// inline at the top level, or a "make" factory object). The result is an
// object echoing "schema" and "kind" plus the operation's outputs; check-style
// operations expose a boolean "holds". Failures throw Error: parse errors for
// malformed configs (messages name the JSON path), invalid/budget/check errors
// forwarded from the underlying computation.
Json exec_json(const Json& config);

// Text in, pretty-printed JSON out (two-space indent, keys sorted, trailing
// newline): the transport used by the C API and the command line.
std::string exec_text(const std::string& config_text);

// All operation kinds, sorted (for usage messages and docs).
std::vector<std::string> exec_kinds();

// Kinds whose execution consumes randomness; they require a "seed" field.
bool exec_kind_randomized(const std::string& kind);

}  // namespace olab
