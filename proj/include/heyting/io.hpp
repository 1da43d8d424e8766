// JSON renderings shared by the exporters.

#pragma once

#include <cstddef>

#include <nlohmann/json_fwd.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/formula.hpp"

namespace heyting {

// {"text": ...} when the printed form fits in max_chars, otherwise
// {"dag": [[id, kind, left, right], ...], "root": id} over the shared nodes,
// children first. Variables appear as [id, "var", index].
nlohmann::json formula_json(Formula f, std::size_t max_chars = 4096);

// {"id", "level", "T", "U"} of one slice node.
nlohmann::json node_json(const ModelSlice& slice, NodeId id);

}  // namespace heyting
