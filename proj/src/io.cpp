#include "heyting/io.hpp"

#include <nlohmann/json.hpp>

namespace heyting {

namespace {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Bottom:
      return "F";
    case Kind::Top:
      return "T";
    case Kind::Var:
      return "var";
    case Kind::And:
      return "and";
    case Kind::Or:
      return "or";
    case Kind::Imp:
      return "imp";
  }
  return "?";
}

}  // namespace

nlohmann::json formula_json(Formula f, std::size_t max_chars) {
  if (auto text = print_limited(f, max_chars)) return {{"text", *text}};
  nlohmann::json dag = nlohmann::json::array();
  for (Formula g : subformulas(f)) {
    switch (g.kind()) {
      case Kind::Bottom:
      case Kind::Top:
        dag.push_back({g.id(), kind_name(g.kind())});
        break;
      case Kind::Var:
        dag.push_back({g.id(), "var", g.var()});
        break;
      default:
        dag.push_back({g.id(), kind_name(g.kind()), g.left().id(), g.right().id()});
        break;
    }
  }
  return {{"dag", std::move(dag)}, {"root", f.id()}, {"dag_size", dag_size(f)}};
}

nlohmann::json node_json(const ModelSlice& slice, NodeId id) {
  const BNode& b = slice.node(id);
  return {{"id", b.id}, {"level", b.level}, {"T", b.T}, {"U", varset_indices(b.U)}};
}

}  // namespace heyting
