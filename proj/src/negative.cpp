#include "heyting/negative.hpp"

#include <unordered_map>

namespace heyting {

Formula godel_gentzen(Formula f) {
  std::unordered_map<Formula, Formula> memo;
  auto go = [&](auto& self, Formula g) -> Formula {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    Formula out;
    switch (g.kind()) {
      case Kind::Bottom:
      case Kind::Top:
        out = g;
        break;
      case Kind::Var:
        out = mk_not(mk_not(g));
        break;
      case Kind::And:
        out = mk_and(self(self, g.left()), self(self, g.right()));
        break;
      case Kind::Or:
        out = mk_not(mk_and(mk_not(self(self, g.left())), mk_not(self(self, g.right()))));
        break;
      case Kind::Imp:
        out = mk_imp(self(self, g.left()), self(self, g.right()));
        break;
    }
    memo.emplace(g, out);
    return out;
  };
  return go(go, f);
}

Formula glivenko(Formula f) { return mk_not(mk_not(f)); }

Formula classical_to_ipc2(Omega& omega, Formula f) {
  const Formula translated = godel_gentzen(f);
  return mk_imp(omega.f(top()), omega.f(translated));
}

}  // namespace heyting
