#include "ipc_sat.hpp"

#include <algorithm>

#include "heyting/prover.hpp"

namespace heyting::detail {

using sat::Lit;
using sat::neg;
using sat::pos;

IpcSat::IpcSat() {
  name(bottom());
  name(top());
}

int IpcSat::name(Formula f) {
  if (auto it = names_.find(f.id()); it != names_.end()) return it->second;
  int a = -1, b = -1;
  if (f.is(Kind::And) || f.is(Kind::Or) || f.is(Kind::Imp)) {
    a = name(f.left());
    b = name(f.right());
  }
  const int p = solver_.new_var();
  imp_of_var_.push_back(Imp{-1, -1, -1});
  names_.emplace(f.id(), p);
  switch (f.kind()) {
    case Kind::Bottom:
      solver_.add_clause({neg(p)});
      break;
    case Kind::Top:
      solver_.add_clause({pos(p)});
      break;
    case Kind::Var:
      break;
    case Kind::And:
      solver_.add_clause({neg(p), pos(a)});
      solver_.add_clause({neg(p), pos(b)});
      solver_.add_clause({neg(a), neg(b), pos(p)});
      break;
    case Kind::Or:
      solver_.add_clause({neg(p), pos(a), pos(b)});
      solver_.add_clause({neg(a), pos(p)});
      solver_.add_clause({neg(b), pos(p)});
      break;
    case Kind::Imp:
      solver_.add_clause({neg(p), neg(a), pos(b)});
      solver_.add_clause({neg(b), pos(p)});
      imp_of_var_[p] = Imp{a, b, p};
      break;
  }
  return p;
}

void IpcSat::tick(Query& q) {
  ++q.calls;
  ++total_calls_;
  if (q.step_budget != 0 && q.calls > q.step_budget) throw ProverTimeout("prover step budget exhausted");
  if (q.timed && std::chrono::steady_clock::now() > q.deadline) throw ProverTimeout("prover time budget exhausted");
}

std::size_t IpcSat::KeyHash::operator()(const std::vector<Lit>& key) const noexcept {
  std::size_t h = key.size();
  for (Lit l : key) h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(l) + (h >> 29);
  return h;
}

bool IpcSat::search(std::vector<Lit> assume, int goal, Query& q, std::vector<Lit>& core) {
  std::sort(assume.begin(), assume.end());
  assume.erase(std::unique(assume.begin(), assume.end()), assume.end());
  std::vector<Lit> with_goal = assume;
  with_goal.push_back(neg(goal));
  if (refuted_.contains(with_goal)) return false;
  for (;;) {
    tick(q);
    if (!solver_.solve(with_goal)) {
      core.clear();
      for (Lit l : solver_.failed_assumptions())
        if (l != neg(goal)) core.push_back(l);
      return true;
    }
    const std::vector<bool> model = solver_.model();
    // Successor worlds keep every true cone atom.
    std::vector<Lit> base;
    for (int v = 0; v < static_cast<int>(model.size()); ++v)
      if (model[v] && q.in_cone[v]) base.push_back(pos(v));
    auto learn = [&](const Imp& imp, const std::vector<Lit>& sub) {
      // sub - {a} |- a -> b |- p.
      std::vector<Lit> clause{pos(imp.p)};
      for (Lit l : sub)
        if (l != pos(imp.a)) clause.push_back(sat::negate(l));
      solver_.add_clause(std::move(clause));
    };
    std::vector<const Imp*> open;
    for (const Imp& imp : q.imps)
      if (!model[imp.p] && !(model[imp.a] && !model[imp.b])) open.push_back(&imp);
    // One classical call per implication first: flat clauses have the same
    // classical and intuitionistic consequences, so an unsatisfiable
    // successor query is already a proof. Only then pay for recursion.
    bool learned = false;
    for (const Imp* imp : open) {
      std::vector<Lit> next = base;
      next.push_back(pos(imp->a));
      next.push_back(neg(imp->b));
      tick(q);
      if (solver_.solve(next)) continue;
      std::vector<Lit> sub;
      for (Lit l : solver_.failed_assumptions())
        if (l != neg(imp->b)) sub.push_back(l);
      learn(*imp, sub);
      learned = true;
      break;
    }
    for (std::size_t k = 0; k < open.size() && !learned; ++k) {
      const Imp& imp = *open[k];
      std::vector<Lit> next = base;
      next.push_back(pos(imp.a));
      std::vector<Lit> sub;
      if (!search(std::move(next), imp.b, q, sub)) continue;
      learn(imp, sub);
      learned = true;
    }
    if (!learned) {
      refuted_.insert(std::move(with_goal));
      return false;
    }
  }
}

bool IpcSat::prove(std::span<const Formula> premises, Formula goal, std::uint64_t step_budget,
                   std::chrono::steady_clock::time_point deadline, bool timed) {
  Query q{{}, {}, step_budget, deadline, timed};
  std::vector<Lit> assume;
  for (Formula f : premises) assume.push_back(pos(name(f)));
  const int g = name(goal);
  q.in_cone.assign(static_cast<std::size_t>(solver_.num_vars()), 0);
  std::vector<Formula> roots(premises.begin(), premises.end());
  roots.push_back(goal);
  for (Formula r : roots) {
    for (Formula s : subformulas(r)) {
      const int v = names_.at(s.id());
      if (q.in_cone[v]) continue;
      q.in_cone[v] = 1;
      if (imp_of_var_[v].p >= 0) q.imps.push_back(imp_of_var_[v]);
    }
  }
  std::vector<Lit> core;
  return search(std::move(assume), g, q, core);
}

}  // namespace heyting::detail
