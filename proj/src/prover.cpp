#include "heyting/prover.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

#include "ipc_sat.hpp"

namespace heyting {

Sequent::Sequent(std::vector<Formula> ante, Formula succ) : antecedent(std::move(ante)), succedent(succ) {
  std::sort(antecedent.begin(), antecedent.end());
  antecedent.erase(std::unique(antecedent.begin(), antecedent.end()), antecedent.end());
}

namespace {

using Context = std::vector<Formula>;  // sorted by id, no duplicates

bool contains(const Context& c, Formula f) { return std::binary_search(c.begin(), c.end(), f); }

void insert(Context& c, Formula f) {
  auto it = std::lower_bound(c.begin(), c.end(), f);
  if (it == c.end() || *it != f) c.insert(it, f);
}

void erase(Context& c, Formula f) {
  auto it = std::lower_bound(c.begin(), c.end(), f);
  if (it != c.end() && *it == f) c.erase(it);
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t x : k) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

constexpr std::uint32_t kMaskVariables = 6;
constexpr std::uint64_t kNoMask = 0;  // stored alongside a flag

// Truth table over x1..x6 as a 64-bit mask, or nullopt when f mentions
// other variables.
class TruthMasks {
 public:
  std::optional<std::uint64_t> get(Formula f) {
    if (auto it = cache_.find(f.id()); it != cache_.end()) {
      if (!it->second.first) return std::nullopt;
      return it->second.second;
    }
    std::optional<std::uint64_t> m;
    switch (f.kind()) {
      case Kind::Bottom:
        m = 0;
        break;
      case Kind::Top:
        m = ~std::uint64_t{0};
        break;
      case Kind::Var:
        if (f.var() <= kMaskVariables) m = pattern(f.var());
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Imp: {
        auto a = get(f.left());
        if (!a) break;
        auto b = get(f.right());
        if (!b) break;
        m = f.kind() == Kind::And ? (*a & *b) : f.kind() == Kind::Or ? (*a | *b) : (~*a | *b);
        break;
      }
    }
    cache_.emplace(f.id(), std::make_pair(m.has_value(), m.value_or(kNoMask)));
    return m;
  }

  static std::uint64_t pattern(std::uint32_t index) {
    std::uint64_t m = 0;
    for (std::uint32_t v = 0; v < 64; ++v)
      if (v >> (index - 1) & 1) m |= std::uint64_t{1} << v;
    return m;
  }

  void clear() { cache_.clear(); }

 private:
  std::unordered_map<std::uint32_t, std::pair<bool, std::uint64_t>> cache_;
};

}  // namespace

struct Prover::Impl {
  mutable std::shared_mutex memo_mutex;
  std::unordered_map<std::vector<std::uint32_t>, bool, KeyHash> memo;
  std::mutex masks_mutex;
  TruthMasks masks;

  mutable std::mutex stats_mutex;
  ProverStats totals;

  mutable std::mutex sat_mutex;
  detail::IpcSat sat;

  // Per-query state.
  struct Query {
    ProverLimits limits;
    std::chrono::steady_clock::time_point deadline;
    std::uint64_t steps = 0;
    ProverStats stats;
  };

  void tick(Query& q) {
    ++q.steps;
    ++q.stats.calls;
    if (q.limits.step_budget != 0 && q.steps > q.limits.step_budget)
      throw ProverTimeout("prover step budget exhausted");
    if (q.limits.time_budget.count() != 0 && (q.steps & 1023) == 0 && std::chrono::steady_clock::now() > q.deadline)
      throw ProverTimeout("prover time budget exhausted");
  }

  // True when some classical valuation satisfies ctx and falsifies goal.
  bool classically_refuted(const Context& ctx, Formula goal) {
    std::lock_guard lock(masks_mutex);
    auto g = masks.get(goal);
    if (!g) return false;
    std::uint64_t acc = ~*g;
    for (Formula f : ctx) {
      auto m = masks.get(f);
      if (!m) return false;
      acc &= *m;
      if (acc == 0) return false;
    }
    return acc != 0;
  }

  static std::vector<std::uint32_t> key_of(const Context& ctx, Formula goal) {
    std::vector<std::uint32_t> key;
    key.reserve(ctx.size() + 1);
    key.push_back(goal.id());
    for (Formula f : ctx) key.push_back(f.id());
    return key;
  }

  bool derive(Context ctx, Formula goal, Query& q) {
    for (;;) {
      tick(q);
      if (goal.is(Kind::Top) || contains(ctx, bottom()) || contains(ctx, goal)) return true;

      // Invertible right rules.
      if (goal.is(Kind::And)) {
        if (!derive(ctx, goal.left(), q)) return false;
        goal = goal.right();
        continue;
      }
      if (goal.is(Kind::Imp)) {
        insert(ctx, goal.left());
        goal = goal.right();
        continue;
      }

      // Invertible left rules, first applicable formula in id order.
      bool rewritten = false;
      for (Formula f : ctx) {
        switch (f.kind()) {
          case Kind::Top:
            erase(ctx, f);
            rewritten = true;
            break;
          case Kind::And:
            erase(ctx, f);
            insert(ctx, f.left());
            insert(ctx, f.right());
            rewritten = true;
            break;
          case Kind::Or: {
            Context other = ctx;
            erase(other, f);
            insert(other, f.right());
            erase(ctx, f);
            insert(ctx, f.left());
            if (!derive(std::move(ctx), goal, q)) return false;
            return derive(std::move(other), goal, q);
          }
          case Kind::Imp: {
            const Formula a = f.left();
            const Formula b = f.right();
            switch (a.kind()) {
              case Kind::Bottom:
                erase(ctx, f);
                rewritten = true;
                break;
              case Kind::Top:
                erase(ctx, f);
                insert(ctx, b);
                rewritten = true;
                break;
              case Kind::Var:
                if (contains(ctx, a)) {
                  erase(ctx, f);
                  insert(ctx, b);
                  rewritten = true;
                }
                break;
              case Kind::And:
                erase(ctx, f);
                insert(ctx, mk_imp(a.left(), mk_imp(a.right(), b)));
                rewritten = true;
                break;
              case Kind::Or:
                erase(ctx, f);
                insert(ctx, mk_imp(a.left(), b));
                insert(ctx, mk_imp(a.right(), b));
                rewritten = true;
                break;
              case Kind::Imp:
                break;
            }
            break;
          }
          default:
            break;
        }
        if (rewritten) break;
      }
      if (rewritten) continue;
      return saturated(std::move(ctx), goal, q);
    }
  }

  // ctx holds only atoms, atom implications waiting on a missing atom, and
  // nested implications (c -> d) -> b.
  bool saturated(Context ctx, Formula goal, Query& q) {
    auto key = key_of(ctx, goal);
    {
      std::shared_lock lock(memo_mutex);
      if (auto it = memo.find(key); it != memo.end()) {
        ++q.stats.memo_hits;
        return it->second;
      }
    }
    bool result = false;
    if (classically_refuted(ctx, goal)) {
      ++q.stats.classical_cuts;
    } else {
      if (goal.is(Kind::Or)) result = derive(ctx, goal.left(), q) || derive(ctx, goal.right(), q);
      for (std::size_t i = 0; !result && i < ctx.size(); ++i) {
        const Formula f = ctx[i];
        if (!f.is(Kind::Imp) || !f.left().is(Kind::Imp)) continue;
        const Formula c = f.left().left();
        const Formula d = f.left().right();
        const Formula b = f.right();
        Context rest = ctx;
        erase(rest, f);
        Context left = rest;
        insert(left, c);
        insert(left, mk_imp(d, b));
        if (!derive(std::move(left), d, q)) continue;
        insert(rest, b);
        result = derive(std::move(rest), goal, q);
      }
    }
    std::unique_lock lock(memo_mutex);
    memo.emplace(std::move(key), result);
    return result;
  }

  bool run(Context ctx, Formula goal, const ProverLimits& limits) {
    Query q;
    q.limits = limits;
    q.deadline = std::chrono::steady_clock::now() + limits.time_budget;
    bool result;
    try {
      result = derive(std::move(ctx), goal, q);
    } catch (...) {
      absorb(q.stats);
      throw;
    }
    absorb(q.stats);
    return result;
  }

  void absorb(const ProverStats& s) {
    std::lock_guard lock(stats_mutex);
    totals.calls += s.calls;
    totals.memo_hits += s.memo_hits;
    totals.classical_cuts += s.classical_cuts;
  }
};

namespace {

std::size_t sequent_dag(const Sequent& s) {
  std::unordered_set<std::uint32_t> seen;
  for (Formula f : s.antecedent)
    for (Formula g : subformulas(f)) seen.insert(g.id());
  for (Formula g : subformulas(s.succedent)) seen.insert(g.id());
  return seen.size();
}

}  // namespace

Prover::Prover() : impl_(std::make_unique<Impl>()) {}
Prover::~Prover() = default;

bool Prover::prove(std::span<const Formula> premises, Formula goal, const ProverLimits& limits) {
  return prove(Sequent(std::vector<Formula>(premises.begin(), premises.end()), goal), limits);
}

bool Prover::prove(const Sequent& s, const ProverLimits& limits) {
  // Classical invalidity refutes outright when the variables allow a table.
  std::vector<std::uint32_t> vars = variables(s.succedent);
  for (Formula f : s.antecedent) {
    auto v = variables(f);
    vars.insert(vars.end(), v.begin(), v.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() <= 16 && !prove_classical(s.antecedent, s.succedent)) return false;
  Engine engine = limits.engine;
  if (engine == Engine::Auto) engine = sequent_dag(s) <= kAutoSequentDag ? Engine::G4ip : Engine::Sat;
  if (engine == Engine::G4ip) return impl_->run(s.antecedent, s.succedent, limits);
  std::lock_guard lock(impl_->sat_mutex);
  const bool timed = limits.time_budget.count() != 0;
  return impl_->sat.prove(s.antecedent, s.succedent, limits.step_budget,
                          std::chrono::steady_clock::now() + limits.time_budget, timed);
}

ProverStats Prover::stats() const {
  ProverStats s;
  {
    std::lock_guard lock(impl_->stats_mutex);
    s = impl_->totals;
  }
  {
    std::lock_guard lock(impl_->sat_mutex);
    s.sat_calls = impl_->sat.solver_calls();
    s.sat_variables = impl_->sat.named();
  }
  std::shared_lock lock(impl_->memo_mutex);
  s.memo_entries = impl_->memo.size();
  return s;
}

void Prover::clear() {
  std::unique_lock lock(impl_->memo_mutex);
  impl_->memo.clear();
  std::lock_guard mlock(impl_->masks_mutex);
  impl_->masks.clear();
  std::lock_guard slock(impl_->sat_mutex);
  impl_->sat = detail::IpcSat();
}

Prover& default_prover() {
  static Prover instance;
  return instance;
}

bool prove_ipc(std::span<const Formula> premises, Formula goal, const ProverLimits& limits) {
  return default_prover().prove(premises, goal, limits);
}

bool equiv_ipc(Formula a, Formula b, const ProverLimits& limits) {
  if (a == b) return true;
  return prove_ipc({a}, b, limits) && prove_ipc({b}, a, limits);
}

// ---------------------------------------------------------------------------
// Classical consequence by bit-parallel truth tables: 64 valuations per word.

bool prove_classical(std::span<const Formula> premises, Formula goal) {
  std::vector<std::uint32_t> vars = variables(goal);
  for (Formula f : premises) {
    auto v = variables(f);
    vars.insert(vars.end(), v.begin(), v.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > kClassicalVariableLimit)
    throw VariableLimitExceeded("classical check supports at most 24 variables, got " + std::to_string(vars.size()));

  std::vector<Formula> roots(premises.begin(), premises.end());
  roots.push_back(goal);
  // One combined post-order over all roots.
  std::vector<Formula> order;
  {
    std::unordered_map<std::uint32_t, bool> seen;
    for (Formula r : roots)
      for (Formula g : subformulas(r))
        if (seen.emplace(g.id(), true).second) order.push_back(g);
  }
  std::unordered_map<std::uint32_t, std::size_t> slot;
  for (std::size_t i = 0; i < order.size(); ++i) slot.emplace(order[i].id(), i);
  std::unordered_map<std::uint32_t, std::size_t> var_slot;
  for (std::size_t i = 0; i < vars.size(); ++i) var_slot.emplace(vars[i], i);

  const std::size_t k = vars.size();
  const std::size_t low = std::min<std::size_t>(k, 6);
  const std::uint64_t valid = low == 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::size_t{1} << low)) - 1);
  const std::size_t blocks = k > 6 ? (std::size_t{1} << (k - 6)) : 1;
  std::vector<std::uint64_t> value(order.size());
  for (std::size_t block = 0; block < blocks; ++block) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Formula g = order[i];
      std::uint64_t v = 0;
      switch (g.kind()) {
        case Kind::Bottom:
          v = 0;
          break;
        case Kind::Top:
          v = ~std::uint64_t{0};
          break;
        case Kind::Var: {
          const std::size_t s = var_slot.at(g.var());
          if (s < 6)
            v = TruthMasks::pattern(static_cast<std::uint32_t>(s + 1));
          else
            v = (block >> (s - 6) & 1) ? ~std::uint64_t{0} : 0;
          break;
        }
        case Kind::And:
          v = value[slot.at(g.left().id())] & value[slot.at(g.right().id())];
          break;
        case Kind::Or:
          v = value[slot.at(g.left().id())] | value[slot.at(g.right().id())];
          break;
        case Kind::Imp:
          v = ~value[slot.at(g.left().id())] | value[slot.at(g.right().id())];
          break;
      }
      value[i] = v;
    }
    std::uint64_t counter = valid & ~value[slot.at(goal.id())];
    for (Formula p : premises) counter &= value[slot.at(p.id())];
    if (counter != 0) return false;
  }
  return true;
}

DisjunctionSplit disjunction_split(Formula f, const ProverLimits& limits) {
  if (!f.is(Kind::Or)) throw std::invalid_argument("disjunction_split expects a disjunction, got " + print(f));
  if (!prove_ipc({}, f, limits)) return DisjunctionSplit::NotApplicable;
  if (prove_ipc({}, f.left(), limits)) return DisjunctionSplit::Left;
  if (prove_ipc({}, f.right(), limits)) return DisjunctionSplit::Right;
  throw std::logic_error("provable disjunction with no provable disjunct: " + print(f));
}

}  // namespace heyting
