// Incremental CDCL SAT solver with assumptions: two watched literals, 1UIP
// learning, VSIDS, phase saving, Luby restarts. Clauses may be added between
// solve() calls; learned clauses persist.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace heyting::sat {

// 2 * var + (negated ? 1 : 0).
using Lit = std::int32_t;
inline constexpr Lit pos(int v) { return 2 * v; }
inline constexpr Lit neg(int v) { return 2 * v + 1; }
inline constexpr Lit negate(Lit l) { return l ^ 1; }
inline constexpr int var_of(Lit l) { return l >> 1; }

class Solver {
 public:
  int new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }

  // Returns false once the clause set is unsatisfiable without assumptions.
  bool add_clause(std::vector<Lit> lits);

  // True when satisfiable together with every assumption.
  bool solve(std::span<const Lit> assumptions);

  // After a satisfiable solve().
  bool model_value(int v) const { return model_[v]; }
  const std::vector<bool>& model() const { return model_; }
  // After an unsatisfiable solve(): assumptions whose conjunction is already
  // inconsistent with the clauses.
  const std::vector<Lit>& failed_assumptions() const { return failed_; }

  std::uint64_t conflicts() const { return total_conflicts_; }

 private:
  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };

  int value(Lit l) const;  // 1 true, 0 false, -1 unassigned
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit l, int reason);
  int propagate();
  void analyze(int confl, std::vector<Lit>& learnt, int& back_level);
  void analyze_final(Lit p);
  void cancel_until(int level);
  int pick_branch();
  void attach(int ci);
  void reduce_db();
  int search(std::uint64_t conflict_limit, std::span<const Lit> assumptions);

  void bump_var(int v);
  void bump_clause(Clause& c);
  void heap_insert(int v);
  int heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<bool> phase_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1;
  double clause_inc_ = 1;
  std::vector<int> heap_;
  std::vector<int> heap_index_;  // -1 when absent

  std::size_t learnt_count_ = 0;
  std::size_t max_learnts_ = 20000;
  std::uint64_t total_conflicts_ = 0;

  std::vector<bool> model_;
  std::vector<Lit> failed_;
};

}  // namespace heyting::sat
