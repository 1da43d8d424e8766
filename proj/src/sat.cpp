#include "heyting/sat.hpp"

#include <algorithm>
#include <cmath>

namespace heyting::sat {

namespace {

// Luby sequence 1 1 2 1 1 2 4 ...
double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

int Solver::new_var() {
  const int v = num_vars();
  assign_.push_back(-1);
  level_.push_back(0);
  reason_.push_back(-1);
  phase_.push_back(false);
  seen_.push_back(0);
  activity_.push_back(0);
  heap_index_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

int Solver::value(Lit l) const {
  const int a = assign_[var_of(l)];
  if (a < 0) return -1;
  return a ^ (l & 1);
}

void Solver::enqueue(Lit l, int reason) {
  const int v = var_of(l);
  assign_[v] = static_cast<std::int8_t>((l & 1) ^ 1);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

void Solver::attach(int ci) {
  const Clause& c = clauses_[ci];
  watches_[c.lits[0]].push_back(ci);
  watches_[c.lits[1]].push_back(ci);
}

bool Solver::add_clause(std::vector<Lit> lits) {
  if (!ok_) return false;
  cancel_until(0);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return true;  // tautology
    const int val = value(lits[i]);
    if (val == 1) return true;
    if (val == 0) continue;
    kept.push_back(lits[i]);
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() != -1) ok_ = false;
    return ok_;
  }
  clauses_.push_back(Clause{std::move(kept)});
  attach(static_cast<int>(clauses_.size()) - 1);
  return true;
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = negate(p);
    std::vector<int>& ws = watches_[false_lit];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const int ci = ws[i++];
      Clause& c = clauses_[ci];
      if (c.deleted) continue;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      if (value(c.lits[0]) == 1) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (value(c.lits[0]) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c.lits[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

void Solver::bump_var(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(Clause& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (Clause& d : clauses_)
      if (d.learnt) d.activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& back_level) {
  learnt.assign(1, 0);
  int path = 0;
  Lit p = -1;
  std::size_t index = trail_.size();
  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
      const Lit q = c.lits[j];
      const int v = var_of(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    confl = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = negate(p);

  back_level = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (level_[var_of(learnt[i])] > back_level) {
      back_level = level_[var_of(learnt[i])];
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (Lit l : learnt) seen_[var_of(l)] = 0;
}

void Solver::analyze_final(Lit p) {
  // p is an assumption that is currently false.
  failed_.assign(1, p);
  if (decision_level() == 0) return;
  seen_[var_of(p)] = 1;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
    const int v = var_of(trail_[i]);
    if (!seen_[v]) continue;
    if (reason_[v] == -1) {
      failed_.push_back(trail_[i]);
    } else {
      const Clause& c = clauses_[reason_[v]];
      for (std::size_t j = 1; j < c.lits.size(); ++j)
        if (level_[var_of(c.lits[j])] > 0) seen_[var_of(c.lits[j])] = 1;
    }
    seen_[v] = 0;
  }
  seen_[var_of(p)] = 0;
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[level]);) {
    const int v = var_of(trail_[i]);
    phase_[v] = assign_[v] == 1;
    assign_[v] = -1;
    reason_[v] = -1;
    if (heap_index_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

int Solver::pick_branch() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (assign_[v] < 0) return phase_[v] ? pos(v) : neg(v);
  }
  return -1;
}

void Solver::reduce_db() {
  std::vector<int> learnts;
  for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
    const Clause& c = clauses_[ci];
    if (c.learnt && !c.deleted && c.lits.size() > 2) learnts.push_back(ci);
  }
  std::sort(learnts.begin(), learnts.end(),
            [&](int a, int b) { return clauses_[a].activity < clauses_[b].activity; });
  for (std::size_t k = 0; k < learnts.size() / 2; ++k) {
    Clause& c = clauses_[learnts[k]];
    const int v = var_of(c.lits[0]);
    const bool locked = reason_[v] == learnts[k] && value(c.lits[0]) == 1;
    if (locked) continue;
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    --learnt_count_;
  }
  max_learnts_ += max_learnts_ / 10;
}

int Solver::search(std::uint64_t conflict_limit, std::span<const Lit> assumptions) {
  std::uint64_t conflicts = 0;
  std::vector<Lit> learnt;
  for (;;) {
    const int confl = propagate();
    if (confl != -1) {
      ++conflicts;
      ++total_conflicts_;
      if (decision_level() == 0) {
        ok_ = false;
        failed_.clear();
        return 0;
      }
      int back_level = 0;
      analyze(confl, learnt, back_level);
      cancel_until(back_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back(Clause{learnt, true});
        const int ci = static_cast<int>(clauses_.size()) - 1;
        attach(ci);
        bump_clause(clauses_[ci]);
        ++learnt_count_;
        enqueue(learnt[0], ci);
      }
      var_inc_ *= 1 / 0.95;
      clause_inc_ *= 1 / 0.999;
      continue;
    }
    if (conflicts >= conflict_limit) {
      cancel_until(0);
      return -1;
    }
    if (learnt_count_ >= max_learnts_) reduce_db();
    Lit next = -1;
    while (decision_level() < static_cast<int>(assumptions.size())) {
      const Lit p = assumptions[decision_level()];
      const int val = value(p);
      if (val == 1) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));
      } else if (val == 0) {
        analyze_final(p);
        return 0;
      } else {
        next = p;
        break;
      }
    }
    if (next == -1) {
      next = pick_branch();
      if (next == -1) {
        model_.assign(assign_.size(), false);
        for (std::size_t v = 0; v < assign_.size(); ++v) model_[v] = assign_[v] == 1;
        return 1;
      }
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(next, -1);
  }
}

bool Solver::solve(std::span<const Lit> assumptions) {
  failed_.clear();
  if (!ok_) return false;
  cancel_until(0);
  int status = -1;
  for (int round = 0; status < 0; ++round) status = search(static_cast<std::uint64_t>(luby(2, round) * 100), assumptions);
  cancel_until(0);
  return status == 1;
}

void Solver::heap_insert(int v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

int Solver::heap_pop() {
  const int top = heap_[0];
  heap_index_[top] = -1;
  const int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::heap_up(std::size_t i) {
  const int v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const int v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

}  // namespace heyting::sat
