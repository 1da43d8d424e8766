#include "heyting/formula.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace heyting {

namespace {

struct Node {
  Kind kind;
  std::uint32_t a;  // variable index, or left child
  std::uint32_t b;  // right child
};

// Nodes live in fixed-size chunks that are never moved, so readers can
// index published nodes without taking the lock.
class Store {
 public:
  static constexpr std::size_t kChunkBits = 16;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 14;

  Store() {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
    intern(Kind::Bottom, 0, 0);
    intern(Kind::Top, 0, 0);
  }

  ~Store() {
    for (auto& c : chunks_) delete[] c.load(std::memory_order_relaxed);
  }

  const Node& at(std::uint32_t id) const {
    return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
  }

  std::uint32_t intern(Kind kind, std::uint32_t a, std::uint32_t b) {
    const Key key{static_cast<std::uint64_t>(kind) << 32 | a, b};
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const std::size_t id = size_.load(std::memory_order_relaxed);
    if (id >= kChunkSize * kMaxChunks) throw std::length_error("formula store exhausted");
    const std::size_t chunk = id >> kChunkBits;
    Node* block = chunks_[chunk].load(std::memory_order_relaxed);
    if (block == nullptr) {
      block = new Node[kChunkSize];
      chunks_[chunk].store(block, std::memory_order_release);
    }
    block[id & (kChunkSize - 1)] = Node{kind, a, b};
    size_.store(id + 1, std::memory_order_release);
    index_.emplace(key, static_cast<std::uint32_t>(id));
    return static_cast<std::uint32_t>(id);
  }

  std::size_t size() const { return size_.load(std::memory_order_acquire); }

 private:
  struct Key {
    std::uint64_t hi;
    std::uint64_t lo;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.hi * 0x9E3779B97F4A7C15ull;
      h ^= k.lo + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  std::array<std::atomic<Node*>, kMaxChunks> chunks_;
  std::atomic<std::size_t> size_{0};
  std::mutex mutex_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

Store& store() {
  static Store instance;
  return instance;
}

}  // namespace

Kind Formula::kind() const { return store().at(id_).kind; }
Formula Formula::left() const { return Formula(store().at(id_).a); }
Formula Formula::right() const { return Formula(store().at(id_).b); }
std::uint32_t Formula::var() const { return store().at(id_).a; }

bool Formula::is_negation() const {
  const Node& n = store().at(id_);
  return n.kind == Kind::Imp && store().at(n.b).kind == Kind::Bottom;
}

Formula bottom() { return Formula(0); }
Formula top() {
  store();  // Bottom and Top are created with the store
  return Formula(1);
}
Formula var(std::uint32_t index) {
  if (index == 0) throw std::invalid_argument("variable indices start at 1");
  return Formula(store().intern(Kind::Var, index, 0));
}
Formula mk_and(Formula a, Formula b) { return Formula(store().intern(Kind::And, a.id(), b.id())); }
Formula mk_or(Formula a, Formula b) { return Formula(store().intern(Kind::Or, a.id(), b.id())); }
Formula mk_imp(Formula a, Formula b) { return Formula(store().intern(Kind::Imp, a.id(), b.id())); }
Formula mk_not(Formula a) { return mk_imp(a, bottom()); }

Formula conj(std::span<const Formula> parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = mk_and(acc, parts[i]);
  return acc;
}

Formula disj(std::span<const Formula> parts) {
  if (parts.empty()) return bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = mk_or(acc, parts[i]);
  return acc;
}

std::size_t store_size() { return store().size(); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula run() {
    Formula f = parse_imp();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (accept("->")) return mk_imp(lhs, parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula acc = parse_and();
    while (accept("|")) acc = mk_or(acc, parse_and());
    return acc;
  }

  Formula parse_and() {
    Formula acc = parse_neg();
    while (accept("&")) acc = mk_and(acc, parse_neg());
    return acc;
  }

  Formula parse_neg() {
    if (accept("~")) return mk_not(parse_neg());
    return parse_atom();
  }

  Formula parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == 'F') {
      ++pos_;
      return bottom();
    }
    if (c == 'T') {
      ++pos_;
      return top();
    }
    if (c == '(') {
      ++pos_;
      Formula inner = parse_imp();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == 'x') {
      const std::size_t start = pos_++;
      if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9')
        throw ParseError("expected variable index", pos_);
      if (text_[pos_] == '0') throw ParseError("variable index must be positive", start);
      std::uint64_t index = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        index = index * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (index > std::numeric_limits<std::uint32_t>::max()) throw ParseError("variable index too large", start);
        ++pos_;
      }
      return var(static_cast<std::uint32_t>(index));
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength: imp 0, or 1, and 2, neg/atom 3.
int precedence(Formula f) {
  switch (f.kind()) {
    case Kind::Imp:
      return f.is_negation() ? 3 : 0;
    case Kind::Or:
      return 1;
    case Kind::And:
      return 2;
    default:
      return 3;
  }
}

class Printer {
 public:
  explicit Printer(std::size_t limit) : limit_(limit) {}

  bool emit(Formula f) {
    switch (f.kind()) {
      case Kind::Bottom:
        return put("F");
      case Kind::Top:
        return put("T");
      case Kind::Var:
        return put("x" + std::to_string(f.var()));
      case Kind::And:
        return binary(f, " & ", 2, /*right_assoc=*/false);
      case Kind::Or:
        return binary(f, " | ", 1, /*right_assoc=*/false);
      case Kind::Imp:
        if (f.is_negation()) return put("~") && operand(f.left(), 3);
        return binary(f, " -> ", 0, /*right_assoc=*/true);
    }
    return false;
  }

  std::string take() { return std::move(out_); }

 private:
  bool put(const std::string& s) {
    if (out_.size() + s.size() > limit_) return false;
    out_ += s;
    return true;
  }

  bool operand(Formula f, int min_prec) {
    if (precedence(f) >= min_prec) return emit(f);
    return put("(") && emit(f) && put(")");
  }

  // & and | associate to the left, -> to the right.
  bool binary(Formula f, const char* op, int prec, bool right_assoc) {
    const int lp = right_assoc ? prec + 1 : prec;
    const int rp = right_assoc ? prec : prec + 1;
    return operand(f.left(), lp) && put(op) && operand(f.right(), rp);
  }

  std::size_t limit_;
  std::string out_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

std::string print(Formula f) {
  Printer p(std::numeric_limits<std::size_t>::max());
  p.emit(f);
  return p.take();
}

std::optional<std::string> print_limited(Formula f, std::size_t max_chars) {
  Printer p(max_chars);
  if (!p.emit(f)) return std::nullopt;
  return p.take();
}

// ---------------------------------------------------------------------------
// Traversals

std::vector<Formula> subformulas(Formula f) {
  std::vector<Formula> order;
  std::unordered_set<std::uint32_t> seen;
  // Iterative post-order; formulas can be deep after repeated translation.
  std::vector<std::pair<Formula, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(g);
      continue;
    }
    if (!seen.insert(g.id()).second) continue;
    stack.emplace_back(g, true);
    const Kind k = g.kind();
    if (k == Kind::And || k == Kind::Or || k == Kind::Imp) {
      stack.emplace_back(g.right(), false);
      stack.emplace_back(g.left(), false);
    }
  }
  return order;
}

std::size_t dag_size(Formula f) { return subformulas(f).size(); }

std::uint64_t tree_size(Formula f) {
  std::unordered_map<std::uint32_t, std::uint64_t> size;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (Formula g : subformulas(f)) {
    const Kind k = g.kind();
    if (k == Kind::And || k == Kind::Or || k == Kind::Imp) {
      const std::uint64_t l = size[g.left().id()];
      const std::uint64_t r = size[g.right().id()];
      size[g.id()] = (l >= kMax - 1 - r) ? kMax : l + r + 1;
    } else {
      size[g.id()] = 1;
    }
  }
  return size[f.id()];
}

std::size_t implication_depth(Formula f) {
  std::unordered_map<std::uint32_t, std::size_t> depth;
  for (Formula g : subformulas(f)) {
    const Kind k = g.kind();
    if (k == Kind::And || k == Kind::Or || k == Kind::Imp) {
      const std::size_t d = std::max(depth[g.left().id()], depth[g.right().id()]);
      depth[g.id()] = d + (k == Kind::Imp ? 1 : 0);
    } else {
      depth[g.id()] = 0;
    }
  }
  return depth[f.id()];
}

std::vector<std::uint32_t> variables(Formula f) {
  std::vector<std::uint32_t> out;
  for (Formula g : subformulas(f))
    if (g.kind() == Kind::Var) out.push_back(g.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t max_variable(Formula f) {
  std::uint32_t m = 0;
  for (Formula g : subformulas(f))
    if (g.kind() == Kind::Var) m = std::max(m, g.var());
  return m;
}

Formula substitute(Formula f, const std::function<Formula(std::uint32_t)>& image) {
  std::unordered_map<std::uint32_t, Formula> done;
  for (Formula g : subformulas(f)) {
    Formula r;
    switch (g.kind()) {
      case Kind::Bottom:
      case Kind::Top:
        r = g;
        break;
      case Kind::Var:
        r = image(g.var());
        break;
      case Kind::And:
        r = mk_and(done.at(g.left().id()), done.at(g.right().id()));
        break;
      case Kind::Or:
        r = mk_or(done.at(g.left().id()), done.at(g.right().id()));
        break;
      case Kind::Imp:
        r = mk_imp(done.at(g.left().id()), done.at(g.right().id()));
        break;
    }
    done.emplace(g.id(), r);
  }
  return done.at(f.id());
}

}  // namespace heyting
