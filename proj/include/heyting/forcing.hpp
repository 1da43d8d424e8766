// Intuitionistic forcing over any finite frame.
//
// A frame exposes
//   std::size_t size() const;
//   Range successors(std::uint32_t u) const;          // generates the order
//   bool forces_var(std::uint32_t u, std::uint32_t i) const;  // persistent
// The order is the reflexive-transitive closure of `successors`, which must
// be acyclic. Forcing of an implication is decided locally:
//   u |- a -> b  iff  (u does not force a, or u forces b) and every
//                     successor of u forces a -> b.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "heyting/formula.hpp"

namespace heyting {

template <typename Frame>
class Forcing {
 public:
  explicit Forcing(const Frame& frame) : frame_(&frame) {}

  bool operator()(std::uint32_t node, Formula f) { return eval(node, f); }

  // Every node forces f.
  bool valid(Formula f) {
    for (std::uint32_t u = 0; u < frame_->size(); ++u)
      if (!eval(u, f)) return false;
    return true;
  }

  void clear() { memo_.clear(); }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  bool eval(std::uint32_t u, Formula f) {
    switch (f.kind()) {
      case Kind::Bottom:
        return false;
      case Kind::Top:
        return true;
      case Kind::Var:
        return frame_->forces_var(u, f.var());
      default:
        break;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | f.id();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool value = false;
    switch (f.kind()) {
      case Kind::And:
        value = eval(u, f.left()) && eval(u, f.right());
        break;
      case Kind::Or:
        value = eval(u, f.left()) || eval(u, f.right());
        break;
      case Kind::Imp: {
        value = !eval(u, f.left()) || eval(u, f.right());
        if (value) {
          for (std::uint32_t s : frame_->successors(u)) {
            if (!eval(s, f)) {
              value = false;
              break;
            }
          }
        }
        break;
      }
      default:
        break;
    }
    memo_.emplace(key, value);
    return value;
  }

  const Frame* frame_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace heyting
