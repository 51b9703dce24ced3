#pragma once

// The local-state denotation. The state handler runs inside the
// nondeterminism handler, so every nondeterministic branch owns a private
// copy of the state:
//
//   run (ret a)        s = [(a, s)]
//   run fail           s = []
//   run (choice l r)   s = run l s ++ run r s
//   run (get k)        s = run (k s) s
//   run (put s' c)     s = run c s'
//
// run_local returns the raw left-to-right sequence so traces are
// reproducible; program equality compares denotations as bags.

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nds/prog.hpp"

namespace nds {

// Finite multiset. Equality ignores order and preserves multiplicities.
template <class T>
class bag {
 public:
  bag() = default;
  explicit bag(std::vector<T> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  std::size_t count(const T& x) const {
    auto [lo, hi] = std::equal_range(elems_.begin(), elems_.end(), x);
    return static_cast<std::size_t>(hi - lo);
  }
  const std::vector<T>& sorted_elements() const { return elems_; }

  friend bool operator==(const bag& a, const bag& b) { return a.elems_ == b.elems_; }
  friend bool operator!=(const bag& a, const bag& b) { return !(a == b); }

  friend bag bag_union(bag a, const bag& b) {
    a.elems_.insert(a.elems_.end(), b.elems_.begin(), b.elems_.end());
    std::sort(a.elems_.begin(), a.elems_.end());
    return a;
  }

 private:
  std::vector<T> elems_;
};

template <class T>
bag(std::vector<T>) -> bag<T>;

template <class T>
bool bag_equal(const bag<T>& x, const bag<T>& y) {
  return x == y;
}

template <class T>
bool bag_equal(const std::vector<T>& x, const std::vector<T>& y) {
  return bag<T>(x) == bag<T>(y);
}

struct run_stats {
  std::uint64_t choice_visits = 0;
};

namespace detail {

template <class A, class S>
void run_node(const typename prog_node<A, S>::ptr& n, const S& current,
              std::vector<std::pair<A, S>>& out, run_stats* stats) {
  using node = prog_node<A, S>;
  std::visit(
      overloaded{
          [&](const typename node::ret_t& r) { out.emplace_back(r.value, current); },
          [&](const typename node::fail_t&) {},
          [&](const typename node::choice_t& c) {
            if (stats) ++stats->choice_visits;
            run_node<A, S>(c.left, current, out, stats);
            run_node<A, S>(c.right, current, out, stats);
          },
          [&](const typename node::get_t& g) {
            run_node<A, S>(g.cont(current), current, out, stats);
          },
          [&](const typename node::put_t& p) { run_node<A, S>(p.cont, p.state, out, stats); },
      },
      n->alt);
}

}  // namespace detail

template <class A, class S>
std::vector<std::pair<A, S>> run_local(const prog<A, S>& m, const S& initial) {
  std::vector<std::pair<A, S>> out;
  detail::run_node<A, S>(m.handle(), initial, out, nullptr);
  return out;
}

template <class A, class S>
std::vector<std::pair<A, S>> run_local(const prog<A, S>& m, const S& initial,
                                       run_stats& stats) {
  std::vector<std::pair<A, S>> out;
  detail::run_node<A, S>(m.handle(), initial, out, &stats);
  return out;
}

// m ~ n iff their denotations agree as bags on every given initial state.
template <class A, class S>
bool prog_equal(const prog<A, S>& m, const prog<A, S>& n, std::span<const S> states) {
  for (const S& s : states) {
    if (bag(run_local(m, s)) != bag(run_local(n, s))) return false;
  }
  return true;
}

}  // namespace nds
