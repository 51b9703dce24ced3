#pragma once

// Programs over nondeterminism (fail/choice) and state (get/put), represented
// as finite syntax trees:
//
//   prog a = ret a | fail | choice (prog a) (prog a)
//          | get (state -> prog a) | put state (prog a)
//
// Trees carry no meaning by themselves; handler.hpp assigns the local-state
// denotation. bind grafts its continuation onto every ret leaf, so the monad
// laws hold structurally. Programs are immutable values; copies share
// subtrees and may be used from several threads at once.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "nds/errors.hpp"

namespace nds {

// Result value of operations performed only for their effect.
struct unit {
  friend constexpr bool operator==(unit, unit) noexcept { return true; }
  friend constexpr bool operator!=(unit, unit) noexcept { return false; }
  friend constexpr bool operator<(unit, unit) noexcept { return false; }
};

enum class effect_kind { nondet, state };

// Subset of {nondet, state}, as inferred from program syntax.
struct effect_set {
  bool nondet = false;
  bool state = false;

  static constexpr effect_set none() { return {false, false}; }
  static constexpr effect_set nondet_only() { return {true, false}; }
  static constexpr effect_set state_only() { return {false, true}; }
  static constexpr effect_set both() { return {true, true}; }

  constexpr bool contains(effect_kind k) const {
    return k == effect_kind::nondet ? nondet : state;
  }
  constexpr bool subset_of(effect_set o) const {
    return (!nondet || o.nondet) && (!state || o.state);
  }
  friend constexpr bool operator==(effect_set a, effect_set b) {
    return a.nondet == b.nondet && a.state == b.state;
  }
  friend constexpr effect_set operator|(effect_set a, effect_set b) {
    return {a.nondet || b.nondet, a.state || b.state};
  }
};

template <class A, class S>
class prog;

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class A, class S>
struct prog_node {
  using ptr = std::shared_ptr<const prog_node>;

  struct ret_t {
    A value;
  };
  struct fail_t {};
  struct choice_t {
    ptr left;
    ptr right;
  };
  struct get_t {
    std::function<ptr(const S&)> cont;
  };
  struct put_t {
    S state;
    ptr cont;
  };

  std::variant<ret_t, fail_t, choice_t, get_t, put_t> alt;
};

template <class A, class S, class Alt>
typename prog_node<A, S>::ptr make_node(Alt&& alt) {
  return std::make_shared<const prog_node<A, S>>(
      prog_node<A, S>{std::forward<Alt>(alt)});
}

}  // namespace detail

template <class A, class S>
class prog {
 public:
  using value_type = A;
  using state_type = S;
  using node = detail::prog_node<A, S>;
  using node_ptr = typename node::ptr;

  // return a
  static prog ret(A value) {
    return prog(detail::make_node<A, S>(typename node::ret_t{std::move(value)}));
  }
  // the failing computation
  static prog fail() {
    return prog(detail::make_node<A, S>(typename node::fail_t{}));
  }
  // left-biased in traversal order only; denotations are bags
  static prog choice(prog left, prog right) {
    return prog(detail::make_node<A, S>(
        typename node::choice_t{std::move(left.node_), std::move(right.node_)}));
  }
  // cont must be total on the state domain in use
  static prog get(std::function<prog(const S&)> cont) {
    return prog(detail::make_node<A, S>(typename node::get_t{
        [cont = std::move(cont)](const S& s) { return cont(s).node_; }}));
  }
  static prog put(S state, prog cont) {
    return prog(detail::make_node<A, S>(
        typename node::put_t{std::move(state), std::move(cont.node_)}));
  }

  // Case analysis. on_ret(const A&), on_fail(), on_choice(prog, prog),
  // on_get(std::function<prog(const S&)>), on_put(const S&, prog).
  template <class FRet, class FFail, class FChoice, class FGet, class FPut>
  auto match(FRet&& on_ret, FFail&& on_fail, FChoice&& on_choice, FGet&& on_get,
             FPut&& on_put) const {
    return std::visit(
        detail::overloaded{
            [&](const typename node::ret_t& r) { return on_ret(r.value); },
            [&](const typename node::fail_t&) { return on_fail(); },
            [&](const typename node::choice_t& c) {
              return on_choice(prog(c.left), prog(c.right));
            },
            [&](const typename node::get_t& g) {
              auto cont = g.cont;
              return on_get(std::function<prog(const S&)>(
                  [cont](const S& s) { return prog(cont(s)); }));
            },
            [&](const typename node::put_t& p) {
              return on_put(p.state, prog(p.cont));
            },
        },
        node_->alt);
  }

  explicit prog(node_ptr n) : node_(std::move(n)) {}
  const node_ptr& handle() const { return node_; }

 private:
  node_ptr node_;
};

// Free-function spellings of the constructors. The state type cannot be
// deduced from a bare value, so it comes first: ret<int>(3) is prog<int,int>.
template <class S, class A>
prog<A, S> ret(A value) {
  return prog<A, S>::ret(std::move(value));
}

template <class A, class S>
prog<A, S> fail() {
  return prog<A, S>::fail();
}

template <class A, class S>
prog<A, S> choice(prog<A, S> left, prog<A, S> right) {
  return prog<A, S>::choice(std::move(left), std::move(right));
}

// get yields the current state as its value
template <class S>
prog<S, S> get() {
  return prog<S, S>::get([](const S& s) { return prog<S, S>::ret(s); });
}

template <class S>
prog<unit, S> put(S state) {
  return prog<unit, S>::put(std::move(state), prog<unit, S>::ret(unit{}));
}

namespace detail {

template <class B, class A, class S, class K>
typename prog_node<B, S>::ptr bind_node(const typename prog_node<A, S>::ptr& n,
                                        const K& k) {
  using in = prog_node<A, S>;
  using out = prog_node<B, S>;
  using out_ptr = typename out::ptr;
  return std::visit(
      overloaded{
          [&](const typename in::ret_t& r) -> out_ptr { return k(r.value).handle(); },
          [&](const typename in::fail_t&) -> out_ptr {
            return make_node<B, S>(typename out::fail_t{});
          },
          [&](const typename in::choice_t& c) -> out_ptr {
            return make_node<B, S>(typename out::choice_t{
                bind_node<B, A, S>(c.left, k), bind_node<B, A, S>(c.right, k)});
          },
          [&](const typename in::get_t& g) -> out_ptr {
            return make_node<B, S>(typename out::get_t{
                [cont = g.cont, k](const S& s) { return bind_node<B, A, S>(cont(s), k); }});
          },
          [&](const typename in::put_t& p) -> out_ptr {
            return make_node<B, S>(
                typename out::put_t{p.state, bind_node<B, A, S>(p.cont, k)});
          },
      },
      n->alt);
}

}  // namespace detail

// m >>= k, by substitution at every ret leaf.
template <class A, class S, class K,
          class MB = std::decay_t<std::invoke_result_t<K&, const A&>>>
MB mbind(const prog<A, S>& m, K k) {
  return MB(detail::bind_node<typename MB::value_type, A, S>(m.handle(), k));
}

// m >> n = m >>= const n
template <class A, class B, class S>
prog<B, S> seq(const prog<A, S>& m, prog<B, S> n) {
  return mbind(m, [n = std::move(n)](const A&) { return n; });
}

// f <$> m = m >>= (ret . f)
template <class F, class A, class S,
          class B = std::decay_t<std::invoke_result_t<F&, const A&>>>
prog<B, S> mapv(F f, const prog<A, S>& m) {
  return mbind(m, [f = std::move(f)](const A& a) { return prog<B, S>::ret(f(a)); });
}

// (f >=> g) x = f x >>= g
template <class F, class G>
auto kleisli(F f, G g) {
  return [f = std::move(f), g = std::move(g)](const auto& x) { return mbind(f(x), g); };
}

namespace detail {

template <class A, class S>
void footprint_walk(const typename prog_node<A, S>::ptr& n, const S* dom,
                    std::size_t dom_len, effect_set& acc) {
  if (acc.nondet && acc.state) return;
  using node = prog_node<A, S>;
  std::visit(
      overloaded{
          [&](const typename node::ret_t&) {},
          [&](const typename node::fail_t&) { acc.nondet = true; },
          [&](const typename node::choice_t& c) {
            acc.nondet = true;
            footprint_walk<A, S>(c.left, dom, dom_len, acc);
            footprint_walk<A, S>(c.right, dom, dom_len, acc);
          },
          [&](const typename node::get_t& g) {
            acc.state = true;
            if (acc.nondet) return;
            if (dom_len == 0) throw unbounded_state_domain();
            for (std::size_t i = 0; i < dom_len && !acc.nondet; ++i)
              footprint_walk<A, S>(g.cont(dom[i]), dom, dom_len, acc);
          },
          [&](const typename node::put_t& p) {
            acc.state = true;
            footprint_walk<A, S>(p.cont, dom, dom_len, acc);
          },
      },
      n->alt);
}

template <class A, class S, class F>
void ret_walk(const typename prog_node<A, S>::ptr& n, const S* dom,
              std::size_t dom_len, F& f) {
  using node = prog_node<A, S>;
  std::visit(
      overloaded{
          [&](const typename node::ret_t& r) { f(r.value); },
          [&](const typename node::fail_t&) {},
          [&](const typename node::choice_t& c) {
            ret_walk<A, S>(c.left, dom, dom_len, f);
            ret_walk<A, S>(c.right, dom, dom_len, f);
          },
          [&](const typename node::get_t& g) {
            if (dom_len == 0) throw unbounded_state_domain();
            for (std::size_t i = 0; i < dom_len; ++i)
              ret_walk<A, S>(g.cont(dom[i]), dom, dom_len, f);
          },
          [&](const typename node::put_t& p) { ret_walk<A, S>(p.cont, dom, dom_len, f); },
      },
      n->alt);
}

template <class A, class S>
std::size_t size_walk(const typename prog_node<A, S>::ptr& n, const S* dom,
                      std::size_t dom_len) {
  using node = prog_node<A, S>;
  return std::visit(
      overloaded{
          [&](const typename node::ret_t&) -> std::size_t { return 1; },
          [&](const typename node::fail_t&) -> std::size_t { return 1; },
          [&](const typename node::choice_t& c) -> std::size_t {
            return 1 + size_walk<A, S>(c.left, dom, dom_len) +
                   size_walk<A, S>(c.right, dom, dom_len);
          },
          [&](const typename node::get_t& g) -> std::size_t {
            if (dom_len == 0) throw unbounded_state_domain();
            std::size_t total = 1;
            for (std::size_t i = 0; i < dom_len; ++i)
              total += size_walk<A, S>(g.cont(dom[i]), dom, dom_len);
            return total;
          },
          [&](const typename node::put_t& p) -> std::size_t {
            return 1 + size_walk<A, S>(p.cont, dom, dom_len);
          },
      },
      n->alt);
}

template <class A, class S>
std::size_t depth_walk(const typename prog_node<A, S>::ptr& n, const S* dom,
                       std::size_t dom_len) {
  using node = prog_node<A, S>;
  return std::visit(
      overloaded{
          [&](const typename node::ret_t&) -> std::size_t { return 1; },
          [&](const typename node::fail_t&) -> std::size_t { return 1; },
          [&](const typename node::choice_t& c) -> std::size_t {
            return 1 + std::max(depth_walk<A, S>(c.left, dom, dom_len),
                                depth_walk<A, S>(c.right, dom, dom_len));
          },
          [&](const typename node::get_t& g) -> std::size_t {
            if (dom_len == 0) throw unbounded_state_domain();
            std::size_t deepest = 0;
            for (std::size_t i = 0; i < dom_len; ++i)
              deepest = std::max(deepest, depth_walk<A, S>(g.cont(dom[i]), dom, dom_len));
            return 1 + deepest;
          },
          [&](const typename node::put_t& p) -> std::size_t {
            return 1 + depth_walk<A, S>(p.cont, dom, dom_len);
          },
      },
      n->alt);
}

}  // namespace detail

// Effects syntactically present in m. Nondeterminism hiding under a get can
// only be found by scanning the continuation over a finite state domain; the
// domain-less overload signals unbounded_state_domain when such a scan would
// be needed.
template <class A, class S>
effect_set effect_footprint(const prog<A, S>& m, std::span<const S> state_domain) {
  effect_set acc;
  detail::footprint_walk<A, S>(m.handle(), state_domain.data(), state_domain.size(), acc);
  return acc;
}

template <class A, class S>
effect_set effect_footprint(const prog<A, S>& m) {
  effect_set acc;
  detail::footprint_walk<A, S>(m.handle(), nullptr, 0, acc);
  return acc;
}

// Visit the value at every ret leaf (leaves under a get are scanned per
// domain state, so a value may be visited more than once).
template <class A, class S, class F>
void for_each_ret(const prog<A, S>& m, F f, std::span<const S> state_domain) {
  detail::ret_walk<A, S>(m.handle(), state_domain.data(), state_domain.size(), f);
}

template <class A, class S, class F>
void for_each_ret(const prog<A, S>& m, F f) {
  detail::ret_walk<A, S>(m.handle(), nullptr, 0, f);
}

// Node counts / node depth; get counts its continuation once per domain state.
template <class A, class S>
std::size_t prog_size(const prog<A, S>& m, std::span<const S> state_domain) {
  return detail::size_walk<A, S>(m.handle(), state_domain.data(), state_domain.size());
}

template <class A, class S>
std::size_t prog_size(const prog<A, S>& m) {
  return detail::size_walk<A, S>(m.handle(), nullptr, 0);
}

template <class A, class S>
std::size_t prog_depth(const prog<A, S>& m, std::span<const S> state_domain) {
  return detail::depth_walk<A, S>(m.handle(), state_domain.data(), state_domain.size());
}

template <class A, class S>
std::size_t prog_depth(const prog<A, S>& m) {
  return detail::depth_walk<A, S>(m.handle(), nullptr, 0);
}

}  // namespace nds
