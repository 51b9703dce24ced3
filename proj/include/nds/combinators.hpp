#pragma once

// The derivation stack, from the generate-and-test combinators down to the
// fused backtracking solver:
//
//   guard, filt, select, unfold_m, perm          -- generation and filtering
//   scanl_plus, foldr_m, scanl_m, protect        -- the stateful scan
//   odot_step, hylo_m, solve                     -- the fused form
//
// unfold_m and hylo_m bound their recursion depth by fuel; an exhausted
// budget signals fuel_exhausted instead of truncating.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nds/handler.hpp"
#include "nds/prog.hpp"

namespace nds {

inline constexpr std::size_t default_fuel = 64;

// guard b = if b then ret () else fail
template <class S>
prog<unit, S> guard(bool b) {
  return b ? prog<unit, S>::ret(unit{}) : prog<unit, S>::fail();
}

// filt p x = guard (p x) >> ret x
template <class S, class A, class P>
prog<A, S> filt(P p, A x) {
  const bool keep = p(x);
  return mbind(guard<S>(keep),
               [x = std::move(x)](unit) { return prog<A, S>::ret(x); });
}

// select non-deterministically removes one element:
//   select []     = fail
//   select (x:xs) = ret (x, xs) [] ((id * (x:)) <$> select xs)
// The loop below builds that right-nested tree directly.
template <class S, class Elem>
prog<std::pair<Elem, std::vector<Elem>>, S> select(const std::vector<Elem>& xs) {
  using P = prog<std::pair<Elem, std::vector<Elem>>, S>;
  P acc = P::fail();
  for (std::size_t i = xs.size(); i-- > 0;) {
    std::vector<Elem> rest;
    rest.reserve(xs.size() - 1);
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != i) rest.push_back(xs[j]);
    acc = P::choice(P::ret({xs[i], std::move(rest)}), std::move(acc));
  }
  return acc;
}

// unfold_m p f y: monadic unfoldr. Stops when p holds; otherwise f yields an
// element and the next seed. fuel bounds the recursion depth.
template <class P, class F, class Seed,
          class Step = std::decay_t<std::invoke_result_t<F&, const Seed&>>,
          class Elem = typename Step::value_type::first_type,
          class S = typename Step::state_type>
prog<std::vector<Elem>, S> unfold_m(P p, F f, const Seed& y,
                                    std::size_t fuel = default_fuel) {
  if (p(y)) return prog<std::vector<Elem>, S>::ret({});
  if (fuel == 0)
    throw fuel_exhausted("unfold_m: fuel exhausted before the stop predicate held");
  return mbind(f(y), [p, f, fuel](const std::pair<Elem, Seed>& xz) {
    return mapv(
        [x = xz.first](std::vector<Elem> rest) {
          rest.insert(rest.begin(), x);
          return rest;
        },
        unfold_m(p, f, xz.second, fuel - 1));
  });
}

// perm = unfold_m null select
template <class S, class Elem>
prog<std::vector<Elem>, S> perm(const std::vector<Elem>& xs) {
  return unfold_m([](const std::vector<Elem>& v) { return v.empty(); },
                  [](const std::vector<Elem>& v) { return select<S>(v); }, xs,
                  xs.size() + 1);
}

// scanl_plus applies foldl to every non-empty prefix:
//   scanl_plus op st []     = []
//   scanl_plus op st (x:xs) = (st op x) : scanl_plus op (st op x) xs
template <class Op, class St, class X>
std::vector<St> scanl_plus(Op oplus, St st, const std::vector<X>& xs) {
  std::vector<St> out;
  out.reserve(xs.size());
  for (const X& x : xs) {
    st = oplus(st, x);
    out.push_back(st);
  }
  return out;
}

// foldr with a monadic step
template <class Otimes, class C, class S, class X>
prog<C, S> foldr_m(Otimes otimes, prog<C, S> e, const std::vector<X>& xs) {
  for (std::size_t i = xs.size(); i-- > 0;) e = otimes(xs[i], std::move(e));
  return e;
}

// The step used by scanl_m:
//   x (*) n = get >>= \st -> (st op x :) <$> (put (st op x) >> n)
template <class St, class X, class Op>
auto scanl_step(Op oplus) {
  return [oplus](const X& x, prog<std::vector<St>, St> n) {
    using P = prog<std::vector<St>, St>;
    return P::get([oplus, x, n = std::move(n)](const St& st) {
      St next = oplus(st, x);
      return P::put(next, mapv(
                              [next](std::vector<St> v) {
                                v.insert(v.begin(), next);
                                return v;
                              },
                              n));
    });
  };
}

// scanl_m op st xs = put st >> foldr (*) (ret []) xs
template <class Op, class St, class X>
prog<std::vector<St>, St> scanl_m(Op oplus, St st, const std::vector<X>& xs) {
  using P = prog<std::vector<St>, St>;
  return seq(put<St>(std::move(st)),
             foldr_m(scanl_step<St, X>(oplus), P::ret({}), xs));
}

// protect n = get >>= \ini -> n >>= \x -> put ini >> ret x
template <class B, class S>
prog<B, S> protect(prog<B, S> n) {
  using P = prog<B, S>;
  return P::get([n = std::move(n)](const S& ini) {
    return mbind(n, [ini](const B& x) { return P::put(ini, P::ret(x)); });
  });
}

// x (.) m = get >>= \st -> guard (p x st) >> put (next x st) >> (res x <$> m)
// The failing branch never touches m, which is what prunes the search.
template <class S, class Elem, class B, class P, class Next, class Res>
auto odot_step(P p, Next next, Res res) {
  return [p, next, res](const Elem& x, prog<B, S> m) {
    using PB = prog<B, S>;
    return PB::get([p, next, res, x, m = std::move(m)](const S& st) {
      return mbind(guard<S>(p(x, st)), [&next, &res, &x, &m, &st](unit) {
        return PB::put(next(x, st),
                       mapv([res, x](const B& b) { return res(x, b); }, m));
      });
    });
  };
}

// hylo_m (*) e p f y: the fused unfold-then-fold.
//   hylo_m (*) e p f y | p y       = e
//                      | otherwise = f y >>= \(x, z) -> x (*) hylo_m (*) e p f z
template <class Otimes, class C, class S, class P, class F, class Seed>
prog<C, S> hylo_m(Otimes otimes, prog<C, S> e, P p, F f, const Seed& y,
                  std::size_t fuel) {
  if (p(y)) return e;
  if (fuel == 0)
    throw fuel_exhausted("hylo_m: fuel exhausted before the stop predicate held");
  return mbind(f(y), [otimes, e, p, f, fuel](const auto& xz) {
    return otimes(xz.first, hylo_m(otimes, e, p, f, xz.second, fuel - 1));
  });
}

// One backtracking problem instance: generate with step from start until
// stop, keep a solution iff every accumulated state satisfies ok.
template <class Seed, class Elem, class S>
struct solve_spec {
  std::function<bool(const Seed&)> stop;
  std::function<prog<std::pair<Elem, Seed>, S>(const Seed&)> step;  // nondeterminism only
  std::function<bool(const S&)> ok;
  std::function<S(const S&, const Elem&)> oplus;
  S initial{};
  Seed start{};
  std::function<std::size_t(const Seed&)> measure;  // optional, strictly decreasing
  std::size_t fuel = default_fuel;
};

namespace detail {

// step must be nondeterminism-only for the fusion to be sound; check its
// footprint on a bounded sample of reachable seeds.
template <class Seed, class Elem, class S>
void validate_solve_step(const solve_spec<Seed, Elem, S>& spec) {
  std::vector<Seed> frontier{spec.start};
  std::size_t inspected = 0;
  for (std::size_t i = 0; i < frontier.size() && inspected < 8; ++i) {
    const Seed y = frontier[i];
    if (spec.stop(y)) continue;
    ++inspected;
    auto m = spec.step(y);
    effect_set fp;
    try {
      fp = effect_footprint(m);
    } catch (const unbounded_state_domain&) {
      throw std::invalid_argument("solve: step program reads the state");
    }
    if (fp.state)
      throw std::invalid_argument("solve: step must use nondeterminism only");
    for_each_ret(m, [&](const std::pair<Elem, Seed>& xz) {
      if (frontier.size() < 32) frontier.push_back(xz.second);
    });
  }
}

}  // namespace detail

// solve p f ok op st z = protect (put st >> hylo_m (.) (ret []) p f z)
// with (.) the odot_step instance over ok and op.
template <class Seed, class Elem, class S>
prog<std::vector<Elem>, S> solve(const solve_spec<Seed, Elem, S>& spec) {
  detail::validate_solve_step(spec);

  auto ok = spec.ok;
  auto oplus = spec.oplus;
  auto odot = odot_step<S, Elem, std::vector<Elem>>(
      [ok, oplus](const Elem& x, const S& st) { return ok(oplus(st, x)); },
      [oplus](const Elem& x, const S& st) { return oplus(st, x); },
      [](const Elem& x, const std::vector<Elem>& v) {
        std::vector<Elem> out;
        out.reserve(v.size() + 1);
        out.push_back(x);
        out.insert(out.end(), v.begin(), v.end());
        return out;
      });

  auto measure = spec.measure;
  auto step = spec.step;
  auto checked_step = [measure, step](const Seed& y) {
    auto m = step(y);
    if (measure) {
      for_each_ret(m, [&](const std::pair<Elem, Seed>& xz) {
        if (measure(xz.second) >= measure(y))
          throw fuel_exhausted("solve: seed measure did not decrease");
      });
    }
    return m;
  };

  std::size_t fuel = spec.measure ? spec.measure(spec.start) + 1 : spec.fuel;
  auto body = hylo_m(odot, prog<std::vector<Elem>, S>::ret({}), spec.stop,
                     checked_step, spec.start, fuel);
  return protect(seq(put<S>(spec.initial), std::move(body)));
}

}  // namespace nds
