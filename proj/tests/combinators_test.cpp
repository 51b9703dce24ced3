#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "nds/combinators.hpp"
#include "nds/handler.hpp"
#include "nds/laws.hpp"
#include "nds/queens.hpp"

using nds::mbind;
using nds::choice;
using nds::filt;
using nds::foldr_m;
using nds::guard;
using nds::hylo_m;
using nds::perm;
using nds::prog;
using nds::protect;
using nds::put;
using nds::queens_state;
using nds::ret;
using nds::run_local;
using nds::scanl_m;
using nds::scanl_plus;
using nds::select;
using nds::seq;
using nds::solve;
using nds::solve_spec;
using nds::unfold_m;
using nds::unit;

using iprog = prog<int, int>;

namespace {

const std::vector<int> kStates = {0, 1, 2, 3};

bool equal_on_states(const iprog& a, const iprog& b) {
  return nds::prog_equal(a, b, std::span<const int>(kStates));
}

// counts permutations without touching any of the library machinery
std::size_t factorial_oracle(std::vector<int> xs) {
  std::sort(xs.begin(), xs.end());
  std::size_t count = 0;
  do {
    ++count;
  } while (std::next_permutation(xs.begin(), xs.end()));
  return count;
}

}  // namespace

TEST_SUITE("combinators") {
  TEST_CASE("guard") {
    std::span<const int> states(kStates);
    CHECK(nds::prog_equal(guard<int>(true), prog<unit, int>::ret(unit{}), states));
    CHECK(nds::prog_equal(guard<int>(false), prog<unit, int>::fail(), states));
    bool p = true, q = false;
    CHECK(nds::prog_equal(guard<int>(p && q), seq(guard<int>(p), guard<int>(q)), states));
  }

  TEST_CASE("filt") {
    auto even = [](const int& x) { return x % 2 == 0; };
    CHECK(equal_on_states(filt<int>(even, 4), ret<int>(4)));
    CHECK(equal_on_states(filt<int>(even, 3), iprog::fail()));
  }

  TEST_CASE("select splits off each element once") {
    using pr = std::pair<int, std::vector<int>>;
    CHECK(run_local(select<int>(std::vector<int>{}), 0).empty());

    auto out = run_local(select<int>(std::vector<int>{1, 2, 3}), 0);
    std::vector<std::pair<pr, int>> expected = {
        {{1, {2, 3}}, 0}, {{2, {1, 3}}, 0}, {{3, {1, 2}}, 0}};
    CHECK(nds::bag_equal(out, expected));

    auto single = run_local(select<int>(std::vector<int>{7}), 0);
    CHECK(single == std::vector<std::pair<pr, int>>{{{7, {}}, 0}});
  }

  TEST_CASE("unfold_m") {
    auto null = [](const std::vector<int>& v) { return v.empty(); };
    auto sel = [](const std::vector<int>& v) { return select<int>(v); };

    auto stopped = unfold_m(null, sel, std::vector<int>{});
    auto out = run_local(stopped, 0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].first.empty());

    auto two = run_local(unfold_m(null, sel, std::vector<int>{1, 2}), 0);
    std::vector<std::pair<std::vector<int>, int>> expected = {{{1, 2}, 0}, {{2, 1}, 0}};
    CHECK(nds::bag_equal(two, expected));

    std::vector<int> four = {0, 1, 2, 3};
    CHECK(run_local(unfold_m(null, sel, four), 0).size() == factorial_oracle(four));
  }

  TEST_CASE("unfold_m signals when the seed does not shrink") {
    auto never = [](const int&) { return false; };
    auto constant = [](const int& y) {
      return prog<std::pair<int, int>, int>::ret({0, y});
    };
    CHECK_THROWS_AS(unfold_m(never, constant, 1, 16), nds::fuel_exhausted);
  }

  TEST_CASE("perm") {
    auto empty = run_local(perm<int>(std::vector<int>{}), 0);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].first.empty());

    auto two = run_local(perm<int>(std::vector<int>{1, 2}), 0);
    std::vector<std::pair<std::vector<int>, int>> expected = {{{1, 2}, 0}, {{2, 1}, 0}};
    CHECK(nds::bag_equal(two, expected));

    std::span<const int> dom(kStates);
    CHECK(nds::effect_footprint(perm<int>(std::vector<int>{1, 2, 3}), dom) ==
          nds::effect_set::nondet_only());
  }

  TEST_CASE("scanl_plus") {
    auto plus = [](int s, int x) { return s + x; };
    CHECK(scanl_plus(plus, 0, std::vector<int>{}).empty());

    // oracle: cumulative folds over prefixes, first entry dropped
    std::vector<int> xs = {1, 2, 3};
    std::vector<int> cumulative;
    int acc = 0;
    for (int x : xs) cumulative.push_back(acc += x);
    CHECK(scanl_plus(plus, 0, xs) == cumulative);
    CHECK(scanl_plus(plus, 0, xs) == std::vector<int>{1, 3, 6});

    auto steps = scanl_plus([](const queens_state& st, int x) { return nds::oplus(st, x); },
                            queens_state{}, std::vector<int>{3, 5});
    REQUIRE(steps.size() == 2);
    CHECK(steps[0] == queens_state{1, {3}, {-3}});
    CHECK(steps[1] == queens_state{2, {6, 3}, {-4, -3}});
  }

  TEST_CASE("foldr_m") {
    auto otimes = [](const int& x, iprog acc) {
      return mbind(acc, [x](const int& v) { return iprog::ret(x + v); });
    };
    CHECK(equal_on_states(foldr_m(otimes, iprog::ret(0), std::vector<int>{}),
                          iprog::ret(0)));
    CHECK(equal_on_states(foldr_m(otimes, iprog::ret(10), std::vector<int>{5}),
                          otimes(5, iprog::ret(10))));
  }

  TEST_CASE("scanl_m stores the running state") {
    auto plus = [](int s, int x) { return s + x; };
    auto none = run_local(scanl_m(plus, 0, std::vector<int>{}), 9);
    CHECK(none == std::vector<std::pair<std::vector<int>, int>>{{{}, 0}});

    auto out = run_local(scanl_m(plus, 0, std::vector<int>{1, 2}), 9);
    CHECK(out == std::vector<std::pair<std::vector<int>, int>>{{{1, 3}, 3}});
  }

  TEST_CASE("protect restores the initial state") {
    CHECK(equal_on_states(protect(ret<int>(5)), ret<int>(5)));
    CHECK(run_local(protect(seq(put<int>(5), nds::get<int>())), 0) ==
          std::vector<std::pair<int, int>>{{5, 0}});

    nds::laws::fuzz_config cfg;
    for (std::uint64_t i = 0; i < 100; ++i) {
      nds::laws::rng r(3000 + i);
      auto m = nds::laws::gen_prog(cfg, nds::effect_set::both(), r);
      for (int s0 : cfg.state_domain) {
        for (const auto& [v, s] : run_local(protect(m), s0)) CHECK(s == s0);
      }
    }
  }

  TEST_CASE("odot_step prunes on a failing guard") {
    auto odot = nds::odot_step<int, int, int>(
        [](const int&, const int&) { return false; },
        [](const int& x, const int& st) { return st + x; },
        [](const int&, const int& b) { return b; });
    CHECK(run_local(odot(1, iprog::ret(0)), 0).empty());
  }

  TEST_CASE("odot_step queens instance") {
    auto odot = nds::odot_step<queens_state, int, std::vector<int>>(
        [](const int& x, const queens_state& st) { return nds::ok_check(nds::oplus(st, x)); },
        [](const int& x, const queens_state& st) { return nds::oplus(st, x); },
        [](const int& x, const std::vector<int>& v) {
          std::vector<int> out{x};
          out.insert(out.end(), v.begin(), v.end());
          return out;
        });
    using QP = prog<std::vector<int>, queens_state>;
    auto out = run_local(odot(3, QP::ret({})), queens_state{});
    REQUIRE(out.size() == 1);
    CHECK(out[0].first == std::vector<int>{3});
    CHECK(out[0].second == queens_state{1, {3}, {-3}});
  }

  TEST_CASE("hylo_m equals the unfused pipeline at the queens shape") {
    using QP = prog<std::vector<int>, queens_state>;
    auto stopf = [](const std::vector<int>& v) { return v.empty(); };
    auto stepf = [](const std::vector<int>& v) { return select<queens_state>(v); };
    auto odot = nds::odot_step<queens_state, int, std::vector<int>>(
        [](const int& x, const queens_state& st) { return nds::ok_check(nds::oplus(st, x)); },
        [](const int& x, const queens_state& st) { return nds::oplus(st, x); },
        [](const int& x, const std::vector<int>& v) {
          std::vector<int> out{x};
          out.insert(out.end(), v.begin(), v.end());
          return out;
        });

    CHECK(run_local(hylo_m(odot, QP::ret({}), stopf, stepf, std::vector<int>{}, 1),
                    queens_state{}) ==
          run_local(QP::ret({}), queens_state{}));

    std::vector<queens_state> states = {queens_state{}, queens_state{1, {2}, {0}}};
    for (std::vector<int> seed :
         {std::vector<int>{0}, {0, 1}, {1, 3}, {0, 1, 2}, {0, 2, 4}, {0, 1, 2, 3}}) {
      auto fused = hylo_m(odot, QP::ret({}), stopf, stepf, seed, seed.size() + 1);
      auto unfused = mbind(unfold_m(stopf, stepf, seed, seed.size() + 1),
                          [&](const std::vector<int>& xs) {
                            return foldr_m(odot, QP::ret({}), xs);
                          });
      CHECK(nds::prog_equal(fused, unfused, std::span<const queens_state>(states)));
    }
  }

  TEST_CASE("solve on a degenerate seed returns the empty list and restores state") {
    solve_spec<std::vector<int>, int, queens_state> spec;
    spec.stop = [](const std::vector<int>&) { return true; };
    spec.step = [](const std::vector<int>& v) { return select<queens_state>(v); };
    spec.ok = [](const queens_state& st) { return nds::ok_check(st); };
    spec.oplus = [](const queens_state& st, const int& x) { return nds::oplus(st, x); };
    spec.start = {0, 1};
    auto out = run_local(solve(spec), queens_state{1, {7}, {-7}});
    REQUIRE(out.size() == 1);
    CHECK(out[0].first.empty());
    CHECK(out[0].second == queens_state{1, {7}, {-7}});
  }

  TEST_CASE("solve rejects a step that uses state") {
    solve_spec<int, int, int> spec;
    spec.stop = [](const int& y) { return y == 0; };
    spec.step = [](const int& y) {
      return mbind(nds::get<int>(), [y](const int& s) {
        return prog<std::pair<int, int>, int>::ret({s, y - 1});
      });
    };
    spec.ok = [](const int&) { return true; };
    spec.oplus = [](const int& s, const int&) { return s; };
    spec.start = 3;
    CHECK_THROWS_AS(solve(spec), std::invalid_argument);
  }

  TEST_CASE("solve signals when the declared measure does not decrease") {
    solve_spec<int, int, int> spec;
    spec.stop = [](const int&) { return false; };
    spec.step = [](const int& y) { return prog<std::pair<int, int>, int>::ret({y, y}); };
    spec.ok = [](const int&) { return true; };
    spec.oplus = [](const int& s, const int&) { return s; };
    spec.start = 3;
    spec.measure = [](const int&) { return std::size_t{1}; };
    CHECK_THROWS_AS(solve(spec), nds::fuel_exhausted);
  }
}
