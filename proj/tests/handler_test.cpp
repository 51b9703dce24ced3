#include <doctest.h>

#include <thread>
#include <vector>

#include "nds/handler.hpp"
#include "nds/laws.hpp"
#include "nds/prog.hpp"

using nds::bag;
using nds::mbind;
using nds::choice;
using nds::get;
using nds::prog;
using nds::put;
using nds::ret;
using nds::run_local;
using nds::seq;

using iprog = prog<int, int>;
using outcome = std::pair<int, int>;

namespace {
const std::vector<int> kStates = {0, 1, 2, 3};
}

TEST_SUITE("handler") {
  TEST_CASE("run_local follows the five handler equations") {
    CHECK(run_local(seq(put<int>(1), get<int>()), 0) ==
          std::vector<outcome>{{1, 1}});
    CHECK(run_local(choice(iprog::ret('a'), iprog::fail()), 0) ==
          std::vector<outcome>{{'a', 0}});

    // get >>= \s -> ret s [] (put (s+1) >> get), from 5
    auto m = mbind(get<int>(), [](const int& s) {
      return choice(iprog::ret(s), seq(put<int>(s + 1), get<int>()));
    });
    CHECK(run_local(m, 5) == std::vector<outcome>{{5, 5}, {6, 6}});
  }

  TEST_CASE("choice keeps multiplicities") {
    auto twice = choice(ret<int>(1), ret<int>(1));
    auto out = run_local(twice, 0);
    bag<outcome> b(out);
    CHECK(b.size() == 2);
    CHECK(b.count({1, 0}) == 2);
  }

  TEST_CASE("bag equality is order-insensitive and multiplicity-sensitive") {
    bag<outcome> x(std::vector<outcome>{{1, 0}, {2, 0}});
    bag<outcome> y(std::vector<outcome>{{2, 0}, {1, 0}});
    CHECK(nds::bag_equal(x, y));
    bag<outcome> one(std::vector<outcome>{{1, 0}});
    bag<outcome> two(std::vector<outcome>{{1, 0}, {1, 0}});
    CHECK_FALSE(nds::bag_equal(one, two));
    CHECK(nds::bag_equal(bag<outcome>{}, bag<outcome>{}));
  }

  TEST_CASE("bag union preserves multiplicities") {
    bag<int> a(std::vector<int>{1, 1, 2});
    bag<int> b(std::vector<int>{2, 3});
    auto u = bag_union(a, b);
    CHECK(u.size() == 5);
    CHECK(u.count(1) == 2);
    CHECK(u.count(2) == 2);
    CHECK(u.count(3) == 1);
  }

  TEST_CASE("prog_equal checks every initial state") {
    std::span<const int> states(kStates);
    CHECK(nds::prog_equal(ret<int>(1), ret<int>(1), states));
    CHECK(nds::prog_equal(seq(put<int>(1), iprog::fail()), iprog::fail(), states));
    CHECK_FALSE(nds::prog_equal(get<int>(), ret<int>(0), states));
  }

  TEST_CASE("choice is commutative up to bag equality") {
    nds::laws::fuzz_config cfg;
    std::span<const int> states(cfg.state_domain);
    for (std::uint64_t i = 0; i < 100; ++i) {
      nds::laws::rng r(500 + i);
      auto m = nds::laws::gen_prog(cfg, nds::effect_set::both(), r);
      auto n = nds::laws::gen_prog(cfg, nds::effect_set::both(), r);
      CHECK(nds::prog_equal(choice(m, n), choice(n, m), states));
    }
  }

  TEST_CASE("raw sequences are reproducible left to right") {
    auto m = choice(ret<int>(1), choice(ret<int>(2), ret<int>(3)));
    CHECK(run_local(m, 9) == std::vector<outcome>{{1, 9}, {2, 9}, {3, 9}});
    CHECK(run_local(m, 9) == run_local(m, 9));
  }

  TEST_CASE("choice visits are counted") {
    auto m = choice(ret<int>(1), choice(ret<int>(2), iprog::fail()));
    nds::run_stats stats;
    run_local(m, 0, stats);
    CHECK(stats.choice_visits == 2);
  }

  TEST_CASE("a shared program can be run from several threads") {
    nds::laws::fuzz_config cfg;
    nds::laws::rng r(77);
    auto m = nds::laws::gen_prog(cfg, nds::effect_set::both(), r);
    auto expected = run_local(m, 0);
    std::vector<std::vector<outcome>> results(4);
    std::vector<std::thread> workers;
    for (auto& slot : results)
      workers.emplace_back([&m, &slot] { slot = run_local(m, 0); });
    for (auto& w : workers) w.join();
    for (const auto& got : results) CHECK(got == expected);
  }
}
