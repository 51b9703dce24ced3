#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "nds/handler.hpp"
#include "nds/queens.hpp"

using nds::downs;
using nds::expansion_count;
using nds::nodup;
using nds::ok_check;
using nds::oplus;
using nds::queens_derived;
using nds::queens_naive;
using nds::queens_state;
using nds::queens_variant;
using nds::run_local;
using nds::safe;
using nds::safe_acc;
using nds::ups;

namespace {

// Independent oracle: enumerate permutations and test diagonals pairwise.
std::vector<std::vector<int>> brute_queens(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool clash = false;
    for (int i = 0; i < n && !clash; ++i)
      for (int j = i + 1; j < n && !clash; ++j)
        clash = std::abs(p[i] - p[j]) == j - i;
    if (!clash) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::vector<int>> solutions_of(const nds::queens_prog& m) {
  std::vector<std::vector<int>> out;
  for (auto& [placement, st] : run_local(m, queens_state{})) out.push_back(placement);
  std::sort(out.begin(), out.end());
  return out;
}

// select performs one list split per element still available, so a full
// interpreter run of the naive pipeline does sum over k of n!/(n-k)! splits.
std::uint64_t naive_split_oracle(int n) {
  std::uint64_t total = 0, falling = 1;
  for (int k = 1; k <= n; ++k) {
    falling *= static_cast<std::uint64_t>(n - k + 1);
    total += falling;
  }
  return total;
}

}  // namespace

TEST_SUITE("queens") {
  TEST_CASE("diagonal indices") {
    CHECK(ups({3, 5, 7}) == std::vector<int>{3, 6, 9});
    CHECK(downs({3, 5, 7}) == std::vector<int>{-3, -4, -5});
    CHECK(ups({}).empty());
  }

  TEST_CASE("nodup") {
    CHECK(nodup({}));
    CHECK_FALSE(nodup({1, 2, 1}));
    CHECK(nodup({3, 6, 9}));
  }

  TEST_CASE("safe") {
    CHECK(safe({3, 5, 7, 1, 6, 0, 2, 4}));
    CHECK_FALSE(safe({0, 1}));
    CHECK(safe({0}));
  }

  TEST_CASE("safe_acc") {
    CHECK(safe_acc(queens_state{}, {}));
    CHECK(safe_acc(queens_state{1, {3}, {-3}}, {5}));
    // agrees with safe from the empty accumulator
    for (int n = 0; n <= 5; ++n) {
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      do {
        CHECK(safe_acc(queens_state{}, p) == safe(p));
      } while (std::next_permutation(p.begin(), p.end()));
    }
  }

  TEST_CASE("safe has three agreeing definitions") {
    // safe == safe_acc (0,[],[]) == all ok . scanl_plus oplus (0,[],[])
    auto via_scan = [](const std::vector<int>& xs) {
      queens_state st;
      for (int x : xs) {
        st = oplus(st, x);
        if (!ok_check(st)) return false;
      }
      return true;
    };
    std::uint64_t lcg = 12345;
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<int> xs;
      lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
      std::size_t len = (lcg >> 33) % 7;
      for (std::size_t i = 0; i < len; ++i) {
        lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
        xs.push_back(static_cast<int>((lcg >> 33) % 10) - 2);
      }
      bool expected = safe(xs);
      CHECK(safe_acc(queens_state{}, xs) == expected);
      CHECK(via_scan(xs) == expected);
    }
  }

  TEST_CASE("oplus and ok_check") {
    CHECK(oplus(queens_state{}, 3) == queens_state{1, {3}, {-3}});
    CHECK(ok_check(queens_state{1, {3}, {-3}}));
    CHECK_FALSE(ok_check(queens_state{2, {6, 6}, {0, 1}}));
    CHECK_THROWS_AS(ok_check(queens_state{}), nds::empty_state);
  }

  TEST_CASE("queens_naive matches the brute-force oracle") {
    CHECK(solutions_of(queens_naive(0)) == std::vector<std::vector<int>>{{}});
    CHECK(solutions_of(queens_naive(2)).empty());
    auto four = solutions_of(queens_naive(4));
    CHECK(four == std::vector<std::vector<int>>{{1, 3, 0, 2}, {2, 0, 3, 1}});
    for (int n = 0; n <= 6; ++n) {
      auto expected = brute_queens(n);
      std::sort(expected.begin(), expected.end());
      CHECK(solutions_of(queens_naive(n)) == expected);
    }
  }

  TEST_CASE("queens_derived agrees with queens_naive on every initial state") {
    CHECK(solutions_of(queens_derived(1)) == std::vector<std::vector<int>>{{0}});
    std::vector<queens_state> states = {queens_state{}, queens_state{2, {4, 1}, {0, -1}}};
    for (int n = 0; n <= 6; ++n) {
      CHECK(nds::prog_equal(queens_derived(n), queens_naive(n),
                            std::span<const queens_state>(states)));
    }
  }

  TEST_CASE("derived solutions are safe permutations and restore the state") {
    for (int n = 4; n <= 6; ++n) {
      queens_state start{1, {9}, {-9}};
      for (auto& [placement, st] : run_local(queens_derived(n), start)) {
        CHECK(st == start);
        CHECK(safe(placement));
        std::vector<int> sorted = placement;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> cells(static_cast<std::size_t>(n));
        std::iota(cells.begin(), cells.end(), 0);
        CHECK(sorted == cells);
      }
    }
  }

  TEST_CASE("expansion counts") {
    for (int n = 1; n <= 5; ++n)
      CHECK(expansion_count(n, queens_variant::naive) == naive_split_oracle(n));
    CHECK(expansion_count(4, queens_variant::naive) == 64);
    CHECK(expansion_count(1, queens_variant::derived) == 1);
    for (int n = 1; n <= 5; ++n)
      CHECK(expansion_count(n, queens_variant::derived) <=
            expansion_count(n, queens_variant::naive));
    for (int n = 4; n <= 5; ++n)
      CHECK(expansion_count(n, queens_variant::derived) <
            expansion_count(n, queens_variant::naive));
    // deterministic across runs
    CHECK(expansion_count(5, queens_variant::derived) ==
          expansion_count(5, queens_variant::derived));
  }
}
