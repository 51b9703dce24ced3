#pragma once

// n-queens, twice: the generate-and-test specification (perm + filt safe) and
// the backtracker obtained from it by fusing the permutation unfold with a
// stateful fold over diagonal indices. expansion_count instruments the
// interpreter to show that the fused form prunes.

#include <cstdint>
#include <tuple>
#include <vector>

#include "nds/prog.hpp"

namespace nds {

// (i, us, ds): number of queens placed so far, and the up-/down-diagonal
// indices they occupy, most recent first.
struct queens_state {
  int placed = 0;
  std::vector<int> up_diags;
  std::vector<int> down_diags;

  friend bool operator==(const queens_state&, const queens_state&) = default;
  friend bool operator<(const queens_state& a, const queens_state& b) {
    return std::tie(a.placed, a.up_diags, a.down_diags) <
           std::tie(b.placed, b.up_diags, b.down_diags);
  }
};

// ups xs = zipWith (+) [0..] xs; downs xs = zipWith (-) [0..] xs
std::vector<int> ups(const std::vector<int>& xs);
std::vector<int> downs(const std::vector<int>& xs);

bool nodup(const std::vector<int>& xs);

// safe xs = nodup (ups xs) && nodup (downs xs)
bool safe(const std::vector<int>& xs);

// safe generalised with an accumulated state; safe == safe_acc (0, [], []).
bool safe_acc(const queens_state& acc, const std::vector<int>& xs);

// (i, us, ds) op x = (i + 1, (i + x) : us, (i - x) : ds)
queens_state oplus(const queens_state& st, int x);

// ok (_, u:us, d:ds) = u notin us && d notin ds; throws empty_state on i = 0,
// which the derivation never reaches because oplus runs first.
bool ok_check(const queens_state& st);

using queens_prog = prog<std::vector<int>, queens_state>;

// queens n = perm [0..n-1] >>= filt safe
queens_prog queens_naive(int n);

// queens n = solve null select ok oplus (0, [], []) [0..n-1]
queens_prog queens_derived(int n);

enum class queens_variant { naive, derived };

// Number of list-splitting steps the interpreter performs, i.e. choice nodes
// visited while running the chosen variant from the empty state.
std::uint64_t expansion_count(int n, queens_variant variant);

}  // namespace nds
