#include "nds/queens.hpp"

#include <algorithm>
#include <numeric>

#include "nds/combinators.hpp"
#include "nds/handler.hpp"

namespace nds {

std::vector<int> ups(const std::vector<int>& xs) {
  std::vector<int> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = static_cast<int>(i) + xs[i];
  return out;
}

std::vector<int> downs(const std::vector<int>& xs) {
  std::vector<int> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = static_cast<int>(i) - xs[i];
  return out;
}

bool nodup(const std::vector<int>& xs) {
  std::vector<int> seen(xs);
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

bool safe(const std::vector<int>& xs) { return nodup(ups(xs)) && nodup(downs(xs)); }

bool safe_acc(const queens_state& acc, const std::vector<int>& xs) {
  std::vector<int> us2(xs.size()), ds2(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    int i = acc.placed + static_cast<int>(k);
    us2[k] = i + xs[k];
    ds2[k] = i - xs[k];
  }
  auto none_in = [](const std::vector<int>& fresh, const std::vector<int>& old) {
    return std::all_of(fresh.begin(), fresh.end(), [&](int v) {
      return std::find(old.begin(), old.end(), v) == old.end();
    });
  };
  return nodup(us2) && nodup(ds2) && none_in(us2, acc.up_diags) &&
         none_in(ds2, acc.down_diags);
}

queens_state oplus(const queens_state& st, int x) {
  queens_state next;
  next.placed = st.placed + 1;
  next.up_diags.reserve(st.up_diags.size() + 1);
  next.up_diags.push_back(st.placed + x);
  next.up_diags.insert(next.up_diags.end(), st.up_diags.begin(), st.up_diags.end());
  next.down_diags.reserve(st.down_diags.size() + 1);
  next.down_diags.push_back(st.placed - x);
  next.down_diags.insert(next.down_diags.end(), st.down_diags.begin(),
                         st.down_diags.end());
  return next;
}

bool ok_check(const queens_state& st) {
  if (st.up_diags.empty() || st.down_diags.empty()) throw empty_state();
  auto fresh_elsewhere = [](const std::vector<int>& v) {
    return std::find(v.begin() + 1, v.end(), v.front()) == v.end();
  };
  return fresh_elsewhere(st.up_diags) && fresh_elsewhere(st.down_diags);
}

namespace {

std::vector<int> board_cells(int n) {
  std::vector<int> cells(static_cast<std::size_t>(n));
  std::iota(cells.begin(), cells.end(), 0);
  return cells;
}

}  // namespace

queens_prog queens_naive(int n) {
  return mbind(perm<queens_state>(board_cells(n)), [](const std::vector<int>& xs) {
    return filt<queens_state>([](const std::vector<int>& v) { return safe(v); }, xs);
  });
}

queens_prog queens_derived(int n) {
  solve_spec<std::vector<int>, int, queens_state> spec;
  spec.stop = [](const std::vector<int>& v) { return v.empty(); };
  spec.step = [](const std::vector<int>& v) { return select<queens_state>(v); };
  spec.ok = [](const queens_state& st) { return ok_check(st); };
  spec.oplus = [](const queens_state& st, const int& x) { return oplus(st, x); };
  spec.initial = queens_state{};
  spec.start = board_cells(n);
  spec.measure = [](const std::vector<int>& v) { return v.size(); };
  return solve(spec);
}

std::uint64_t expansion_count(int n, queens_variant variant) {
  queens_prog m = variant == queens_variant::naive ? queens_naive(n) : queens_derived(n);
  run_stats stats;
  run_local(m, queens_state{}, stats);
  return stats.choice_visits;
}

}  // namespace nds
