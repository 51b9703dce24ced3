#pragma once

// Shared test helpers: a deliberately wrong handler order (state threaded
// through choice branches globally) used as the negative control, and a
// small process-spawning helper for driving the CLI binary.

#include <array>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nds/laws.hpp"
#include "nds/prog.hpp"

namespace testsupport {

// Wrong-order interpretation: one global state threaded left to right
// through choice branches instead of a private copy per branch.
template <class A, class S>
void run_global_node(const nds::prog<A, S>& m, S& current,
                     std::vector<std::pair<A, S>>& out) {
  m.match(
      [&](const A& v) { out.emplace_back(v, current); },
      [&]() {},
      [&](nds::prog<A, S> l, nds::prog<A, S> r) {
        run_global_node(l, current, out);
        run_global_node(r, current, out);
      },
      [&](std::function<nds::prog<A, S>(const S&)> k) {
        run_global_node(k(current), current, out);
      },
      [&](const S& s, nds::prog<A, S> c) {
        current = s;
        run_global_node(c, current, out);
      });
}

template <class A, class S>
std::vector<std::pair<A, S>> run_global(const nds::prog<A, S>& m, S initial) {
  std::vector<std::pair<A, S>> out;
  run_global_node(m, initial, out);
  return out;
}

struct wrong_order_semantics : nds::laws::semantics {
  std::vector<std::pair<int, int>> run_int(const nds::laws::int_prog& m,
                                           int initial) const override {
    return run_global(m, initial);
  }
  std::vector<std::pair<nds::unit, int>> run_unit(const nds::laws::unit_prog& m,
                                                  int initial) const override {
    return run_global(m, initial);
  }
  std::vector<std::pair<std::vector<int>, int>> run_vec(
      const nds::prog<std::vector<int>, int>& m, int initial) const override {
    return run_global(m, initial);
  }
  std::vector<std::pair<std::vector<int>, nds::queens_state>> run_queens(
      const nds::prog<std::vector<int>, nds::queens_state>& m,
      const nds::queens_state& initial) const override {
    return run_global(m, initial);
  }
};

struct command_result {
  int exit_code = -1;
  std::string output;
};

inline command_result run_command(const std::string& command) {
  command_result result;
  std::string wrapped = command + " 2>/dev/null";
  FILE* pipe = ::popen(wrapped.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), got);
  int status = ::pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace testsupport
