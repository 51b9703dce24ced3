#pragma once

// The executable law catalogue. Every numbered equation and every theorem is
// a named, reproducible property: a generator draws an environment (programs,
// tabulated continuations, values), both sides are built, and their
// denotations are compared as bags over every state in the configured domain.
// On failure the environment is shrunk by replacing subtrees with leaves
// until the counterexample is minimal.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nds/handler.hpp"
#include "nds/prog.hpp"
#include "nds/queens.hpp"

namespace nds::laws {

struct fuzz_config {
  std::vector<int> value_domain = {0, 1, 2, 3};
  std::vector<int> state_domain = {0, 1, 2, 3};
  std::size_t max_depth = 4;
  std::size_t cases = 500;
  std::uint64_t seed = 0;
};

// splitmix64; hand-rolled so output is identical across platforms.
class rng {
 public:
  explicit rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // uniform-ish in [0, n)
  bool coin() { return (next() & 1) != 0; }
  int pick(std::span<const int> xs) { return xs[below(xs.size())]; }

 private:
  std::uint64_t state_;
};

using int_prog = prog<int, int>;
using unit_prog = prog<unit, int>;

// Continuation tabulated over a finite domain; applying it outside the
// domain signals domain_violation.
struct kont_table {
  std::vector<int> domain;
  std::vector<int_prog> image;
  int_prog operator()(int v) const;
};

// Binary variant, tabulated over domain_a x domain_b.
struct kont2_table {
  std::vector<int> domain_a;
  std::vector<int> domain_b;
  std::vector<int_prog> image;  // row-major
  int_prog operator()(int a, int b) const;
};

// Random program of depth <= cfg.max_depth using only constructors allowed by
// the footprint (ret is always allowed). Get continuations are tabulated over
// cfg.state_domain.
int_prog gen_prog(const fuzz_config& cfg, effect_set allowed, rng& r);

// Random tabulated continuation over cfg.value_domain.
kont_table gen_kont(const fuzz_config& cfg, effect_set allowed, rng& r);

// Prefix textual form, e.g. (choice (ret 1) (put 2 (get ((0 f) (1 f))))).
// Get continuations render as explicit state -> subtree tables.
std::string render_prog(const int_prog& m, std::span<const int> state_domain);

struct law_failure {
  std::size_t case_index = 0;
  std::string env;
  std::string state;
  std::string lhs;
  std::string rhs;
  std::size_t env_depth = 0;  // max node depth over the environment's trees
};

struct law_report {
  std::string law_id;
  std::size_t cases_run = 0;
  std::vector<law_failure> failures;
  std::string note;

  bool passed() const { return failures.empty(); }
};

// Denotation hook. The default interprets with the local-state handler;
// tests override it to prove the suite detects a wrong handler order.
struct semantics {
  virtual ~semantics() = default;
  virtual std::vector<std::pair<int, int>> run_int(const int_prog& m, int initial) const;
  virtual std::vector<std::pair<unit, int>> run_unit(const unit_prog& m, int initial) const;
  virtual std::vector<std::pair<std::vector<int>, int>> run_vec(
      const prog<std::vector<int>, int>& m, int initial) const;
  virtual std::vector<std::pair<std::vector<int>, queens_state>> run_queens(
      const prog<std::vector<int>, queens_state>& m, const queens_state& initial) const;
};

// Registered ids, in canonical order: eq01..eq20, then thm1, thm2, thm3,
// cor4, thm5_queens_shape, lemma6, cor7.
const std::vector<std::string>& law_catalogue();

law_report run_law(const fuzz_config& cfg, std::string_view id);  // throws unknown_law
law_report run_law(const fuzz_config& cfg, std::string_view id, const semantics& sem);

// Runs the requested ids in catalogue order (duplicates collapse).
std::vector<law_report> run_suite(const fuzz_config& cfg,
                                  std::span<const std::string> ids);
std::vector<law_report> run_suite_all(const fuzz_config& cfg);

}  // namespace nds::laws
