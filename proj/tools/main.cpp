#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nds/handler.hpp"
#include "nds/laws.hpp"
#include "nds/queens.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct queens_result {
  std::vector<std::vector<int>> solutions;  // sorted lexicographically
  nds::run_stats stats;
};

queens_result run_variant(int n, nds::queens_variant variant) {
  nds::queens_prog m = variant == nds::queens_variant::naive ? nds::queens_naive(n)
                                                             : nds::queens_derived(n);
  queens_result out;
  auto outcomes = nds::run_local(m, nds::queens_state{}, out.stats);
  out.solutions.reserve(outcomes.size());
  for (auto& [placement, st] : outcomes) out.solutions.push_back(placement);
  std::sort(out.solutions.begin(), out.solutions.end());
  return out;
}

std::string placement_line(const std::vector<int>& xs) {
  std::string line;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) line += " ";
    line += std::to_string(xs[i]);
  }
  return line;
}

int cmd_queens(unsigned n, const std::string& mode, bool count_only, bool stats,
               bool json) {
  const bool want_naive = mode == "naive" || mode == "both";
  const bool want_derived = mode == "derived" || mode == "both";

  queens_result naive, derived;
  if (want_naive) naive = run_variant(static_cast<int>(n), nds::queens_variant::naive);
  if (want_derived)
    derived = run_variant(static_cast<int>(n), nds::queens_variant::derived);

  const queens_result& shown = want_derived ? derived : naive;
  bool match = true;
  if (mode == "both") match = naive.solutions == derived.solutions;

  if (json) {
    ordered_json j;
    j["n"] = n;
    j["mode"] = mode;
    j["count"] = shown.solutions.size();
    if (!count_only) j["solutions"] = shown.solutions;
    if (stats) {
      ordered_json e;
      if (want_naive) e["naive"] = naive.stats.choice_visits;
      if (want_derived) e["derived"] = derived.stats.choice_visits;
      j["expansions"] = e;
    }
    if (mode == "both") j["match"] = match;
    std::cout << j.dump() << "\n";
  } else {
    if (count_only) {
      std::cout << shown.solutions.size() << "\n";
    } else {
      for (const auto& xs : shown.solutions) std::cout << placement_line(xs) << "\n";
    }
    if (stats) {
      if (want_naive) std::cout << "expansions naive " << naive.stats.choice_visits << "\n";
      if (want_derived)
        std::cout << "expansions derived " << derived.stats.choice_visits << "\n";
    }
    if (mode == "both") std::cout << (match ? "match" : "mismatch") << "\n";
  }
  return match ? 0 : 1;
}

int cmd_lawcheck(bool all, std::vector<std::string> ids, std::uint64_t cases,
                 std::uint64_t seed, std::uint64_t depth, bool json) {
  nds::laws::fuzz_config cfg;
  cfg.cases = cases;
  cfg.seed = seed;
  cfg.max_depth = depth;

  const auto& catalogue = nds::laws::law_catalogue();
  if (all) {
    ids = catalogue;
  } else {
    for (const auto& id : ids) {
      if (std::find(catalogue.begin(), catalogue.end(), id) == catalogue.end()) {
        std::cerr << "unknown law: " << id << "\n";
        return 2;
      }
    }
  }

  auto reports = nds::laws::run_suite(cfg, ids);
  bool all_passed = true;

  if (json) {
    ordered_json out = ordered_json::array();
    for (const auto& rep : reports) {
      all_passed = all_passed && rep.passed();
      ordered_json j;
      j["id"] = rep.law_id;
      j["cases"] = rep.cases_run;
      ordered_json fails = ordered_json::array();
      for (const auto& f : rep.failures) {
        ordered_json jf;
        jf["case"] = f.case_index;
        jf["env"] = f.env;
        jf["state"] = f.state;
        jf["lhs"] = f.lhs;
        jf["rhs"] = f.rhs;
        fails.push_back(jf);
      }
      j["failures"] = fails;
      if (!rep.note.empty()) j["note"] = rep.note;
      out.push_back(j);
    }
    std::cout << out.dump() << "\n";
  } else {
    for (const auto& rep : reports) {
      all_passed = all_passed && rep.passed();
      std::cout << rep.law_id << " " << rep.cases_run << " "
                << (rep.passed() ? "PASS" : "FAIL") << "\n";
      if (!rep.note.empty()) std::cout << "  note: " << rep.note << "\n";
      const std::size_t shown = std::min<std::size_t>(rep.failures.size(), 3);
      for (std::size_t i = 0; i < shown; ++i) {
        const auto& f = rep.failures[i];
        std::cout << "  case " << f.case_index << " state=" << f.state << "\n"
                  << "    env: " << f.env << "\n"
                  << "    lhs: " << f.lhs << "\n"
                  << "    rhs: " << f.rhs << "\n";
      }
      if (rep.failures.size() > shown)
        std::cout << "  (+" << rep.failures.size() - shown << " more failures)\n";
    }
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nondeterministic + stateful programs: law checking and n-queens"};
  app.require_subcommand(1);

  auto* queens = app.add_subcommand("queens", "solve n-queens");
  unsigned n = 0;
  std::string mode;
  bool count_only = false, q_stats = false, q_json = false;
  queens->add_option("--n", n, "board size")->required();
  queens->add_option("--mode", mode, "naive, derived, or both")
      ->required()
      ->check(CLI::IsMember({"naive", "derived", "both"}));
  queens->add_flag("--count-only", count_only, "print only the solution count");
  queens->add_flag("--stats", q_stats, "print interpreter expansion counts");
  queens->add_flag("--json", q_json, "emit JSON");

  auto* lawcheck = app.add_subcommand("lawcheck", "fuzz the law catalogue");
  bool all = false, l_json = false;
  std::vector<std::string> ids;
  std::uint64_t cases = 500, seed = 0, depth = 4;
  auto* all_flag = lawcheck->add_flag("--all", all, "run every registered law");
  lawcheck->add_option("--law", ids, "law id (repeatable)")->excludes(all_flag);
  lawcheck->add_option("--cases", cases, "cases per law");
  lawcheck->add_option("--seed", seed, "generator seed");
  lawcheck->add_option("--depth", depth, "max program depth");
  lawcheck->add_flag("--json", l_json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    return app.exit(e);  // --help and friends
  }

  try {
    if (app.got_subcommand(queens)) return cmd_queens(n, mode, count_only, q_stats, q_json);
    if (!all && ids.empty()) {
      std::cerr << "lawcheck: pass --all or at least one --law\n";
      return 2;
    }
    return cmd_lawcheck(all, std::move(ids), cases, seed, depth, l_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
