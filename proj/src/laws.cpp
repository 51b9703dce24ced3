#include "nds/laws.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "nds/combinators.hpp"

namespace nds::laws {

// ---------------------------------------------------------------------------
// rng and per-case seeding

std::uint64_t rng::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rng::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Case seeds depend only on (suite seed, law id, case index), so scheduling
// and law selection cannot alter what a case generates.
std::uint64_t case_seed(std::uint64_t seed, std::string_view law, std::uint64_t idx) {
  rng r(seed ^ fnv1a(law) ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
  return r.next();
}

}  // namespace

// ---------------------------------------------------------------------------
// tabulated continuations

int_prog kont_table::operator()(int v) const {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == v) return image[i];
  throw domain_violation("continuation applied outside its value domain");
}

int_prog kont2_table::operator()(int a, int b) const {
  for (std::size_t i = 0; i < domain_a.size(); ++i)
    for (std::size_t j = 0; j < domain_b.size(); ++j)
      if (domain_a[i] == a && domain_b[j] == b) return image[i * domain_b.size() + j];
  throw domain_violation("continuation applied outside its value domain");
}

namespace {

int_prog make_table_get(std::vector<int_prog> table, std::span<const int> sdom) {
  std::vector<int> dom(sdom.begin(), sdom.end());
  return int_prog::get([table = std::move(table), dom = std::move(dom)](const int& s) {
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (dom[i] == s) return table[i];
    throw domain_violation("get continuation applied outside the state domain");
  });
}

int_prog gen_prog_depth(const fuzz_config& cfg, effect_set allowed, rng& r,
                        std::size_t depth) {
  enum kind { k_ret, k_fail, k_choice, k_get, k_put };
  kind menu[16];  // holds the summed constructor weights below
  std::size_t n = 0;
  auto add = [&](kind k, int weight) {
    for (int i = 0; i < weight; ++i) menu[n++] = k;
  };
  add(k_ret, 2);
  if (allowed.nondet) add(k_fail, 1);
  if (depth > 1) {
    if (allowed.nondet) add(k_choice, 3);
    if (allowed.state) {
      add(k_get, 2);
      add(k_put, 2);
    }
  }
  switch (menu[r.below(n)]) {
    case k_ret:
      return int_prog::ret(r.pick(cfg.value_domain));
    case k_fail:
      return int_prog::fail();
    case k_choice: {
      auto left = gen_prog_depth(cfg, allowed, r, depth - 1);
      auto right = gen_prog_depth(cfg, allowed, r, depth - 1);
      return int_prog::choice(std::move(left), std::move(right));
    }
    case k_get: {
      std::vector<int_prog> table;
      table.reserve(cfg.state_domain.size());
      for (std::size_t i = 0; i < cfg.state_domain.size(); ++i)
        table.push_back(gen_prog_depth(cfg, allowed, r, depth - 1));
      return make_table_get(std::move(table), cfg.state_domain);
    }
    case k_put:
      return int_prog::put(r.pick(cfg.state_domain), gen_prog_depth(cfg, allowed, r, depth - 1));
  }
  return int_prog::fail();  // unreachable
}

}  // namespace

int_prog gen_prog(const fuzz_config& cfg, effect_set allowed, rng& r) {
  return gen_prog_depth(cfg, allowed, r, cfg.max_depth < 1 ? 1 : cfg.max_depth);
}

kont_table gen_kont(const fuzz_config& cfg, effect_set allowed, rng& r) {
  kont_table k;
  k.domain = cfg.value_domain;
  k.image.reserve(k.domain.size());
  for (std::size_t i = 0; i < k.domain.size(); ++i)
    k.image.push_back(gen_prog(cfg, allowed, r));
  return k;
}

namespace {

kont2_table gen_kont2(const fuzz_config& cfg, effect_set allowed, rng& r,
                      const std::vector<int>& da, const std::vector<int>& db) {
  kont2_table k;
  k.domain_a = da;
  k.domain_b = db;
  k.image.reserve(da.size() * db.size());
  for (std::size_t i = 0; i < da.size() * db.size(); ++i)
    k.image.push_back(gen_prog(cfg, allowed, r));
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string render_value(int v) { return std::to_string(v); }
std::string render_value(unit) { return "()"; }

std::string render_value(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string render_value(const queens_state& q) {
  return "(" + std::to_string(q.placed) + " " + render_value(q.up_diags) + " " +
         render_value(q.down_diags) + ")";
}

template <class A, class S>
std::string render_outcomes(std::vector<std::pair<A, S>> v) {
  std::sort(v.begin(), v.end());
  std::string out = "{";
  std::size_t i = 0;
  bool first = true;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (!first) out += " ";
    first = false;
    out += "(" + render_value(v[i].first) + " " + render_value(v[i].second) + ")";
    if (j - i > 1) out += "x" + std::to_string(j - i);
    i = j;
  }
  return out + "}";
}

}  // namespace

std::string render_prog(const int_prog& m, std::span<const int> state_domain) {
  return m.match(
      [&](const int& v) { return "(ret " + std::to_string(v) + ")"; },
      [&]() { return std::string("fail"); },
      [&](int_prog l, int_prog r) {
        return "(choice " + render_prog(l, state_domain) + " " +
               render_prog(r, state_domain) + ")";
      },
      [&](std::function<int_prog(const int&)> k) {
        std::string out = "(get (";
        bool first = true;
        for (int s : state_domain) {
          if (!first) out += " ";
          first = false;
          out += "(" + std::to_string(s) + " " + render_prog(k(s), state_domain) + ")";
        }
        return out + "))";
      },
      [&](const int& s, int_prog c) {
        return "(put " + std::to_string(s) + " " + render_prog(c, state_domain) + ")";
      });
}

// ---------------------------------------------------------------------------
// default semantics: the local-state handler

std::vector<std::pair<int, int>> semantics::run_int(const int_prog& m, int initial) const {
  return run_local(m, initial);
}
std::vector<std::pair<unit, int>> semantics::run_unit(const unit_prog& m, int initial) const {
  return run_local(m, initial);
}
std::vector<std::pair<std::vector<int>, int>> semantics::run_vec(
    const prog<std::vector<int>, int>& m, int initial) const {
  return run_local(m, initial);
}
std::vector<std::pair<std::vector<int>, queens_state>> semantics::run_queens(
    const prog<std::vector<int>, queens_state>& m, const queens_state& initial) const {
  return run_local(m, initial);
}

// ---------------------------------------------------------------------------
// shrinking: replace subtrees with leaves (or hoist a child) while the
// failure persists; every candidate is strictly smaller, so this terminates.

namespace {

std::vector<int_prog> shrink_variants(const int_prog& m, std::span<const int> vdom,
                                      std::span<const int> sdom) {
  std::vector<int_prog> out;
  const int v0 = vdom.empty() ? 0 : vdom[0];
  const int s0 = sdom.empty() ? 0 : sdom[0];
  m.match(
      [&](const int& v) {
        out.push_back(int_prog::fail());
        if (v != v0) out.push_back(int_prog::ret(v0));
      },
      [&]() {},
      [&](int_prog l, int_prog r) {
        out.push_back(int_prog::fail());
        out.push_back(int_prog::ret(v0));
        out.push_back(l);
        out.push_back(r);
        for (auto& v : shrink_variants(l, vdom, sdom))
          out.push_back(int_prog::choice(v, r));
        for (auto& v : shrink_variants(r, vdom, sdom))
          out.push_back(int_prog::choice(l, v));
      },
      [&](std::function<int_prog(const int&)> k) {
        out.push_back(int_prog::fail());
        out.push_back(int_prog::ret(v0));
        std::vector<int_prog> table;
        for (int s : sdom) table.push_back(k(s));
        for (auto& entry : table) out.push_back(entry);
        for (std::size_t i = 0; i < table.size(); ++i) {
          for (auto& v : shrink_variants(table[i], vdom, sdom)) {
            auto t2 = table;
            t2[i] = v;
            out.push_back(make_table_get(std::move(t2), sdom));
          }
        }
      },
      [&](const int& s, int_prog c) {
        out.push_back(int_prog::fail());
        out.push_back(int_prog::ret(v0));
        out.push_back(c);
        if (s != s0) out.push_back(int_prog::put(s0, c));
        for (auto& v : shrink_variants(c, vdom, sdom))
          out.push_back(int_prog::put(s, v));
      });
  return out;
}

// ---------------------------------------------------------------------------
// generated environments for the equation laws

struct env_rec {
  std::vector<std::pair<std::string, int_prog>> progs;
  std::vector<std::pair<std::string, kont_table>> konts;
  std::vector<std::pair<std::string, kont2_table>> konts2;
  std::vector<std::pair<std::string, int>> nums;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<std::pair<std::string, std::string>> names;  // pool picks
};

std::vector<env_rec> env_neighbors(const env_rec& e, const fuzz_config& cfg) {
  std::vector<env_rec> out;
  for (std::size_t i = 0; i < e.progs.size(); ++i) {
    for (auto& v : shrink_variants(e.progs[i].second, cfg.value_domain, cfg.state_domain)) {
      env_rec c = e;
      c.progs[i].second = v;
      out.push_back(std::move(c));
    }
  }
  for (std::size_t i = 0; i < e.konts.size(); ++i) {
    for (std::size_t j = 0; j < e.konts[i].second.image.size(); ++j) {
      for (auto& v :
           shrink_variants(e.konts[i].second.image[j], cfg.value_domain, cfg.state_domain)) {
        env_rec c = e;
        c.konts[i].second.image[j] = v;
        out.push_back(std::move(c));
      }
    }
  }
  for (std::size_t i = 0; i < e.konts2.size(); ++i) {
    for (std::size_t j = 0; j < e.konts2[i].second.image.size(); ++j) {
      for (auto& v :
           shrink_variants(e.konts2[i].second.image[j], cfg.value_domain, cfg.state_domain)) {
        env_rec c = e;
        c.konts2[i].second.image[j] = v;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::string render_kont(const kont_table& k, std::span<const int> sdom) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.domain.size(); ++i) {
    if (i) out += " ";
    out += "(" + std::to_string(k.domain[i]) + " " + render_prog(k.image[i], sdom) + ")";
  }
  return out + ")";
}

std::string render_kont2(const kont2_table& k, std::span<const int> sdom) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.domain_a.size(); ++i)
    for (std::size_t j = 0; j < k.domain_b.size(); ++j) {
      if (i || j) out += " ";
      out += "((" + std::to_string(k.domain_a[i]) + " " + std::to_string(k.domain_b[j]) +
             ") " + render_prog(k.image[i * k.domain_b.size() + j], sdom) + ")";
    }
  return out + ")";
}

std::string render_env(const env_rec& e, const fuzz_config& cfg) {
  std::string out;
  auto sep = [&] {
    if (!out.empty()) out += "; ";
  };
  for (auto& [name, p] : e.progs) {
    sep();
    out += name + "=" + render_prog(p, cfg.state_domain);
  }
  for (auto& [name, k] : e.konts) {
    sep();
    out += name + "=" + render_kont(k, cfg.state_domain);
  }
  for (auto& [name, k] : e.konts2) {
    sep();
    out += name + "=" + render_kont2(k, cfg.state_domain);
  }
  for (auto& [name, v] : e.nums) {
    sep();
    out += name + "=" + std::to_string(v);
  }
  for (auto& [name, b] : e.flags) {
    sep();
    out += name + "=" + (b ? "true" : "false");
  }
  for (auto& [name, n] : e.names) {
    sep();
    out += name + "=" + n;
  }
  return out.empty() ? "(empty)" : out;
}

std::size_t env_tree_depth(const env_rec& e, const fuzz_config& cfg) {
  std::size_t deepest = 0;
  auto measure = [&](const int_prog& p) {
    deepest = std::max(deepest, prog_depth(p, std::span<const int>(cfg.state_domain)));
  };
  for (auto& [name, p] : e.progs) measure(p);
  for (auto& [name, k] : e.konts)
    for (auto& entry : k.image) measure(entry);
  for (auto& [name, k] : e.konts2)
    for (auto& entry : k.image) measure(entry);
  return deepest;
}

// ---------------------------------------------------------------------------
// function pools

struct named_fn1 {
  std::string name;
  std::function<int(int)> fn;
};
struct named_fn2 {
  std::string name;
  std::function<int(int, int)> fn;
};
struct named_pred1 {
  std::string name;
  std::function<bool(int)> fn;
};
struct named_pred2 {
  std::string name;
  std::function<bool(int, int)> fn;
};

// Endofunctions on the value domain, so tabulated continuations stay total
// after composition.
std::vector<named_fn1> pure_pool(const fuzz_config& cfg) {
  std::vector<int> dom = cfg.value_domain;
  auto index_of = [dom](int x) -> std::size_t {
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (dom[i] == x) return i;
    throw domain_violation("pure function applied outside the value domain");
  };
  return {
      {"id", [](int x) { return x; }},
      {"rot1", [dom, index_of](int x) { return dom[(index_of(x) + 1) % dom.size()]; }},
      {"mirror", [dom, index_of](int x) { return dom[dom.size() - 1 - index_of(x)]; }},
      {"const0", [dom](int) { return dom[0]; }},
  };
}

const std::vector<named_fn2>& state_op_pool() {
  static const std::vector<named_fn2> pool = {
      {"plus", [](int s, int x) { return s + x; }},
      {"max", [](int s, int x) { return s > x ? s : x; }},
      {"mix7", [](int s, int x) { return (((2 * s + x) % 7) + 7) % 7; }},
  };
  return pool;
}

const std::vector<named_pred1>& ok_pool() {
  static const std::vector<named_pred1> pool = {
      {"even", [](int s) { return ((s % 2) + 2) % 2 == 0; }},
      {"lt5", [](int s) { return s < 5; }},
      {"ne3", [](int s) { return s != 3; }},
  };
  return pool;
}

const std::vector<named_pred2>& odot_guard_pool() {
  static const std::vector<named_pred2> pool = {
      {"sum_even", [](int x, int st) { return (((x + st) % 2) + 2) % 2 == 0; }},
      {"le", [](int x, int st) { return st <= x; }},
      {"always", [](int, int) { return true; }},
  };
  return pool;
}

// Transitions closed over the state domain, so generated get tables stay
// total under any sequence of puts.
std::vector<named_fn2> odot_next_pool(const fuzz_config& cfg) {
  std::vector<int> dom = cfg.state_domain;
  auto index_of = [dom](int s) -> std::size_t {
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (dom[i] == s) return i;
    throw domain_violation("state transition applied outside the state domain");
  };
  return {
      {"rot_x",
       [dom, index_of](int x, int st) {
         std::size_t step = static_cast<std::size_t>(x < 0 ? -x : x);
         return dom[(index_of(st) + step) % dom.size()];
       }},
      {"hold", [](int, int st) { return st; }},
      {"flip", [dom, index_of](int, int st) { return dom[dom.size() - 1 - index_of(st)]; }},
  };
}

const std::vector<named_fn2>& odot_res_pool() {
  static const std::vector<named_fn2> pool = {
      {"plus", [](int x, int b) { return x + b; }},
      {"snd", [](int, int b) { return b; }},
      {"mix11", [](int x, int b) { return (((3 * x + b) % 11) + 11) % 11; }},
  };
  return pool;
}

template <class Pool>
const auto& pool_by_name(const Pool& pool, const std::string& name) {
  for (auto& entry : pool)
    if (entry.name == name) return entry;
  throw std::logic_error("no pool entry named " + name);
}

// ---------------------------------------------------------------------------
// the equation laws

using int_pairs = std::vector<std::pair<int_prog, int_prog>>;
using unit_pairs = std::vector<std::pair<unit_prog, unit_prog>>;

struct eq_law {
  std::string id;
  std::function<env_rec(const fuzz_config&, rng&)> gen;
  std::function<void(const env_rec&, const fuzz_config&, int_pairs&, unit_pairs&)> build;
};

struct mismatch {
  std::string state;
  std::string lhs;
  std::string rhs;
};

template <class A, class S, class Run>
std::optional<mismatch> check_pairs(
    const std::vector<std::pair<prog<A, S>, prog<A, S>>>& pairs,
    std::span<const S> states, Run run) {
  for (const S& s : states) {
    for (const auto& pr : pairs) {
      auto lv = run(pr.first, s);
      auto rv = run(pr.second, s);
      if (bag(lv) != bag(rv))
        return mismatch{render_value(s), render_outcomes(std::move(lv)),
                        render_outcomes(std::move(rv))};
    }
  }
  return std::nullopt;
}

std::optional<mismatch> check_env(const eq_law& law, const env_rec& env,
                                  const fuzz_config& cfg, const semantics& sem) {
  int_pairs ip;
  unit_pairs up;
  law.build(env, cfg, ip, up);
  std::span<const int> states(cfg.state_domain);
  if (auto bad = check_pairs(ip, states,
                             [&](const int_prog& m, int s) { return sem.run_int(m, s); }))
    return bad;
  return check_pairs(up, states,
                     [&](const unit_prog& m, int s) { return sem.run_unit(m, s); });
}

env_rec shrink_env(const eq_law& law, env_rec env, const fuzz_config& cfg,
                   const semantics& sem) {
  for (int rounds = 0; rounds < 10000; ++rounds) {
    bool improved = false;
    for (auto& cand : env_neighbors(env, cfg)) {
      if (check_env(law, cand, cfg, sem)) {
        env = std::move(cand);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return env;
}

int_prog apply_kont(const kont_table& k, int v) { return k(v); }

std::vector<eq_law> make_eq_laws() {
  std::vector<eq_law> laws;
  const auto any = effect_set::both();

  // (1) ret x >>= k  =  k x
  laws.push_back(
      {"eq01",
       [](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.konts.emplace_back("k", gen_kont(cfg, effect_set::both(), r));
         e.nums.emplace_back("x", r.pick(cfg.value_domain));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& k = e.konts[0].second;
         int x = e.nums[0].second;
         ip.emplace_back(
             mbind(int_prog::ret(x), [k](const int& v) { return apply_kont(k, v); }),
             apply_kont(k, x));
       }});

  // (2) m >>= ret  =  m
  laws.push_back({"eq02",
                  [any](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.progs.emplace_back("m", gen_prog(cfg, any, r));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    const auto& m = e.progs[0].second;
                    ip.emplace_back(
                        mbind(m, [](const int& v) { return int_prog::ret(v); }), m);
                  }});

  // (3) (m >>= f) >>= g  =  m >>= (\x -> f x >>= g)
  laws.push_back(
      {"eq03",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.konts.emplace_back("f", gen_kont(cfg, any, r));
         e.konts.emplace_back("g", gen_kont(cfg, any, r));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         const auto& f = e.konts[0].second;
         const auto& g = e.konts[1].second;
         auto fa = [f](const int& v) { return apply_kont(f, v); };
         auto ga = [g](const int& v) { return apply_kont(g, v); };
         ip.emplace_back(mbind(mbind(m, fa), ga),
                         mbind(m, [f, ga](const int& x) { return mbind(apply_kont(f, x), ga); }));
       }});

  // (4) (f . g) <$> m  =  f <$> (g <$> m)
  laws.push_back(
      {"eq04",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         auto pool = pure_pool(cfg);
         e.names.emplace_back("f", pool[r.below(pool.size())].name);
         e.names.emplace_back("g", pool[r.below(pool.size())].name);
         return e;
       },
       [](const env_rec& e, const fuzz_config& cfg, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         auto pool = pure_pool(cfg);
         auto f = pool_by_name(pool, e.names[0].second).fn;
         auto g = pool_by_name(pool, e.names[1].second).fn;
         ip.emplace_back(mapv([f, g](const int& x) { return f(g(x)); }, m),
                         mapv(f, mapv(g, m)));
       }});

  // (5) (f <$> m) >>= g  =  m >>= (g . f)
  laws.push_back(
      {"eq05",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.konts.emplace_back("g", gen_kont(cfg, any, r));
         auto pool = pure_pool(cfg);
         e.names.emplace_back("f", pool[r.below(pool.size())].name);
         return e;
       },
       [](const env_rec& e, const fuzz_config& cfg, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         const auto& g = e.konts[0].second;
         auto f = pool_by_name(pure_pool(cfg), e.names[0].second).fn;
         ip.emplace_back(mbind(mapv(f, m), [g](const int& v) { return apply_kont(g, v); }),
                         mbind(m, [g, f](const int& x) { return apply_kont(g, f(x)); }));
       }});

  // (6) f <$> (m >>= k)  =  m >>= (\x -> f <$> k x)
  laws.push_back(
      {"eq06",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.konts.emplace_back("k", gen_kont(cfg, any, r));
         auto pool = pure_pool(cfg);
         e.names.emplace_back("f", pool[r.below(pool.size())].name);
         return e;
       },
       [](const env_rec& e, const fuzz_config& cfg, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         const auto& k = e.konts[0].second;
         auto f = pool_by_name(pure_pool(cfg), e.names[0].second).fn;
         ip.emplace_back(
             mapv(f, mbind(m, [k](const int& v) { return apply_kont(k, v); })),
             mbind(m, [f, k](const int& x) { return mapv(f, apply_kont(k, x)); }));
       }});

  // (7) (m [] n) [] k  =  m [] (n [] k)
  laws.push_back({"eq07",
                  [any](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.progs.emplace_back("m", gen_prog(cfg, any, r));
                    e.progs.emplace_back("n", gen_prog(cfg, any, r));
                    e.progs.emplace_back("k", gen_prog(cfg, any, r));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    const auto& m = e.progs[0].second;
                    const auto& n = e.progs[1].second;
                    const auto& k = e.progs[2].second;
                    ip.emplace_back(choice(choice(m, n), k), choice(m, choice(n, k)));
                  }});

  // (8) fail [] m  =  m  =  m [] fail
  laws.push_back({"eq08",
                  [any](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.progs.emplace_back("m", gen_prog(cfg, any, r));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    const auto& m = e.progs[0].second;
                    ip.emplace_back(choice(int_prog::fail(), m), m);
                    ip.emplace_back(choice(m, int_prog::fail()), m);
                  }});

  // (9) (m1 [] m2) >>= f  =  (m1 >>= f) [] (m2 >>= f)
  laws.push_back(
      {"eq09",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m1", gen_prog(cfg, any, r));
         e.progs.emplace_back("m2", gen_prog(cfg, any, r));
         e.konts.emplace_back("f", gen_kont(cfg, any, r));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& m1 = e.progs[0].second;
         const auto& m2 = e.progs[1].second;
         const auto& f = e.konts[0].second;
         auto fa = [f](const int& v) { return apply_kont(f, v); };
         ip.emplace_back(mbind(choice(m1, m2), fa), choice(mbind(m1, fa), mbind(m2, fa)));
       }});

  // (10) fail >>= f  =  fail
  laws.push_back({"eq10",
                  [any](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.konts.emplace_back("f", gen_kont(cfg, any, r));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    const auto& f = e.konts[0].second;
                    ip.emplace_back(
                        mbind(int_prog::fail(), [f](const int& v) { return apply_kont(f, v); }),
                        int_prog::fail());
                  }});

  // (11) guard (p && q)  =  guard p >> guard q
  laws.push_back({"eq11",
                  [](const fuzz_config&, rng& r) {
                    env_rec e;
                    e.flags.emplace_back("p", r.coin());
                    e.flags.emplace_back("q", r.coin());
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs&, unit_pairs& up) {
                    bool p = e.flags[0].second, q = e.flags[1].second;
                    up.emplace_back(guard<int>(p && q), seq(guard<int>(p), guard<int>(q)));
                  }});

  // (12) guard p >> (f <$> m)  =  f <$> (guard p >> m)
  laws.push_back(
      {"eq12",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.flags.emplace_back("p", r.coin());
         auto pool = pure_pool(cfg);
         e.names.emplace_back("f", pool[r.below(pool.size())].name);
         return e;
       },
       [](const env_rec& e, const fuzz_config& cfg, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         bool p = e.flags[0].second;
         auto f = pool_by_name(pure_pool(cfg), e.names[0].second).fn;
         ip.emplace_back(seq(guard<int>(p), mapv(f, m)), mapv(f, seq(guard<int>(p), m)));
       }});

  // (13) guard p >> m  =  m >>= (\x -> guard p >> ret x), given m >> fail = fail
  laws.push_back(
      {"eq13",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.flags.emplace_back("p", r.coin());
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         bool p = e.flags[0].second;
         ip.emplace_back(seq(guard<int>(p), m), mbind(m, [p](const int& x) {
                           return seq(guard<int>(p), int_prog::ret(x));
                         }));
       }});

  // (14) put s >> put s'  =  put s'
  laws.push_back({"eq14",
                  [](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.nums.emplace_back("s", r.pick(cfg.state_domain));
                    e.nums.emplace_back("s2", r.pick(cfg.state_domain));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs&, unit_pairs& up) {
                    int s = e.nums[0].second, s2 = e.nums[1].second;
                    up.emplace_back(seq(put<int>(s), put<int>(s2)), put<int>(s2));
                  }});

  // (15) put s >> get  =  put s >> ret s
  laws.push_back({"eq15",
                  [](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.nums.emplace_back("s", r.pick(cfg.state_domain));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    int s = e.nums[0].second;
                    ip.emplace_back(seq(put<int>(s), get<int>()),
                                    seq(put<int>(s), int_prog::ret(s)));
                  }});

  // (16) get >>= put  =  ret ()
  laws.push_back({"eq16", [](const fuzz_config&, rng&) { return env_rec{}; },
                  [](const env_rec&, const fuzz_config&, int_pairs&, unit_pairs& up) {
                    up.emplace_back(
                        mbind(get<int>(), [](const int& s) { return put<int>(s); }),
                        unit_prog::ret(unit{}));
                  }});

  // (17) get >>= (\s -> get >>= k s)  =  get >>= (\s -> k s s)
  laws.push_back(
      {"eq17",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.konts2.emplace_back("k", gen_kont2(cfg, any, r, cfg.state_domain, cfg.state_domain));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& k = e.konts2[0].second;
         ip.emplace_back(mbind(get<int>(),
                              [k](const int& s) {
                                return mbind(get<int>(),
                                            [k, s](const int& t) { return k(s, t); });
                              }),
                         mbind(get<int>(), [k](const int& s) { return k(s, s); }));
       }});

  // (18) m >>= (\x -> f1 x [] f2 x)  =  (m >>= f1) [] (m >>= f2)
  laws.push_back(
      {"eq18",
       [any](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, any, r));
         e.konts.emplace_back("f1", gen_kont(cfg, any, r));
         e.konts.emplace_back("f2", gen_kont(cfg, any, r));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         const auto& f1 = e.konts[0].second;
         const auto& f2 = e.konts[1].second;
         ip.emplace_back(
             mbind(m, [f1, f2](const int& x) { return choice(apply_kont(f1, x), apply_kont(f2, x)); }),
             choice(mbind(m, [f1](const int& v) { return apply_kont(f1, v); }),
                    mbind(m, [f2](const int& v) { return apply_kont(f2, v); })));
       }});

  // (19) m >> fail  =  fail
  laws.push_back({"eq19",
                  [any](const fuzz_config& cfg, rng& r) {
                    env_rec e;
                    e.progs.emplace_back("m", gen_prog(cfg, any, r));
                    return e;
                  },
                  [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
                    const auto& m = e.progs[0].second;
                    ip.emplace_back(seq(m, int_prog::fail()), int_prog::fail());
                  }});

  // (20) nondeterminism commutes with state:
  //   m >>= \x -> n >>= \y -> f x y  =  n >>= \y -> m >>= \x -> f x y
  // for m using only nondeterminism and n using only state.
  laws.push_back(
      {"eq20",
       [](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("m", gen_prog(cfg, effect_set::nondet_only(), r));
         e.progs.emplace_back("n", gen_prog(cfg, effect_set::state_only(), r));
         e.konts2.emplace_back("f", gen_kont2(cfg, effect_set::both(), r, cfg.value_domain,
                                              cfg.value_domain));
         return e;
       },
       [](const env_rec& e, const fuzz_config&, int_pairs& ip, unit_pairs&) {
         const auto& m = e.progs[0].second;
         const auto& n = e.progs[1].second;
         const auto& f = e.konts2[0].second;
         ip.emplace_back(
             mbind(m,
                  [n, f](const int& x) {
                    return mbind(n, [f, x](const int& y) { return f(x, y); });
                  }),
             mbind(n, [m, f](const int& y) {
               return mbind(m, [f, y](const int& x) { return f(x, y); });
             }));
       }});

  // Lemma 6: n >>= ((x .) . k)  =  x . (n >>= k) for n using only
  // nondeterminism, with (.) built from a guard, a transition and a
  // result-shaping function.
  laws.push_back(
      {"lemma6",
       [](const fuzz_config& cfg, rng& r) {
         env_rec e;
         e.progs.emplace_back("n", gen_prog(cfg, effect_set::nondet_only(), r));
         e.konts.emplace_back("k", gen_kont(cfg, effect_set::both(), r));
         e.nums.emplace_back("x", r.pick(cfg.value_domain));
         e.names.emplace_back("p", odot_guard_pool()[r.below(odot_guard_pool().size())].name);
         auto nexts = odot_next_pool(cfg);
         e.names.emplace_back("next", nexts[r.below(nexts.size())].name);
         e.names.emplace_back("res", odot_res_pool()[r.below(odot_res_pool().size())].name);
         return e;
       },
       [](const env_rec& e, const fuzz_config& cfg, int_pairs& ip, unit_pairs&) {
         const auto& n = e.progs[0].second;
         const auto& k = e.konts[0].second;
         int x = e.nums[0].second;
         auto p = pool_by_name(odot_guard_pool(), e.names[0].second).fn;
         auto next = pool_by_name(odot_next_pool(cfg), e.names[1].second).fn;
         auto res = pool_by_name(odot_res_pool(), e.names[2].second).fn;
         auto odot = odot_step<int, int, int>(
             p, [next](const int& xx, const int& st) { return next(xx, st); }, res);
         ip.emplace_back(
             mbind(n, [odot, x, k](const int& y) { return odot(x, apply_kont(k, y)); }),
             odot(x, mbind(n, [k](const int& v) { return apply_kont(k, v); })));
       }});

  return laws;
}

// ---------------------------------------------------------------------------
// runners

void run_eq_law(const eq_law& law, const fuzz_config& cfg, const semantics& sem,
                law_report& rep) {
  constexpr std::size_t max_shrunk_failures = 10;
  for (std::size_t i = 0; i < cfg.cases; ++i) {
    rng r(case_seed(cfg.seed, rep.law_id, i));
    env_rec env = law.gen(cfg, r);
    auto bad = check_env(law, env, cfg, sem);
    if (!bad) continue;
    if (rep.failures.size() < max_shrunk_failures) {
      env = shrink_env(law, env, cfg, sem);
      bad = check_env(law, env, cfg, sem);
    }
    rep.failures.push_back({i, render_env(env, cfg), bad->state, bad->lhs, bad->rhs,
                            env_tree_depth(env, cfg)});
  }
  rep.cases_run = cfg.cases;
}

std::vector<int> gen_int_list(const fuzz_config& cfg, rng& r, std::size_t max_len) {
  std::vector<int> xs(r.below(max_len + 1));
  for (auto& x : xs) x = r.pick(cfg.value_domain);
  return xs;
}

// Theorem 1: ret (scanl_plus op st xs)  =  protect (scanl_m op st xs)
void run_thm1(const fuzz_config& cfg, const semantics& sem, law_report& rep) {
  using VP = prog<std::vector<int>, int>;
  const auto& pool = state_op_pool();
  for (std::size_t i = 0; i < cfg.cases; ++i) {
    rng r(case_seed(cfg.seed, rep.law_id, i));
    std::size_t op_i = r.below(pool.size());
    int st = r.pick(cfg.state_domain);
    std::vector<int> xs = gen_int_list(cfg, r, 5);

    auto check = [&](int stv, const std::vector<int>& l) -> std::optional<mismatch> {
      const auto& op = pool[op_i].fn;
      std::vector<std::pair<VP, VP>> pairs;
      pairs.emplace_back(VP::ret(scanl_plus(op, stv, l)), protect(scanl_m(op, stv, l)));
      return check_pairs(pairs, std::span<const int>(cfg.state_domain),
                         [&](const VP& m, int s) { return sem.run_vec(m, s); });
    };

    auto bad = check(st, xs);
    if (!bad) continue;
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        auto cand = xs;
        cand.erase(cand.begin() + j);
        if (check(st, cand)) {
          xs = cand;
          improved = true;
          break;
        }
      }
    }
    bad = check(st, xs);
    rep.failures.push_back({i,
                            "oplus=" + pool[op_i].name + "; st=" + std::to_string(st) +
                                "; xs=" + render_value(xs),
                            bad->state, bad->lhs, bad->rhs, 0});
  }
  rep.cases_run = cfg.cases;
}

// Theorem 3 and Corollary 4 share generators; which sides are compared differs.
void run_scanl_fusion(const fuzz_config& cfg, const semantics& sem, law_report& rep,
                      bool corollary4) {
  using VP = prog<std::vector<int>, int>;
  const auto& ops = state_op_pool();
  const auto& oks = ok_pool();
  auto cons = [](const int& x, const std::vector<int>& v) {
    std::vector<int> out;
    out.reserve(v.size() + 1);
    out.push_back(x);
    out.insert(out.end(), v.begin(), v.end());
    return out;
  };
  for (std::size_t i = 0; i < cfg.cases; ++i) {
    rng r(case_seed(cfg.seed, rep.law_id, i));
    std::size_t op_i = r.below(ops.size());
    std::size_t ok_i = r.below(oks.size());
    int st = r.pick(cfg.state_domain);
    std::vector<int> xs = gen_int_list(cfg, r, 5);

    auto check = [&](int stv, const std::vector<int>& l) -> std::optional<mismatch> {
      const auto& op = ops[op_i].fn;
      const auto& okf = oks[ok_i].fn;
      auto odot = odot_step<int, int, std::vector<int>>(
          [okf, op](const int& x, const int& s) { return okf(op(s, x)); },
          [op](const int& x, const int& s) { return op(s, x); }, cons);
      std::vector<std::pair<VP, VP>> pairs;
      if (corollary4) {
        auto lhs = filt<int>(
            [op, okf, stv](const std::vector<int>& v) {
              auto states = scanl_plus(op, stv, v);
              return std::all_of(states.begin(), states.end(), okf);
            },
            l);
        auto rhs = protect(seq(put<int>(stv), foldr_m(odot, VP::ret({}), l)));
        pairs.emplace_back(std::move(lhs), std::move(rhs));
      } else {
        auto otimes = scanl_step<int, int>(op);
        auto lhs = mbind(foldr_m(otimes, VP::ret({}), l),
                        [okf, l](const std::vector<int>& ys) {
                          bool keep = std::all_of(ys.begin(), ys.end(), okf);
                          return seq(guard<int>(keep), VP::ret(l));
                        });
        auto rhs = foldr_m(odot, VP::ret({}), l);
        pairs.emplace_back(std::move(lhs), std::move(rhs));
      }
      return check_pairs(pairs, std::span<const int>(cfg.state_domain),
                         [&](const VP& m, int s) { return sem.run_vec(m, s); });
    };

    auto bad = check(st, xs);
    if (!bad) continue;
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        auto cand = xs;
        cand.erase(cand.begin() + j);
        if (check(st, cand)) {
          xs = cand;
          improved = true;
          break;
        }
      }
    }
    bad = check(st, xs);
    rep.failures.push_back({i,
                            "oplus=" + ops[op_i].name + "; ok=" + oks[ok_i].name +
                                "; st=" + std::to_string(st) + "; xs=" + render_value(xs),
                            bad->state, bad->lhs, bad->rhs, 0});
  }
  rep.cases_run = cfg.cases;
}

std::vector<queens_state> queens_initial_states() {
  queens_state probed;
  probed.placed = 2;
  probed.up_diags = {4, 1};
  probed.down_diags = {0, -1};
  return {queens_state{}, probed};
}

auto queens_odot() {
  return odot_step<queens_state, int, std::vector<int>>(
      [](const int& x, const queens_state& st) { return ok_check(oplus(st, x)); },
      [](const int& x, const queens_state& st) { return oplus(st, x); },
      [](const int& x, const std::vector<int>& v) {
        std::vector<int> out;
        out.reserve(v.size() + 1);
        out.push_back(x);
        out.insert(out.end(), v.begin(), v.end());
        return out;
      });
}

std::vector<int> gen_subset_of_six(rng& r) {
  std::uint64_t mask = r.below(64);
  std::vector<int> out;
  for (int b = 0; b < 6; ++b)
    if (mask & (1ull << b)) out.push_back(b);
  return out;
}

// Theorem 5 at the queens shape, and Corollary 7.
void run_queens_fusion(const fuzz_config& cfg, const semantics& sem, law_report& rep,
                       bool corollary7) {
  using QP = prog<std::vector<int>, queens_state>;
  auto stopf = [](const std::vector<int>& v) { return v.empty(); };
  auto stepf = [](const std::vector<int>& v) { return select<queens_state>(v); };
  auto initial_states = queens_initial_states();

  for (std::size_t i = 0; i < cfg.cases; ++i) {
    rng r(case_seed(cfg.seed, rep.law_id, i));
    std::vector<int> seed = gen_subset_of_six(r);

    auto check = [&](const std::vector<int>& z) -> std::optional<mismatch> {
      std::vector<std::pair<QP, QP>> pairs;
      if (corollary7) {
        solve_spec<std::vector<int>, int, queens_state> spec;
        spec.stop = stopf;
        spec.step = stepf;
        spec.ok = [](const queens_state& st) { return ok_check(st); };
        spec.oplus = [](const queens_state& st, const int& x) { return oplus(st, x); };
        spec.initial = queens_state{};
        spec.start = z;
        spec.measure = [](const std::vector<int>& v) { return v.size(); };
        auto rhs = mbind(unfold_m(stopf, stepf, z, z.size() + 1),
                        [](const std::vector<int>& xs) {
                          return filt<queens_state>(
                              [](const std::vector<int>& v) {
                                auto states = scanl_plus(
                                    [](const queens_state& st, int x) { return oplus(st, x); },
                                    queens_state{}, v);
                                return std::all_of(states.begin(), states.end(),
                                                   [](const queens_state& st) {
                                                     return ok_check(st);
                                                   });
                              },
                              xs);
                        });
        pairs.emplace_back(solve(spec), std::move(rhs));
      } else {
        auto odot = queens_odot();
        auto lhs = hylo_m(odot, QP::ret({}), stopf, stepf, z, z.size() + 1);
        auto rhs = mbind(unfold_m(stopf, stepf, z, z.size() + 1),
                        [odot](const std::vector<int>& xs) {
                          return foldr_m(odot, QP::ret({}), xs);
                        });
        pairs.emplace_back(std::move(lhs), std::move(rhs));
      }
      return check_pairs(pairs, std::span<const queens_state>(initial_states),
                         [&](const QP& m, const queens_state& s) {
                           return sem.run_queens(m, s);
                         });
    };

    auto bad = check(seed);
    if (!bad) continue;
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < seed.size(); ++j) {
        auto cand = seed;
        cand.erase(cand.begin() + j);
        if (check(cand)) {
          seed = cand;
          improved = true;
          break;
        }
      }
    }
    bad = check(seed);
    rep.failures.push_back(
        {i, "seed=" + render_value(seed), bad->state, bad->lhs, bad->rhs, 0});
  }
  rep.cases_run = cfg.cases;
}

// ---------------------------------------------------------------------------
// registry

struct law_entry {
  std::string id;
  std::string note;
  std::function<void(const fuzz_config&, const semantics&, law_report&)> run;
};

const std::vector<eq_law>& eq_laws() {
  static const std::vector<eq_law> laws = make_eq_laws();
  return laws;
}

const eq_law& eq_law_by_id(const std::string& id) {
  for (const auto& law : eq_laws())
    if (law.id == id) return law;
  throw unknown_law(id);
}

const std::vector<law_entry>& registry() {
  static const std::vector<law_entry> entries = [] {
    std::vector<law_entry> out;
    auto eq = [&](const std::string& id) {
      out.push_back({id, "", [id](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                       run_eq_law(eq_law_by_id(id), cfg, sem, rep);
                     }});
    };
    for (int i = 1; i <= 19; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "eq%02d", i);
      eq(id);
    }
    const std::string commute_note =
        "commutes nondeterminism with the state effect, the only other effect in scope";
    out.push_back({"eq20", commute_note,
                   [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_eq_law(eq_law_by_id("eq20"), cfg, sem, rep);
                   }});
    out.push_back({"thm1", "", [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_thm1(cfg, sem, rep);
                   }});
    out.push_back({"thm2", commute_note,
                   [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_eq_law(eq_law_by_id("eq20"), cfg, sem, rep);
                   }});
    out.push_back({"thm3", "", [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_scanl_fusion(cfg, sem, rep, false);
                   }});
    out.push_back({"cor4", "", [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_scanl_fusion(cfg, sem, rep, true);
                   }});
    out.push_back({"thm5_queens_shape", "",
                   [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_queens_fusion(cfg, sem, rep, false);
                   }});
    out.push_back({"lemma6", "", [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_eq_law(eq_law_by_id("lemma6"), cfg, sem, rep);
                   }});
    out.push_back({"cor7", "", [](const fuzz_config& cfg, const semantics& sem, law_report& rep) {
                     run_queens_fusion(cfg, sem, rep, true);
                   }});
    return out;
  }();
  return entries;
}

const semantics& default_semantics() {
  static const semantics sem;
  return sem;
}

}  // namespace

const std::vector<std::string>& law_catalogue() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.id);
    return out;
  }();
  return ids;
}

law_report run_law(const fuzz_config& cfg, std::string_view id, const semantics& sem) {
  for (const auto& e : registry()) {
    if (e.id == id) {
      law_report rep;
      rep.law_id = e.id;
      rep.note = e.note;
      e.run(cfg, sem, rep);
      return rep;
    }
  }
  throw unknown_law(std::string(id));
}

law_report run_law(const fuzz_config& cfg, std::string_view id) {
  return run_law(cfg, id, default_semantics());
}

std::vector<law_report> run_suite(const fuzz_config& cfg,
                                  std::span<const std::string> ids) {
  for (const auto& id : ids) {
    bool known = false;
    for (const auto& e : registry()) known = known || e.id == id;
    if (!known) throw unknown_law(id);
  }
  std::vector<law_report> out;
  for (const auto& e : registry()) {
    bool wanted = false;
    for (const auto& id : ids) wanted = wanted || id == e.id;
    if (wanted) out.push_back(run_law(cfg, e.id));
  }
  return out;
}

std::vector<law_report> run_suite_all(const fuzz_config& cfg) {
  return run_suite(cfg, law_catalogue());
}

}  // namespace nds::laws
