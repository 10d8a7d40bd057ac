// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcdag/kcdag.hpp"
#include "oracle.hpp"

using namespace kcdag;

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> failed;

const std::array<Bound, 5> kBounds = {Bound(0), Bound(1), Bound(2), Bound(3),
                                      Bound::infinite()};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int id, const char* name, bool ok, double secs, double limit,
            const std::string& detail) {
  bool in_time = limit <= 0 || secs <= limit;
  std::printf("criterion %d %-22s %s  (%.1fs) %s%s\n", id, name,
              ok && in_time ? "PASS" : "FAIL", secs, detail.c_str(),
              in_time ? "" : " [over time]");
  if (!(ok && in_time)) failed.push_back(id);
  std::fflush(stdout);
}

std::vector<Variable> scope_of(std::uint32_t n) {
  std::vector<Variable> scope;
  for (std::uint32_t v = 1; v <= n; ++v) scope.emplace_back(v);
  return scope;
}

// Structural validation of every diagram produced, plus the finest check on
// diagrams over at most 12 variables.
struct Checker {
  long checked = 0;
  long failed = 0;

  void check(Validator& validator, const DiagramStore& store, VertexId v, Bound i) {
    auto report = validator.run(v, i);
    bool small = store.var_count(v) <= 12;
    bool ok = report.structural_ok() &&
              (!small || (report.decomposition_finest_ok && !report.finest_skipped));
    ++checked;
    if (!ok) ++failed;
  }
};

Checker checker;

// One corpus instance of the 12-variable 3-CNF corpus with its compiled ids.
struct Instance {
  Cnf cnf;
  std::unique_ptr<DiagramStore> store;
  std::unique_ptr<Validator> validator;
  std::array<VertexId, 5> ids{};
};

std::vector<Instance> corpus;

void check(Instance& in, VertexId v, Bound i) {
  checker.check(*in.validator, *in.store, v, i);
}

void canonicity() {
  auto start = Clock::now();
  long mismatches = 0;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> clauses(10, 30);
  for (int k = 0; k < 200; ++k) {
    Instance in;
    in.cnf = random_3cnf(12, clauses(rng), 1000 + k);
    in.store = std::make_unique<DiagramStore>(min_fill_order(in.cnf));
    in.validator = std::make_unique<Validator>(*in.store);
    for (std::size_t b = 0; b < kBounds.size(); ++b) {
      auto i = kBounds[b];
      auto id = compile(*in.store, in.cnf, i);
      check(in, id, i);
      for (int p = 0; p < 3; ++p) {
        Cnf shuffled = in.cnf;
        std::shuffle(shuffled.clauses.begin(), shuffled.clauses.end(), rng);
        auto other = compile(*in.store, shuffled, i, p == 0 ? Schedule::sequential
                                                            : Schedule::balanced);
        check(in, other, i);
        if (other != id) ++mismatches;
      }
      auto via = compile_via(*in.store, in.cnf, i);
      check(in, via, i);
      if (via != id) ++mismatches;
      in.ids[b] = id;
    }
    corpus.push_back(std::move(in));
  }
  report(1, "canonicity", mismatches == 0, seconds_since(start), 120,
         "mismatches=" + std::to_string(mismatches));
}

void oracle_equivalence() {
  auto start = Clock::now();
  long mismatches = 0;
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> width(1, 3);
  const std::uint32_t n = 12;
  auto scope = scope_of(n);
  for (auto& in : corpus) {
    auto truth = oracle::table(in.cnf, n);
    auto models = oracle::count(truth);
    auto& s = *in.store;
    for (std::size_t b = 0; b < kBounds.size(); ++b) {
      auto i = kBounds[b];
      auto u = in.ids[b];
      if (oracle::table(s, u, n) != truth) ++mismatches;
      if (model_count(s, u, scope) != BigInt(models)) ++mismatches;
      if (model_count(s, u, scope) != oracle_count(in.cnf)) ++mismatches;
      if (is_consistent(s, u) != (models > 0)) ++mismatches;
      if (is_valid(s, u) != (models == truth.size())) ++mismatches;
      for (int t = 0; t < 10; ++t) {
        auto clause = oracle::random_clause(rng, n, width(rng));
        bool expect = true;
        for (std::uint64_t r = 0; r < truth.size(); ++r) {
          if (!truth[r]) continue;
          bool sat = false;
          for (const auto& l : clause.literals()) {
            if (((r >> (l.var.index() - 1)) & 1) == l.positive) sat = true;
          }
          if (!sat) expect = false;
        }
        if (entails_clause(s, u, clause, i) != expect) ++mismatches;
      }
      for (int t = 0; t < 10; ++t) {
        auto term = oracle::random_assignment(rng, n, 0.35);
        bool expect = true;
        for (std::uint64_t r = 0; r < truth.size(); ++r) {
          if (oracle::matches(term, r) && !truth[r]) expect = false;
        }
        if (implied_by_term(s, u, term, i) != expect) ++mismatches;
      }
      auto a = oracle::random_assignment(rng, n, 0.3);
      auto c = condition(s, u, a, i);
      check(in, c, i);
      if (oracle::table(s, c, n) != oracle::restrict(truth, a)) ++mismatches;
    }
  }
  report(2, "oracle-equivalence", mismatches == 0, seconds_since(start), 300,
         "mismatches=" + std::to_string(mismatches));
}

void succinctness() {
  auto start = Clock::now();
  std::vector<std::size_t> zero;
  std::vector<std::size_t> inf;
  for (std::uint32_t n = 2; n <= 9; ++n) {
    auto cnf = chain_family(n, 0);
    DiagramStore s(VariableOrder::natural(cnf.num_vars));
    Validator validator(s);
    auto a = compile(s, cnf, Bound(0));
    auto b = compile(s, cnf, Bound::infinite());
    checker.check(validator, s, a, Bound(0));
    checker.check(validator, s, b, Bound::infinite());
    zero.push_back(vertex_count(s, a));
    inf.push_back(vertex_count(s, b));
  }
  bool ok = true;
  // zero[k] is n = k + 2
  for (std::size_t k = 2; k < zero.size(); ++k) ok = ok && zero[k] >= 2 * zero[k - 1];
  for (std::size_t k = 2; k < inf.size(); ++k) {
    ok = ok && inf[k] - inf[k - 1] == inf[1] - inf[0];
  }
  std::string detail = "bound0=";
  for (auto v : zero) detail += std::to_string(v) + " ";
  detail += "inf=";
  for (auto v : inf) detail += std::to_string(v) + " ";
  detail.pop_back();
  report(3, "succinctness", ok, seconds_since(start), 60, detail);
}

void size_trend() {
  auto start = Clock::now();
  ValidationOptions structural{.finest_limit = 0};
  const std::array<std::uint32_t, 4> groups = {20, 40, 60, 80};
  bool ok = true;
  std::string detail;
  for (auto m : groups) {
    std::array<double, 6> sum{};
    for (int k = 0; k < 25; ++k) {
      auto cnf = random_3cnf(20, m, 5000 + 100 * m + k);
      DiagramStore s(min_fill_order(cnf));
      Validator validator(s, structural);
      for (std::uint32_t i = 0; i <= 5; ++i) {
        auto u = compile(s, cnf, Bound(i));
        checker.check(validator, s, u, Bound(i));
        sum[i] += static_cast<double>(vertex_count(s, u));
      }
    }
    detail += "m=" + std::to_string(m) + ":";
    for (std::uint32_t i = 0; i <= 5; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.1f", i == 0 ? "" : "/", sum[i] / 25);
      detail += buf;
      if (i < 5 && sum[i] < sum[i + 1]) ok = false;
    }
    detail += " ";
  }
  detail.pop_back();
  report(4, "size-vs-bound", ok, seconds_since(start), 600, detail);
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  auto n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

void conjoin_rapidity() {
  auto start = Clock::now();
  ValidationOptions structural{.finest_limit = 0};
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::uint32_t> clauses(10, 100);
  std::vector<double> t0;
  std::vector<double> t1;
  long mismatches = 0;
  // best of three fresh-store runs per instance and bound
  auto timed = [](const Cnf& cnf, const VariableOrder& order, Bound i) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      DiagramStore s(order);
      auto begin = Clock::now();
      compile(s, cnf, i);
      best = std::min(best, seconds_since(begin));
    }
    return best;
  };
  for (int k = 0; k < 100; ++k) {
    auto cnf = random_3cnf(20, clauses(rng), 9000 + k);
    auto order = min_fill_order(cnf);
    t0.push_back(timed(cnf, order, Bound(0)));
    t1.push_back(timed(cnf, order, Bound(1)));
    DiagramStore s(order);
    Validator validator(s, structural);
    auto a = compile(s, cnf, Bound(1));
    auto b = compile(s, cnf, Bound(0));
    auto down = convert_down(s, a, Bound(0));
    checker.check(validator, s, a, Bound(1));
    checker.check(validator, s, b, Bound(0));
    checker.check(validator, s, down, Bound(0));
    if (down != b) ++mismatches;
  }
  auto m0 = median(t0) * 1e3;
  auto m1 = median(t1) * 1e3;
  long faster = 0;
  for (std::size_t k = 0; k < t0.size(); ++k) faster += t1[k] <= t0[k];
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "median_ms bound0=%.3f bound1=%.3f bound1_not_slower=%ld/100 mismatches=%ld",
                m0, m1, faster, mismatches);
  report(5, "conjoin-rapidity", m1 <= m0 && mismatches == 0, seconds_since(start), 600,
         buf);
}

void conversion() {
  auto start = Clock::now();
  long mismatches = 0;
  for (auto& in : corpus) {
    auto& s = *in.store;
    for (std::size_t j = 0; j < kBounds.size(); ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        auto down = convert_down(s, in.ids[j], kBounds[i]);
        check(in, down, kBounds[i]);
        if (down != in.ids[i]) ++mismatches;
        for (std::size_t k = i; k <= j; ++k) {
          auto mid = convert_down(s, in.ids[j], kBounds[k]);
          if (convert_down(s, mid, kBounds[i]) != down) ++mismatches;
        }
      }
    }
  }
  report(6, "convert-down", mismatches == 0, seconds_since(start), 300,
         "mismatches=" + std::to_string(mismatches));
}

void algebra() {
  auto start = Clock::now();
  long failures = 0;
  const std::uint32_t n = 8;
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::uint32_t> clauses(0, 14);
  std::uniform_int_distribution<std::size_t> bound(0, kBounds.size() - 1);
  auto all = scope_of(n);
  DiagramStore s(VariableOrder::natural(n));
  Validator validator(s);
  const auto top = VertexId::top();
  const auto bot = VertexId::bottom();
  for (int t = 0; t < 1000; ++t) {
    auto i = kBounds[bound(rng)];
    auto u = compile(s, random_3cnf(n, clauses(rng), rng()), i);
    auto v = compile(s, random_3cnf(n, clauses(rng), rng()), i);
    auto a = oracle::random_assignment(rng, n, 0.3);
    auto nu = negate(s, u, i);
    auto nv = negate(s, v, i);
    auto uv = conjoin(s, u, v, i);
    auto u_or_v = disjoin(s, u, v, i);
    auto forgot = forget(s, u, all, i);
    auto cond = condition(s, uv, a, i);
    auto split = conjoin(s, condition(s, u, a, i), condition(s, v, a, i), i);
    for (auto w : {u, v, nu, nv, uv, u_or_v, forgot, cond, split}) {
      checker.check(validator, s, w, i);
    }
    bool ok = negate(s, uv, i) == disjoin(s, nu, nv, i) &&
              negate(s, u_or_v, i) == conjoin(s, nu, nv, i) && negate(s, nu, i) == u &&
              conjoin(s, u, top, i) == u && conjoin(s, u, bot, i) == bot &&
              disjoin(s, u, bot, i) == u && disjoin(s, u, top, i) == top &&
              conjoin(s, u, nu, i) == bot && disjoin(s, u, nu, i) == top &&
              cond == split && (forgot == top) == is_consistent(s, u);
    if (!ok) ++failures;
  }
  report(7, "algebraic-properties", failures == 0, seconds_since(start), 120,
         "failures=" + std::to_string(failures) + "/1000");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Acceptance criteria run");
  std::vector<int> known_red;
  app.add_option("--known-red", known_red,
                 "Criteria whose FAIL line does not affect the exit status")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  auto start = Clock::now();
  canonicity();
  oracle_equivalence();
  succinctness();
  size_trend();
  conjoin_rapidity();
  conversion();
  algebra();
  report(8, "structural-validation", checker.failed == 0, seconds_since(start), 0,
         "diagrams=" + std::to_string(checker.checked) +
             " failures=" + std::to_string(checker.failed));
  int unexpected = 0;
  for (int id : failed) {
    if (std::find(known_red.begin(), known_red.end(), id) == known_red.end()) ++unexpected;
  }
  std::printf("%zu/8 criteria pass, %d unexpected failures\n", 8 - failed.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
