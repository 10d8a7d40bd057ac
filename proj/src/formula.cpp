#include "kcdag/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <random>
#include <set>
#include <sstream>

namespace kcdag {

Literal Literal::from_dimacs(std::int64_t value) {
  if (value == 0) throw ParseError("literal 0 is a clause terminator");
  auto index = value < 0 ? -value : value;
  if (index > std::int64_t{UINT32_MAX}) throw ParseError("literal out of range");
  return {Variable(static_cast<std::uint32_t>(index)), value > 0};
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  std::sort(literals_.begin(), literals_.end());
  literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
}

bool Clause::is_tautology() const noexcept {
  for (std::size_t k = 1; k < literals_.size(); ++k) {
    if (literals_[k].var == literals_[k - 1].var) return true;
  }
  return false;
}

Assignment::Assignment(std::initializer_list<std::pair<std::uint32_t, bool>> values) {
  for (auto [index, value] : values) set(Variable(index), value);
}

void Assignment::set(Variable v, bool value) {
  auto [it, inserted] = values_.emplace(v.index(), value);
  if (!inserted) {
    throw PreconditionError("variable " + std::to_string(v.index()) +
                            " bound twice in assignment");
  }
}

std::optional<bool> Assignment::get(Variable v) const {
  auto it = values_.find(v.index());
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<Assignment> Assignment::falsifying(const Clause& clause) {
  if (clause.is_tautology()) return std::nullopt;
  Assignment result;
  for (const auto& lit : clause.literals()) result.set(lit.var, !lit.positive);
  return result;
}

VariableOrder::VariableOrder(std::vector<Variable> sequence)
    : sequence_(std::move(sequence)), rank_(sequence_.size() + 1, UINT32_MAX) {
  for (std::uint32_t r = 0; r < sequence_.size(); ++r) {
    auto index = sequence_[r].index();
    if (index > sequence_.size() || rank_[index] != UINT32_MAX) {
      throw PreconditionError("variable order is not a permutation of 1.." +
                              std::to_string(sequence_.size()));
    }
    rank_[index] = r;
  }
}

VariableOrder VariableOrder::natural(std::uint32_t num_vars) {
  std::vector<Variable> seq;
  seq.reserve(num_vars);
  for (std::uint32_t v = 1; v <= num_vars; ++v) seq.emplace_back(v);
  return VariableOrder(std::move(seq));
}

std::uint32_t VariableOrder::rank(Variable v) const {
  if (v.index() >= rank_.size()) {
    throw PreconditionError("variable " + std::to_string(v.index()) +
                            " is not covered by the order");
  }
  return rank_[v.index()];
}

namespace {

std::int64_t parse_int(std::string_view token) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("non-integer token '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    auto start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

}  // namespace

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool have_header = false;
  std::int64_t declared_clauses = 0;
  std::vector<Literal> pending;
  bool pending_open = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;

    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "c" || tokens[0].front() == 'c') continue;
    if (tokens[0] == "%") break;  // SATLIB trailer
    if (tokens[0] == "p") {
      if (have_header) throw ParseError("duplicate 'p' header");
      if (tokens.size() != 4 || tokens[1] != "cnf") {
        throw ParseError("malformed header, expected 'p cnf <vars> <clauses>'");
      }
      auto vars = parse_int(tokens[2]);
      declared_clauses = parse_int(tokens[3]);
      if (vars < 0 || declared_clauses < 0 || vars > std::int64_t{UINT32_MAX}) {
        throw ParseError("negative or oversized header counts");
      }
      cnf.num_vars = static_cast<std::uint32_t>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause data before 'p cnf' header");
    for (auto token : tokens) {
      auto value = parse_int(token);
      if (value == 0) {
        cnf.clauses.emplace_back(std::move(pending));
        pending.clear();
        pending_open = false;
        continue;
      }
      auto lit = Literal::from_dimacs(value);
      if (lit.var.index() > cnf.num_vars) {
        throw ParseError("literal " + std::string(token) + " exceeds declared " +
                         std::to_string(cnf.num_vars) + " variables");
      }
      pending.push_back(lit);
      pending_open = true;
    }
  }
  if (!have_header) throw ParseError("missing 'p cnf' header");
  if (pending_open) throw ParseError("last clause is not 0-terminated");
  if (static_cast<std::int64_t>(cnf.clauses.size()) != declared_clauses) {
    throw ParseError("header declares " + std::to_string(declared_clauses) +
                     " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string write_dimacs(const Cnf& cnf) {
  std::vector<const Clause*> sorted;
  sorted.reserve(cnf.clauses.size());
  for (const auto& c : cnf.clauses) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Clause* a, const Clause* b) { return *a < *b; });
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto* c : sorted) {
    for (const auto& lit : c->literals()) out << lit.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

namespace {

struct ClauseMask {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

std::vector<ClauseMask> clause_masks(const Cnf& cnf) {
  std::vector<ClauseMask> masks;
  masks.reserve(cnf.clauses.size());
  for (const auto& c : cnf.clauses) {
    ClauseMask m;
    for (const auto& lit : c.literals()) {
      auto bit = std::uint64_t{1} << (lit.var.index() - 1);
      (lit.positive ? m.pos : m.neg) |= bit;
    }
    masks.push_back(m);
  }
  return masks;
}

}  // namespace

bool oracle_eval(const Cnf& cnf, const Assignment& total) {
  for (std::uint32_t v = 1; v <= cnf.num_vars; ++v) {
    if (!total.contains(Variable(v))) {
      throw PreconditionError("oracle_eval needs a total assignment; x" +
                              std::to_string(v) + " is unbound");
    }
  }
  for (const auto& clause : cnf.clauses) {
    bool satisfied = false;
    for (const auto& lit : clause.literals()) {
      if (*total.get(lit.var) == lit.positive) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

BigInt oracle_count(const Cnf& cnf, std::uint32_t limit) {
  if (cnf.num_vars > limit || cnf.num_vars > 40) {
    throw PreconditionError("oracle_count: " + std::to_string(cnf.num_vars) +
                            " variables exceed the oracle limit of " +
                            std::to_string(limit));
  }
  auto masks = clause_masks(cnf);
  std::uint64_t total = std::uint64_t{1} << cnf.num_vars;
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < total; ++a) {
    bool ok = true;
    for (const auto& m : masks) {
      if ((a & m.pos) == 0 && (~a & m.neg) == 0) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
  }
  return BigInt(count);
}

Cnf chain_family(std::uint32_t n, std::uint32_t j, ChainMode mode) {
  if (n == 0) throw PreconditionError("chain_family needs n >= 1");
  const std::uint32_t m = j + 2;  // variables per chain
  Cnf cnf;
  cnf.num_vars = m * n;
  for (std::uint32_t k = 1; k <= n; ++k) {
    std::vector<Variable> chain;
    for (std::uint32_t t = 0; t < m; ++t) chain.emplace_back(k + t * n);

    if (mode == ChainMode::all_equal) {
      for (std::uint32_t t = 0; t + 1 < m; ++t) {
        cnf.clauses.emplace_back(std::vector<Literal>{{chain[t], false}, {chain[t + 1], true}});
        cnf.clauses.emplace_back(std::vector<Literal>{{chain[t], true}, {chain[t + 1], false}});
      }
      continue;
    }
    // a1 <-> a2 <-> ... <-> am read left-associatively holds iff the number
    // of true variables has the parity of m. Block every assignment with the
    // other parity.
    const std::uint32_t required = m % 2;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
      if (static_cast<std::uint32_t>(std::popcount(bits) % 2) == required) continue;
      std::vector<Literal> lits;
      for (std::uint32_t t = 0; t < m; ++t) {
        bool value = (bits >> t) & 1U;
        lits.push_back({chain[t], !value});
      }
      cnf.clauses.emplace_back(std::move(lits));
    }
  }
  return cnf;
}

Cnf random_3cnf(std::uint32_t num_vars, std::uint32_t num_clauses,
                std::uint64_t seed) {
  if (num_vars < 3) throw PreconditionError("random_3cnf needs at least 3 variables");
  std::mt19937_64 rng(seed);
  // Plain modulo reduction of the engine output keeps the stream identical
  // across standard libraries.
  auto below = [&rng](std::uint64_t bound) { return rng() % bound; };
  Cnf cnf;
  cnf.num_vars = num_vars;
  cnf.clauses.reserve(num_clauses);
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    std::vector<Literal> lits;
    while (lits.size() < 3) {
      auto v = static_cast<std::uint32_t>(below(num_vars)) + 1;
      bool fresh = std::none_of(lits.begin(), lits.end(),
                                [v](const Literal& l) { return l.var.index() == v; });
      if (!fresh) continue;
      lits.push_back({Variable(v), below(2) == 1});
    }
    cnf.clauses.emplace_back(std::move(lits));
  }
  return cnf;
}

VariableOrder min_fill_order(const Cnf& cnf) {
  const auto n = cnf.num_vars;
  std::vector<std::set<std::uint32_t>> adj(n + 1);
  std::vector<bool> occurs(n + 1, false);
  for (const auto& clause : cnf.clauses) {
    auto lits = clause.literals();
    for (std::size_t a = 0; a < lits.size(); ++a) {
      auto va = lits[a].var.index();
      occurs[va] = true;
      for (std::size_t b = a + 1; b < lits.size(); ++b) {
        auto vb = lits[b].var.index();
        if (va == vb) continue;
        adj[va].insert(vb);
        adj[vb].insert(va);
      }
    }
  }

  auto fill_count = [&adj](std::uint32_t v) {
    std::size_t missing = 0;
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
      for (auto b = std::next(a); b != adj[v].end(); ++b) {
        if (!adj[*a].contains(*b)) ++missing;
      }
    }
    return missing;
  };

  std::vector<Variable> sequence;
  sequence.reserve(n);
  std::vector<bool> eliminated(n + 1, false);
  std::size_t remaining = std::count(occurs.begin(), occurs.end(), true);
  while (remaining > 0) {
    std::uint32_t best = 0;
    std::size_t best_fill = SIZE_MAX;
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (!occurs[v] || eliminated[v]) continue;
      auto fill = fill_count(v);
      if (fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    for (auto a = adj[best].begin(); a != adj[best].end(); ++a) {
      for (auto b = std::next(a); b != adj[best].end(); ++b) {
        adj[*a].insert(*b);
        adj[*b].insert(*a);
      }
    }
    for (auto nb : adj[best]) adj[nb].erase(best);
    adj[best].clear();
    eliminated[best] = true;
    sequence.emplace_back(best);
    --remaining;
  }
  for (std::uint32_t v = 1; v <= n; ++v) {
    if (!occurs[v]) sequence.emplace_back(v);
  }
  return VariableOrder(std::move(sequence));
}

}  // namespace kcdag
