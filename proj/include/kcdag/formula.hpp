#pragma once

// CNF input, variable orders, the truth-table oracle and the formula
// generators used by tests and benchmarks.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcdag/error.hpp"

namespace kcdag {

using BigInt = boost::multiprecision::cpp_int;

/// 1-based propositional variable.
class Variable {
 public:
  explicit Variable(std::uint32_t index) : index_(index) {
    if (index == 0) throw PreconditionError("variable index must be >= 1");
  }

  std::uint32_t index() const noexcept { return index_; }

  friend auto operator<=>(Variable, Variable) = default;

 private:
  std::uint32_t index_;
};

struct Literal {
  Variable var;
  bool positive;

  /// Parses a non-zero DIMACS integer.
  static Literal from_dimacs(std::int64_t value);
  std::int64_t to_dimacs() const noexcept {
    return positive ? std::int64_t{var.index()} : -std::int64_t{var.index()};
  }
  Literal operator~() const noexcept { return {var, !positive}; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Disjunction of literals, kept sorted by variable index (negative first on
/// ties) and free of duplicates. A clause containing x and not-x is allowed
/// but reported by is_tautology().
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  bool empty() const noexcept { return literals_.empty(); }
  bool is_tautology() const noexcept;

  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

struct Cnf {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

/// Partial valuation. Binding a variable twice is an error.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<std::uint32_t, bool>> values);

  void set(Variable v, bool value);
  std::optional<bool> get(Variable v) const;
  bool contains(Variable v) const { return values_.contains(v.index()); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// (variable index, value) pairs in increasing index order.
  const std::map<std::uint32_t, bool>& values() const noexcept { return values_; }

  /// Assignment falsifying every literal of a clause. Returns nullopt for a
  /// tautological clause.
  static std::optional<Assignment> falsifying(const Clause& clause);

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<std::uint32_t, bool> values_;
};

/// Total order on variables 1..n. rank(v) is the position of v.
class VariableOrder {
 public:
  VariableOrder() = default;
  explicit VariableOrder(std::vector<Variable> sequence);

  static VariableOrder natural(std::uint32_t num_vars);

  std::uint32_t size() const noexcept {
    return static_cast<std::uint32_t>(sequence_.size());
  }
  std::uint32_t rank(Variable v) const;
  Variable at(std::uint32_t rank) const { return sequence_.at(rank); }
  bool precedes(Variable a, Variable b) const { return rank(a) < rank(b); }
  std::span<const Variable> sequence() const noexcept { return sequence_; }

  friend bool operator==(const VariableOrder& a, const VariableOrder& b) {
    return a.sequence_ == b.sequence_;
  }

 private:
  std::vector<Variable> sequence_;
  std::vector<std::uint32_t> rank_;  // indexed by variable index
};

Cnf parse_dimacs(std::string_view text);

/// Canonical printer: header, clauses in lexicographic literal order.
std::string write_dimacs(const Cnf& cnf);

inline constexpr std::uint32_t kDefaultOracleLimit = 24;

/// `total` must bind every variable of the CNF.
bool oracle_eval(const Cnf& cnf, const Assignment& total);

/// Exhaustive model count over all num_vars variables.
BigInt oracle_count(const Cnf& cnf, std::uint32_t limit = kDefaultOracleLimit);

enum class ChainMode { parity, all_equal };

/// n independent chains over x_k, x_{k+n}, ..., x_{k+(j+1)n}.
Cnf chain_family(std::uint32_t n, std::uint32_t j,
                 ChainMode mode = ChainMode::parity);

Cnf random_3cnf(std::uint32_t num_vars, std::uint32_t num_clauses,
                std::uint64_t seed);

/// Min-fill elimination order over the primal graph; ties broken by lowest
/// index, variables that occur in no clause appended in index order.
VariableOrder min_fill_order(const Cnf& cnf);

}  // namespace kcdag

template <>
struct std::hash<kcdag::Variable> {
  std::size_t operator()(kcdag::Variable v) const noexcept {
    return std::hash<std::uint32_t>{}(v.index());
  }
};
