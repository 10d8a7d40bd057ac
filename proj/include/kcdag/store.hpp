#pragma once

// Hash-consed vertex store for OBDD[AND] diagrams.
//
// A store owns every vertex it creates; vertices are never freed. Structural
// identity implies handle identity, so two diagrams built in one store are
// the same diagram iff their root handles compare equal.
//
// Vertices come in three kinds:
//   leaf      false / true, handles VertexId::bottom() / VertexId::top()
//   decision  <x, lo, hi>, x strictly before every variable below it
//   conj      AND over >= 2 non-leaf, non-conj children with pairwise
//             disjoint variable sets, ordered by their least variable

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kcdag/bound.hpp"
#include "kcdag/formula.hpp"

namespace kcdag {

struct VertexId {
  std::uint32_t index = 0;

  static constexpr VertexId bottom() noexcept { return {0}; }
  static constexpr VertexId top() noexcept { return {1}; }

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

enum class VertexKind : std::uint8_t { leaf, decision, conj };

/// Operation tags for the memo caches.
enum class MemoOp : std::uint8_t {
  decompose,
  convert_down,
  conjoin,
  disjoin,
  negate,
  merge,
  restrict,
};

class DiagramStore {
 public:
  explicit DiagramStore(VariableOrder order);

  DiagramStore(DiagramStore&&) = default;
  DiagramStore& operator=(DiagramStore&&) = default;
  DiagramStore(const DiagramStore&) = delete;
  DiagramStore& operator=(const DiagramStore&) = delete;

  const VariableOrder& order() const noexcept { return order_; }
  std::uint32_t num_vars() const noexcept { return order_.size(); }

  // Construction -----------------------------------------------------------

  static constexpr VertexId make_leaf(bool value) noexcept {
    return value ? VertexId::top() : VertexId::bottom();
  }

  /// Returns lo when lo == hi. Throws OrderError unless `var` precedes every
  /// variable of lo and hi.
  VertexId make_decision(Variable var, VertexId lo, VertexId hi);
  VertexId make_decision_at_rank(std::uint32_t rank, VertexId lo, VertexId hi);

  VertexId make_literal(Variable var, bool positive) {
    return positive ? make_decision(var, VertexId::bottom(), VertexId::top())
                    : make_decision(var, VertexId::top(), VertexId::bottom());
  }

  /// Collapses true children, a false child, empty and singleton sets. The
  /// remaining children must be non-conj with pairwise disjoint variables;
  /// otherwise throws PreconditionError.
  VertexId make_conj(std::span<const VertexId> children);
  VertexId make_conj(std::initializer_list<VertexId> children) {
    return make_conj(std::span<const VertexId>(children.begin(), children.size()));
  }

  // Inspection -------------------------------------------------------------

  std::size_t num_vertices() const noexcept { return nodes_.size(); }
  bool contains(VertexId v) const noexcept { return v.index < nodes_.size(); }

  VertexKind kind(VertexId v) const { return node(v).kind; }
  bool is_leaf(VertexId v) const noexcept { return v.index < 2; }
  bool is_decision(VertexId v) const { return kind(v) == VertexKind::decision; }
  bool is_conj(VertexId v) const { return kind(v) == VertexKind::conj; }

  /// Decision vertices only.
  Variable var(VertexId v) const { return order_.at(node(v).rank); }
  std::uint32_t rank(VertexId v) const { return node(v).rank; }
  VertexId lo(VertexId v) const { return node(v).lo; }
  VertexId hi(VertexId v) const { return node(v).hi; }

  /// Conj vertices only; empty for the other kinds.
  std::span<const VertexId> children(VertexId v) const {
    const auto& n = node(v);
    return {n.children, n.num_children};
  }

  /// Ranks (positions in the order) of the variables below v, ascending.
  std::span<const std::uint32_t> var_ranks(VertexId v) const {
    const auto& n = node(v);
    return {n.vars, n.num_vars};
  }
  std::size_t var_count(VertexId v) const { return node(v).num_vars; }
  std::vector<Variable> vars_of(VertexId v) const;

  /// Rank of the least variable of a non-leaf vertex.
  std::uint32_t least_rank(VertexId v) const { return node(v).vars[0]; }

  /// Recursive evaluation of v under an assignment binding every variable of v.
  bool evaluate(VertexId v, const Assignment& assignment) const;

  // Memo caches ------------------------------------------------------------

  std::optional<VertexId> memo_find(MemoOp op, VertexId a, VertexId b, Bound bound) const;
  void memo_store(MemoOp op, VertexId a, VertexId b, Bound bound, VertexId result);
  std::optional<VertexId> memo_find(MemoOp op, std::span<const VertexId> operands,
                                    Bound bound) const;
  void memo_store(MemoOp op, std::span<const VertexId> operands, Bound bound,
                  VertexId result);
  void clear_memo();

 private:
  struct Node {
    VertexKind kind = VertexKind::leaf;
    std::uint32_t rank = 0;
    VertexId lo;
    VertexId hi;
    const VertexId* children = nullptr;
    std::uint32_t num_children = 0;
    std::uint32_t num_vars = 0;
    const std::uint32_t* vars = nullptr;
  };

  /// Bump allocator; blocks never move, so spans into them stay valid.
  template <typename T>
  class Pool {
   public:
    T* allocate(std::size_t n) {
      if (n > left_) {
        auto size = std::max<std::size_t>(n, 4096);
        blocks_.push_back(std::make_unique<T[]>(size));
        next_ = blocks_.back().get();
        left_ = size;
      }
      T* out = next_;
      next_ += n;
      left_ -= n;
      return out;
    }

   private:
    std::vector<std::unique_ptr<T[]>> blocks_;
    T* next_ = nullptr;
    std::size_t left_ = 0;
  };

  struct DecisionKey {
    std::uint32_t rank;
    std::uint32_t lo;
    std::uint32_t hi;
    friend bool operator==(const DecisionKey&, const DecisionKey&) = default;
  };
  struct DecisionKeyHash {
    std::size_t operator()(const DecisionKey& k) const noexcept;
  };
  struct PairKey {
    std::uint64_t head;  // op and bound
    std::uint64_t operands;
    friend bool operator==(const PairKey&, const PairKey&) = default;
  };
  struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const noexcept;
  };
  struct ListHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept;
  };

  const Node& node(VertexId v) const {
    if (v.index >= nodes_.size()) [[unlikely]] bad_handle(v);
    return nodes_[v.index];
  }
  [[noreturn]] static void bad_handle(VertexId v);
  VertexId push(Node n);
  std::uint64_t children_hash(std::span<const VertexId> children) const noexcept;
  std::vector<std::uint64_t>& list_key(MemoOp op, std::span<const VertexId> operands,
                                       Bound bound) const;

  VariableOrder order_;
  std::vector<Node> nodes_;
  std::unordered_map<DecisionKey, VertexId, DecisionKeyHash> decision_table_;
  Pool<std::uint32_t> var_pool_;
  Pool<VertexId> child_pool_;
  std::unordered_multimap<std::uint64_t, VertexId> conj_table_;
  std::unordered_map<PairKey, VertexId, PairKeyHash> memo_;
  std::unordered_map<std::vector<std::uint64_t>, VertexId, ListHash> list_memo_;
  mutable std::vector<std::uint64_t> scratch_;
};

/// Number of edges of the DAG rooted at v, each vertex counted once.
std::size_t size(const DiagramStore& store, VertexId v);

/// Number of distinct vertices reachable from v, leaves included.
std::size_t vertex_count(const DiagramStore& store, VertexId v);

/// Reachable vertices, children before parents.
std::vector<VertexId> topological_order(const DiagramStore& store, VertexId root);

/// Graphviz rendering: dashed low edges, solid high edges, boxed AND vertices.
std::string export_dot(const DiagramStore& store, VertexId v);

/// kdag text format:
///   kdag 1 <num_vars> <num_vertices> <bound>
///   order <v1> ... <vn>
///   one line per vertex: F | T | D <var> <lo> <hi> | C <k> <c1> ... <ck>
/// Children refer to earlier lines; the last line is the root.
std::string serialize(const DiagramStore& store, VertexId root, Bound bound);

struct LoadedDiagram {
  VertexId root;
  Bound bound;
};

/// Loads into an existing store whose order must match the file's order.
LoadedDiagram deserialize_into(DiagramStore& store, std::string_view text);

struct DiagramFile {
  DiagramStore store;
  VertexId root;
  Bound bound;
};

/// Loads into a fresh store built from the file's order.
DiagramFile deserialize(std::string_view text);

}  // namespace kcdag

template <>
struct std::hash<kcdag::VertexId> {
  std::size_t operator()(kcdag::VertexId v) const noexcept {
    return std::hash<std::uint32_t>{}(v.index);
  }
};
