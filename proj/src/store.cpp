#include "kcdag/store.hpp"

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <charconv>
#include <sstream>

namespace kcdag {

namespace {

constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t memo_head(MemoOp op, Bound bound) {
  return (bound.key() << 8) | static_cast<std::uint64_t>(op);
}

}  // namespace

std::size_t DiagramStore::DecisionKeyHash::operator()(const DecisionKey& k) const noexcept {
  return mix((std::uint64_t{k.rank} << 40) ^ (std::uint64_t{k.lo} << 20) ^ k.hi ^
             (std::uint64_t{k.hi} << 52));
}

std::size_t DiagramStore::PairKeyHash::operator()(const PairKey& k) const noexcept {
  return mix(k.head * 0x9e3779b97f4a7c15ULL ^ k.operands);
}

std::size_t DiagramStore::ListHash::operator()(
    const std::vector<std::uint64_t>& k) const noexcept {
  std::uint64_t h = k.size();
  for (auto x : k) h = mix(h ^ (x + 0x9e3779b97f4a7c15ULL));
  return h;
}

DiagramStore::DiagramStore(VariableOrder order) : order_(std::move(order)) {
  nodes_.push_back(Node{});  // false
  nodes_.push_back(Node{});  // true
}

void DiagramStore::bad_handle(VertexId v) {
  throw PreconditionError("vertex handle " + std::to_string(v.index) +
                          " does not belong to this store");
}

VertexId DiagramStore::push(Node n) {
  VertexId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(n));
  return id;
}

VertexId DiagramStore::make_decision(Variable var, VertexId lo, VertexId hi) {
  return make_decision_at_rank(order_.rank(var), lo, hi);
}

VertexId DiagramStore::make_decision_at_rank(std::uint32_t rank, VertexId lo, VertexId hi) {
  if (rank >= order_.size()) throw PreconditionError("variable rank out of range");
  const auto lo_vars = var_ranks(lo);
  const auto hi_vars = var_ranks(hi);
  if (lo == hi) return lo;
  if ((!lo_vars.empty() && lo_vars.front() <= rank) ||
      (!hi_vars.empty() && hi_vars.front() <= rank)) {
    throw OrderError("decision on x" + std::to_string(order_.at(rank).index()) +
                     " does not precede the variables of its children");
  }
  DecisionKey key{rank, lo.index, hi.index};
  if (auto it = decision_table_.find(key); it != decision_table_.end()) return it->second;

  Node n;
  n.kind = VertexKind::decision;
  n.rank = rank;
  n.lo = lo;
  n.hi = hi;
  auto* vars = var_pool_.allocate(1 + lo_vars.size() + hi_vars.size());
  vars[0] = rank;
  auto* end = std::set_union(lo_vars.begin(), lo_vars.end(), hi_vars.begin(), hi_vars.end(),
                             vars + 1);
  n.vars = vars;
  n.num_vars = static_cast<std::uint32_t>(end - vars);
  auto id = push(n);
  decision_table_.emplace(key, id);
  return id;
}

std::uint64_t DiagramStore::children_hash(std::span<const VertexId> children) const noexcept {
  std::uint64_t h = children.size();
  for (auto c : children) h = mix(h ^ (c.index + 0x9e3779b97f4a7c15ULL));
  return h;
}

VertexId DiagramStore::make_conj(std::span<const VertexId> children) {
  boost::container::small_vector<VertexId, 8> kept;
  std::size_t width = 0;
  for (auto c : children) {
    const auto& cn = node(c);
    if (c == VertexId::bottom()) return VertexId::bottom();
    if (c == VertexId::top()) continue;
    if (cn.kind == VertexKind::conj) {
      throw PreconditionError("conj child must not itself be a conj vertex");
    }
    kept.push_back(c);
    width += cn.num_vars;
  }
  if (kept.empty()) return VertexId::top();
  std::sort(kept.begin(), kept.end(), [this](VertexId a, VertexId b) {
    auto ra = nodes_[a.index].vars[0];
    auto rb = nodes_[b.index].vars[0];
    return ra != rb ? ra < rb : a < b;
  });
  for (std::size_t k = 1; k < kept.size(); ++k) {
    if (kept[k] == kept[k - 1]) width -= nodes_[kept[k].index].num_vars;
  }
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.size() == 1) return kept.front();

  const std::span<const VertexId> key(kept.data(), kept.size());
  const auto h = children_hash(key);
  for (auto [it, last] = conj_table_.equal_range(h); it != last; ++it) {
    if (std::ranges::equal(this->children(it->second), key)) return it->second;
  }

  Node n;
  n.kind = VertexKind::conj;
  auto* vars = var_pool_.allocate(width);
  auto* out = vars;
  for (auto c : kept) {
    const auto& cn = nodes_[c.index];
    out = std::copy(cn.vars, cn.vars + cn.num_vars, out);
  }
  std::sort(vars, out);
  if (std::adjacent_find(vars, out) != out) {
    throw PreconditionError("conj children must have pairwise disjoint variables");
  }
  n.vars = vars;
  n.num_vars = static_cast<std::uint32_t>(width);
  auto* kids = child_pool_.allocate(kept.size());
  std::copy(kept.begin(), kept.end(), kids);
  n.children = kids;
  n.num_children = static_cast<std::uint32_t>(kept.size());
  auto id = push(n);
  conj_table_.emplace(h, id);
  return id;
}

std::vector<Variable> DiagramStore::vars_of(VertexId v) const {
  std::vector<Variable> out;
  for (auto r : var_ranks(v)) out.push_back(order_.at(r));
  return out;
}

bool DiagramStore::evaluate(VertexId v, const Assignment& assignment) const {
  for (;;) {
    const auto& n = node(v);
    switch (n.kind) {
      case VertexKind::leaf:
        return v == VertexId::top();
      case VertexKind::decision: {
        auto value = assignment.get(order_.at(n.rank));
        if (!value) {
          throw PreconditionError("evaluate: x" + std::to_string(order_.at(n.rank).index()) +
                                  " is unbound");
        }
        v = *value ? n.hi : n.lo;
        break;
      }
      case VertexKind::conj:
        for (auto c : children(v)) {
          if (!evaluate(c, assignment)) return false;
        }
        return true;
    }
  }
}

std::optional<VertexId> DiagramStore::memo_find(MemoOp op, VertexId a, VertexId b,
                                                Bound bound) const {
  PairKey key{memo_head(op, bound), (std::uint64_t{a.index} << 32) | b.index};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  return std::nullopt;
}

void DiagramStore::memo_store(MemoOp op, VertexId a, VertexId b, Bound bound,
                              VertexId result) {
  PairKey key{memo_head(op, bound), (std::uint64_t{a.index} << 32) | b.index};
  memo_[key] = result;
}

std::vector<std::uint64_t>& DiagramStore::list_key(MemoOp op,
                                                   std::span<const VertexId> operands,
                                                   Bound bound) const {
  scratch_.clear();
  scratch_.push_back(memo_head(op, bound));
  for (auto v : operands) scratch_.push_back(v.index);
  return scratch_;
}

std::optional<VertexId> DiagramStore::memo_find(MemoOp op,
                                                std::span<const VertexId> operands,
                                                Bound bound) const {
  if (auto it = list_memo_.find(list_key(op, operands, bound)); it != list_memo_.end()) {
    return it->second;
  }
  return std::nullopt;
}

void DiagramStore::memo_store(MemoOp op, std::span<const VertexId> operands, Bound bound,
                              VertexId result) {
  list_memo_[list_key(op, operands, bound)] = result;
}

void DiagramStore::clear_memo() {
  memo_.clear();
  list_memo_.clear();
}

// Traversals ---------------------------------------------------------------

std::vector<VertexId> topological_order(const DiagramStore& store, VertexId root) {
  std::vector<VertexId> out;
  std::vector<bool> seen(store.num_vertices(), false);
  // Explicit stack: (vertex, next child slot).
  std::vector<std::pair<VertexId, std::size_t>> stack;
  auto child_at = [&store](VertexId v, std::size_t k) -> std::optional<VertexId> {
    switch (store.kind(v)) {
      case VertexKind::leaf:
        return std::nullopt;
      case VertexKind::decision:
        if (k == 0) return store.lo(v);
        if (k == 1) return store.hi(v);
        return std::nullopt;
      case VertexKind::conj: {
        auto ch = store.children(v);
        if (k < ch.size()) return ch[k];
        return std::nullopt;
      }
    }
    return std::nullopt;
  };
  if (!store.contains(root)) throw PreconditionError("root not in store");
  seen[root.index] = true;
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [v, k] = stack.back();
    auto next = child_at(v, k);
    if (!next) {
      out.push_back(v);
      stack.pop_back();
      continue;
    }
    ++k;
    if (!seen[next->index]) {
      seen[next->index] = true;
      stack.emplace_back(*next, 0);
    }
  }
  return out;
}

std::size_t vertex_count(const DiagramStore& store, VertexId v) {
  return topological_order(store, v).size();
}

std::size_t size(const DiagramStore& store, VertexId v) {
  std::size_t edges = 0;
  for (auto w : topological_order(store, v)) {
    switch (store.kind(w)) {
      case VertexKind::leaf:
        break;
      case VertexKind::decision:
        edges += 2;
        break;
      case VertexKind::conj:
        edges += store.children(w).size();
        break;
    }
  }
  return edges;
}

std::string export_dot(const DiagramStore& store, VertexId v) {
  std::ostringstream out;
  out << "digraph kdag {\n";
  for (auto w : topological_order(store, v)) {
    out << "  n" << w.index;
    switch (store.kind(w)) {
      case VertexKind::leaf:
        out << " [shape=square,label=\"" << (w == VertexId::top() ? "⊤" : "⊥") << "\"];\n";
        break;
      case VertexKind::decision:
        out << " [shape=circle,label=\"x" << store.var(w).index() << "\"];\n";
        out << "  n" << w.index << " -> n" << store.lo(w).index << " [style=dashed];\n";
        out << "  n" << w.index << " -> n" << store.hi(w).index << " [style=solid];\n";
        break;
      case VertexKind::conj:
        out << " [shape=box,label=\"∧\"];\n";
        for (auto c : store.children(w)) {
          out << "  n" << w.index << " -> n" << c.index << ";\n";
        }
        break;
    }
  }
  out << "}\n";
  return out.str();
}

// kdag format --------------------------------------------------------------

std::string serialize(const DiagramStore& store, VertexId root, Bound bound) {
  auto vertices = topological_order(store, root);
  std::unordered_map<VertexId, std::size_t> line_of;
  std::ostringstream out;
  out << "kdag 1 " << store.num_vars() << ' ' << vertices.size() << ' '
      << bound.to_string() << '\n';
  out << "order";
  for (auto v : store.order().sequence()) out << ' ' << v.index();
  out << '\n';
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    auto v = vertices[k];
    line_of.emplace(v, k);
    switch (store.kind(v)) {
      case VertexKind::leaf:
        out << (v == VertexId::top() ? "T" : "F");
        break;
      case VertexKind::decision:
        out << "D " << store.var(v).index() << ' ' << line_of.at(store.lo(v)) << ' '
            << line_of.at(store.hi(v));
        break;
      case VertexKind::conj: {
        auto ch = store.children(v);
        out << "C " << ch.size();
        for (auto c : ch) out << ' ' << line_of.at(c);
        break;
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    auto start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

std::uint64_t parse_index(std::string_view token) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("kdag: expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::vector<std::string_view>> kdag_lines(std::string_view text) {
  std::vector<std::vector<std::string_view>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto tokens = split_tokens(text.substr(pos, eol - pos));
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    pos = eol + 1;
  }
  return lines;
}

struct KdagHeader {
  std::uint32_t num_vars;
  std::size_t num_vertices;
  Bound bound;
  VariableOrder order;
};

KdagHeader parse_header(const std::vector<std::vector<std::string_view>>& lines) {
  if (lines.size() < 2) throw ParseError("kdag: missing header or order line");
  const auto& h = lines[0];
  if (h.size() != 5 || h[0] != "kdag" || h[1] != "1") {
    throw ParseError("kdag: malformed header, expected 'kdag 1 <vars> <vertices> <bound>'");
  }
  auto num_vars = parse_index(h[2]);
  auto num_vertices = parse_index(h[3]);
  auto bound = Bound::parse(h[4]);
  const auto& o = lines[1];
  if (o.empty() || o[0] != "order" || o.size() != num_vars + 1) {
    throw ParseError("kdag: order line must list exactly " + std::to_string(num_vars) +
                     " variables");
  }
  std::vector<Variable> seq;
  for (std::size_t k = 1; k < o.size(); ++k) {
    auto index = parse_index(o[k]);
    if (index == 0 || index > num_vars) throw ParseError("kdag: bad variable in order line");
    seq.emplace_back(static_cast<std::uint32_t>(index));
  }
  VariableOrder order = [&] {
    try {
      return VariableOrder(std::move(seq));
    } catch (const PreconditionError& e) {
      throw ParseError(std::string("kdag: ") + e.what());
    }
  }();
  return {static_cast<std::uint32_t>(num_vars), num_vertices, bound, std::move(order)};
}

LoadedDiagram load_body(DiagramStore& store, const KdagHeader& header,
                        const std::vector<std::vector<std::string_view>>& lines) {
  if (lines.size() - 2 != header.num_vertices) {
    throw ParseError("kdag: header declares " + std::to_string(header.num_vertices) +
                     " vertices, found " + std::to_string(lines.size() - 2));
  }
  if (header.num_vertices == 0) throw ParseError("kdag: a diagram needs a root vertex");
  std::vector<VertexId> ids;
  ids.reserve(header.num_vertices);
  auto child = [&ids](std::string_view token) {
    auto idx = parse_index(token);
    if (idx >= ids.size()) {
      throw ParseError("kdag: child index " + std::to_string(idx) +
                       " does not refer to an earlier line");
    }
    return ids[idx];
  };
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const auto& t = lines[k];
    if (t[0] == "F" && t.size() == 1) {
      ids.push_back(VertexId::bottom());
    } else if (t[0] == "T" && t.size() == 1) {
      ids.push_back(VertexId::top());
    } else if (t[0] == "D" && t.size() == 4) {
      auto var = parse_index(t[1]);
      if (var == 0 || var > header.num_vars) throw ParseError("kdag: bad decision variable");
      auto lo = child(t[2]);
      auto hi = child(t[3]);
      ids.push_back(store.make_decision(Variable(static_cast<std::uint32_t>(var)), lo, hi));
    } else if (t[0] == "C" && t.size() >= 2) {
      auto k_children = parse_index(t[1]);
      if (t.size() != k_children + 2) throw ParseError("kdag: conj arity mismatch");
      std::vector<VertexId> ch;
      for (std::size_t c = 2; c < t.size(); ++c) ch.push_back(child(t[c]));
      try {
        ids.push_back(store.make_conj(ch));
      } catch (const PreconditionError& e) {
        throw ParseError(std::string("kdag: ") + e.what());
      }
    } else {
      throw ParseError("kdag: malformed vertex line " + std::to_string(k - 2));
    }
  }
  return {ids.back(), header.bound};
}

}  // namespace

LoadedDiagram deserialize_into(DiagramStore& store, std::string_view text) {
  auto lines = kdag_lines(text);
  auto header = parse_header(lines);
  if (!(header.order == store.order())) {
    throw PreconditionError("kdag: file order differs from the store order");
  }
  return load_body(store, header, lines);
}

DiagramFile deserialize(std::string_view text) {
  auto lines = kdag_lines(text);
  auto header = parse_header(lines);
  DiagramStore store(header.order);
  auto loaded = load_body(store, header, lines);
  return {std::move(store), loaded.root, loaded.bound};
}

}  // namespace kcdag
