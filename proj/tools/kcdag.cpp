// kcdag: compile CNF into ROBDD[AND_î] diagrams and operate on them.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcdag/kcdag.hpp"

using namespace kcdag;
using json = nlohmann::ordered_json;

namespace {

bool g_plain = false;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string plain_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ' ';
      out += plain_value(e);
    }
    return out;
  }
  return v.dump();
}

void emit(const json& result) {
  if (!g_plain) {
    std::cout << result.dump() << '\n';
    return;
  }
  for (const auto& [key, value] : result.items()) std::cout << key << ' ' << plain_value(value) << '\n';
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

json stats_of(const DiagramStore& store, VertexId root) {
  return {{"vertices", vertex_count(store, root)}, {"edges", size(store, root)}};
}

VariableOrder order_for(const Cnf& cnf, const std::string& name) {
  if (name == "natural") return VariableOrder::natural(cnf.num_vars);
  if (name == "min-fill") return min_fill_order(cnf);
  throw Error("unknown order '" + name + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Literal> parse_literals(const std::string& text) {
  std::vector<Literal> out;
  for (const auto& tok : split(text, ' ')) {
    for (const auto& piece : split(tok, ',')) {
      try {
        out.push_back(Literal::from_dimacs(std::stoll(piece)));
      } catch (const std::logic_error&) {
        throw ParseError("bad literal '" + piece + "'");
      }
    }
  }
  return out;
}

Assignment parse_settings(const std::string& text) {
  Assignment a;
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected var=value in '" + item + "'");
    auto name = item.substr(0, eq);
    auto value = item.substr(eq + 1);
    if (!name.empty() && name.front() == 'x') name.erase(0, 1);
    bool v;
    if (value == "true" || value == "1") {
      v = true;
    } else if (value == "false" || value == "0") {
      v = false;
    } else {
      throw ParseError("bad value in '" + item + "'");
    }
    try {
      a.set(Variable(static_cast<std::uint32_t>(std::stoul(name))), v);
    } catch (const std::logic_error&) {
      throw ParseError("bad variable in '" + item + "'");
    }
  }
  return a;
}

std::vector<Variable> parse_vars(const std::string& text) {
  std::vector<Variable> out;
  for (const auto& l : parse_literals(text)) out.push_back(l.var);
  return out;
}

std::vector<Variable> scope_of(const DiagramStore& store, std::uint32_t n) {
  if (n == 0) n = store.num_vars();
  std::vector<Variable> out;
  for (std::uint32_t v = 1; v <= n; ++v) out.emplace_back(v);
  return out;
}

std::vector<Bound> parse_bounds(const std::string& text) {
  std::vector<Bound> out;
  for (const auto& item : split(text, ',')) out.push_back(Bound::parse(item));
  return out;
}

std::vector<std::uint32_t> parse_counts(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& item : split(text, ',')) {
    try {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + item + "'");
    }
  }
  return out;
}

const CLI::Validator kBoundCheck(
    [](std::string& text) -> std::string {
      try {
        Bound::parse(text);
        return {};
      } catch (const std::exception& e) {
        return e.what();
      }
    },
    "BOUND");

/// Saves the diagram when `out` is set and reports its size.
void finish(const DiagramStore& store, VertexId root, Bound bound, const std::string& out,
            double ms) {
  if (!out.empty()) write_output(out, serialize(store, root, bound));
  auto result = stats_of(store, root);
  result["bound"] = bound.to_string();
  result["ms"] = ms;
  emit(result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile CNF into ROBDD[AND] diagrams and query them"};
  app.require_subcommand(1);
  app.add_flag("--plain", g_plain, "Print key/value lines instead of JSON");
  app.fallthrough();

  std::string in = "-";
  std::string other;
  std::string out;
  std::string bound_text = "inf";

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "Compile a DIMACS CNF");
  std::string cnf_path = "-";
  std::string order_name = "min-fill";
  std::string schedule_name = "balanced";
  bool via = false;
  compile_cmd->add_option("--cnf", cnf_path, "DIMACS input ('-' for stdin)");
  compile_cmd->add_option("--bound", bound_text, "Decomposition bound (integer or inf)")
      ->check(kBoundCheck);
  compile_cmd->add_option("--order", order_name, "Variable order")
      ->check(CLI::IsMember({"natural", "min-fill"}));
  compile_cmd->add_option("--schedule", schedule_name, "Conjunction schedule")
      ->check(CLI::IsMember({"balanced", "sequential"}));
  compile_cmd->add_flag("--via", via, "Compile at bound 1, decompose, then convert down");
  compile_cmd->add_option("--out", out, "Write the diagram here");

  auto* convert_cmd = app.add_subcommand("convert", "Convert a diagram down to a smaller bound");
  auto* decompose_cmd = app.add_subcommand("decompose", "Canonicalise a diagram at a bound");
  for (auto* cmd : {convert_cmd, decompose_cmd}) {
    cmd->add_option("--in", in, "kdag input");
    cmd->add_option("--bound", bound_text, "Target bound")->required()->check(kBoundCheck);
    cmd->add_option("--out", out, "Write the diagram here");
  }

  auto* query_cmd = app.add_subcommand("query", "Answer a query");
  std::string query_kind;
  std::string clause_text;
  std::string term_text;
  query_cmd->add_option("kind", query_kind, "co | va | ce | im | eq | se")
      ->required()
      ->check(CLI::IsMember({"co", "va", "ce", "im", "eq", "se"}));
  query_cmd->add_option("--in", in, "kdag input");
  query_cmd->add_option("--other", other, "Second kdag operand (eq, se)");
  query_cmd->add_option("--clause", clause_text, "Clause as DIMACS literals (ce)");
  query_cmd->add_option("--term", term_text, "Term as DIMACS literals (im)");

  auto* count_cmd = app.add_subcommand("count", "Count models");
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List models");
  std::uint32_t scope_n = 0;
  std::uint64_t limit = 0;
  for (auto* cmd : {count_cmd, enumerate_cmd}) {
    cmd->add_option("--in", in, "kdag input");
    cmd->add_option("--scope", scope_n, "Count over variables 1..N (default: all)");
  }
  enumerate_cmd->add_option("--limit", limit, "Stop after this many models (0: no limit)");

  auto* apply_cmd = app.add_subcommand("apply", "Conjoin, disjoin or negate");
  std::string apply_op;
  apply_cmd->add_option("op", apply_op, "and | or | not")
      ->required()
      ->check(CLI::IsMember({"and", "or", "not"}));
  apply_cmd->add_option("--in", in, "kdag input");
  apply_cmd->add_option("--other", other, "Second kdag operand (and, or)");
  apply_cmd->add_option("--out", out, "Write the diagram here");

  auto* condition_cmd = app.add_subcommand("condition", "Condition on an assignment");
  std::string settings;
  condition_cmd->add_option("--in", in, "kdag input");
  condition_cmd->add_option("--set", settings, "Assignment such as x1=true,3=false")->required();
  condition_cmd->add_option("--out", out, "Write the diagram here");

  auto* forget_cmd = app.add_subcommand("forget", "Existentially quantify variables");
  std::string vars_text;
  forget_cmd->add_option("--in", in, "kdag input");
  forget_cmd->add_option("--vars", vars_text, "Variables such as 1,4,5")->required();
  forget_cmd->add_option("--out", out, "Write the diagram here");

  auto* validate_cmd = app.add_subcommand("validate", "Check structure and canonicity");
  std::string validate_bound;
  std::uint32_t finest_limit = ValidationOptions{}.finest_limit;
  validate_cmd->add_option("--in", in, "kdag input");
  validate_cmd->add_option("--bound", validate_bound, "Bound to check (default: the file's)")
      ->check(kBoundCheck);
  validate_cmd->add_option("--finest-limit", finest_limit,
                           "Widest vertex given the semantic check");

  auto* stats_cmd = app.add_subcommand("stats", "Diagram statistics");
  stats_cmd->add_option("--in", in, "kdag input");

  auto* dot_cmd = app.add_subcommand("dot", "Graphviz rendering");
  dot_cmd->add_option("--in", in, "kdag input");
  dot_cmd->add_option("--out", out, "Write DOT here (default stdout)");

  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark CNFs");
  gen_cmd->require_subcommand(1);
  auto* gen_chain = gen_cmd->add_subcommand("chain", "Independent biconditional chains");
  std::uint32_t chain_n = 1;
  std::uint32_t chain_j = 0;
  std::string chain_mode = "parity";
  gen_chain->add_option("--n", chain_n, "Number of chains")->required();
  gen_chain->add_option("--j", chain_j, "Chain length minus two");
  gen_chain->add_option("--mode", chain_mode, "parity | all-equal")
      ->check(CLI::IsMember({"parity", "all-equal"}));
  auto* gen_random = gen_cmd->add_subcommand("random", "Random 3-CNF");
  std::uint32_t num_vars = 20;
  std::uint32_t num_clauses = 40;
  std::uint64_t seed = 1;
  gen_random->add_option("--vars", num_vars, "Variables");
  gen_random->add_option("--clauses", num_clauses, "Clauses");
  gen_random->add_option("--seed", seed, "Seed");
  for (auto* cmd : {gen_chain, gen_random}) cmd->add_option("--out", out, "Write DIMACS here");

  auto* bench_cmd = app.add_subcommand("bench", "Benchmarks (CSV on stdout)");
  bench_cmd->require_subcommand(1);
  auto* sweep = bench_cmd->add_subcommand("size-sweep", "Diagram size per bound");
  std::vector<std::string> cnf_files;
  std::string bounds_text = "0,1,2,3,4,5,inf";
  std::string clause_counts = "20,40,60,80";
  std::uint32_t instances = 25;
  sweep->add_option("--cnf", cnf_files, "DIMACS files (default: generated random 3-CNF)");
  sweep->add_option("--bounds", bounds_text, "Comma-separated bounds");
  sweep->add_option("--vars", num_vars, "Variables of generated instances");
  sweep->add_option("--clauses", clause_counts, "Comma-separated clause counts");
  sweep->add_option("--instances", instances, "Generated instances per clause count");
  sweep->add_option("--seed", seed, "Seed of the first generated instance");
  sweep->add_option("--order", order_name, "Variable order")
      ->check(CLI::IsMember({"natural", "min-fill"}));
  auto* compare = bench_cmd->add_subcommand("conjoin-compare",
                                            "Bottom-up compile time at bounds 0 and 1");
  std::uint32_t min_clauses = 10;
  std::uint32_t max_clauses = 100;
  std::uint32_t compare_instances = 100;
  compare->add_option("--vars", num_vars, "Variables");
  compare->add_option("--min-clauses", min_clauses, "Fewest clauses");
  compare->add_option("--max-clauses", max_clauses, "Most clauses");
  compare->add_option("--instances", compare_instances, "Instances");
  compare->add_option("--seed", seed, "Seed of the first instance");
  compare->add_option("--order", order_name, "Variable order")
      ->check(CLI::IsMember({"natural", "min-fill"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    auto load = [&](const std::string& path) { return deserialize(read_input(path)); };

    if (compile_cmd->parsed()) {
      auto cnf = parse_dimacs(read_input(cnf_path));
      auto bound = Bound::parse(bound_text);
      DiagramStore store(order_for(cnf, order_name));
      auto start = std::chrono::steady_clock::now();
      auto root = via ? compile_via(store, cnf, bound)
                      : compile(store, cnf, bound, parse_schedule(schedule_name));
      finish(store, root, bound, out, elapsed_ms(start));
    } else if (convert_cmd->parsed() || decompose_cmd->parsed()) {
      auto file = load(in);
      auto bound = Bound::parse(bound_text);
      auto start = std::chrono::steady_clock::now();
      auto root = convert_cmd->parsed() ? convert_down(file.store, file.root, bound)
                                        : decompose(file.store, file.root, bound);
      finish(file.store, root, bound, out, elapsed_ms(start));
    } else if (query_cmd->parsed()) {
      auto file = load(in);
      auto& store = file.store;
      auto bound = file.bound;
      bool answer = false;
      if (query_kind == "co") {
        answer = is_consistent(store, file.root);
      } else if (query_kind == "va") {
        answer = is_valid(store, file.root);
      } else if (query_kind == "ce") {
        answer = entails_clause(store, file.root, Clause(parse_literals(clause_text)), bound);
      } else if (query_kind == "im") {
        Assignment term;
        for (const auto& l : parse_literals(term_text)) term.set(l.var, l.positive);
        answer = implied_by_term(store, file.root, term, bound);
      } else {
        if (other.empty()) throw Error("query " + query_kind + " needs --other");
        auto second = deserialize_into(store, read_input(other));
        if (second.bound != bound) throw PreconditionError("operands have different bounds");
        answer = query_kind == "eq" ? equivalent(file.root, second.root)
                                    : entails(store, file.root, second.root, bound);
      }
      emit({{"query", query_kind}, {"result", answer}});
    } else if (count_cmd->parsed()) {
      auto file = load(in);
      auto models = model_count(file.store, file.root, scope_of(file.store, scope_n));
      emit({{"models", models.str()}});
    } else if (enumerate_cmd->parsed()) {
      auto file = load(in);
      auto stream = enumerate_models(file.store, file.root, scope_of(file.store, scope_n));
      json models = json::array();
      bool truncated = false;
      while (auto m = stream.next()) {
        if (limit != 0 && models.size() == limit) {
          truncated = true;
          break;
        }
        json row = json::array();
        for (auto [index, value] : m->values()) {
          row.push_back(value ? std::int64_t{index} : -std::int64_t{index});
        }
        models.push_back(std::move(row));
      }
      if (g_plain) {
        for (const auto& row : models) std::cout << plain_value(row) << " 0\n";
      } else {
        emit({{"models", models}, {"truncated", truncated}});
      }
    } else if (apply_cmd->parsed()) {
      auto file = load(in);
      auto& store = file.store;
      auto start = std::chrono::steady_clock::now();
      VertexId root;
      if (apply_op == "not") {
        root = negate(store, file.root, file.bound);
      } else {
        if (other.empty()) throw Error("apply " + apply_op + " needs --other");
        auto second = deserialize_into(store, read_input(other));
        if (second.bound != file.bound) {
          throw PreconditionError("operands have different bounds");
        }
        root = apply_op == "and" ? conjoin(store, file.root, second.root, file.bound)
                                 : disjoin(store, file.root, second.root, file.bound);
      }
      finish(store, root, file.bound, out, elapsed_ms(start));
    } else if (condition_cmd->parsed()) {
      auto file = load(in);
      auto start = std::chrono::steady_clock::now();
      auto root = condition(file.store, file.root, parse_settings(settings), file.bound);
      finish(file.store, root, file.bound, out, elapsed_ms(start));
    } else if (forget_cmd->parsed()) {
      auto file = load(in);
      auto start = std::chrono::steady_clock::now();
      auto root = forget(file.store, file.root, parse_vars(vars_text), file.bound);
      finish(file.store, root, file.bound, out, elapsed_ms(start));
    } else if (validate_cmd->parsed()) {
      auto file = load(in);
      auto bound = validate_bound.empty() ? file.bound : Bound::parse(validate_bound);
      auto r = validate(file.store, file.root, bound, ValidationOptions{finest_limit});
      auto ids = [](const std::vector<VertexId>& vs) {
        json a = json::array();
        for (auto v : vs) a.push_back(v.index);
        return a;
      };
      emit({{"ok", r.ok()},
            {"ordered_ok", r.ordered_ok},
            {"reduced_ok", r.reduced_ok},
            {"bounded_ok", r.bounded_ok},
            {"decomposition_finest_ok", r.decomposition_finest_ok},
            {"finest_skipped", r.finest_skipped},
            {"unordered", ids(r.unordered)},
            {"unreduced", ids(r.unreduced)},
            {"unbounded", ids(r.unbounded)},
            {"not_finest", ids(r.not_finest)}});
    } else if (stats_cmd->parsed()) {
      auto file = load(in);
      std::size_t decisions = 0;
      std::size_t conjs = 0;
      for (auto v : topological_order(file.store, file.root)) {
        decisions += !file.store.is_leaf(v) && file.store.is_decision(v);
        conjs += !file.store.is_leaf(v) && file.store.is_conj(v);
      }
      auto result = stats_of(file.store, file.root);
      result["decision_vertices"] = decisions;
      result["conj_vertices"] = conjs;
      result["vars"] = file.store.var_count(file.root);
      result["bound"] = file.bound.to_string();
      result["structural_bound"] = structural_bound(file.store, file.root).to_string();
      emit(result);
    } else if (dot_cmd->parsed()) {
      auto file = load(in);
      write_output(out.empty() ? "-" : out, export_dot(file.store, file.root));
    } else if (gen_chain->parsed()) {
      auto mode = chain_mode == "parity" ? ChainMode::parity : ChainMode::all_equal;
      write_output(out.empty() ? "-" : out, write_dimacs(chain_family(chain_n, chain_j, mode)));
    } else if (gen_random->parsed()) {
      write_output(out.empty() ? "-" : out,
                   write_dimacs(random_3cnf(num_vars, num_clauses, seed)));
    } else if (sweep->parsed()) {
      auto bounds = parse_bounds(bounds_text);
      std::vector<std::pair<std::string, Cnf>> corpus;
      if (!cnf_files.empty()) {
        for (const auto& path : cnf_files) corpus.emplace_back(path, parse_dimacs(read_input(path)));
      } else {
        std::uint64_t s = seed;
        for (auto clauses : parse_counts(clause_counts)) {
          for (std::uint32_t k = 0; k < instances; ++k, ++s) {
            corpus.emplace_back(
                "random-" + std::to_string(num_vars) + "-" + std::to_string(clauses) + "-" +
                    std::to_string(s),
                random_3cnf(num_vars, clauses, s));
          }
        }
      }
      std::cout << "instance,bound,vertices,edges,ms\n";
      for (const auto& [name, cnf] : corpus) {
        DiagramStore store(order_for(cnf, order_name));
        for (auto bound : bounds) {
          auto start = std::chrono::steady_clock::now();
          auto root = compile(store, cnf, bound);
          auto ms = elapsed_ms(start);
          std::cout << name << ',' << bound.to_string() << ',' << vertex_count(store, root)
                    << ',' << size(store, root) << ',' << ms << '\n';
        }
      }
    } else if (compare->parsed()) {
      if (min_clauses > max_clauses) throw Error("--min-clauses exceeds --max-clauses");
      std::cout << "instance,clauses,ms_bound0,ms_bound1,equivalent\n";
      for (std::uint32_t k = 0; k < compare_instances; ++k) {
        auto span = max_clauses - min_clauses;
        auto clauses = min_clauses + (compare_instances > 1 ? span * k / (compare_instances - 1) : 0);
        auto cnf = random_3cnf(num_vars, clauses, seed + k);
        auto order = order_for(cnf, order_name);
        DiagramStore plain(order);
        auto start = std::chrono::steady_clock::now();
        auto zero = compile(plain, cnf, Bound(0));
        auto ms0 = elapsed_ms(start);
        DiagramStore lifted(order);
        start = std::chrono::steady_clock::now();
        auto one = compile(lifted, cnf, Bound(1));
        auto ms1 = elapsed_ms(start);
        auto down = convert_down(lifted, one, Bound(0));
        bool same = serialize(lifted, down, Bound(0)) == serialize(plain, zero, Bound(0));
        std::cout << "random-" << num_vars << '-' << clauses << '-' << seed + k << ','
                  << clauses << ',' << ms0 << ',' << ms1 << ',' << (same ? "true" : "false")
                  << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "kcdag: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
