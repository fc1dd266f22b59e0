#pragma once

// Command implementations behind the `scbta` executable. Each command reads
// its inputs, writes its document to the configured output and returns the
// process exit code: 0 on success, 2 for input errors, 3 when a complexity
// or unfolding budget is exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scbta/bta.hpp"
#include "scbta/lincons.hpp"
#include "scbta/norm.hpp"
#include "scbta/parser.hpp"
#include "scbta/pe.hpp"
#include "scbta/pipeline.hpp"
#include "scbta/report.hpp"

namespace scbta::cli {

enum class Command { Analyze, Graphs, Specialize, Run };
enum class Format { Text, Json, Dot };
enum class GraphSelection { Base, Closure, Idempotent };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;

struct RunConfig {
  Command command = Command::Analyze;
  std::string program_path;
  std::optional<std::string> division_path;
  std::optional<std::string> entry_division;
  std::string norm = "term_size";
  bool min_memo = false;
  std::optional<std::string> relations_path;
  std::vector<std::string> unfoldable;
  bool trust_unfoldable = false;
  bool force_mgg = false;
  Format format = Format::Text;
  std::optional<std::string> out_path;
  std::size_t budget = kDefaultUnfoldBudget;
  GraphSelection graphs = GraphSelection::Base;
  /// Entry atom for `specialize`, goal for `run`.
  std::optional<std::string> goal;
  /// Hand-written unfold/memo marks that override the analysis.
  std::optional<std::string> marks_path;
  std::size_t depth = 10000;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

/// Prefixes syntax errors with the file they came from.
template <typename F>
auto parse_file(const std::string& path, F&& parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline NormSpec resolve_norm(const std::string& sel) {
  if (sel == "term_size") return NormSpec::term_size();
  if (sel == "list_length") return NormSpec::list_length();
  return parse_file(sel, [&](const std::string& t) { return parse_norm(t, sel); });
}

inline std::set<Predicate> parse_pred_list(const std::vector<std::string>& items) {
  std::set<Predicate> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (piece.find_first_not_of(" \t") == std::string::npos) continue;
      TokenStream ts(piece);
      out.insert(parse_predicate_ref(ts));
      if (!ts.at_end()) ts.fail("trailing input in predicate list");
    }
  }
  return out;
}

/// Lines `pred/arity: unfold.` or `pred/arity: memo.`
inline std::map<Predicate, Mark> parse_marks(std::string_view text) {
  TokenStream ts(text);
  std::map<Predicate, Mark> out;
  while (!ts.at_end()) {
    Predicate p = parse_predicate_ref(ts);
    ts.expect(":");
    const Token& m = ts.expect(TokenKind::Ident, "'unfold' or 'memo'");
    if (m.text != "unfold" && m.text != "memo") {
      throw SyntaxError("expected 'unfold' or 'memo'", m.line, m.column);
    }
    ts.expect(".");
    out[p] = m.text == "unfold" ? Mark::Unfold : Mark::Memo;
  }
  return out;
}

struct Loaded {
  Program program;
  NormSpec norm = NormSpec::term_size();
  AnalysisOptions options;
};

inline Loaded load_common(const RunConfig& cfg) {
  Loaded l;
  l.program = parse_file(cfg.program_path, [](const std::string& t) { return parse_program(t); });
  l.norm = resolve_norm(cfg.norm);
  l.options.min_memo = cfg.min_memo;
  l.options.trust_unfoldable = cfg.trust_unfoldable;
  l.options.unfoldable = parse_pred_list(cfg.unfoldable);
  if (cfg.relations_path) {
    l.options.relations = parse_file(*cfg.relations_path,
                                     [](const std::string& t) { return parse_relations(t); });
  }
  for (const auto& [p, store] : l.options.relations) {
    if (!l.program.predicates().contains(p)) {
      throw InputError("relations given for unknown predicate " + p.str());
    }
  }
  for (const auto& p : l.options.unfoldable) {
    if (!l.program.predicates().contains(p)) {
      throw InputError("unknown unfoldable predicate " + p.str());
    }
  }
  return l;
}

inline Division resolve_division(const RunConfig& cfg, const Program& p,
                                 const std::optional<Term>& entry_atom) {
  if (cfg.division_path && cfg.entry_division) {
    throw InputError("--division and --entry are mutually exclusive");
  }
  if (cfg.division_path) {
    auto d = parse_file(*cfg.division_path, [](const std::string& t) { return parse_division(t); });
    for (const auto& pred : p.predicates()) {
      if (!d.contains(pred)) throw InputError("division file has no entry for " + pred.str());
    }
    return d;
  }
  if (cfg.entry_division) {
    std::pair<Predicate, std::vector<Binding>> e;
    try {
      e = parse_division_entry(*cfg.entry_division);
    } catch (const SyntaxError& err) {
      throw InputError(std::string("--entry: ") + err.what());
    }
    return propagate_division(p, e.first, e.second);
  }
  if (entry_atom) {
    std::vector<Binding> bs;
    for (const auto& a : entry_atom->args()) {
      bs.push_back(is_ground(a) ? Binding::Static : Binding::Dynamic);
    }
    return propagate_division(p, entry_atom->functor(), bs);
  }
  throw InputError("a division is required (--division or --entry)");
}

inline std::string norm_label(const RunConfig& cfg, const NormSpec& n) {
  return cfg.norm == "term_size" || cfg.norm == "list_length" ? cfg.norm : n.name();
}

inline ReportContext context_for(const RunConfig& cfg, const Loaded& l) {
  return ReportContext{norm_label(cfg, l.norm), cfg.min_memo,
                       !l.options.unfoldable.empty() || !l.options.relations.empty(),
                       cfg.trust_unfoldable};
}

inline void emit(const RunConfig& cfg, const std::string& doc, std::ostream& out) {
  if (cfg.out_path) {
    std::ofstream f(*cfg.out_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + *cfg.out_path);
    f << doc;
  } else {
    out << doc;
  }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const TooComplex& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const GlobalLimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NormError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

/// Answer bindings with internal variables renamed _G0, _G1, ... jointly.
inline std::vector<std::pair<std::string, std::string>> printable_answer(const Substitution& a) {
  std::vector<Term> values;
  for (const auto& [v, t] : a.bindings()) values.push_back(t);
  Term joint = canonical_variant(Term::structure("$answer", values), "_G");
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  for (const auto& [v, t] : a.bindings()) out.emplace_back(v, to_string(joint.arg(i++)));
  return out;
}

inline std::optional<Term> parse_goal_atom(const RunConfig& cfg) {
  if (!cfg.goal) return std::nullopt;
  try {
    return parse_atom(*cfg.goal);
  } catch (const SyntaxError& e) {
    throw InputError(std::string("--goal: ") + e.what());
  }
}

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto l = detail::load_common(cfg);
    Division d = detail::resolve_division(cfg, l.program, std::nullopt);
    auto r = analyze(l.program, l.norm, d, l.options);
    auto ctx = detail::context_for(cfg, l);
    if (cfg.format == Format::Json) {
      detail::emit(cfg, annotation_json(r, ctx).dump(2) + "\n", out);
    } else if (cfg.format == Format::Text) {
      detail::emit(cfg, annotation_text(r, ctx), out);
    } else {
      throw InputError("analyze supports --format text or json");
    }
    return kExitOk;
  });
}

inline int cmd_graphs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto l = detail::load_common(cfg);
    std::vector<std::string> warnings;
    auto base = base_graphs(l.program, l.norm, l.options, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    std::vector<SizeChangeGraph> selected;
    std::string which;
    switch (cfg.graphs) {
      case GraphSelection::Base:
        selected = base;
        which = "base";
        break;
      case GraphSelection::Closure:
        selected = close(base).graphs();
        which = "closure";
        break;
      case GraphSelection::Idempotent:
        selected = idempotents(close(base));
        which = "idempotent";
        break;
    }
    switch (cfg.format) {
      case Format::Dot: detail::emit(cfg, graphs_dot(selected, which), out); break;
      case Format::Json: detail::emit(cfg, graphs_json(selected, which).dump(2) + "\n", out); break;
      case Format::Text: detail::emit(cfg, graphs_text(selected), out); break;
    }
    return kExitOk;
  });
}

inline int cmd_specialize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto entry = detail::parse_goal_atom(cfg);
    if (!entry) throw InputError("specialize needs an entry atom (--goal)");
    auto l = detail::load_common(cfg);
    if (!l.program.predicates().contains(entry->functor())) {
      throw InputError("entry predicate " + entry->functor().str() + " is not in the program");
    }
    Division d = detail::resolve_division(cfg, l.program, entry);
    auto r = analyze(l.program, l.norm, d, l.options);
    Annotation ann = r.annotation;
    if (cfg.marks_path) {
      auto marks = detail::parse_file(*cfg.marks_path,
                                      [](const std::string& t) { return detail::parse_marks(t); });
      for (const auto& [p, m] : marks) ann.marks[p] = m;
    }
    if (cfg.format != Format::Text) throw InputError("specialize writes program text only");
    auto spec = specialize(l.program, ann, ann.division, l.norm, *entry,
                           SpecializeOptions{.budget = cfg.budget, .force_mgg = cfg.force_mgg});
    detail::emit(cfg, print_specialization(spec, *entry), out);
    return kExitOk;
  });
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!cfg.goal) throw InputError("run needs a goal (--goal)");
    std::vector<Term> goal;
    try {
      goal = parse_goal(*cfg.goal);
    } catch (const SyntaxError& e) {
      throw InputError(std::string("--goal: ") + e.what());
    }
    Program p = detail::parse_file(cfg.program_path,
                                   [](const std::string& t) { return parse_program(t); });
    auto res = run_query(p, goal, cfg.depth);
    if (cfg.format == Format::Json) {
      json doc = {{"answers", json::array()}, {"cut_off", res.cut_off}};
      for (const auto& a : res.answers) {
        json obj = json::object();
        for (const auto& [v, t] : detail::printable_answer(a)) obj[v] = t;
        doc["answers"].push_back(std::move(obj));
      }
      detail::emit(cfg, doc.dump(2) + "\n", out);
    } else {
      std::ostringstream os;
      for (const auto& a : res.answers) {
        os << '{';
        bool first = true;
        for (const auto& [v, t] : detail::printable_answer(a)) {
          os << (first ? "" : ", ") << v << " = " << t;
          first = false;
        }
        os << "}\n";
      }
      if (res.answers.empty()) os << "no\n";
      if (res.cut_off) os << "% depth bound " << cfg.depth << " reached\n";
      detail::emit(cfg, os.str(), out);
    }
    return kExitOk;
  });
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::Analyze: return cmd_analyze(cfg, out, err);
    case Command::Graphs: return cmd_graphs(cfg, out, err);
    case Command::Specialize: return cmd_specialize(cfg, out, err);
    case Command::Run: return cmd_run(cfg, out, err);
  }
  return kExitInput;
}

}  // namespace scbta::cli
