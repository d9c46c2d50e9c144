#include "zcnet/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace zcnet {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

Index parse_count(std::string_view token, std::size_t line_no, const char* what) {
  Index value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, std::string("expected a non-negative integer for ") + what +
                                  ", got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

PatternFile parse_pattern_file(std::string_view text) {
  std::optional<Index> n;
  std::optional<Index> m;
  std::vector<Entry> a_entries;
  std::vector<Entry> b_entries;
  std::set<std::pair<char, Entry>> seen;
  PatternFile file;
  bool entries_started = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string_view key = tokens[0];

    if (!n && key != "n") throw ParseError(line_no, "first directive must be 'n <int>'");

    if (key == "n") {
      if (n) throw ParseError(line_no, "'n' declared twice");
      if (tokens.size() != 2) throw ParseError(line_no, "expected 'n <int>'");
      n = parse_count(tokens[1], line_no, "n");
    } else if (key == "m") {
      if (m) throw ParseError(line_no, "'m' declared twice");
      if (entries_started) throw ParseError(line_no, "'m' must precede all entries");
      if (tokens.size() != 2) throw ParseError(line_no, "expected 'm <int>'");
      m = parse_count(tokens[1], line_no, "m");
    } else if (key == "a" || key == "b") {
      entries_started = true;
      if (tokens.size() != 3) {
        throw ParseError(line_no, "expected '" + std::string(key) + " <row> <col>'");
      }
      const Index row = parse_count(tokens[1], line_no, "row");
      const Index col = parse_count(tokens[2], line_no, "column");
      const std::string entry =
          "entry " + std::string(key) + " " + std::to_string(row) + " " + std::to_string(col);
      const Index cols = key == "a" ? *n : m.value_or(0);
      const char* cols_name = key == "a" ? "n" : "m";
      if (row == 0 || col == 0) throw ParseError(line_no, entry + ": indices are 1-based");
      if (row > *n) {
        throw ParseError(line_no, entry + ": row " + std::to_string(row) + " exceeds n=" +
                                      std::to_string(*n));
      }
      if (col > cols) {
        throw ParseError(line_no, entry + ": column " + std::to_string(col) + " exceeds " +
                                      cols_name + "=" + std::to_string(cols));
      }
      const Entry e{row - 1, col - 1};
      if (!seen.insert({key[0], e}).second) {
        file.warnings.push_back("line " + std::to_string(line_no) + ": duplicate " + entry +
                                " ignored");
        continue;
      }
      (key == "a" ? a_entries : b_entries).push_back(e);
    } else if (key == "name") {
      if (tokens.size() < 3) throw ParseError(line_no, "expected 'name <vertex> <label>'");
      Vertex v;
      try {
        v = parse_vertex(tokens[1]);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(line_no, ex.what());
      }
      const Index bound = v.kind == VertexKind::State ? *n : m.value_or(0);
      if (v.index >= bound) {
        throw ParseError(line_no, "vertex " + std::string(tokens[1]) + " does not exist");
      }
      std::string label(tokens[2]);
      for (std::size_t k = 3; k < tokens.size(); ++k) label += " " + std::string(tokens[k]);
      file.names[v] = std::move(label);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (!n) throw ParseError(0, "missing 'n <int>' header");

  file.a = PatternMatrix(*n, *n, std::move(a_entries));
  if (m.value_or(0) > 0) file.b = PatternMatrix(*n, *m, std::move(b_entries));
  return file;
}

PatternFile read_pattern_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pattern_file(buf.str());
}

std::string serialize_pattern_file(const PatternFile& file) {
  std::ostringstream out;
  out << "n " << file.n() << "\n";
  if (file.b) out << "m " << file.m() << "\n";
  for (const Entry& e : file.a.entries()) out << "a " << e.row + 1 << " " << e.col + 1 << "\n";
  if (file.b) {
    for (const Entry& e : file.b->entries()) out << "b " << e.row + 1 << " " << e.col + 1 << "\n";
  }
  for (const auto& [v, label] : file.names) out << "name " << vertex_name(v) << " " << label << "\n";
  return out.str();
}

std::string display_name(const PatternFile& file, Vertex v) {
  const auto it = file.names.find(v);
  return it == file.names.end() ? vertex_name(v) : it->second;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json names_of(const StateSet& set) {
  json out = json::array();
  for (Index v : set) out.push_back(vertex_name(Vertex::state(v)));
  return out;
}

StateSet states_of(const json& arr) {
  StateSet out;
  for (const auto& name : arr) {
    const Vertex v = parse_vertex(name.get<std::string>());
    if (v.kind != VertexKind::State) throw std::invalid_argument("expected a state vertex");
    out.push_back(v.index);
  }
  return out;
}

json cycle_json(const std::optional<std::vector<StateEdge>>& cycle) {
  if (!cycle) return nullptr;
  json out = json::array();
  for (const StateEdge& e : *cycle) {
    out.push_back({vertex_name(Vertex::state(e.from)), vertex_name(Vertex::state(e.to))});
  }
  return out;
}

std::optional<std::vector<StateEdge>> cycle_from(const json& doc) {
  if (doc.is_null()) return std::nullopt;
  std::vector<StateEdge> out;
  for (const auto& pair : doc) {
    out.push_back({parse_vertex(pair.at(0).get<std::string>()).index,
                   parse_vertex(pair.at(1).get<std::string>()).index});
  }
  return out;
}

json component_list(const std::vector<StateSet>& comps) {
  json out = json::array();
  for (const auto& c : comps) out.push_back(names_of(c));
  return out;
}

std::vector<StateSet> component_list_from(const json& doc) {
  std::vector<StateSet> out;
  for (const auto& c : doc) out.push_back(states_of(c));
  return out;
}

json check_json(const ControllabilityCheck& c) {
  return {{"verdict", c.verdict},
          {"rank_test", c.rank_test},
          {"hautus_test", c.hautus_test},
          {"disagreement", c.disagreement}};
}

ControllabilityCheck check_from(const json& doc) {
  ControllabilityCheck c;
  c.verdict = doc.at("verdict").get<bool>();
  c.rank_test = doc.at("rank_test").get<bool>();
  c.hautus_test = doc.at("hautus_test").get<bool>();
  c.disagreement = doc.at("disagreement").get<bool>();
  return c;
}

std::string set_text(const StateSet& set) {
  std::string out = "{";
  for (Index k = 0; k < set.size(); ++k) {
    if (k) out += ", ";
    out += vertex_name(Vertex::state(set[k]));
  }
  return out + "}";
}

}  // namespace

json to_json(const ZcReport& report) {
  return {{"kind", "zero_controllability"},
          {"verdict", report.verdict},
          {"reachable", names_of(report.reachable)},
          {"unreachable", names_of(report.unreachable)},
          {"cycle_witness", cycle_json(report.cycle_witness)},
          {"nontrivial_unreachable_components",
           component_list(report.nontrivial_unreachable_components)}};
}

ZcReport zc_report_from_json(const json& doc) {
  ZcReport r;
  r.verdict = doc.at("verdict").get<bool>();
  r.reachable = states_of(doc.at("reachable"));
  r.unreachable = states_of(doc.at("unreachable"));
  r.cycle_witness = cycle_from(doc.at("cycle_witness"));
  r.nontrivial_unreachable_components =
      component_list_from(doc.at("nontrivial_unreachable_components"));
  return r;
}

json to_json(const DriverSet& set) {
  return {{"kind", "driver_set"},
          {"drivers", names_of(set.drivers)},
          {"size", set.size()},
          {"valid", set.valid},
          {"minimal", set.minimal},
          {"uncovered_witness", cycle_json(set.uncovered_witness)},
          {"uncovered_components", component_list(set.uncovered_components)},
          {"warning", set.warning ? json(*set.warning) : json(nullptr)}};
}

DriverSet driver_set_from_json(const json& doc) {
  DriverSet d;
  d.drivers = states_of(doc.at("drivers"));
  d.valid = doc.at("valid").get<bool>();
  d.minimal = doc.at("minimal").get<bool>();
  d.uncovered_witness = cycle_from(doc.at("uncovered_witness"));
  d.uncovered_components = component_list_from(doc.at("uncovered_components"));
  if (!doc.at("warning").is_null()) d.warning = doc.at("warning").get<std::string>();
  return d;
}

json to_json(const MonteCarloStats& stats) {
  json outcomes = json::array();
  for (const TrialOutcome& t : stats.outcomes) {
    outcomes.push_back({{"seed", t.seed},
                        {"zero_controllable", check_json(t.zero_controllable)},
                        {"controllable", t.controllable ? check_json(*t.controllable) : json()}});
  }
  return {{"kind", "monte_carlo"},
          {"structural_zero_controllable", stats.structural_zc},
          {"structural_controllable", stats.structural_controllable
                                          ? json(*stats.structural_controllable)
                                          : json(nullptr)},
          {"trials", stats.trials},
          {"zc_agree", stats.zc_agree},
          {"controllable_agree", stats.controllable_agree},
          {"flagged", stats.flagged},
          {"outcomes", outcomes}};
}

MonteCarloStats monte_carlo_stats_from_json(const json& doc) {
  MonteCarloStats s;
  s.structural_zc = doc.at("structural_zero_controllable").get<bool>();
  if (!doc.at("structural_controllable").is_null()) {
    s.structural_controllable = doc.at("structural_controllable").get<bool>();
  }
  s.trials = doc.at("trials").get<Index>();
  s.zc_agree = doc.at("zc_agree").get<Index>();
  s.controllable_agree = doc.at("controllable_agree").get<Index>();
  s.flagged = doc.at("flagged").get<Index>();
  for (const auto& o : doc.at("outcomes")) {
    TrialOutcome t;
    t.seed = o.at("seed").get<std::uint64_t>();
    t.zero_controllable = check_from(o.at("zero_controllable"));
    if (!o.at("controllable").is_null()) t.controllable = check_from(o.at("controllable"));
    s.outcomes.push_back(t);
  }
  return s;
}

json to_json(const SccDecomposition& scc) {
  json comps = json::array();
  for (Index c = 0; c < scc.size(); ++c) {
    comps.push_back({{"id", "C" + std::to_string(c + 1)},
                     {"vertices", names_of(scc.component(c))},
                     {"nontrivial", scc.is_nontrivial(c)}});
  }
  json order = json::array();
  for (const auto& [a, b] : scc.order_pairs()) {
    order.push_back({"C" + std::to_string(a + 1), "C" + std::to_string(b + 1)});
  }
  return {{"components", comps}, {"order", order}};
}

json to_json(const PatternMatrix& p, char symbol) {
  json entries = json::array();
  for (const Entry& e : p.entries()) entries.push_back({e.row + 1, e.col + 1});
  return {{"matrix", std::string(1, symbol)},
          {"rows", p.rows()},
          {"cols", p.cols()},
          {"entries", entries}};
}

// ---------------------------------------------------------------------------
// Text

std::string render_text(const ZcReport& report) {
  std::ostringstream out;
  out << "generically zero controllable: " << (report.verdict ? "yes" : "no") << "\n";
  out << "reachable states X_r: " << set_text(report.reachable) << "\n";
  out << "unreachable states X_u: " << set_text(report.unreachable) << "\n";
  out << "nontrivial components in G_u:";
  if (report.nontrivial_unreachable_components.empty()) out << " none";
  for (const auto& c : report.nontrivial_unreachable_components) out << " " << set_text(c);
  out << "\n";
  if (report.cycle_witness) out << "cycle in G_u: " << format_cycle(*report.cycle_witness) << "\n";
  return out.str();
}

std::string render_text(const DriverSet& set) {
  std::ostringstream out;
  out << "drivers D = " << set_text(set.drivers) << " (size " << set.size() << ")";
  out << (set.valid ? ", valid" : ", invalid");
  if (set.minimal) out << ", minimal";
  out << "\n";
  if (!set.uncovered_components.empty()) {
    out << "  cycles not reached from D:";
    for (const auto& c : set.uncovered_components) out << " " << set_text(c);
    out << "\n";
  }
  if (set.uncovered_witness) {
    out << "  cycle in G_u^D: " << format_cycle(*set.uncovered_witness) << "\n";
  }
  if (set.warning) out << "  warning: " << *set.warning << "\n";
  return out.str();
}

std::string render_text(const MonteCarloStats& stats) {
  std::ostringstream out;
  out << "structural verdict (zero controllable): " << (stats.structural_zc ? "yes" : "no") << "\n";
  out << "numeric agreement: " << stats.zc_agree << "/" << stats.trials << "\n";
  if (stats.structural_controllable) {
    out << "structural verdict (controllable): " << (*stats.structural_controllable ? "yes" : "no")
        << "\n";
    out << "numeric agreement (controllable): " << stats.controllable_agree << "/" << stats.trials
        << "\n";
  }
  out << "flagged trials (rank/Hautus disagreement): " << stats.flagged << "\n";
  for (const TrialOutcome& t : stats.outcomes) {
    const bool flagged = t.zero_controllable.disagreement ||
                         (t.controllable && t.controllable->disagreement);
    if (flagged) out << "  flagged seed " << t.seed << "\n";
  }
  return out.str();
}

std::string render_text(const PatternMatrix& p) {
  std::ostringstream out;
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) out << (j ? " " : "") << (p.contains(i, j) ? '*' : '0');
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT

std::string export_dot(const SystemGraph& graph, const SccDecomposition& scc,
                       const DotOverlay& overlay) {
  const Index n = graph.num_states();
  std::optional<std::vector<bool>> reached;
  std::vector<bool> driver(n, false);

  if (const auto* report = std::get_if<ZcReport>(&overlay)) {
    reached.emplace(n, false);
    for (Index v : report->reachable) (*reached)[v] = true;
  } else if (const auto* set = std::get_if<DriverSet>(&overlay)) {
    reached.emplace(n, false);
    for (Index v : reachable_from_states(graph, set->drivers)) (*reached)[v] = true;
    for (Index v : set->drivers) driver[v] = true;
  }

  std::ostringstream out;
  out << "digraph G {\n";
  if (n + graph.num_inputs() > 0) out << "  rankdir=LR;\n";
  for (Index c = 0; c < scc.size(); ++c) {
    const bool nontrivial = scc.is_nontrivial(c);
    out << "  subgraph cluster_" << c + 1 << " {\n";
    out << "    label=\"C" << c + 1 << (nontrivial ? " (nontrivial)" : " (trivial)") << "\";\n";
    if (nontrivial) out << "    peripheries=2;\n";
    for (Index v : scc.component(c)) {
      std::vector<std::string> attrs;
      if (driver[v]) attrs.push_back("shape=doublecircle");
      if (reached) {
        attrs.push_back((*reached)[v] ? "style=filled, fillcolor=\"palegreen\""
                                      : "style=\"filled,dashed\", fillcolor=\"mistyrose\"");
      }
      out << "    " << vertex_name(Vertex::state(v));
      if (!attrs.empty()) {
        out << " [";
        for (Index k = 0; k < attrs.size(); ++k) out << (k ? ", " : "") << attrs[k];
        out << "]";
      }
      out << ";\n";
    }
    out << "  }\n";
  }
  for (Index j = 0; j < graph.num_inputs(); ++j) {
    out << "  " << vertex_name(Vertex::input(j)) << " [shape=box];\n";
  }
  for (const StateEdge& e : graph.state_edges()) {
    out << "  " << vertex_name(Vertex::state(e.from)) << " -> "
        << vertex_name(Vertex::state(e.to)) << ";\n";
  }
  for (const Entry& e : graph.b().entries()) {
    out << "  " << vertex_name(Vertex::input(e.col)) << " -> "
        << vertex_name(Vertex::state(e.row)) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace zcnet
