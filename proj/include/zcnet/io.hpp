#ifndef ZCNET_IO_HPP
#define ZCNET_IO_HPP

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zcnet/drivers.hpp"
#include "zcnet/graph.hpp"
#include "zcnet/numeric.hpp"
#include "zcnet/pattern.hpp"
#include "zcnet/structural.hpp"

namespace zcnet {

/// Malformed pattern file; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Contents of a pattern file:
///
///   # comment
///   n 5
///   m 1
///   a 1 1          a_11 != 0
///   b 4 1          b_41 != 0
///   name x5 tank   optional label for a vertex
struct PatternFile {
  PatternMatrix a;
  std::optional<PatternMatrix> b;  ///< present iff m >= 1
  std::map<Vertex, std::string> names;
  std::vector<std::string> warnings;

  Index n() const { return a.rows(); }
  Index m() const { return b ? b->cols() : 0; }
};

PatternFile parse_pattern_file(std::string_view text);
PatternFile read_pattern_file(const std::string& path);
std::string serialize_pattern_file(const PatternFile& file);

/// Vertex label: the symbolic name when one was given, else "x3" / "u1".
std::string display_name(const PatternFile& file, Vertex v);

// Machine-readable report documents. Vertex sets are written as names.
nlohmann::json to_json(const ZcReport& report);
ZcReport zc_report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const DriverSet& set);
DriverSet driver_set_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const MonteCarloStats& stats);
MonteCarloStats monte_carlo_stats_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const SccDecomposition& scc);
nlohmann::json to_json(const PatternMatrix& p, char symbol);

// Human-readable renderings.
std::string render_text(const ZcReport& report);
std::string render_text(const DriverSet& set);
std::string render_text(const MonteCarloStats& stats);
std::string render_text(const PatternMatrix& p);

using DotOverlay = std::variant<std::monostate, ZcReport, DriverSet>;

/// Graphviz rendering: one cluster per SCC (nontrivial ones with
/// peripheries=2), reachable vs unreachable fill styles when an overlay is
/// given, drivers drawn as doublecircle.
std::string export_dot(const SystemGraph& graph, const SccDecomposition& scc,
                       const DotOverlay& overlay = {});

}  // namespace zcnet

#endif  // ZCNET_IO_HPP
