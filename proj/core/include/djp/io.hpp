#pragma once

// Line-based text formats. Files are 1-indexed, memory is 0-indexed.
//
//   instance:  p djp <edp|ndp> <n> <m> <k>
//              e <u> <v>        (m lines)
//              q <s> <t>        (k lines)
//   routing:   value <count>
//              congestion <int>
//              r <pair> <v0> <v1> ... <vL> [w <weight>]
//
// '#' starts a comment line. Routing files may carry extra `<key> <value>`
// diagnostic lines, which readers skip.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "djp/graph.hpp"

namespace djp {

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what);
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

[[nodiscard]] Instance parse_instance(std::string_view text);
[[nodiscard]] Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& os, const Instance& inst, std::string_view comment = {});
[[nodiscard]] std::string format_instance(const Instance& inst, std::string_view comment = {});

struct RoutingFile {
  Routing routing;
  std::optional<int> value;
  std::optional<int> congestion;
  /// Optional per-entry weights (present when the file lists `w <weight>`).
  std::vector<double> weights;
};

/// Edges are resolved against `g`: between consecutive nodes the lowest-id
/// live edge not yet used by an earlier path in the file is chosen, falling
/// back to the lowest-id edge.
[[nodiscard]] RoutingFile parse_routing(std::string_view text, const Graph& g);
[[nodiscard]] RoutingFile read_routing_file(const std::string& path, const Graph& g);

/// Writes the value/congestion header and one `r` line per entry.
void write_routing(std::ostream& os, const Routing& r, int congestion, std::span<const double> weights = {});

[[nodiscard]] std::string read_text_file(const std::string& path);

}  // namespace djp
