#include "djp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace djp {

ParseError::ParseError(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long to_int(std::string_view tok, int line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

double to_double(std::string_view tok, int line) {
  try {
    std::size_t used = 0;
    const std::string s(tok);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError(line, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(line, "bad number '" + std::string(tok) + "'");
  }
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++lineno;
    auto toks = split_ws(line);
    if (!toks.empty() && toks[0][0] != '#') fn(lineno, toks);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  Instance inst;
  bool header = false;
  long long n = 0, m = 0, k = 0;
  long long edges_read = 0;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& t) {
    if (t[0] == "p") {
      if (header) throw ParseError(line, "duplicate header");
      if (t.size() != 6 || t[1] != "djp") throw ParseError(line, "header must be 'p djp <edp|ndp> <n> <m> <k>'");
      if (t[2] == "edp") inst.mode = Mode::edge_disjoint;
      else if (t[2] == "ndp") inst.mode = Mode::node_disjoint;
      else throw ParseError(line, "mode must be edp or ndp");
      n = to_int(t[3], line);
      m = to_int(t[4], line);
      k = to_int(t[5], line);
      if (n < 0 || m < 0 || k < 0) throw ParseError(line, "negative count");
      if (n >= (1LL << 31) - 1) throw ParseError(line, "too many nodes");
      inst.graph = Graph(static_cast<int>(n));
      header = true;
      return;
    }
    if (!header) throw ParseError(line, "record before header");
    if (t[0] == "e") {
      if (t.size() != 3) throw ParseError(line, "edge line needs two endpoints");
      const auto u = to_int(t[1], line), v = to_int(t[2], line);
      if (u < 1 || u > n || v < 1 || v > n) throw ParseError(line, "edge endpoint out of range");
      inst.graph.add_edge(static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1));
      ++edges_read;
    } else if (t[0] == "q") {
      if (t.size() != 3) throw ParseError(line, "pair line needs two terminals");
      const auto s = to_int(t[1], line), u = to_int(t[2], line);
      if (s < 1 || s > n || u < 1 || u > n) throw ParseError(line, "terminal out of range");
      if (s == u) throw ParseError(line, "terminal pair with s == t");
      inst.pairs.push_back({static_cast<NodeId>(s - 1), static_cast<NodeId>(u - 1)});
    } else {
      throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
    }
  });
  if (!header) throw ParseError(0, "missing header");
  if (edges_read != m) throw ParseError(0, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges_read));
  if (static_cast<long long>(inst.pairs.size()) != k)
    throw ParseError(0, "header declares " + std::to_string(k) + " pairs, found " + std::to_string(inst.pairs.size()));
  return inst;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance read_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

void write_instance(std::ostream& os, const Instance& inst, std::string_view comment) {
  while (!comment.empty()) {
    const auto cut = comment.find('\n');
    os << "# " << comment.substr(0, cut) << '\n';
    comment = cut == std::string_view::npos ? std::string_view{} : comment.substr(cut + 1);
  }
  const auto edges = inst.graph.live_edges();
  os << "p djp " << to_string(inst.mode) << ' ' << inst.graph.node_count() << ' ' << edges.size() << ' '
     << inst.pairs.size() << '\n';
  for (EdgeId e : edges) {
    const auto [a, b] = inst.graph.ends(e);
    os << "e " << a + 1 << ' ' << b + 1 << '\n';
  }
  for (const auto& [s, t] : inst.pairs) os << "q " << s + 1 << ' ' << t + 1 << '\n';
}

std::string format_instance(const Instance& inst, std::string_view comment) {
  std::ostringstream os;
  write_instance(os, inst, comment);
  return os.str();
}

RoutingFile parse_routing(std::string_view text, const Graph& g) {
  RoutingFile out;
  std::set<EdgeId> used;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& t) {
    if (t[0] == "value") {
      if (t.size() != 2) throw ParseError(line, "value line needs one integer");
      out.value = static_cast<int>(to_int(t[1], line));
    } else if (t[0] == "congestion") {
      if (t.size() != 2) throw ParseError(line, "congestion line needs one integer");
      out.congestion = static_cast<int>(to_int(t[1], line));
    } else if (t[0] == "r") {
      std::size_t end = t.size();
      std::optional<double> weight;
      if (t.size() >= 2 && t[t.size() - 2] == "w") {
        weight = to_double(t.back(), line);
        end -= 2;
      }
      if (end < 3) throw ParseError(line, "route line needs a pair and at least two nodes");
      RoutedPath rp;
      rp.pair = static_cast<int>(to_int(t[1], line)) - 1;
      for (std::size_t i = 2; i < end; ++i) {
        const auto v = to_int(t[i], line);
        if (v < 1 || v > g.node_count()) throw ParseError(line, "node out of range");
        rp.path.nodes.push_back(static_cast<NodeId>(v - 1));
      }
      for (std::size_t i = 0; i + 1 < rp.path.nodes.size(); ++i) {
        const NodeId a = rp.path.nodes[i], b = rp.path.nodes[i + 1];
        EdgeId pick = kNoEdge;
        for (EdgeId e : g.incident_edges(a)) {
          if (g.other(e, a) != b) continue;
          if (pick == kNoEdge) pick = e;
          if (!used.contains(e)) {
            pick = e;
            break;
          }
        }
        if (pick == kNoEdge) throw ParseError(line, "nodes " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " are not adjacent");
        rp.path.edges.push_back(pick);
      }
      used.insert(rp.path.edges.begin(), rp.path.edges.end());
      out.routing.entries.push_back(std::move(rp));
      if (weight) out.weights.push_back(*weight);
    }
    // other keys are diagnostics
  });
  return out;
}

RoutingFile read_routing_file(const std::string& path, const Graph& g) { return parse_routing(read_text_file(path), g); }

void write_routing(std::ostream& os, const Routing& r, int congestion, std::span<const double> weights) {
  os << "value " << r.size() << '\n';
  os << "congestion " << congestion << '\n';
  for (int i = 0; i < r.size(); ++i) {
    const auto& entry = r.entries[i];
    os << "r " << entry.pair + 1;
    for (NodeId v : entry.path.nodes) os << ' ' << v + 1;
    if (!weights.empty()) os << " w " << std::setprecision(12) << weights[i];
    os << '\n';
  }
}

}  // namespace djp
