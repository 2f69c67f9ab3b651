#include "djp/ndp_fpt.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <thread>

#include "djp/fvs.hpp"

namespace djp {

namespace {

constexpr int kNeg = INT_MIN / 4;

void check_normalized_ndp(const Instance& inst) {
  if (inst.mode != Mode::node_disjoint) throw Error("expected a node-disjoint instance");
  std::vector<char> seen(static_cast<std::size_t>(inst.graph.node_count()), 0);
  for (const auto& [s, t] : inst.pairs) {
    for (NodeId x : {s, t}) {
      if (!inst.graph.valid_node(x) || inst.graph.degree(x) != 1 || seen[x])
        throw Error("instance is not normalized: terminals must be distinct leaves");
      seen[x] = 1;
    }
  }
}

// One essential pair or off-R pair handed to the DP.
struct DpPair {
  NodeId a = kNoNode, b = kNoNode;
  bool essential = false;
};

enum Kind : std::uint8_t { kNone, kBase, kKeep, kUp, kJoin, kClose };

struct Choice {
  Kind kind = kNone;
  std::uint32_t left = 0, right = 0;  // table keys the entry was built from
  int pair = -1;
};

struct Entry {
  std::uint32_t key = 0;  // mask * states + state
  int value = 0;
  Choice choice;
};

// Sparse table sorted by key; absent keys are minus infinity.
using Table = std::vector<Entry>;

struct Portion {
  int pair = -1;  // index into the DpPair list
  NodeId from = kNoNode;
  std::vector<NodeId> nodes;
};

struct Piece {
  std::vector<Portion> portions;
  std::vector<NodeId> dangling;
};

// Tree DP over the rooted forest. States per (mask of realized essential
// pairs): 0 = node free, 1 = any configuration without a dangling path,
// 2 + u = a path from an anchor of token u dangles at the node.
class Dp {
 public:
  Dp(const PreparedNdp& prep, std::vector<DpPair> pairs, bool track)
      : prep_(prep), pairs_(std::move(pairs)), track_(track) {
    for (const DpPair& p : pairs_) {
      if (p.essential) ++essential_;
      token(p.a);
      token(p.b);
    }
    if (essential_ > 20) throw Error("too many essential pairs for the DP");
    const int tokens = static_cast<int>(tokens_.size());
    full_ = (1u << essential_) - 1;
    states_ = 2 + static_cast<std::uint32_t>(tokens);
    link_.assign(static_cast<std::size_t>(tokens * tokens), -1);
    bit_.assign(pairs_.size(), -1);
    by_token_.resize(tokens_.size());
    int bit = 0;
    for (int i = 0; i < static_cast<int>(pairs_.size()); ++i) {
      const DpPair& p = pairs_[i];
      const int ta = token_index(p.a), tb = token_index(p.b);
      if (p.essential) bit_[i] = bit++;
      link_[ta * tokens + tb] = link_[tb * tokens + ta] = i;
      by_token_[ta].push_back({i, tb});
      by_token_[tb].push_back({i, ta});
    }
    anchored_.resize(static_cast<std::size_t>(prep_.graph.node_count()));
    for (int t = 0; t < tokens; ++t) {
      const NodeId u = tokens_[t];
      if (prep_.is_r[u]) {
        for (EdgeId e : prep_.graph.incident_edges(u)) anchored_[prep_.graph.other(e, u)].push_back(t);
      } else {
        anchored_[u].push_back(t);
      }
    }
    for (auto& list : anchored_) std::sort(list.begin(), list.end());
    dense_.assign(static_cast<std::size_t>((full_ + 1) * states_), -1);
  }

  std::optional<int> run() {
    const int n = prep_.graph.node_count();
    final_.assign(static_cast<std::size_t>(n), {});
    if (track_) steps_.assign(static_cast<std::size_t>(n), {});
    for (NodeId v : prep_.post_order) compute(v);
    const Entry* e = find(final_[prep_.root], full_ * states_);
    if (!e) return std::nullopt;
    return e->value;
  }

  bool monotone() const {
    for (NodeId v : prep_.post_order)
      for (const Table& tab : steps_[v])
        for (const Entry& e : tab) {
          const std::uint32_t base = e.key - e.key % states_;
          const Entry* free = find(tab, base);
          const Entry* blocked = find(tab, base + 1);
          const int free_v = free ? free->value : kNeg;
          const int blocked_v = blocked ? blocked->value : kNeg;
          if (blocked_v < free_v) return false;
          if (e.key % states_ >= 2 && e.value > free_v) return false;
        }
    return true;
  }

  std::vector<Portion> portions() const {
    Piece piece = collect(prep_.root, static_cast<int>(prep_.children[prep_.root].size()), full_ * states_);
    return std::move(piece.portions);
  }

  const std::vector<DpPair>& pairs() const { return pairs_; }

 private:
  struct Link {
    int pair, other;
  };

  void token(NodeId u) {
    if (std::find(tokens_.begin(), tokens_.end(), u) == tokens_.end()) tokens_.push_back(u);
  }
  int token_index(NodeId u) const {
    return static_cast<int>(std::find(tokens_.begin(), tokens_.end(), u) - tokens_.begin());
  }
  bool is_anchor(int tok, NodeId v) const {
    return std::binary_search(anchored_[v].begin(), anchored_[v].end(), tok);
  }
  static const Entry* find(const Table& tab, std::uint32_t key) {
    auto it = std::lower_bound(tab.begin(), tab.end(), key, [](const Entry& e, std::uint32_t k) { return e.key < k; });
    return it != tab.end() && it->key == key ? &*it : nullptr;
  }

  // Scratch accumulation: dense_ maps a key to its slot in work_ or -1.
  void relax(std::uint32_t key, int value, const Choice& c) {
    int& slot = dense_[key];
    if (slot < 0) {
      slot = static_cast<int>(work_.size());
      work_.push_back(Entry{key, value, c});
    } else if (value > work_[slot].value) {
      work_[slot].value = value;
      work_[slot].choice = c;
    }
  }

  Table flush() {
    for (const Entry& e : work_) dense_[e.key] = -1;
    Table out = std::move(work_);
    work_.clear();
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
    if (!track_)
      for (Entry& e : out) e.choice = Choice{};
    return out;
  }

  void close(NodeId v) {
    const std::size_t count = work_.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Entry e = work_[i];
      const std::uint32_t s = e.key % states_;
      if (s < 2) continue;
      const std::uint32_t m = e.key / states_;
      for (const Link& l : by_token_[s - 2]) {
        if (!is_anchor(l.other, v)) continue;
        const Choice c{kClose, e.key, 0, l.pair};
        const int b = bit_[l.pair];
        if (b >= 0) {
          if (!(m >> b & 1u)) relax((m | (1u << b)) * states_ + 1, e.value, c);
        } else {
          relax(m * states_ + 1, e.value + 1, c);
        }
      }
    }
  }

  void compute(NodeId v) {
    const bool is_root = v == prep_.root;
    relax(0, 0, Choice{kBase});
    relax(1, 0, Choice{kBase});
    if (!is_root) {
      for (int t : anchored_[v]) relax(2 + static_cast<std::uint32_t>(t), 0, Choice{kBase});
      close(v);
    }
    Table tab = flush();
    for (NodeId c : prep_.children[v]) {
      merge(tab, final_[c], is_root);
      if (!is_root) close(v);
      if (track_) steps_[v].push_back(std::move(tab));
      tab = flush();
      if (!track_) Table().swap(final_[c]);
    }
    if (track_) steps_[v].push_back(tab);
    final_[v] = std::move(tab);
  }

  void merge(const Table& left, const Table& right, bool is_root) {
    const int tokens = static_cast<int>(tokens_.size());
    for (const Entry& l : left) {
      const std::uint32_t m1 = l.key / states_, s1 = l.key % states_;
      for (const Entry& r : right) {
        const std::uint32_t m2 = r.key / states_, s2 = r.key % states_;
        if (m1 & m2) continue;
        const std::uint32_t m = m1 | m2;
        const int sum = l.value + r.value;
        if (s2 == 1) {
          if (!is_root || s1 < 2) relax(m * states_ + s1, sum, Choice{kKeep, l.key, r.key});
        } else if (is_root || s2 == 0) {
          continue;
        } else if (s1 == 0) {
          relax(m * states_ + s2, sum, Choice{kUp, l.key, r.key});
        } else if (s1 >= 2) {
          const int p = link_[(s1 - 2) * tokens + (s2 - 2)];
          if (p < 0) continue;
          const Choice c{kJoin, l.key, r.key, p};
          const int b = bit_[p];
          if (b >= 0) {
            if (!(m >> b & 1u)) relax((m | (1u << b)) * states_ + 1, sum, c);
          } else {
            relax(m * states_ + 1, sum + 1, c);
          }
        }
      }
    }
  }

  const Table& table_at(NodeId v, int i) const { return steps_[v][static_cast<std::size_t>(i)]; }

  Piece collect(NodeId v, int i, std::uint32_t key) const {
    const Entry* e = find(table_at(v, i), key);
    if (!e) throw Error("DP backtracking reached an unset entry");
    const Choice& c = e->choice;
    const std::uint32_t s = key % states_;
    Piece out;
    switch (c.kind) {
      case kNone:
        throw Error("DP backtracking reached an unset entry");
      case kBase:
        if (s >= 2) out.dangling.push_back(v);
        return out;
      case kClose: {
        Piece p = collect(v, i, c.left);
        out.portions = std::move(p.portions);
        out.portions.push_back(Portion{c.pair, tokens_[c.left % states_ - 2], std::move(p.dangling)});
        return out;
      }
      default:
        break;
    }
    const NodeId child = prep_.children[v][static_cast<std::size_t>(i - 1)];
    const int child_steps = static_cast<int>(prep_.children[child].size());
    Piece l = collect(v, i - 1, c.left);
    Piece r = collect(child, child_steps, c.right);
    out.portions = std::move(l.portions);
    for (auto& p : r.portions) out.portions.push_back(std::move(p));
    if (c.kind == kKeep) {
      out.dangling = std::move(l.dangling);
    } else if (c.kind == kUp) {
      out.dangling = std::move(r.dangling);
      out.dangling.push_back(v);
    } else {
      std::vector<NodeId> nodes = std::move(l.dangling);
      nodes.insert(nodes.end(), r.dangling.rbegin(), r.dangling.rend());
      out.portions.push_back(Portion{c.pair, tokens_[c.left % states_ - 2], std::move(nodes)});
    }
    return out;
  }

  const PreparedNdp& prep_;
  std::vector<DpPair> pairs_;
  bool track_;
  int essential_ = 0;
  std::uint32_t full_ = 0;
  std::uint32_t states_ = 2;
  std::vector<NodeId> tokens_;
  std::vector<int> link_;
  std::vector<int> bit_;
  std::vector<std::vector<Link>> by_token_;
  std::vector<std::vector<int>> anchored_;
  std::vector<int> dense_;
  Table work_;
  std::vector<Table> final_;
  std::vector<std::vector<Table>> steps_;
};

std::vector<DpPair> dp_pairs(const Instance& inst, std::span<const Chain> chains, std::span<const int> off_r) {
  std::vector<DpPair> out;
  for (const Chain& c : chains) {
    NodeId prev = inst.pairs[c.pair].s;
    for (NodeId r : c.r_nodes) {
      out.push_back({prev, r, true});
      prev = r;
    }
    out.push_back({prev, inst.pairs[c.pair].t, true});
  }
  for (int p : off_r) out.push_back({inst.pairs[p].s, inst.pairs[p].t, false});
  return out;
}

std::vector<int> off_r_pairs(const Instance& inst, const EssentialStructure& s) {
  std::vector<char> on(static_cast<std::size_t>(inst.pair_count()), 0);
  for (const Chain& c : s.chains) on.at(c.pair) = 1;
  std::vector<int> out;
  for (int i = 0; i < inst.pair_count(); ++i)
    if (!on[i]) out.push_back(i);
  return out;
}

void validate_structure(const PreparedNdp& prep, const EssentialStructure& s) {
  std::vector<char> used_pair(static_cast<std::size_t>(prep.source.pair_count()), 0);
  std::vector<char> used_r(static_cast<std::size_t>(prep.graph.node_count()), 0);
  for (const Chain& c : s.chains) {
    if (c.pair < 0 || c.pair >= prep.source.pair_count() || used_pair[c.pair])
      throw Error("structure names a pair twice or an unknown pair");
    used_pair[c.pair] = 1;
    if (c.r_nodes.empty()) throw Error("structure has an empty chain");
    for (NodeId r : c.r_nodes) {
      if (!prep.graph.valid_node(r) || !prep.is_r[r] || used_r[r])
        throw Error("structure chain repeats a node or leaves R");
      used_r[r] = 1;
    }
  }
}

// Trees of F touched by the anchors of a token.
std::vector<int> trees_of(const PreparedNdp& prep, NodeId u) {
  std::vector<int> out;
  if (prep.is_r[u]) {
    for (EdgeId e : prep.graph.incident_edges(u)) out.push_back(prep.tree_of[prep.graph.other(e, u)]);
  } else {
    out.push_back(prep.tree_of[u]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool share_tree(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

Routing assemble(const PreparedNdp& prep, const std::vector<DpPair>& pairs, std::vector<Portion> portions,
                 std::span<const Chain> chains, std::span<const int> off_r) {
  std::vector<const Portion*> of_pair(pairs.size(), nullptr);
  for (const Portion& p : portions) of_pair.at(p.pair) = &p;
  auto oriented = [&](int idx) {
    const Portion* p = of_pair.at(idx);
    if (!p) throw Error("DP backtracking lost a path");
    std::vector<NodeId> nodes = p->nodes;
    if (p->from != pairs[idx].a) std::reverse(nodes.begin(), nodes.end());
    return nodes;
  };
  auto to_source = [&](const std::vector<NodeId>& nodes) {
    std::vector<NodeId> out;
    for (NodeId x : nodes)
      if (prep.origin[x] != kNoNode) out.push_back(prep.origin[x]);
    return path_from_nodes(prep.source.graph, out);
  };
  Routing routing;
  int idx = 0;
  for (const Chain& c : chains) {
    std::vector<NodeId> nodes;
    for (std::size_t j = 0; j <= c.r_nodes.size(); ++j) {
      const auto part = oriented(idx++);
      nodes.insert(nodes.end(), part.begin(), part.end());
      if (j < c.r_nodes.size()) nodes.push_back(c.r_nodes[j]);
    }
    routing.entries.push_back(RoutedPath{c.pair, to_source(nodes)});
  }
  for (int p : off_r) {
    if (of_pair.at(idx)) routing.entries.push_back(RoutedPath{p, to_source(oriented(idx))});
    ++idx;
  }
  std::sort(routing.entries.begin(), routing.entries.end(),
            [](const RoutedPath& a, const RoutedPath& b) { return a.pair < b.pair; });
  return routing;
}

struct Shared {
  std::atomic<int> best{-1};
  std::atomic<int> exit_task{INT_MAX};  // lowest task index that routed every pair
  std::atomic<long long> structures{0};
  std::atomic<long long> dp_runs{0};
};

struct TaskResult {
  int value = -1;
  EssentialStructure structure;
};

class Search {
 public:
  Search(const PreparedNdp& prep, Shared& shared, int task)
      : prep_(prep), inst_(prep.source), shared_(shared), task_(task), k_(inst_.pair_count()),
        used_r_(static_cast<std::size_t>(prep.graph.node_count()), 0),
        in_chain_(static_cast<std::size_t>(k_), 0),
        unused_r_(static_cast<int>(prep.r_nodes.size())) {
    for (const auto& [s, t] : inst_.pairs) {
      source_trees_.push_back(trees_of(prep, s));
      sink_trees_.push_back(trees_of(prep, t));
      same_tree_.push_back(prep.tree_of[s] == prep.tree_of[t]);
    }
    for (NodeId r : prep.r_nodes) r_trees_.push_back(trees_of(prep, r));
  }

  // Runs the subtree where pair 0 takes the given option (nullopt = off R).
  TaskResult run(const std::optional<std::vector<NodeId>>& first) {
    if (k_ == 0) {
      record(0);
      return result_;
    }
    if (first) {
      for (NodeId r : *first) used_r_[r] = 1;
      unused_r_ -= static_cast<int>(first->size());
      in_chain_[0] = 1;
      chains_.push_back(Chain{0, *first});
    }
    if (auto val = eval()) after(0, *val);
    return result_;
  }

 private:
  bool stopped() const {
    return shared_.exit_task.load(std::memory_order_relaxed) < task_ || result_.value == k_;
  }

  bool promising(int bound) const {
    return bound > result_.value && bound >= shared_.best.load(std::memory_order_relaxed);
  }

  // Every pair outside a chain is offered to the DP as a pair to route in F.
  std::optional<int> eval(std::span<const std::pair<NodeId, NodeId>> extra = {}) {
    shared_.dp_runs.fetch_add(1, std::memory_order_relaxed);
    std::vector<int> off;
    for (int p = 0; p < k_; ++p)
      if (!in_chain_[p] && same_tree_[p]) off.push_back(p);
    std::vector<DpPair> pairs = dp_pairs(inst_, chains_, off);
    for (const auto& [a, b] : extra) pairs.push_back({a, b, true});
    Dp dp(prep_, std::move(pairs), false);
    return dp.run();
  }

  void record(int value) {
    shared_.structures.fetch_add(1, std::memory_order_relaxed);
    if (value > result_.value) {
      result_.value = value;
      result_.structure = EssentialStructure{chains_};
      int cur = shared_.best.load();
      while (value > cur && !shared_.best.compare_exchange_weak(cur, value)) {
      }
      if (value == k_) {
        int cur_task = shared_.exit_task.load();
        while (task_ < cur_task && !shared_.exit_task.compare_exchange_weak(cur_task, task_)) {
        }
      }
    }
  }

  // Chains beyond the decided ones each need a fresh R node.
  int bound(int idx, int val, int chains) const { return chains + val + std::min(k_ - idx - 1, unused_r_); }

  // Pairs up to `idx` are decided and the DP over them evaluates to `val`.
  void after(int idx, int val) {
    const int chains = static_cast<int>(chains_.size());
    if (idx == k_ - 1) {
      record(chains + val);
      return;
    }
    if (!promising(bound(idx, val, chains)) || stopped()) return;
    // Off R first: the DP value does not change.
    after(idx + 1, val);
    if (stopped()) return;
    std::vector<NodeId> seq;
    extend(idx + 1, seq);
  }

  void extend(int idx, std::vector<NodeId>& seq) {
    const NodeId s = inst_.pairs[idx].s;
    in_chain_[idx] = 1;
    for (std::size_t i = 0; i < prep_.r_nodes.size() && !stopped(); ++i) {
      const NodeId r = prep_.r_nodes[i];
      if (used_r_[r]) continue;
      const std::vector<int>& prev_trees = seq.empty() ? source_trees_[idx] : r_trees_[index_of(seq.back())];
      if (!share_tree(r_trees_[i], prev_trees)) continue;
      seq.push_back(r);
      used_r_[r] = 1;
      --unused_r_;
      std::vector<std::pair<NodeId, NodeId>> partial;
      NodeId prev = s;
      for (NodeId x : seq) {
        partial.emplace_back(prev, x);
        prev = x;
      }
      const int chains = static_cast<int>(chains_.size()) + 1;
      if (auto val = eval(partial); val && promising(bound(idx, *val, chains))) {
        if (share_tree(r_trees_[i], sink_trees_[idx])) {
          chains_.push_back(Chain{idx, seq});
          if (auto full = eval()) after(idx, *full);
          chains_.pop_back();
        }
        if (!stopped()) extend(idx, seq);
      }
      ++unused_r_;
      used_r_[r] = 0;
      seq.pop_back();
    }
    in_chain_[idx] = 0;
  }

  std::size_t index_of(NodeId r) const {
    return static_cast<std::size_t>(std::lower_bound(prep_.r_nodes.begin(), prep_.r_nodes.end(), r) -
                                    prep_.r_nodes.begin());
  }

  const PreparedNdp& prep_;
  const Instance& inst_;
  Shared& shared_;
  int task_;
  int k_;
  std::vector<char> used_r_;
  std::vector<char> in_chain_;
  int unused_r_;
  std::vector<Chain> chains_;
  std::vector<std::vector<int>> source_trees_, sink_trees_;
  std::vector<char> same_tree_;
  std::vector<std::vector<int>> r_trees_;
  TaskResult result_;
};

// Chains for pair 0 that pass the tree test, in the order the search would
// meet them.
void first_chains(const PreparedNdp& prep, int pair, std::vector<NodeId>& seq, std::vector<char>& used,
                  std::vector<std::vector<NodeId>>& out) {
  const auto [s, t] = prep.source.pairs[pair];
  const auto prev_trees = trees_of(prep, seq.empty() ? s : seq.back());
  const auto sink = trees_of(prep, t);
  for (NodeId r : prep.r_nodes) {
    if (used[r]) continue;
    const auto rt = trees_of(prep, r);
    if (!share_tree(rt, prev_trees)) continue;
    seq.push_back(r);
    used[r] = 1;
    if (share_tree(rt, sink)) out.push_back(seq);
    first_chains(prep, pair, seq, used, out);
    used[r] = 0;
    seq.pop_back();
  }
}

void enumerate_from(int idx, int k, std::span<const NodeId> r_nodes, std::vector<char>& used, EssentialStructure& cur,
                    const std::function<bool(const EssentialStructure&)>& visit, long long& count, bool& stop);

void extend_chain(int idx, int k, std::span<const NodeId> r_nodes, std::vector<char>& used, EssentialStructure& cur,
                  std::vector<NodeId>& seq, const std::function<bool(const EssentialStructure&)>& visit,
                  long long& count, bool& stop) {
  for (std::size_t i = 0; i < r_nodes.size() && !stop; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    seq.push_back(r_nodes[i]);
    cur.chains.push_back(Chain{idx, seq});
    enumerate_from(idx + 1, k, r_nodes, used, cur, visit, count, stop);
    cur.chains.pop_back();
    extend_chain(idx, k, r_nodes, used, cur, seq, visit, count, stop);
    seq.pop_back();
    used[i] = 0;
  }
}

void enumerate_from(int idx, int k, std::span<const NodeId> r_nodes, std::vector<char>& used, EssentialStructure& cur,
                    const std::function<bool(const EssentialStructure&)>& visit, long long& count, bool& stop) {
  if (stop) return;
  if (idx == k) {
    ++count;
    if (!visit(cur)) stop = true;
    return;
  }
  enumerate_from(idx + 1, k, r_nodes, used, cur, visit, count, stop);
  std::vector<NodeId> seq;
  extend_chain(idx, k, r_nodes, used, cur, seq, visit, count, stop);
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> essential_pairs(const Instance& inst, const EssentialStructure& s) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const DpPair& p : dp_pairs(inst, s.chains, {})) out.emplace_back(p.a, p.b);
  return out;
}

long long enumerate_essential_structures(int k, std::span<const NodeId> r_nodes,
                                         const std::function<bool(const EssentialStructure&)>& visit) {
  std::vector<char> used(r_nodes.size(), 0);
  EssentialStructure cur;
  long long count = 0;
  bool stop = false;
  enumerate_from(0, k, r_nodes, used, cur, visit, count, stop);
  return count;
}

PreparedNdp preprocess_ndp(const Instance& inst, std::span<const NodeId> r_nodes) {
  check_normalized_ndp(inst);
  PreparedNdp prep;
  prep.source = inst;
  const Graph simple = simplified(inst.graph);
  const int n = simple.node_count();
  prep.r_nodes.assign(r_nodes.begin(), r_nodes.end());
  std::sort(prep.r_nodes.begin(), prep.r_nodes.end());
  prep.r_nodes.erase(std::unique(prep.r_nodes.begin(), prep.r_nodes.end()), prep.r_nodes.end());
  std::vector<char> terminal(static_cast<std::size_t>(n), 0);
  for (const auto& [s, t] : inst.pairs) terminal[s] = terminal[t] = 1;
  for (NodeId r : prep.r_nodes) {
    if (!simple.valid_node(r)) throw Error("feedback vertex set names an unknown node");
    if (terminal[r]) throw Error("feedback vertex set contains a terminal");
  }
  if (!is_feedback_vertex_set(simple, prep.r_nodes)) throw Error("R is not a feedback vertex set");

  prep.graph = Graph(n);
  prep.origin.resize(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) prep.origin[v] = v;
  prep.is_r.assign(static_cast<std::size_t>(n), 0);
  for (NodeId r : prep.r_nodes) prep.is_r[r] = 1;
  for (EdgeId e : simple.live_edges()) {
    const auto [a, b] = simple.ends(e);
    if (prep.is_r[a] || prep.is_r[b]) {
      const NodeId x = prep.graph.add_node();
      prep.origin.push_back(kNoNode);
      prep.is_r.push_back(0);
      prep.graph.add_edge(a, x);
      prep.graph.add_edge(x, b);
    } else {
      prep.graph.add_edge(a, b);
    }
  }
  prep.root = prep.graph.add_node();
  prep.origin.push_back(kNoNode);
  prep.is_r.push_back(0);

  const int total = prep.graph.node_count();
  std::vector<char> removed(prep.is_r.begin(), prep.is_r.end());
  removed[prep.root] = 1;
  const Components comps = connected_components(prep.graph, removed);
  prep.tree_of.assign(static_cast<std::size_t>(total), -1);
  prep.parent.assign(static_cast<std::size_t>(total), kNoNode);
  prep.children.assign(static_cast<std::size_t>(total), {});
  std::vector<char> seen(static_cast<std::size_t>(total), 0);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < total; ++v) {
    if (removed[v] || seen[v]) continue;
    // v is the smallest node of its tree.
    prep.parent[v] = prep.root;
    prep.children[prep.root].push_back(v);
    seen[v] = 1;
    std::vector<NodeId> queue{v};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeId a = queue[h];
      prep.tree_of[a] = comps.label[a];
      order.push_back(a);
      for (EdgeId e : prep.graph.incident_edges(a)) {
        const NodeId b = prep.graph.other(e, a);
        if (removed[b] || seen[b]) continue;
        seen[b] = 1;
        prep.parent[b] = a;
        prep.children[a].push_back(b);
        queue.push_back(b);
      }
    }
  }
  for (auto& c : prep.children) std::sort(c.begin(), c.end());
  prep.post_order.assign(order.rbegin(), order.rend());
  prep.post_order.push_back(prep.root);
  return prep;
}

std::optional<int> dp_solve(const PreparedNdp& prep, const EssentialStructure& s) {
  validate_structure(prep, s);
  Dp dp(prep, dp_pairs(prep.source, s.chains, off_r_pairs(prep.source, s)), false);
  return dp.run();
}

bool dp_tables_monotone(const PreparedNdp& prep, const EssentialStructure& s) {
  validate_structure(prep, s);
  Dp dp(prep, dp_pairs(prep.source, s.chains, off_r_pairs(prep.source, s)), true);
  (void)dp.run();
  return dp.monotone();
}

NdpResult maxndp_fpt(const Instance& inst, const NdpOptions& options) {
  check_normalized_ndp(inst);
  const FeedbackVertexSet fvs = fvs_auto(simplified(inst.graph), options.fvs_exact_limit);
  const PreparedNdp prep = preprocess_ndp(inst, fvs.nodes);

  std::vector<std::optional<std::vector<NodeId>>> tasks{std::nullopt};
  if (inst.pair_count() > 0) {
    std::vector<NodeId> seq;
    std::vector<char> used(static_cast<std::size_t>(prep.graph.node_count()), 0);
    std::vector<std::vector<NodeId>> chains;
    first_chains(prep, 0, seq, used, chains);
    for (auto& c : chains) tasks.emplace_back(std::move(c));
  }

  Shared shared;
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      if (shared.exit_task.load() < static_cast<int>(i)) continue;
      Search search(prep, shared, static_cast<int>(i));
      results[i] = search.run(tasks[i]);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[best].value) best = i;

  NdpResult out;
  out.r_nodes = prep.r_nodes;
  out.structures_tried = shared.structures.load();
  out.dp_runs = shared.dp_runs.load();
  out.structure = results[best].structure;
  const std::vector<int> off = off_r_pairs(inst, out.structure);
  std::vector<int> off_in_tree;
  for (int p : off)
    if (prep.tree_of[inst.pairs[p].s] == prep.tree_of[inst.pairs[p].t]) off_in_tree.push_back(p);
  Dp dp(prep, dp_pairs(inst, out.structure.chains, off_in_tree), true);
  const auto val = dp.run();
  if (!val) throw Error("best structure failed to re-evaluate");
  out.routing = assemble(prep, dp.pairs(), dp.portions(), out.structure.chains, off_in_tree);
  out.value = out.routing.size();
  if (out.value != results[best].value) throw Error("witness size disagrees with the DP value");
  return out;
}

}  // namespace djp
