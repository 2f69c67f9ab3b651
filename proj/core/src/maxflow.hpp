#pragma once

// Integral max-flow by shortest augmenting paths. Small networks only.

#include <algorithm>
#include <deque>
#include <vector>

namespace djp::detail {

class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : out_(static_cast<std::size_t>(nodes)) {}

  int add_node() {
    out_.emplace_back();
    return static_cast<int>(out_.size()) - 1;
  }

  /// Returns the id of the forward arc; its residual twin is id ^ 1.
  int add_arc(int from, int to, int cap) {
    const int id = static_cast<int>(to_.size());
    to_.push_back(to);
    cap_.push_back(cap);
    to_.push_back(from);
    cap_.push_back(0);
    out_[from].push_back(id);
    out_[to].push_back(id + 1);
    base_.push_back(cap);
    base_.push_back(0);
    return id;
  }

  int run(int s, int t) {
    int total = 0;
    std::vector<int> via(out_.size());
    for (;;) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{s};
      via[s] = -2;
      while (!queue.empty() && via[t] == -1) {
        const int u = queue.front();
        queue.pop_front();
        for (int a : out_[u]) {
          if (cap_[a] > 0 && via[to_[a]] == -1) {
            via[to_[a]] = a;
            queue.push_back(to_[a]);
          }
        }
      }
      if (via[t] == -1) return total;
      int push = 1 << 30;
      for (int v = t; v != s; v = to_[via[v] ^ 1]) push = std::min(push, cap_[via[v]]);
      for (int v = t; v != s; v = to_[via[v] ^ 1]) {
        cap_[via[v]] -= push;
        cap_[via[v] ^ 1] += push;
      }
      total += push;
    }
  }

  /// Flow on forward arc `id` (clamped at zero for reverse arcs).
  [[nodiscard]] int flow(int id) const { return std::max(0, base_[id] - cap_[id]); }
  [[nodiscard]] int head(int id) const { return to_[id]; }
  [[nodiscard]] const std::vector<int>& out(int v) const { return out_[v]; }
  [[nodiscard]] int node_count() const { return static_cast<int>(out_.size()); }

 private:
  std::vector<std::vector<int>> out_;
  std::vector<int> to_, cap_, base_;
};

}  // namespace djp::detail
