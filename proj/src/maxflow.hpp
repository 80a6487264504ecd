// Max-flow engines shared by the cut module. Capacities are either int64 (exact)
// or double.
#ifndef LATMIX_SRC_MAXFLOW_HPP
#define LATMIX_SRC_MAXFLOW_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

namespace latmix::detail {

// Boykov-Kolmogorov augmenting paths with search-tree reuse.
template <class Cap>
class BKGraph {
 public:
  explicit BKGraph(std::size_t n) : nodes_(n) {}

  void add_edge(int i, int j, Cap cap, Cap rev_cap) {
    const int a = static_cast<int>(arcs_.size());
    arcs_.push_back({j, nodes_[i].first, a + 1, cap});
    nodes_[i].first = a;
    arcs_.push_back({i, nodes_[j].first, a, rev_cap});
    nodes_[j].first = a + 1;
  }

  void add_tweights(int i, Cap to_source, Cap to_sink) {
    Cap delta = nodes_[i].tr_cap;
    if (delta > 0) to_source += delta;
    else to_sink -= delta;
    flow_ += std::min(to_source, to_sink);
    nodes_[i].tr_cap = to_source - to_sink;
  }

  Cap maxflow() {
    init();
    int current = kNone;
    for (;;) {
      int i = current;
      if (i != kNone) {
        nodes_[i].active = false;
        if (nodes_[i].parent == kNone) i = kNone;
      }
      if (i == kNone) {
        i = next_active();
        if (i == kNone) break;
      }
      int a = kNone;
      Node& ni = nodes_[i];
      if (!ni.is_sink) {
        for (int e = ni.first; e != kNone; e = arcs_[e].next) {
          if (arcs_[e].r_cap == 0) continue;
          const int j = arcs_[e].head;
          Node& nj = nodes_[j];
          if (nj.parent == kNone) {
            nj.is_sink = false;
            nj.parent = arcs_[e].sister;
            nj.ts = ni.ts;
            nj.dist = ni.dist + 1;
            set_active(j);
          } else if (nj.is_sink) {
            a = e;
            break;
          } else if (nj.ts <= ni.ts && nj.dist > ni.dist) {
            nj.parent = arcs_[e].sister;
            nj.ts = ni.ts;
            nj.dist = ni.dist + 1;
          }
        }
      } else {
        for (int e = ni.first; e != kNone; e = arcs_[e].next) {
          if (arcs_[arcs_[e].sister].r_cap == 0) continue;
          const int j = arcs_[e].head;
          Node& nj = nodes_[j];
          if (nj.parent == kNone) {
            nj.is_sink = true;
            nj.parent = arcs_[e].sister;
            nj.ts = ni.ts;
            nj.dist = ni.dist + 1;
            set_active(j);
          } else if (!nj.is_sink) {
            a = arcs_[e].sister;
            break;
          } else if (nj.ts <= ni.ts && nj.dist > ni.dist) {
            nj.parent = arcs_[e].sister;
            nj.ts = ni.ts;
            nj.dist = ni.dist + 1;
          }
        }
      }
      ++time_;
      if (a != kNone) {
        nodes_[i].active = true;  // keep processing i next round
        current = i;
        augment(a);
        ++augmentations_;
        while (!orphans_.empty()) {
          const int o = orphans_.front();
          orphans_.pop_front();
          if (nodes_[o].is_sink) process_sink_orphan(o);
          else process_source_orphan(o);
        }
      } else {
        current = kNone;
      }
    }
    return flow_;
  }

  /// True for nodes in the source tree at termination (residual-reachable from s).
  bool source_side(int i) const { return nodes_[i].parent != kNone && !nodes_[i].is_sink; }
  std::int64_t augmentations() const { return augmentations_; }

 private:
  static constexpr int kNone = -1;
  static constexpr int kTerminal = -2;
  static constexpr int kOrphan = -3;
  static constexpr int kInfDist = std::numeric_limits<int>::max();

  struct Arc {
    int head;
    int next;
    int sister;
    Cap r_cap;
  };
  struct Node {
    int first = kNone;
    int parent = kNone;
    long ts = 0;
    int dist = 0;
    bool is_sink = false;
    bool active = false;
    Cap tr_cap = 0;
  };

  void init() {
    active_.clear();
    orphans_.clear();
    time_ = 0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      Node& n = nodes_[k];
      n.active = false;
      n.ts = 0;
      if (n.tr_cap > 0) {
        n.is_sink = false;
        n.parent = kTerminal;
        n.dist = 1;
        set_active(static_cast<int>(k));
      } else if (n.tr_cap < 0) {
        n.is_sink = true;
        n.parent = kTerminal;
        n.dist = 1;
        set_active(static_cast<int>(k));
      } else {
        n.parent = kNone;
      }
    }
  }

  void set_active(int i) {
    if (!nodes_[i].active) {
      nodes_[i].active = true;
      active_.push_back(i);
    }
  }

  int next_active() {
    while (!active_.empty()) {
      const int i = active_.front();
      active_.pop_front();
      nodes_[i].active = false;
      if (nodes_[i].parent != kNone) return i;
    }
    return kNone;
  }

  void set_orphan_front(int i) {
    nodes_[i].parent = kOrphan;
    orphans_.push_front(i);
  }
  void set_orphan_rear(int i) {
    nodes_[i].parent = kOrphan;
    orphans_.push_back(i);
  }

  void augment(int middle) {
    Cap bottleneck = arcs_[middle].r_cap;
    // source tree
    int i = arcs_[arcs_[middle].sister].head;
    for (;;) {
      const int a = nodes_[i].parent;
      if (a == kTerminal) break;
      bottleneck = std::min(bottleneck, arcs_[arcs_[a].sister].r_cap);
      i = arcs_[a].head;
    }
    bottleneck = std::min(bottleneck, nodes_[i].tr_cap);
    // sink tree
    i = arcs_[middle].head;
    for (;;) {
      const int a = nodes_[i].parent;
      if (a == kTerminal) break;
      bottleneck = std::min(bottleneck, arcs_[a].r_cap);
      i = arcs_[a].head;
    }
    bottleneck = std::min(bottleneck, static_cast<Cap>(-nodes_[i].tr_cap));

    arcs_[arcs_[middle].sister].r_cap += bottleneck;
    arcs_[middle].r_cap -= bottleneck;

    i = arcs_[arcs_[middle].sister].head;
    for (;;) {
      const int a = nodes_[i].parent;
      if (a == kTerminal) break;
      arcs_[a].r_cap += bottleneck;
      arcs_[arcs_[a].sister].r_cap -= bottleneck;
      if (arcs_[arcs_[a].sister].r_cap == 0) set_orphan_front(i);
      i = arcs_[a].head;
    }
    nodes_[i].tr_cap -= bottleneck;
    if (nodes_[i].tr_cap == 0) set_orphan_front(i);

    i = arcs_[middle].head;
    for (;;) {
      const int a = nodes_[i].parent;
      if (a == kTerminal) break;
      arcs_[arcs_[a].sister].r_cap += bottleneck;
      arcs_[a].r_cap -= bottleneck;
      if (arcs_[a].r_cap == 0) set_orphan_front(i);
      i = arcs_[a].head;
    }
    nodes_[i].tr_cap += bottleneck;
    if (nodes_[i].tr_cap == 0) set_orphan_front(i);

    flow_ += bottleneck;
  }

  // Distance to the terminal through valid parents, or kInfDist.
  int origin_distance(int j) {
    int d = 0;
    for (;;) {
      if (nodes_[j].ts == time_) return d + nodes_[j].dist;
      const int a = nodes_[j].parent;
      ++d;
      if (a == kTerminal) {
        nodes_[j].ts = time_;
        nodes_[j].dist = 1;
        return d;
      }
      if (a == kOrphan) return kInfDist;
      j = arcs_[a].head;
    }
  }

  void mark_path(int j, int d) {
    while (nodes_[j].ts != time_) {
      nodes_[j].ts = time_;
      nodes_[j].dist = d--;
      j = arcs_[nodes_[j].parent].head;
    }
  }

  void process_source_orphan(int i) {
    int best_arc = kNone;
    int best_dist = kInfDist;
    for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
      if (arcs_[arcs_[a0].sister].r_cap == 0) continue;
      const int j = arcs_[a0].head;
      if (nodes_[j].is_sink || nodes_[j].parent == kNone) continue;
      const int d = origin_distance(j);
      if (d == kInfDist) continue;
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      mark_path(j, d);
    }
    nodes_[i].parent = best_arc;
    if (best_arc != kNone) {
      nodes_[i].ts = time_;
      nodes_[i].dist = best_dist + 1;
      return;
    }
    nodes_[i].parent = kNone;
    for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
      const int j = arcs_[a0].head;
      const int a = nodes_[j].parent;
      if (nodes_[j].is_sink || a == kNone) continue;
      if (arcs_[arcs_[a0].sister].r_cap != 0) set_active(j);
      if (a != kTerminal && a != kOrphan && arcs_[a].head == i) set_orphan_rear(j);
    }
  }

  void process_sink_orphan(int i) {
    int best_arc = kNone;
    int best_dist = kInfDist;
    for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
      if (arcs_[a0].r_cap == 0) continue;
      const int j = arcs_[a0].head;
      if (!nodes_[j].is_sink || nodes_[j].parent == kNone) continue;
      const int d = origin_distance(j);
      if (d == kInfDist) continue;
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      mark_path(j, d);
    }
    nodes_[i].parent = best_arc;
    if (best_arc != kNone) {
      nodes_[i].ts = time_;
      nodes_[i].dist = best_dist + 1;
      return;
    }
    nodes_[i].parent = kNone;
    for (int a0 = nodes_[i].first; a0 != kNone; a0 = arcs_[a0].next) {
      const int j = arcs_[a0].head;
      const int a = nodes_[j].parent;
      if (!nodes_[j].is_sink || a == kNone) continue;
      if (arcs_[a0].r_cap != 0) set_active(j);
      if (a != kTerminal && a != kOrphan && arcs_[a].head == i) set_orphan_rear(j);
    }
  }

  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::deque<int> active_;
  std::deque<int> orphans_;
  long time_ = 0;
  Cap flow_ = 0;
  std::int64_t augmentations_ = 0;
};

// Dinic blocking flows; kept as an independent cross-check.
template <class Cap>
class DinicGraph {
 public:
  explicit DinicGraph(std::size_t n) : head_(n, -1), level_(n), it_(n) {}

  void add_edge(int u, int v, Cap cap, Cap rev_cap) {
    to_.push_back(v); cap_.push_back(cap); next_.push_back(head_[u]); head_[u] = static_cast<int>(to_.size()) - 1;
    to_.push_back(u); cap_.push_back(rev_cap); next_.push_back(head_[v]); head_[v] = static_cast<int>(to_.size()) - 1;
  }

  Cap maxflow(int s, int t) {
    Cap flow = 0;
    while (bfs(s, t)) {
      for (std::size_t k = 0; k < head_.size(); ++k) it_[k] = head_[k];
      for (;;) {
        const Cap f = dfs(s, t, std::numeric_limits<Cap>::max());
        if (f == 0) break;
        flow += f;
        ++augmentations_;
      }
    }
    bfs(s, t);
    return flow;
  }

  /// After maxflow: reachable from s in the residual graph.
  bool source_side(int i) const { return level_[i] >= 0; }
  std::int64_t augmentations() const { return augmentations_; }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          q.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Cap dfs(int u, int t, Cap limit) {
    if (u == t) return limit;
    for (int& e = it_[u]; e != -1; e = next_[e]) {
      const int v = to_[e];
      if (cap_[e] > 0 && level_[v] == level_[u] + 1) {
        const Cap f = dfs(v, t, std::min(limit, cap_[e]));
        if (f > 0) {
          cap_[e] -= f;
          cap_[e ^ 1] += f;
          return f;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_, to_, next_;
  std::vector<Cap> cap_;
  std::vector<int> level_, it_;
  std::int64_t augmentations_ = 0;
};

}  // namespace latmix::detail

#endif  // LATMIX_SRC_MAXFLOW_HPP
