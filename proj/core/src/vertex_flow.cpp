#include "lowtw/vertex_flow.hpp"

#include <algorithm>

namespace lowtw {

namespace {

enum Role : char { kInner = 0, kSource = 1, kSink = 2 };

std::vector<char> roles(Vertex n, std::span<const Vertex> S, std::span<const Vertex> T) {
  std::vector<char> role(n, kInner);
  for (Vertex s : S) {
    if (s < 0 || s >= n) throw FlowError("source out of range");
    role[s] = kSource;
  }
  for (Vertex t : T) {
    if (t < 0 || t >= n) throw FlowError("sink out of range");
    if (role[t] == kSource) throw FlowError("source and sink sets overlap");
    role[t] = kSink;
  }
  return role;
}

// Residual network of a unit vertex-capacity flow. Every inner vertex v has
// nodes 2v (in) and 2v+1 (out); 2n is the super source and 2n+1 the super sink.
class Residual {
 public:
  Residual(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T)
      : g_(g), n_(g.num_vertices()), role_(roles(n_, S, T)), sources_(S.begin(), S.end()),
        pred_(n_, -1), succ_(n_, -1), seen_(2 * static_cast<std::size_t>(n_) + 2, 0),
        from_(seen_.size(), -1), via_(seen_.size(), -1) {
    std::sort(sources_.begin(), sources_.end());
    for (Vertex s : sources_)
      for (Vertex w : g_.out_neighbors(s))
        if (role_[w] == kSink) throw FlowError("arc from source set to sink set");
  }

  void load(const VertexFlow& f) {
    for (const auto& p : f.paths) {
      if (p.size() < 3) throw FlowError("flow path too short");
      if (role_[p.front()] != kSource || role_[p.back()] != kSink)
        throw FlowError("flow path must run from S to T");
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        Vertex u = p[i], w = p[i + 1];
        if (u < 0 || u >= n_ || w < 0 || w >= n_ || !g_.has_arc(u, w))
          throw FlowError("flow path uses a missing arc");
        if (i + 1 < p.size() - 1) {
          if (role_[w] != kInner) throw FlowError("flow path has a terminal inside");
          if (pred_[w] != -1) throw FlowError("flow paths share an inner vertex");
          pred_[w] = u;
        }
        if (i > 0) succ_[u] = w;
      }
    }
    size_ = f.size();
  }

  std::size_t size() const { return size_; }

  // One BFS; augments along a shortest residual path if there is one.
  bool augment() {
    ++stamp_;
    const int src = 2 * n_, snk = 2 * n_ + 1;
    queue_.clear();
    auto visit = [&](int node, int from, Vertex via) {
      if (seen_[node] == stamp_) return;
      seen_[node] = stamp_;
      from_[node] = from;
      via_[node] = via;
      queue_.push_back(node);
    };
    seen_[src] = stamp_;
    for (Vertex s : sources_)
      for (Vertex w : g_.out_neighbors(s))
        if (role_[w] == kInner) visit(2 * w, src, s);
    for (std::size_t h = 0; h < queue_.size(); ++h) {
      int node = queue_[h];
      Vertex v = node / 2;
      if ((node & 1) == 0) {
        if (pred_[v] == -1)
          visit(node + 1, node, -1);
        else if (role_[pred_[v]] == kInner)
          visit(2 * pred_[v] + 1, node, -1);
      } else {
        for (Vertex w : g_.out_neighbors(v)) {
          if (role_[w] == kInner) {
            visit(2 * w, node, -1);
          } else if (role_[w] == kSink) {
            visit(snk, node, w);
            break;
          }
        }
        if (seen_[snk] == stamp_) break;
        if (pred_[v] != -1) visit(node - 1, node, -1);
      }
    }
    if (seen_[snk] != stamp_) return false;

    removed_.clear();
    added_.clear();
    for (int node = snk; node != src;) {
      int prev = from_[node];
      if (node == snk) {
        added_.emplace_back(prev / 2, via_[node]);
      } else if (prev == src) {
        added_.emplace_back(via_[node], node / 2);
      } else if ((prev & 1) == 1 && (node & 1) == 0) {
        added_.emplace_back(prev / 2, node / 2);
      } else if ((prev & 1) == 0 && (node & 1) == 1 && prev / 2 != node / 2) {
        removed_.emplace_back(node / 2, prev / 2);
      }
      node = prev;
    }
    for (auto [u, w] : removed_) {
      if (role_[u] == kInner) succ_[u] = -1;
      if (role_[w] == kInner) pred_[w] = -1;
    }
    for (auto [u, w] : added_) {
      if (role_[u] == kInner) succ_[u] = w;
      if (role_[w] == kInner) pred_[w] = u;
    }
    ++size_;
    return true;
  }

  // Meaningful right after augment() returned false.
  VertexCut cut() const {
    VertexCut c;
    for (Vertex v = 0; v < n_; ++v)
      if (role_[v] == kInner && seen_[2 * v] == stamp_ && seen_[2 * v + 1] != stamp_)
        c.vertices.push_back(v);
    return c;
  }

  VertexFlow flow() const {
    VertexFlow f;
    for (Vertex v = 0; v < n_; ++v) {
      if (role_[v] != kInner || pred_[v] == -1 || role_[pred_[v]] != kSource) continue;
      std::vector<Vertex> p{pred_[v], v};
      Vertex cur = v;
      while (role_[cur] == kInner) {
        cur = succ_[cur];
        p.push_back(cur);
      }
      f.paths.push_back(std::move(p));
    }
    std::sort(f.paths.begin(), f.paths.end());
    return f;
  }

 private:
  const DiGraph& g_;
  Vertex n_;
  std::vector<char> role_;
  std::vector<Vertex> sources_;
  std::vector<Vertex> pred_, succ_;
  std::vector<unsigned> seen_;
  std::vector<int> from_;
  std::vector<Vertex> via_;
  std::vector<int> queue_;
  std::vector<std::pair<Vertex, Vertex>> removed_, added_;
  unsigned stamp_ = 0;
  std::size_t size_ = 0;
};

MaxFlowCut saturate(Residual& r, std::size_t* augmentations) {
  std::size_t count = 0;
  while (r.augment()) ++count;
  if (augmentations) *augmentations = count;
  return {r.flow(), r.cut()};
}

MaxFlowCut solve_td(const DiGraph& g, Vertex s, Vertex t, const TreeDecomposition& td,
                    std::size_t depth, FlowTdStats* stats) {
  if (stats) {
    ++stats->subcalls;
    stats->max_depth = std::max(stats->max_depth, depth);
  }
  const Vertex n = g.num_vertices();
  const Vertex q = td.num_nodes();
  const Vertex S[1] = {s}, T[1] = {t};
  std::vector<Vertex> in_L;
  for (Vertex x = 0; x < q; ++x)
    if (set_contains(td.bags[x], s) && set_contains(td.bags[x], t)) in_L.push_back(x);
  if (in_L.empty()) {
    Residual r(g, S, T);
    return saturate(r, nullptr);
  }

  const Vertex x = balanced_tree_node(td.tree, Measure::indicator(q, in_L));
  // Component of tree - x for every node; -1 for x.
  std::vector<Vertex> comp(q, -1);
  std::vector<Vertex> local_node(q, -1);
  std::vector<Vertex> comp_size;
  for (Vertex y : td.tree.neighbors(x)) {
    Vertex c = static_cast<Vertex>(comp_size.size());
    comp_size.push_back(0);
    std::vector<Vertex> stack{y};
    comp[y] = c;
    while (!stack.empty()) {
      Vertex z = stack.back();
      stack.pop_back();
      local_node[z] = comp_size[c]++;
      for (Vertex w : td.tree.neighbors(z))
        if (w != x && comp[w] == -1) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
  }
  const Vertex ncomp = static_cast<Vertex>(comp_size.size());
  std::vector<char> important(ncomp, 0);
  for (Vertex y : td.tree.neighbors(x))
    if (set_contains(td.bags[y], s) && set_contains(td.bags[y], t)) important[comp[y]] = 1;

  // W_C membership: vertices outside B_x belong to the component of any bag holding them.
  std::vector<Vertex> owner(n, -1);
  for (Vertex y = 0; y < q; ++y) {
    if (y == x) continue;
    for (Vertex v : td.bags[y]) owner[v] = comp[y];
  }
  for (Vertex v : td.bags[x]) owner[v] = -1;
  owner[s] = owner[t] = -1;

  std::vector<std::vector<Vertex>> members(ncomp);
  std::vector<Vertex> local(n, -1);
  for (Vertex v = 0; v < n; ++v)
    if (owner[v] >= 0 && important[owner[v]]) {
      local[v] = 2 + static_cast<Vertex>(members[owner[v]].size());
      members[owner[v]].push_back(v);
    }

  std::vector<std::vector<Edge>> arcs(ncomp);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex w : g.out_neighbors(u)) {
      Vertex cu = (u == s || u == t) ? -2 : owner[u];
      Vertex cw = (w == s || w == t) ? -2 : owner[w];
      if (cu == -1 || cw == -1) continue;
      if (cu == -2 && cw == -2) continue;
      Vertex c = cu >= 0 ? cu : cw;
      if (!important[c] || (cu >= 0 && cw >= 0 && cu != cw)) continue;
      auto lu = u == s ? 0 : u == t ? 1 : local[u];
      auto lw = w == s ? 0 : w == t ? 1 : local[w];
      arcs[c].emplace_back(lu, lw);
    }

  std::vector<std::vector<VertexSet>> bags(ncomp);
  std::vector<std::vector<Edge>> tree_edges(ncomp);
  for (Vertex c = 0; c < ncomp; ++c)
    if (important[c]) bags[c].resize(comp_size[c]);
  for (Vertex y = 0; y < q; ++y) {
    if (y == x || !important[comp[y]]) continue;
    auto& b = bags[comp[y]][local_node[y]];
    for (Vertex v : td.bags[y]) {
      if (v == s) b.push_back(0);
      else if (v == t) b.push_back(1);
      else if (owner[v] == comp[y]) b.push_back(local[v]);
    }
    std::sort(b.begin(), b.end());
  }
  for (auto [a, b] : td.tree.edges())
    if (a != x && b != x && important[comp[a]])
      tree_edges[comp[a]].emplace_back(local_node[a], local_node[b]);

  VertexFlow merged;
  for (Vertex c = 0; c < ncomp; ++c) {
    if (!important[c]) continue;
    DiGraph sub(2 + static_cast<Vertex>(members[c].size()), arcs[c]);
    TreeDecomposition sub_td;
    sub_td.tree = Graph(comp_size[c], tree_edges[c]);
    sub_td.bags = std::move(bags[c]);
    sub_td = clean(sub_td);
    MaxFlowCut part = solve_td(sub, 0, 1, sub_td, depth + 1, stats);
    for (auto& p : part.flow.paths) {
      for (auto& v : p) v = v == 0 ? s : v == 1 ? t : members[c][v - 2];
      merged.paths.push_back(std::move(p));
    }
  }

  Residual r(g, S, T);
  r.load(merged);
  std::size_t augmentations = 0;
  MaxFlowCut out = saturate(r, &augmentations);
  if (stats) stats->max_repair_augmentations = std::max(stats->max_repair_augmentations, augmentations);
  return out;
}

}  // namespace

Validation check_flow(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
                      const VertexFlow& f) {
  try {
    Residual r(g, S, T);
    r.load(f);
  } catch (const FlowError& e) {
    return Validation::fail(e.what());
  }
  return {};
}

bool separates(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
               const VertexCut& cut) {
  const Vertex n = g.num_vertices();
  std::vector<char> blocked(n, 0), is_sink(n, 0), seen(n, 0);
  for (Vertex v : cut.vertices) blocked[v] = 1;
  for (Vertex t : T) is_sink[t] = 1;
  std::vector<Vertex> stack;
  for (Vertex s : S)
    if (!blocked[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (is_sink[v]) return false;
    for (Vertex w : g.out_neighbors(v))
      if (!seen[w] && !blocked[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return true;
}

AugmentOutcome augment_once(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
                            const VertexFlow& f) {
  Residual r(g, S, T);
  r.load(f);
  AugmentOutcome out;
  out.augmented = r.augment();
  if (out.augmented)
    out.flow = r.flow();
  else
    out.cut = r.cut();
  return out;
}

std::optional<MaxFlowCut> flow_up_to_k(const DiGraph& g, std::span<const Vertex> S,
                                       std::span<const Vertex> T, std::size_t k) {
  Residual r(g, S, T);
  while (r.augment())
    if (r.size() > k) return std::nullopt;
  return MaxFlowCut{r.flow(), r.cut()};
}

MaxFlowCut max_vertex_flow_td(const DiGraph& g, Vertex s, Vertex t, const TreeDecomposition& td,
                              FlowTdStats* stats) {
  const Vertex n = g.num_vertices();
  if (s < 0 || t < 0 || s >= n || t >= n) throw FlowError("terminal out of range");
  if (s == t) throw FlowError("source equals sink");
  if (g.has_arc(s, t)) throw FlowError("arc from source to sink");
  if (auto v = validate(td, underlying_graph(g)); !v)
    throw FlowError("invalid tree decomposition: " + v.violation);
  return solve_td(g, s, t, clean(td), 0, stats);
}

TreeDecomposition CollapsedInstance::patch(const TreeDecomposition& td) const {
  TreeDecomposition out = td;
  for (auto& b : out.bags) {
    VertexSet nb;
    for (Vertex v : b)
      if (local[v] != s && local[v] != t) nb.push_back(local[v]);
    nb.push_back(s);
    nb.push_back(t);
    b = make_set(std::move(nb));
  }
  return out;
}

VertexCut CollapsedInstance::lift_cut(const VertexCut& cut) const {
  VertexCut out;
  for (Vertex v : cut.vertices) out.vertices.push_back(original[v]);
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

CollapsedInstance collapse_terminals(const DiGraph& g, std::span<const Vertex> S,
                                     std::span<const Vertex> T) {
  const Vertex n = g.num_vertices();
  auto role = roles(n, S, T);
  CollapsedInstance out;
  out.local.assign(n, -1);
  for (Vertex v = 0; v < n; ++v)
    if (role[v] == kInner) {
      out.local[v] = static_cast<Vertex>(out.original.size());
      out.original.push_back(v);
    }
  out.s = static_cast<Vertex>(out.original.size());
  out.t = out.s + 1;
  for (Vertex v = 0; v < n; ++v) {
    if (role[v] == kSource) out.local[v] = out.s;
    if (role[v] == kSink) out.local[v] = out.t;
  }
  std::vector<Edge> arcs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex w : g.out_neighbors(u)) {
      if (role[u] == kSource && role[w] == kSink) throw FlowError("arc from source set to sink set");
      if (role[w] == kSource || role[u] == kSink) continue;
      if (role[u] != kInner && role[u] == role[w]) continue;
      arcs.emplace_back(out.local[u], out.local[w]);
    }
  out.graph = DiGraph(out.t + 1, arcs);
  return out;
}

}  // namespace lowtw
