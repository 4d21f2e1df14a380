#include "lowtw/separators.hpp"

#include <algorithm>

#include "lowtw/vertex_flow.hpp"

namespace lowtw {

namespace {

using u128 = unsigned __int128;

// a >= c * lambda
bool reaches(std::uint64_t a, std::uint64_t c, Threshold lambda) {
  return static_cast<u128>(a) * lambda.den >= static_cast<u128>(c) * lambda.num;
}

}  // namespace

std::vector<SteinerPiece> steiner_partition(const Graph& tree, const Measure& mu, Threshold lambda) {
  const Vertex n = tree.num_vertices();
  if (!is_tree(tree)) throw GraphError("steiner_partition: input is not a tree");
  if (static_cast<Vertex>(mu.size()) != n) throw GraphError("steiner_partition: measure size mismatch");
  for (Vertex v = 0; v < n; ++v)
    if (reaches(mu[v], 1, lambda)) throw GraphError("steiner_partition: vertex measure reaches lambda");

  RootedTree rt = root_tree(tree, 0);
  // Residual subtree of v as a linked list head[v] -> ... -> tail[v].
  std::vector<Vertex> head(n), tail(n), next(n, -1);
  std::vector<std::uint64_t> acc(n, 0);
  std::vector<SteinerPiece> pieces;
  auto emit = [&](Vertex u, std::span<const Vertex> group) {
    SteinerPiece p;
    p.u = u;
    p.R.push_back(u);
    for (Vertex c : group)
      for (Vertex w = head[c]; w != -1; w = next[w]) p.R.push_back(w);
    std::sort(p.R.begin(), p.R.end());
    pieces.push_back(std::move(p));
  };
  for (auto it = rt.preorder.rbegin(); it != rt.preorder.rend(); ++it) {
    Vertex v = *it;
    head[v] = tail[v] = v;
    acc[v] = mu[v];
    for (Vertex c : rt.children[v]) acc[v] += acc[c];
    if (!reaches(acc[v], 2, lambda)) {
      for (Vertex c : rt.children[v]) {
        next[tail[v]] = head[c];
        tail[v] = tail[c];
      }
      continue;
    }
    std::vector<Vertex> group;
    std::uint64_t sum = 0;
    std::vector<std::vector<Vertex>> groups;
    for (Vertex c : rt.children[v]) {
      group.push_back(c);
      sum += acc[c];
      if (reaches(sum, 1, lambda)) {
        groups.push_back(std::move(group));
        group.clear();
        sum = 0;
      }
    }
    if (!group.empty()) groups.back().insert(groups.back().end(), group.begin(), group.end());
    for (const auto& gr : groups) emit(v, gr);
    acc[v] = mu[v];
  }
  return pieces;
}

bool is_balanced_separator(const Graph& g, const Measure& mu, std::span<const Vertex> X,
                           Threshold alpha) {
  std::vector<char> removed(g.num_vertices(), 0);
  for (Vertex v : X) removed[v] = 1;
  for (const auto& c : connected_components(g, removed))
    if (!at_most_fraction(mu.of(c), mu.total(), alpha.num, alpha.den)) return false;
  return true;
}

Validation check_separator_outcome(const Graph& g, const Measure& mu, int k,
                                   const SeparatorOutcome& out) {
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  switch (out.kind) {
    case SeparatorKind::LargeSep:
      if (out.separator.size() > 100 * kk * kk) return Validation::fail("large separator too big");
      if (!is_balanced_separator(g, mu, out.separator, {7, 8}))
        return Validation::fail("large separator is not 7/8-balanced");
      return {};
    case SeparatorKind::SmallSep:
      if (out.separator.size() > kk) return Validation::fail("small separator too big");
      if (!is_balanced_separator(g, mu, out.separator, {100 * kk - 1, 100 * kk}))
        return Validation::fail("small separator is not (1-1/(100k))-balanced");
      return {};
    case SeparatorKind::TreewidthAtLeastK:
      return {};
  }
  return {};
}

SeparatorOutcome find_balanced_separator(const Graph& g, const Measure& mu, int k) {
  if (k < 1) throw GraphError("find_balanced_separator: k must be positive");
  const Vertex n = g.num_vertices();
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  const std::uint64_t total = mu.total();
  const Threshold lambda{total, 100 * kk};

  for (Vertex v = 0; v < n; ++v)
    if (reaches(mu[v], 1, lambda)) return {SeparatorKind::SmallSep, {v}};

  const DiGraph dg = symmetric_digraph(g);
  std::vector<char> in_Y(n, 0);
  VertexSet Y;
  for (int round = 0; round < k; ++round) {
    auto comps = connected_components(g, in_Y);
    const VertexSet* heavy = nullptr;
    for (const auto& c : comps)
      if (!at_most_fraction(mu.of(c), total, 7, 8)) heavy = &c;
    if (!heavy) return {SeparatorKind::LargeSep, Y};

    Subgraph t0 = spanning_tree(g, *heavy);
    std::vector<std::uint64_t> local_w(heavy->size());
    for (std::size_t i = 0; i < heavy->size(); ++i) local_w[i] = mu[(*heavy)[i]];
    auto pieces = steiner_partition(t0.graph, Measure(std::move(local_w)), lambda);
    for (auto& p : pieces) {
      for (auto& v : p.R) v = t0.to_original[v];
      p.u = t0.to_original[p.u];
      std::sort(p.R.begin(), p.R.end());
    }

    std::vector<int> mark(n, -1);
    for (std::size_t a = 0; a < pieces.size(); ++a) {
      const auto& Ra = pieces[a].R;
      for (Vertex v : Ra) mark[v] = static_cast<int>(a);
      std::vector<char> near(n, 0);
      for (Vertex v : Ra)
        for (Vertex w : g.neighbors(v)) near[w] = 1;
      for (std::size_t b = a + 1; b < pieces.size(); ++b) {
        const auto& Rb = pieces[b].R;
        bool ok = true;
        for (Vertex v : Rb)
          if (mark[v] == static_cast<int>(a) || near[v]) {
            ok = false;
            break;
          }
        if (!ok) continue;
        if (auto f = flow_up_to_k(dg, Ra, Rb, kk)) return {SeparatorKind::SmallSep, f->cut.vertices};
      }
    }

    for (const auto& p : pieces) in_Y[p.u] = 1;
    Y.clear();
    for (Vertex v = 0; v < n; ++v)
      if (in_Y[v]) Y.push_back(v);
  }
  if (is_balanced_separator(g, mu, Y, {1, 2})) return {SeparatorKind::LargeSep, Y};
  return {SeparatorKind::TreewidthAtLeastK, {}};
}

}  // namespace lowtw
