// planarity.hpp
// Exact combinatorial planarity test. The graph is split into biconnected
// components (planar iff every component is), and each nontrivial component
// is checked with the Demoucron-Malgrange-Pertuiset face-embedding
// algorithm: grow a plane subgraph from a cycle, repeatedly embedding a
// path of some bridge fragment into an admissible face. A fragment with no
// admissible face certifies nonplanarity; a fragment with exactly one must
// be embedded there first.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fragnet {

namespace planarity_detail {

struct Fragment {
  std::vector<int> attachments;  // sorted H-vertices
  bool chord = false;
  int cu = -1, cv = -1;          // the chord, when chord == true
  std::vector<int> component;    // interior vertices otherwise
};

// DMP on a biconnected simple graph with n >= 5 and 9 <= m <= 3n-6.
inline bool dmp_biconnected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  std::vector<std::vector<char>> present(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
    present[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    present[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  // Initial cycle: the first edge plus a path between its endpoints that
  // avoids it. Such a path exists because the component has no bridges.
  std::vector<int> cycle;
  {
    const int u0 = edges[0].first;
    const int v0 = edges[0].second;
    std::vector<int> prev(static_cast<std::size_t>(n), -2);
    std::vector<int> queue{u0};
    prev[static_cast<std::size_t>(u0)] = -1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (v == u0 && w == v0) continue;  // skip the chord itself
        if (prev[static_cast<std::size_t>(w)] == -2) {
          prev[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    if (prev[static_cast<std::size_t>(v0)] == -2)
      throw std::logic_error("biconnected component without a cycle");
    for (int x = v0; x != -1; x = prev[static_cast<std::size_t>(x)])
      cycle.push_back(x);  // v0 ... u0; closing edge (u0, v0) completes it
  }

  std::vector<char> in_h(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<char>> embedded(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::size_t embedded_count = 0;
  auto embed_edge = [&](int u, int v) {
    embedded[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    embedded[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    ++embedded_count;
  };
  for (int v : cycle) in_h[static_cast<std::size_t>(v)] = 1;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    embed_edge(cycle[i], cycle[(i + 1) % cycle.size()]);

  std::vector<std::vector<int>> faces{cycle, {cycle.rbegin(), cycle.rend()}};

  const std::size_t m = edges.size();
  while (embedded_count < m) {
    // Bridge fragments of G relative to the embedded subgraph H.
    std::vector<Fragment> fragments;
    for (auto [u, v] : edges) {
      if (embedded[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) continue;
      if (in_h[static_cast<std::size_t>(u)] && in_h[static_cast<std::size_t>(v)]) {
        Fragment f;
        f.chord = true;
        f.cu = u;
        f.cv = v;
        f.attachments = {std::min(u, v), std::max(u, v)};
        fragments.push_back(std::move(f));
      }
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
      if (in_h[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)])
        continue;
      Fragment f;
      std::vector<int> queue{s};
      seen[static_cast<std::size_t>(s)] = 1;
      while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        f.component.push_back(v);
        for (int w : adj[static_cast<std::size_t>(v)]) {
          if (in_h[static_cast<std::size_t>(w)]) {
            f.attachments.push_back(w);
          } else if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            queue.push_back(w);
          }
        }
      }
      std::sort(f.attachments.begin(), f.attachments.end());
      f.attachments.erase(std::unique(f.attachments.begin(), f.attachments.end()),
                          f.attachments.end());
      fragments.push_back(std::move(f));
    }
    if (fragments.empty())
      throw std::logic_error("unembedded edges but no fragments");

    // Admissible faces per fragment.
    std::vector<std::vector<char>> face_member;
    face_member.reserve(faces.size());
    for (const auto& f : faces) {
      std::vector<char> member(static_cast<std::size_t>(n), 0);
      for (int v : f) member[static_cast<std::size_t>(v)] = 1;
      face_member.push_back(std::move(member));
    }
    int chosen_fragment = -1;
    int chosen_face = -1;
    for (std::size_t fi = 0; fi < fragments.size(); ++fi) {
      int count = 0;
      int first_face = -1;
      for (std::size_t fa = 0; fa < faces.size(); ++fa) {
        bool ok = true;
        for (int a : fragments[fi].attachments)
          if (!face_member[fa][static_cast<std::size_t>(a)]) {
            ok = false;
            break;
          }
        if (ok) {
          ++count;
          if (first_face < 0) first_face = static_cast<int>(fa);
        }
      }
      if (count == 0) return false;
      if (count == 1) {
        chosen_fragment = static_cast<int>(fi);
        chosen_face = first_face;
        break;
      }
      if (chosen_fragment < 0) {
        chosen_fragment = static_cast<int>(fi);
        chosen_face = first_face;
      }
    }

    // A path across the chosen fragment between two attachment vertices.
    const Fragment& frag = fragments[static_cast<std::size_t>(chosen_fragment)];
    std::vector<int> path;
    if (frag.chord) {
      path = {frag.cu, frag.cv};
    } else {
      int a = frag.attachments[0];
      int b = frag.attachments[1];
      std::vector<char> in_comp(static_cast<std::size_t>(n), 0);
      for (int v : frag.component) in_comp[static_cast<std::size_t>(v)] = 1;
      std::vector<int> prev(static_cast<std::size_t>(n), -2);
      std::vector<int> queue;
      for (int w : adj[static_cast<std::size_t>(a)])
        if (in_comp[static_cast<std::size_t>(w)] && prev[static_cast<std::size_t>(w)] == -2) {
          prev[static_cast<std::size_t>(w)] = a;
          queue.push_back(w);
        }
      int reached = -1;
      for (std::size_t qi = 0; qi < queue.size() && reached < 0; ++qi) {
        int v = queue[qi];
        for (int w : adj[static_cast<std::size_t>(v)]) {
          if (w == b) {
            reached = v;
            break;
          }
          if (in_comp[static_cast<std::size_t>(w)] &&
              prev[static_cast<std::size_t>(w)] == -2) {
            prev[static_cast<std::size_t>(w)] = v;
            queue.push_back(w);
          }
        }
      }
      if (reached < 0) throw std::logic_error("fragment path not found");
      path.push_back(b);
      for (int x = reached; x != a; x = prev[static_cast<std::size_t>(x)])
        path.push_back(x);
      path.push_back(a);
      std::reverse(path.begin(), path.end());  // a ... b
    }

    // Split the chosen face along the path.
    auto& face = faces[static_cast<std::size_t>(chosen_face)];
    const int a = path.front();
    const int b = path.back();
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < face.size(); ++i) {
      if (face[i] == a) ia = i;
      if (face[i] == b) ib = i;
    }
    std::vector<int> arc1, arc2;
    for (std::size_t i = ia;; i = (i + 1) % face.size()) {
      arc1.push_back(face[i]);
      if (i == ib) break;
    }
    for (std::size_t i = ib;; i = (i + 1) % face.size()) {
      arc2.push_back(face[i]);
      if (i == ia) break;
    }
    std::vector<int> face1 = arc1;  // a..b along the old boundary
    for (std::size_t i = path.size() - 2; i >= 1; --i) face1.push_back(path[i]);
    std::vector<int> face2 = arc2;  // b..a along the old boundary
    for (std::size_t i = 1; i + 1 < path.size(); ++i) face2.push_back(path[i]);

    for (std::size_t i = 0; i + 1 < path.size(); ++i) embed_edge(path[i], path[i + 1]);
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
      in_h[static_cast<std::size_t>(path[i])] = 1;
    faces[static_cast<std::size_t>(chosen_face)] = std::move(face1);
    faces.push_back(std::move(face2));
  }
  return true;
}

}  // namespace planarity_detail

// Exact planarity of a simple undirected graph given as an edge list.
// Self-loops and parallel edges are not allowed.
inline bool is_planar(int n, const std::vector<std::pair<int, int>>& edges) {
  if (edges.size() <= 8) return true;  // smallest nonplanar graph has 9 edges

  // Biconnected components via DFS lowpoints with an edge stack.
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    auto [u, v] = edges[static_cast<std::size_t>(i)];
    if (u == v) throw std::invalid_argument("self-loop in planarity input");
    adj[static_cast<std::size_t>(u)].emplace_back(v, i);
    adj[static_cast<std::size_t>(v)].emplace_back(u, i);
  }
  std::vector<int> num(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<int> estack;
  int counter = 0;

  std::vector<std::vector<int>> components;  // edge indices per component

  // Iterative DFS; frames hold (vertex, parent edge, next adjacency slot).
  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (num[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<Frame> fstack{{root, -1, 0}};
    num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    while (!fstack.empty()) {
      Frame& fr = fstack.back();
      const auto& nbrs = adj[static_cast<std::size_t>(fr.v)];
      if (fr.next < nbrs.size()) {
        auto [w, ei] = nbrs[fr.next++];
        if (ei == fr.parent_edge) continue;
        if (num[static_cast<std::size_t>(w)] < 0) {
          estack.push_back(ei);
          num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
          fstack.push_back({w, ei, 0});
        } else if (num[static_cast<std::size_t>(w)] < num[static_cast<std::size_t>(fr.v)]) {
          estack.push_back(ei);
          low[static_cast<std::size_t>(fr.v)] =
              std::min(low[static_cast<std::size_t>(fr.v)], num[static_cast<std::size_t>(w)]);
        }
      } else {
        int child = fr.v;
        int pedge = fr.parent_edge;
        fstack.pop_back();
        if (fstack.empty()) break;
        int v = fstack.back().v;
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(child)]);
        if (low[static_cast<std::size_t>(child)] >= num[static_cast<std::size_t>(v)]) {
          std::vector<int> comp;
          while (!estack.empty()) {
            int ei = estack.back();
            // Pop up to and including the tree edge to the child.
            estack.pop_back();
            comp.push_back(ei);
            if (ei == pedge) break;
          }
          components.push_back(std::move(comp));
        }
      }
    }
  }

  for (const auto& comp : components) {
    if (comp.size() <= 8) continue;
    std::vector<int> verts;
    for (int ei : comp) {
      verts.push_back(edges[static_cast<std::size_t>(ei)].first);
      verts.push_back(edges[static_cast<std::size_t>(ei)].second);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    const int nc = static_cast<int>(verts.size());
    if (comp.size() > static_cast<std::size_t>(3 * nc - 6)) return false;
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < nc; ++i) label[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] = i;
    std::vector<std::pair<int, int>> sub;
    sub.reserve(comp.size());
    for (int ei : comp)
      sub.emplace_back(label[static_cast<std::size_t>(edges[static_cast<std::size_t>(ei)].first)],
                       label[static_cast<std::size_t>(edges[static_cast<std::size_t>(ei)].second)]);
    if (!planarity_detail::dmp_biconnected(nc, sub)) return false;
  }
  return true;
}

}  // namespace fragnet
