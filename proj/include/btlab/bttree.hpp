#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "btlab/localfield.hpp"
#include "btlab/mat2.hpp"
#include "json.hpp"

namespace btlab {

/// Homothety class of the lattice spanned by the columns of
/// [[pi^a, b], [0, pi^c]], normalized so that min(a, c, v(b)) = 0 and b is
/// reduced mod pi^a (digits, lowest first; empty when a = 0).
struct VertexLabel {
  int a = 0;
  int c = 0;
  std::vector<Residue> b;

  bool operator==(const VertexLabel&) const = default;
  auto operator<=>(const VertexLabel&) const = default;
  std::string str() const;
  nlohmann::json to_json() const;
};

struct VertexHash {
  std::size_t operator()(const VertexLabel& v) const;
};

/// Unordered edge; endpoints stored in increasing label order.
struct Edge {
  VertexLabel u, w;
  Edge() = default;
  Edge(VertexLabel x, VertexLabel y);
  bool operator==(const Edge&) const = default;
};

struct Arrow {
  VertexLabel src, dst;
  Arrow reversed() const { return {dst, src}; }
  bool operator==(const Arrow&) const = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const;
};
struct ArrowHash {
  std::size_t operator()(const Arrow& a) const;
};

/// F-rational end [x : y], scaled so that the first unit coordinate is 1.
class End {
 public:
  End() = default;
  const LocalScalar& x() const { return x_; }
  const LocalScalar& y() const { return y_; }
  const std::string& key() const { return key_; }
  bool operator==(const End& o) const { return key_ == o.key_; }
  std::string str() const { return "[" + x_.str() + ":" + y_.str() + "]"; }

 private:
  friend class Tree;
  LocalScalar x_, y_;
  std::string key_;
};

enum class Parity { Even, Odd };

enum class WindowKind { Tn, TnPrime };
std::string window_kind_name(WindowKind k);

/// Finite subtree T_n (ball of radius n around v0) or T'_n (T_n together
/// with the depth-(n+1) vertices below v1), in BFS order from v0 with
/// children in neighbor order.  Edge i joins vertex i+1 to its parent.
/// Arrows are all arrows whose source lies in the window, grouped by source
/// and ordered by neighbor index.
struct SubtreeWindow {
  WindowKind kind = WindowKind::Tn;
  int n = 0;
  int q = 0;
  std::vector<VertexLabel> vertices;
  std::vector<int> parent;  // -1 for v0
  std::vector<int> depth;
  std::vector<std::vector<int>> children;
  std::vector<Edge> edges;
  std::vector<Arrow> arrows;

  int vertex_index(const VertexLabel& v) const;
  int edge_index(const Edge& e) const;
  int arrow_index(const Arrow& a) const;
  bool same_shape(const SubtreeWindow& o) const { return kind == o.kind && n == o.n && q == o.q; }

  nlohmann::json to_json() const;
  // Graphviz; optional integer label per edge.
  std::string to_dot(const std::vector<std::int64_t>* edge_values = nullptr) const;

  std::unordered_map<VertexLabel, int, VertexHash> vindex;
  std::unordered_map<Edge, int, EdgeHash> eindex;
  std::unordered_map<Arrow, int, ArrowHash> aindex;
};

using WindowPtr = std::shared_ptr<const SubtreeWindow>;

/// The Bruhat-Tits tree of PGL2(F).  Neighbors of a vertex with basis M are
/// indexed by lines of F_q^2: index y < q is the line [1 : y], index q is
/// [0 : 1]; the neighbor is M applied to pi O^2 + O (line lift).
class Tree {
 public:
  explicit Tree(const FieldConfig& cfg);

  const LocalField& field() const { return K_; }
  int q() const { return K_.q(); }

  Mat2 basis(const VertexLabel& v) const;
  VertexLabel canonical_vertex(const Mat2& M) const;

  VertexLabel v0() const { return {}; }
  // Standard apartment vertex v_i = [O + pi^i O].
  VertexLabel apartment_vertex(long i) const;
  Edge apartment_edge(long i) const { return Edge(apartment_vertex(i), apartment_vertex(i + 1)); }
  // s = [[0, 1], [pi, 0]]
  Mat2 s() const;

  std::vector<VertexLabel> neighbors(const VertexLabel& v) const;
  VertexLabel neighbor(const VertexLabel& v, int index) const;
  int distance(const VertexLabel& v, const VertexLabel& w) const;
  Parity parity(const VertexLabel& v) const { return (v.a + v.c) % 2 == 0 ? Parity::Even : Parity::Odd; }
  // Index of the neighbor of v on the geodesic to w (w != v).
  int direction_to_vertex(const VertexLabel& v, const VertexLabel& w) const;
  std::vector<VertexLabel> geodesic(const VertexLabel& v, const VertexLabel& w) const;

  VertexLabel act(const Mat2& g, const VertexLabel& v) const;
  Edge act(const Mat2& g, const Edge& e) const;
  Arrow act(const Mat2& g, const Arrow& a) const;
  End act(const Mat2& g, const End& U) const;

  End make_end(const LocalScalar& x, const LocalScalar& y) const;
  // Neighbor index of v pointing toward U.  Memoized.
  int direction(const VertexLabel& v, const End& U) const;
  VertexLabel step_toward_end(const VertexLabel& v, const End& U) const;

  // Cached per (kind, n).
  WindowPtr window(WindowKind kind, int n) const;

 private:
  // Neighbor index of the line through the nonzero vector (x, y).
  int line_index(const LocalScalar& x, const LocalScalar& y) const;
  WindowPtr build_window(WindowKind kind, int n) const;

  LocalField K_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, int> step_cache_;
  mutable std::unordered_map<int, WindowPtr> window_cache_;
};

}  // namespace btlab
