#include "btlab/bttree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "btlab/errors.hpp"

namespace btlab {

namespace {

void hash_combine(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

}  // namespace

std::string VertexLabel::str() const {
  std::ostringstream os;
  os << "(" << a << "," << c;
  if (!b.empty()) {
    os << ";";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "." : "") << int(b[i]);
  }
  os << ")";
  return os.str();
}

nlohmann::json VertexLabel::to_json() const {
  std::vector<int> digits(b.begin(), b.end());
  return {{"a", a}, {"c", c}, {"b", digits}};
}

std::size_t VertexHash::operator()(const VertexLabel& v) const {
  std::size_t h = std::hash<int>()(v.a);
  hash_combine(h, std::hash<int>()(v.c));
  for (auto d : v.b) hash_combine(h, d);
  return h;
}

Edge::Edge(VertexLabel x, VertexLabel y) {
  if (y < x) std::swap(x, y);
  u = std::move(x);
  w = std::move(y);
}

std::size_t EdgeHash::operator()(const Edge& e) const {
  std::size_t h = VertexHash()(e.u);
  hash_combine(h, VertexHash()(e.w));
  return h;
}

std::size_t ArrowHash::operator()(const Arrow& a) const {
  std::size_t h = VertexHash()(a.src);
  hash_combine(h, VertexHash()(a.dst) * 31);
  return h;
}

std::string window_kind_name(WindowKind k) { return k == WindowKind::Tn ? "T" : "Tprime"; }

// ------------------------------------------------------------------ window

int SubtreeWindow::vertex_index(const VertexLabel& v) const {
  auto it = vindex.find(v);
  return it == vindex.end() ? -1 : it->second;
}

int SubtreeWindow::edge_index(const Edge& e) const {
  auto it = eindex.find(e);
  return it == eindex.end() ? -1 : it->second;
}

int SubtreeWindow::arrow_index(const Arrow& a) const {
  auto it = aindex.find(a);
  return it == aindex.end() ? -1 : it->second;
}

nlohmann::json SubtreeWindow::to_json() const {
  nlohmann::json vs = nlohmann::json::array(), es = nlohmann::json::array();
  for (const auto& v : vertices) vs.push_back(v.to_json());
  for (std::size_t i = 0; i < edges.size(); ++i) es.push_back({parent[i + 1], static_cast<int>(i + 1)});
  return {{"kind", window_kind_name(kind)}, {"n", n}, {"q", q}, {"vertices", vs}, {"edges", es},
          {"arrow_count", arrows.size()}};
}

std::string SubtreeWindow::to_dot(const std::vector<std::int64_t>* edge_values) const {
  std::ostringstream os;
  os << "graph " << window_kind_name(kind) << "_" << n << " {\n";
  for (std::size_t i = 0; i < vertices.size(); ++i)
    os << "  v" << i << " [label=\"" << vertices[i].str() << "\"];\n";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    os << "  v" << parent[i + 1] << " -- v" << (i + 1);
    if (edge_values) os << " [label=\"" << (*edge_values)[i] << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

// -------------------------------------------------------------------- tree

Tree::Tree(const FieldConfig& cfg) : K_(cfg) {}

Mat2 Tree::basis(const VertexLabel& v) const {
  QuotientElement b{v.b};
  return {K_.pi_pow(v.a), K_.lift(b), K_.zero(), K_.pi_pow(v.c)};
}

Mat2 Tree::s() const { return {K_.zero(), K_.one(), K_.pi(), K_.zero()}; }

VertexLabel Tree::canonical_vertex(const Mat2& M) const {
  if (M.det().is_zero()) throw SingularMatrix();
  LocalScalar m11 = M.a, m12 = M.b, m21 = M.c, m22 = M.d;
  if (K_.valuation(m22) > K_.valuation(m21)) {
    std::swap(m11, m12);
    std::swap(m21, m22);
  }
  // Clear the lower-left entry with an integral column operation.
  m11 -= (m21 / m22) * m12;
  long a1 = K_.val(m11), c1 = K_.val(m22);
  LocalScalar beta = m12 / K_.unit_part(m22);
  long m = std::min(a1, c1);
  if (!beta.is_zero()) m = std::min(m, K_.val(beta));
  VertexLabel out;
  out.a = static_cast<int>(a1 - m);
  out.c = static_cast<int>(c1 - m);
  out.b = K_.reduce(beta * K_.pi_pow(-m), out.a).digits;
  return out;
}

VertexLabel Tree::apartment_vertex(long i) const {
  VertexLabel v;
  if (i >= 0) {
    v.c = static_cast<int>(i);
  } else {
    v.a = static_cast<int>(-i);
    v.b.assign(static_cast<std::size_t>(-i), 0);
  }
  return v;
}

VertexLabel Tree::neighbor(const VertexLabel& v, int index) const {
  Mat2 step;
  if (index < q())
    step = {K_.one(), K_.zero(), K_.digit(static_cast<Residue>(index)), K_.pi()};
  else
    step = {K_.pi(), K_.zero(), K_.zero(), K_.one()};
  return canonical_vertex(basis(v) * step);
}

std::vector<VertexLabel> Tree::neighbors(const VertexLabel& v) const {
  std::vector<VertexLabel> out;
  for (int i = 0; i <= q(); ++i) out.push_back(neighbor(v, i));
  return out;
}

namespace {

long min_valuation(const LocalField& K, const Mat2& X) {
  Valuation m = std::min({K.valuation(X.a), K.valuation(X.b), K.valuation(X.c), K.valuation(X.d)});
  return m.value();
}

}  // namespace

int Tree::distance(const VertexLabel& v, const VertexLabel& w) const {
  Mat2 X = basis(v).inverse() * basis(w);
  return static_cast<int>(K_.val(X.det()) - 2 * min_valuation(K_, X));
}

int Tree::line_index(const LocalScalar& x, const LocalScalar& y) const {
  if (K_.valuation(x) <= K_.valuation(y)) return K_.residue(y / x);
  return q();
}

int Tree::direction_to_vertex(const VertexLabel& v, const VertexLabel& w) const {
  if (v == w) throw Error("direction_to_vertex: vertices coincide");
  Mat2 X = basis(v).inverse() * basis(w);
  X = X.scaled(K_.pi_pow(-min_valuation(K_, X)));
  if (std::min(K_.valuation(X.a), K_.valuation(X.c)) == Valuation(0)) return line_index(X.a, X.c);
  return line_index(X.b, X.d);
}

std::vector<VertexLabel> Tree::geodesic(const VertexLabel& v, const VertexLabel& w) const {
  std::vector<VertexLabel> path{v};
  int d = distance(v, w);
  VertexLabel cur = v;
  for (int i = 0; i < d; ++i) {
    cur = neighbor(cur, direction_to_vertex(cur, w));
    path.push_back(cur);
  }
  if (!(cur == w)) throw Error("geodesic did not reach its target");
  return path;
}

VertexLabel Tree::act(const Mat2& g, const VertexLabel& v) const { return canonical_vertex(g * basis(v)); }

Edge Tree::act(const Mat2& g, const Edge& e) const { return Edge(act(g, e.u), act(g, e.w)); }

Arrow Tree::act(const Mat2& g, const Arrow& a) const { return {act(g, a.src), act(g, a.dst)}; }

End Tree::act(const Mat2& g, const End& U) const {
  if (g.det().is_zero()) throw SingularMatrix();
  return make_end(g.a * U.x() + g.b * U.y(), g.c * U.x() + g.d * U.y());
}

End Tree::make_end(const LocalScalar& x, const LocalScalar& y) const {
  if (x.is_zero() && y.is_zero()) throw Error("an end needs a nonzero vector");
  End U;
  if (K_.valuation(x) <= K_.valuation(y)) {
    U.x_ = K_.one();
    U.y_ = y / x;
  } else {
    U.x_ = x / y;
    U.y_ = K_.one();
  }
  U.key_ = U.x_.str() + ":" + U.y_.str();
  return U;
}

int Tree::direction(const VertexLabel& v, const End& U) const {
  std::string key = v.str() + "|" + U.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = step_cache_.find(key);
    if (it != step_cache_.end()) return it->second;
  }
  Mat2 Minv = basis(v).inverse();
  LocalScalar cx = Minv.a * U.x() + Minv.b * U.y();
  LocalScalar cy = Minv.c * U.x() + Minv.d * U.y();
  int idx = line_index(cx, cy);
  std::lock_guard<std::mutex> lock(mu_);
  step_cache_.emplace(std::move(key), idx);
  return idx;
}

VertexLabel Tree::step_toward_end(const VertexLabel& v, const End& U) const { return neighbor(v, direction(v, U)); }

WindowPtr Tree::window(WindowKind kind, int n) const {
  if (n < 0) throw InvalidConfig("window radius must be nonnegative");
  int key = 2 * n + (kind == WindowKind::TnPrime ? 1 : 0);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = window_cache_.find(key);
    if (it != window_cache_.end()) return it->second;
  }
  WindowPtr w = build_window(kind, n);
  std::lock_guard<std::mutex> lock(mu_);
  window_cache_.emplace(key, w);
  return w;
}

WindowPtr Tree::build_window(WindowKind kind, int n) const {
  auto W = std::make_shared<SubtreeWindow>();
  W->kind = kind;
  W->n = n;
  W->q = q();
  int max_depth = kind == WindowKind::Tn ? n : n + 1;
  // branch[i]: index of the depth-1 ancestor (0 for the root itself).
  std::vector<int> branch;
  auto add_vertex = [&](VertexLabel v, int par, int dep, int br) {
    int idx = static_cast<int>(W->vertices.size());
    W->vindex.emplace(v, idx);
    W->vertices.push_back(std::move(v));
    W->parent.push_back(par);
    W->depth.push_back(dep);
    W->children.emplace_back();
    branch.push_back(br);
    if (par >= 0) {
      W->children[par].push_back(idx);
      Edge e(W->vertices[par], W->vertices[idx]);
      W->eindex.emplace(e, static_cast<int>(W->edges.size()));
      W->edges.push_back(e);
    }
  };
  add_vertex(v0(), -1, 0, 0);
  for (std::size_t i = 0; i < W->vertices.size(); ++i) {
    int dep = W->depth[i];
    if (dep >= max_depth) continue;
    VertexLabel here = W->vertices[i];
    for (auto& w : neighbors(here)) {
      if (W->parent[i] >= 0 && w == W->vertices[W->parent[i]]) continue;
      int br = dep == 0 ? static_cast<int>(W->vertices.size()) : branch[i];
      // Only v1's branch reaches depth n+1 in T'_n; v1 is vertex 1.
      if (kind == WindowKind::TnPrime && dep + 1 == n + 1 && br != 1) continue;
      add_vertex(std::move(w), static_cast<int>(i), dep + 1, br);
    }
  }
  for (std::size_t i = 0; i < W->vertices.size(); ++i) {
    for (auto& w : neighbors(W->vertices[i])) {
      Arrow a{W->vertices[i], std::move(w)};
      W->aindex.emplace(a, static_cast<int>(W->arrows.size()));
      W->arrows.push_back(std::move(a));
    }
  }
  return W;
}

}  // namespace btlab
