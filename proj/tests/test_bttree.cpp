#include "doctest.h"

#include <algorithm>
#include <deque>
#include <set>

#include "btlab/bttree.hpp"
#include "btlab/errors.hpp"

using namespace btlab;

namespace {

std::vector<FieldConfig> configs() {
  return {FieldConfig::rational(2), FieldConfig::rational(3), FieldConfig::laurent(2, 2)};
}

Mat2 random_matrix(const LocalField& K, Rng& rng) {
  for (;;) {
    Mat2 g{K.random_nonzero(rng, -3, 3), K.random_nonzero(rng, -3, 3), K.random_nonzero(rng, -3, 3),
           K.random_nonzero(rng, -3, 3)};
    if (!g.det().is_zero()) return g;
  }
}

// Product of integral elementary and diagonal unit matrices: an element of GL2(O).
Mat2 random_gl2o(const LocalField& K, Rng& rng) {
  Mat2 g = Mat2::diag(K.random_unit(rng), K.random_unit(rng), K);
  for (int i = 0; i < 4; ++i) {
    LocalScalar r = K.random_integral(rng);
    Mat2 e = rng.coin() ? Mat2{K.one(), r, K.zero(), K.one()} : Mat2{K.one(), K.zero(), r, K.one()};
    g = g * e;
  }
  return g;
}

// Oracle: two bases span homothetic lattices iff X = M^{-1} M' has
// v(det X) = 2 min v(X).
bool homothetic(const LocalField& K, const Mat2& M1, const Mat2& M2) {
  Mat2 X = M1.inverse() * M2;
  Valuation m = std::min({K.valuation(X.a), K.valuation(X.b), K.valuation(X.c), K.valuation(X.d)});
  return K.val(X.det()) == 2 * m.value();
}

// Oracle: the q+1 lattices between pi L and L, from every nonzero vector of F_q^2.
std::set<VertexLabel> sublattice_neighbors(const Tree& T, const VertexLabel& v) {
  const LocalField& K = T.field();
  std::set<VertexLabel> out;
  Mat2 M = T.basis(v);
  for (int al = 0; al < T.q(); ++al)
    for (int be = 0; be < T.q(); ++be) {
      if (al == 0 && be == 0) continue;
      LocalScalar A = K.digit(static_cast<Residue>(al)), B = K.digit(static_cast<Residue>(be));
      Mat2 span = al != 0 ? Mat2{A, K.zero(), B, K.pi()} : Mat2{K.zero(), K.pi(), B, K.zero()};
      out.insert(T.canonical_vertex(M * span));
    }
  return out;
}

// Oracle: BFS distances inside a window's vertex set.
std::vector<int> bfs_distances(const Tree& T, const SubtreeWindow& W, int from) {
  std::vector<int> dist(W.vertices.size(), -1);
  std::deque<int> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (const auto& w : T.neighbors(W.vertices[i])) {
      int j = W.vertex_index(w);
      if (j >= 0 && dist[j] < 0) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
    }
  }
  return dist;
}

// min(a, c, v(b)) with v(0) = +inf.
int label_min_valuation(const VertexLabel& v) {
  int m = std::min(v.a, v.c);
  for (std::size_t i = 0; i < v.b.size(); ++i)
    if (v.b[i] != 0) return std::min(m, static_cast<int>(i));
  return m;
}

}  // namespace

TEST_CASE("canonical vertex examples") {
  Tree T(FieldConfig::rational(2));
  const auto& K = T.field();
  CHECK(T.canonical_vertex(Mat2::identity(K)) == T.v0());
  for (int i = 0; i < 5; ++i) {
    auto v = T.canonical_vertex(Mat2::diag(K.one(), K.from_int(1L << i), K));
    CHECK(v.a == 0);
    CHECK(v.c == i);
    CHECK(v == T.apartment_vertex(i));
  }
  CHECK(T.act(T.s(), T.v0()) == T.apartment_vertex(1));
  for (long i = -4; i <= 4; ++i) CHECK(T.act(T.s(), T.apartment_vertex(i)) == T.apartment_vertex(1 - i));
  CHECK_THROWS_AS(T.canonical_vertex(Mat2{K.one(), K.one(), K.one(), K.one()}), SingularMatrix);
}

TEST_CASE("canonical form is invariant under GL2(O) and scaling") {
  for (auto cfg : configs()) {
    Tree T(cfg);
    const auto& K = T.field();
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
      Mat2 g = random_matrix(K, rng);
      Mat2 k = random_gl2o(K, rng);
      LocalScalar lambda = K.random_nonzero(rng, -4, 4);
      auto v = T.canonical_vertex(g);
      CHECK(v == T.canonical_vertex((g * k).scaled(lambda)));
      CHECK(homothetic(K, g, T.basis(v)));
      CHECK(label_min_valuation(v) == 0);
    }
  }
}

TEST_CASE("labels separate non-homothetic lattices") {
  Tree T(FieldConfig::rational(3));
  const auto& K = T.field();
  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    Mat2 g = random_matrix(K, rng), h = random_matrix(K, rng);
    CHECK((T.canonical_vertex(g) == T.canonical_vertex(h)) == homothetic(K, g, h));
  }
}

TEST_CASE("neighbors against the sublattice oracle") {
  for (auto cfg : configs()) {
    Tree T(cfg);
    Rng rng(3);
    std::vector<VertexLabel> samples{T.v0(), T.apartment_vertex(1), T.apartment_vertex(-2)};
    for (int i = 0; i < 20; ++i) samples.push_back(T.canonical_vertex(random_matrix(T.field(), rng)));
    for (const auto& v : samples) {
      auto nb = T.neighbors(v);
      REQUIRE(static_cast<int>(nb.size()) == T.q() + 1);
      std::set<VertexLabel> mine(nb.begin(), nb.end());
      CHECK(static_cast<int>(mine.size()) == T.q() + 1);
      CHECK(mine == sublattice_neighbors(T, v));
      for (const auto& w : nb) {
        CHECK(T.distance(v, w) == 1);
        auto back = T.neighbors(w);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
  }
  Tree T2(FieldConfig::rational(2));
  auto n0 = T2.neighbors(T2.v0());
  CHECK(n0.size() == 3);
  CHECK(n0[0] == T2.apartment_vertex(1));
  Tree T3(FieldConfig::rational(3));
  auto n1 = T3.neighbors(T3.apartment_vertex(1));
  CHECK(n1.size() == 4);
  CHECK(std::find(n1.begin(), n1.end(), T3.v0()) != n1.end());
  CHECK(std::find(n1.begin(), n1.end(), T3.apartment_vertex(2)) != n1.end());
}

TEST_CASE("distance, geodesics and the BFS oracle") {
  for (auto cfg : {FieldConfig::rational(2), FieldConfig::rational(3)}) {
    Tree T(cfg);
    for (int i = 0; i < 6; ++i) CHECK(T.distance(T.v0(), T.apartment_vertex(i)) == i);
    CHECK(T.geodesic(T.v0(), T.apartment_vertex(2)) ==
          std::vector<VertexLabel>{T.v0(), T.apartment_vertex(1), T.apartment_vertex(2)});
    CHECK(T.geodesic(T.v0(), T.v0()) == std::vector<VertexLabel>{T.v0()});
    auto W = T.window(WindowKind::Tn, cfg.p == 2 ? 4 : 3);
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
      int i = static_cast<int>(rng.uniform(0, static_cast<long>(W->vertices.size()) - 1));
      int j = static_cast<int>(rng.uniform(0, static_cast<long>(W->vertices.size()) - 1));
      auto dist = bfs_distances(T, *W, i);
      const auto& v = W->vertices[i];
      const auto& w = W->vertices[j];
      CHECK(T.distance(v, w) == dist[j]);
      auto path = T.geodesic(v, w);
      CHECK(static_cast<int>(path.size()) == dist[j] + 1);
      for (std::size_t k = 0; k + 1 < path.size(); ++k) CHECK(T.distance(path[k], path[k + 1]) == 1);
      const auto& u = W->vertices[(i + j) % W->vertices.size()];
      CHECK(T.distance(v, u) <= T.distance(v, w) + T.distance(w, u));
    }
  }
  Tree T(FieldConfig::rational(2));
  for (const auto& w : T.neighbors(T.v0())) CHECK(T.distance(T.v0(), w) == 1);
}

TEST_CASE("group action") {
  for (auto cfg : configs()) {
    Tree T(cfg);
    const auto& K = T.field();
    Rng rng(44);
    Edge e0 = T.apartment_edge(0);
    CHECK(T.act(T.s(), e0) == e0);
    for (int i = 0; i < 200; ++i) {
      Mat2 g = random_matrix(K, rng);
      auto v = T.canonical_vertex(random_matrix(K, rng));
      auto w = T.neighbor(v, static_cast<int>(rng.uniform(0, T.q())));
      CHECK(T.act(g.inverse(), T.act(g, v)) == v);
      Mat2 central = Mat2::identity(K).scaled(K.random_nonzero(rng, -3, 3));
      CHECK(T.act(central, v) == v);
      CHECK(T.distance(T.act(g, v), T.act(g, w)) == 1);
      Mat2 h = random_matrix(K, rng);
      CHECK(T.act(g * h, v) == T.act(g, T.act(h, v)));
      auto U = T.make_end(K.random_integral(rng), K.random_nonzero(rng, -2, 2));
      CHECK(T.act(g.inverse(), T.act(g, U)) == U);
      CHECK(T.act(central, U) == U);
    }
  }
}

TEST_CASE("parity") {
  for (auto cfg : configs()) {
    Tree T(cfg);
    const auto& K = T.field();
    CHECK(T.parity(T.v0()) == Parity::Even);
    CHECK(T.parity(T.apartment_vertex(1)) == Parity::Odd);
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
      auto v = T.canonical_vertex(random_matrix(K, rng));
      CHECK((T.distance(T.v0(), v) % 2 == 0) == (T.parity(v) == Parity::Even));
      // det-valuation zero: k1 diag(pi^m, pi^-m) k2
      long m = rng.uniform(-3, 3);
      Mat2 g = random_gl2o(K, rng) * Mat2::diag(K.pi_pow(m), K.pi_pow(-m), K) * random_gl2o(K, rng);
      CHECK(T.parity(T.act(g, v)) == T.parity(v));
      CHECK(T.parity(T.act(T.s(), v)) != T.parity(v));
    }
  }
}

TEST_CASE("steps toward ends") {
  Tree T(FieldConfig::rational(2));
  const auto& K = T.field();
  auto U10 = T.make_end(K.one(), K.zero());
  auto U01 = T.make_end(K.zero(), K.one());
  CHECK(T.step_toward_end(T.v0(), U10) == T.apartment_vertex(1));
  CHECK(T.step_toward_end(T.apartment_vertex(1), U10) == T.apartment_vertex(2));
  CHECK(T.step_toward_end(T.apartment_vertex(1), U01) == T.v0());
  // Oracle for the first: pi O^2 + O e1 = O + pi O.
  CHECK(T.canonical_vertex(Mat2{K.one(), K.zero(), K.zero(), K.pi()}) == T.step_toward_end(T.v0(), U10));

  for (auto cfg : configs()) {
    Tree Tc(cfg);
    const auto& Kc = Tc.field();
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
      auto v = Tc.canonical_vertex(random_matrix(Kc, rng));
      auto U = Tc.make_end(Kc.random_integral(rng), Kc.random_nonzero(rng, -2, 2));
      std::vector<VertexLabel> ray{v};
      for (int k = 0; k < 6; ++k) ray.push_back(Tc.step_toward_end(ray.back(), U));
      for (int k = 0; k <= 6; ++k) {
        CHECK(Tc.distance(v, ray[k]) == k);
        CHECK(Tc.distance(ray[k], ray[6]) == 6 - k);
      }
      CHECK(Tc.geodesic(v, ray[6]) == ray);
    }
  }
}

TEST_CASE("window cardinalities and ordering") {
  Tree T(FieldConfig::rational(2));
  auto W2 = T.window(WindowKind::Tn, 2);
  CHECK(W2->vertices.size() == 10);
  CHECK(W2->edges.size() == 9);
  auto P1 = T.window(WindowKind::TnPrime, 1);
  CHECK(P1->vertices.size() == 6);
  CHECK(P1->edges.size() == 5);
  for (auto cfg : configs()) {
    Tree Tc(cfg);
    int q = Tc.q();
    auto W0 = Tc.window(WindowKind::Tn, 0);
    CHECK(W0->vertices.size() == 1);
    CHECK(W0->edges.empty());
    CHECK(static_cast<int>(W0->arrows.size()) == q + 1);
    for (int n = 0; n <= 3; ++n) {
      auto W = Tc.window(WindowKind::Tn, n);
      long qn = 1;
      for (int i = 0; i < n; ++i) qn *= q;
      long nv = 1 + (q + 1) * (qn - 1) / (q - 1);
      CHECK(static_cast<long>(W->vertices.size()) == nv);
      CHECK(static_cast<long>(W->edges.size()) == nv - 1);
      CHECK(static_cast<long>(W->arrows.size()) == nv * (q + 1));
      auto Wp = Tc.window(WindowKind::TnPrime, n);
      CHECK(static_cast<long>(Wp->vertices.size()) == nv + qn);
      // BFS prefix property.
      auto Wn = Tc.window(WindowKind::Tn, n + 1);
      auto Wpn = Tc.window(WindowKind::TnPrime, n + 1);
      for (std::size_t i = 0; i < W->vertices.size(); ++i) CHECK(Wn->vertices[i] == W->vertices[i]);
      for (std::size_t i = 0; i < Wp->vertices.size(); ++i) CHECK(Wpn->vertices[i] == Wp->vertices[i]);
      for (std::size_t i = 0; i < W->edges.size(); ++i) {
        CHECK(W->edges[i] == Edge(W->vertices[W->parent[i + 1]], W->vertices[i + 1]));
        CHECK(Tc.distance(W->edges[i].u, W->edges[i].w) == 1);
      }
      // Every vertex is (q+1)-regular in the full tree.
      for (const auto& v : Wp->vertices) {
        auto nb = Tc.neighbors(v);
        CHECK(std::set<VertexLabel>(nb.begin(), nb.end()).size() == static_cast<std::size_t>(q + 1));
      }
    }
  }
}

TEST_CASE("T'_n = T_n u sT_n = T_{n+1} n sT_{n+1}") {
  for (auto cfg : {FieldConfig::rational(2), FieldConfig::rational(3)}) {
    Tree T(cfg);
    for (int n = 0; n <= 4; ++n) {
      auto Tn = T.window(WindowKind::Tn, n);
      auto Tn1 = T.window(WindowKind::Tn, n + 1);
      auto Tp = T.window(WindowKind::TnPrime, n);
      std::set<VertexLabel> prime(Tp->vertices.begin(), Tp->vertices.end());
      std::set<VertexLabel> uni(Tn->vertices.begin(), Tn->vertices.end());
      for (const auto& v : Tn->vertices) uni.insert(T.act(T.s(), v));
      CHECK(prime == uni);
      std::set<VertexLabel> inter;
      std::set<VertexLabel> big(Tn1->vertices.begin(), Tn1->vertices.end());
      for (const auto& v : Tn1->vertices)
        if (big.count(T.act(T.s(), v))) inter.insert(T.act(T.s(), v));
      CHECK(prime == inter);
      // Edge sets.
      std::set<std::pair<VertexLabel, VertexLabel>> pe, ue;
      for (const auto& e : Tp->edges) pe.insert({e.u, e.w});
      for (const auto& e : Tn->edges) {
        ue.insert({e.u, e.w});
        auto se = T.act(T.s(), e);
        ue.insert({se.u, se.w});
      }
      ue.insert({T.apartment_edge(0).u, T.apartment_edge(0).w});
      CHECK(pe == ue);
      // The window V'_n is also {v : d(v,v0) <= n or d(v,v1) <= n}.
      for (const auto& v : Tn1->vertices) {
        bool in = T.distance(v, T.v0()) <= n || T.distance(v, T.apartment_vertex(1)) <= n;
        CHECK(in == (prime.count(v) == 1));
      }
    }
  }
}

TEST_CASE("window export") {
  Tree T(FieldConfig::rational(2));
  auto W = T.window(WindowKind::TnPrime, 1);
  auto dot = W->to_dot();
  CHECK(std::count(dot.begin(), dot.end(), '\n') == 1 + 6 + 5 + 1);
  CHECK(W->to_json()["vertices"].size() == 6);
  CHECK(W->to_json()["edges"].size() == 5);
}
