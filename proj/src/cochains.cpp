#include "btlab/cochains.hpp"

#include <algorithm>
#include <numeric>

#include "btlab/errors.hpp"

namespace btlab {

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::Vertices:
      return "vertices";
    case Domain::Edges:
      return "edges";
    case Domain::Arrows:
      return "arrows";
  }
  return "?";
}

// ---------------------------------------------------------------- vectors

std::size_t CochainVector::domain_size(const SubtreeWindow& w, Domain d) {
  switch (d) {
    case Domain::Vertices:
      return w.vertices.size();
    case Domain::Edges:
      return w.edges.size();
    case Domain::Arrows:
      return w.arrows.size();
  }
  return 0;
}

CochainVector CochainVector::zero(WindowPtr w, Domain d) {
  CochainVector c;
  c.values.assign(domain_size(*w, d), 0);
  c.window = std::move(w);
  c.domain = d;
  return c;
}

CochainVector CochainVector::indicator(WindowPtr w, Domain d, const std::vector<int>& support) {
  CochainVector c = zero(std::move(w), d);
  for (int i : support) c.values.at(static_cast<std::size_t>(i)) = 1;
  return c;
}

bool CochainVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](std::int64_t x) { return x == 0; });
}

bool CochainVector::same_domain(const CochainVector& o) const {
  return domain == o.domain && window && o.window && window->same_shape(*o.window);
}

namespace {

void require_same(const CochainVector& a, const CochainVector& b) {
  if (!a.same_domain(b)) throw WindowMismatch("cochains live on different domains");
}

}  // namespace

CochainVector CochainVector::operator+(const CochainVector& o) const {
  require_same(*this, o);
  CochainVector r = *this;
  for (std::size_t i = 0; i < values.size(); ++i) r.values[i] += o.values[i];
  return r;
}

CochainVector CochainVector::operator-(const CochainVector& o) const {
  require_same(*this, o);
  CochainVector r = *this;
  for (std::size_t i = 0; i < values.size(); ++i) r.values[i] -= o.values[i];
  return r;
}

CochainVector CochainVector::operator-() const { return *this * -1; }

CochainVector CochainVector::operator*(std::int64_t k) const {
  CochainVector r = *this;
  for (auto& x : r.values) x *= k;
  return r;
}

CochainVector CochainVector::restrict_to(WindowPtr smaller) const {
  if (smaller->kind != window->kind || smaller->q != window->q || smaller->n > window->n)
    throw WindowMismatch("restriction target is not a sub-window");
  CochainVector r = zero(smaller, domain);
  std::copy_n(values.begin(), r.values.size(), r.values.begin());
  return r;
}

nlohmann::json CochainVector::to_json() const {
  return {{"window", window_kind_name(window->kind)},
          {"n", window->n},
          {"domain", domain_name(domain)},
          {"values", values}};
}

// ------------------------------------------------------------------ sigma

CochainVector sigma(const CochainVector& phi, WindowPtr target) {
  const SubtreeWindow& big = *phi.window;
  if (phi.domain != Domain::Edges || target->kind != big.kind || target->q != big.q || target->n + 1 != big.n)
    throw WindowMismatch("sigma expects edges over E_{n+1} and vertices over V_n");
  CochainVector out = CochainVector::zero(target, Domain::Vertices);
  for (std::size_t v = 0; v < target->vertices.size(); ++v) {
    std::int64_t s = v > 0 ? phi.values[v - 1] : 0;
    for (int c : big.children[v]) s += phi.values[static_cast<std::size_t>(c - 1)];
    out.values[v] = s;
  }
  return out;
}

CochainVector sigma(const Tree& T, const CochainVector& phi) {
  if (phi.window->n < 1) throw WindowMismatch("sigma needs an edge window of radius >= 1");
  return sigma(phi, T.window(phi.window->kind, phi.window->n - 1));
}

bool is_harmonic(const Tree& T, const CochainVector& phi) {
  const SubtreeWindow& W = *phi.window;
  if (phi.domain == Domain::Edges) {
    if (W.n == 0) return true;
    return sigma(T, phi).is_zero();
  }
  if (phi.domain != Domain::Arrows) throw WindowMismatch("harmonicity is defined for edges and arrows");
  std::vector<std::int64_t> sums(W.vertices.size(), 0);
  for (std::size_t i = 0; i < W.arrows.size(); ++i) {
    const Arrow& a = W.arrows[i];
    sums[static_cast<std::size_t>(W.vertex_index(a.src))] += phi.values[i];
    int back = W.arrow_index(a.reversed());
    if (back >= 0 && phi.values[static_cast<std::size_t>(back)] != -phi.values[i]) return false;
  }
  return std::all_of(sums.begin(), sums.end(), [](std::int64_t x) { return x == 0; });
}

CochainVector arrows_to_edges(const Tree& T, const CochainVector& phi) {
  if (phi.domain != Domain::Arrows) throw WindowMismatch("arrows_to_edges expects an arrow cochain");
  if (!is_harmonic(T, phi)) throw NotHarmonic("arrow cochain is not a current");
  const SubtreeWindow& small = *phi.window;
  WindowPtr big = T.window(small.kind, small.n + 1);
  CochainVector out = CochainVector::zero(big, Domain::Edges);
  for (std::size_t j = 0; j < big->edges.size(); ++j) {
    const VertexLabel& child = big->vertices[j + 1];
    const VertexLabel& par = big->vertices[static_cast<std::size_t>(big->parent[j + 1])];
    bool par_even = T.parity(par) == Parity::Even;
    const VertexLabel& plus = par_even ? par : child;
    const VertexLabel& minus = par_even ? child : par;
    int a = small.arrow_index({plus, minus});
    if (a >= 0) {
      out.values[j] = phi.values[static_cast<std::size_t>(a)];
    } else {
      out.values[j] = -phi.values[static_cast<std::size_t>(small.arrow_index({minus, plus}))];
    }
  }
  return out;
}

CochainVector edges_to_arrows(const Tree& T, const CochainVector& psi) {
  if (psi.domain != Domain::Edges || psi.window->n < 1) throw WindowMismatch("edges_to_arrows expects edges over E_{n+1}");
  if (!is_harmonic(T, psi)) throw NotHarmonic("edge cochain is not a current");
  const SubtreeWindow& big = *psi.window;
  WindowPtr small = T.window(big.kind, big.n - 1);
  CochainVector out = CochainVector::zero(small, Domain::Arrows);
  for (std::size_t i = 0; i < small->arrows.size(); ++i) {
    const Arrow& a = small->arrows[i];
    std::int64_t val = psi.values[static_cast<std::size_t>(big.edge_index(Edge(a.src, a.dst)))];
    out.values[i] = T.parity(a.src) == Parity::Even ? val : -val;
  }
  return out;
}

// ----------------------------------------------------------------- action

namespace {

// Index in `source` of g x for each x in target's domain; -1 when absent.
std::vector<int> pull_indices(const Tree& T, const Mat2& g, const SubtreeWindow& target, const SubtreeWindow& source,
                              Domain d) {
  std::vector<VertexLabel> img;
  img.reserve(target.vertices.size());
  for (const auto& v : target.vertices) img.push_back(T.act(g, v));
  std::vector<int> idx;
  switch (d) {
    case Domain::Vertices:
      for (const auto& v : img) idx.push_back(source.vertex_index(v));
      break;
    case Domain::Edges:
      for (std::size_t j = 0; j < target.edges.size(); ++j)
        idx.push_back(source.edge_index(Edge(img[static_cast<std::size_t>(target.parent[j + 1])], img[j + 1])));
      break;
    case Domain::Arrows:
      for (const auto& a : target.arrows) {
        int di = target.vertex_index(a.dst);
        VertexLabel dst = di >= 0 ? img[static_cast<std::size_t>(di)] : T.act(g, a.dst);
        idx.push_back(source.arrow_index({img[static_cast<std::size_t>(target.vertex_index(a.src))], dst}));
      }
      break;
  }
  return idx;
}

}  // namespace

CochainVector act_cochain(const Tree& T, const Mat2& g, const CochainVector& phi, WindowPtr target) {
  if (target->q != phi.window->q) throw WindowMismatch("windows of different trees");
  std::vector<int> idx = pull_indices(T, g.inverse(), *target, *phi.window, phi.domain);
  CochainVector out = CochainVector::zero(target, phi.domain);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0) throw WindowEscape("preimage leaves the cochain's window");
    out.values[i] = phi.values[static_cast<std::size_t>(idx[i])];
  }
  return out;
}

CochainVector s_twisted_act(const Tree& T, const CochainVector& phi) {
  if (phi.domain == Domain::Arrows) throw WindowMismatch("twisted s-action is defined on vertices and edges");
  return -act_cochain(T, T.s(), phi, phi.window);
}

// ----------------------------------------------------------------- orbits

int OrbitBasis::position_of(long i) const {
  auto it = std::find(apartment_index.begin(), apartment_index.end(), i);
  return it == apartment_index.end() ? -1 : static_cast<int>(it - apartment_index.begin());
}

CochainVector OrbitBasis::combination(const IntVec& coords) const {
  if (coords.size() != orbits.size()) throw Error("orbit coordinate length mismatch");
  CochainVector c = CochainVector::zero(window, domain);
  for (std::size_t k = 0; k < orbits.size(); ++k)
    for (int i : orbits[k]) c.values[static_cast<std::size_t>(i)] = coords[k].get_si();
  return c;
}

IntVec OrbitBasis::coordinates(const CochainVector& phi) const {
  IntVec coords;
  for (const auto& orb : orbits) coords.emplace_back(static_cast<long>(phi.values[static_cast<std::size_t>(orb.front())]));
  if (!(combination(coords).values == phi.values)) throw Error("cochain is not constant on orbits");
  return coords;
}

namespace {

int find_root(std::vector<int>& uf, int x) {
  while (uf[static_cast<std::size_t>(x)] != x) {
    uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
    x = uf[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

OrbitBasis orbit_invariants(const Tree& T, SubgroupTag tag, WindowPtr w, Domain d) {
  OrbitBasis B;
  B.tag = tag;
  B.level = w->n + 2;
  B.window = w;
  B.domain = d;
  std::size_t size = CochainVector::domain_size(*w, d);
  std::vector<int> uf(size);
  std::iota(uf.begin(), uf.end(), 0);
  for (const auto& g : generators(T.field(), tag, B.level)) {
    std::vector<int> img = pull_indices(T, g.matrix(), *w, *w, d);
    for (std::size_t i = 0; i < size; ++i) {
      if (img[i] < 0) throw WindowEscape("window is not stable under " + tag.name());
      int a = find_root(uf, static_cast<int>(i)), b = find_root(uf, img[i]);
      if (a != b) uf[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  // Apartment labels present in the window.
  std::vector<std::pair<long, int>> marks;
  long R = w->n + 2;
  for (long i = -R; i <= R; ++i) {
    int idx = -1;
    if (d == Domain::Vertices) idx = w->vertex_index(T.apartment_vertex(i));
    if (d == Domain::Edges) idx = w->edge_index(T.apartment_edge(i));
    if (d == Domain::Arrows) idx = w->arrow_index({T.apartment_vertex(i), T.apartment_vertex(i + 1)});
    if (idx >= 0) marks.emplace_back(i, idx);
  }
  // Label each orbit by its smallest nonnegative apartment index, else by
  // the negative one closest to zero.
  std::vector<long> label(size, 0);
  std::vector<bool> labelled(size, false);
  auto better = [](long a, long b) {
    if ((a >= 0) != (b >= 0)) return a >= 0;
    return a >= 0 ? a < b : a > b;
  };
  for (auto [i, idx] : marks) {
    auto r = static_cast<std::size_t>(find_root(uf, idx));
    if (!labelled[r] || better(i, label[r])) {
      label[r] = i;
      labelled[r] = true;
    }
  }
  std::vector<std::pair<long, std::size_t>> roots;
  for (std::size_t i = 0; i < size; ++i)
    if (find_root(uf, static_cast<int>(i)) == static_cast<int>(i)) {
      if (!labelled[i]) throw Error("orbit without an apartment representative");
      roots.emplace_back(label[i], i);
    }
  std::sort(roots.begin(), roots.end());
  B.orbit_of.assign(size, -1);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    B.apartment_index.push_back(roots[k].first);
    B.orbits.emplace_back();
  }
  for (std::size_t i = 0; i < size; ++i) {
    auto r = static_cast<std::size_t>(find_root(uf, static_cast<int>(i)));
    auto pos = std::find_if(roots.begin(), roots.end(), [&](const auto& p) { return p.second == r; }) - roots.begin();
    B.orbit_of[i] = static_cast<int>(pos);
    B.orbits[static_cast<std::size_t>(pos)].push_back(static_cast<int>(i));
  }
  for (const auto& orb : B.orbits) B.indicators.push_back(CochainVector::indicator(w, d, orb));
  return B;
}

WindowKind window_kind_for(SubgroupTag tag) {
  if (tag.kind == SubgroupKind::MaxCompact) return WindowKind::Tn;
  if (tag.kind == SubgroupKind::Iwahori) return WindowKind::TnPrime;
  throw InvalidConfig("invariant Sigma matrices exist for G0 and the Iwahori subgroup only");
}

InvariantSigma invariant_sigma(const Tree& T, SubgroupTag tag, int n) {
  WindowKind kind = window_kind_for(tag);
  InvariantSigma out;
  out.vertices = orbit_invariants(T, tag, T.window(kind, n), Domain::Vertices);
  out.edges = orbit_invariants(T, tag, T.window(kind, n + 1), Domain::Edges);
  out.matrix = IntMatrix(out.vertices.size(), out.edges.size());
  for (std::size_t c = 0; c < out.edges.size(); ++c) {
    IntVec col = out.vertices.coordinates(sigma(out.edges.indicators[c], out.vertices.window));
    for (std::size_t r = 0; r < col.size(); ++r) out.matrix(r, c) = col[r];
  }
  return out;
}

IntMatrix sigma_matrix_on_invariants(const Tree& T, SubgroupTag tag, int n) { return invariant_sigma(T, tag, n).matrix; }

// ------------------------------------------------------------- preimages

namespace {

CochainVector solve_with_prefix(const Tree& T, const CochainVector& eta, const std::vector<std::int64_t>& prefix) {
  if (eta.domain != Domain::Vertices) throw WindowMismatch("solve_sigma expects a vertex cochain");
  const SubtreeWindow& small = *eta.window;
  WindowPtr big = T.window(small.kind, small.n + 1);
  CochainVector out = CochainVector::zero(big, Domain::Edges);
  std::size_t fixed = prefix.size();
  std::copy(prefix.begin(), prefix.end(), out.values.begin());
  for (std::size_t v = 0; v < small.vertices.size(); ++v) {
    const auto& ch = big->children[v];
    auto first = static_cast<std::size_t>(ch.front() - 1);
    if (first < fixed) continue;
    std::int64_t s = v > 0 ? out.values[v - 1] : 0;
    for (std::size_t k = 1; k < ch.size(); ++k) s += out.values[static_cast<std::size_t>(ch[k] - 1)];
    out.values[first] = eta.values[v] - s;
  }
  if (!(sigma(out, eta.window) == eta)) throw NotHarmonic("seed is inconsistent with the prescribed vertex sums");
  return out;
}

}  // namespace

CochainVector solve_sigma(const Tree& T, const CochainVector& eta) { return solve_with_prefix(T, eta, {}); }

CochainVector solve_sigma(const Tree& T, const CochainVector& eta, const CochainVector& seed) {
  if (seed.domain != Domain::Edges || seed.window->kind != eta.window->kind || seed.window->n > eta.window->n + 1)
    throw WindowMismatch("seed must be an edge cochain on a smaller window");
  return solve_with_prefix(T, eta, seed.values);
}

CochainVector extend_current(const Tree& T, const CochainVector& phi) {
  if (phi.domain != Domain::Edges) throw WindowMismatch("extend_current expects an edge cochain");
  return solve_sigma(T, CochainVector::zero(phi.window, Domain::Vertices), phi);
}

// ---------------------------------------------------------------- currents

CurrentBasis::CurrentBasis(const Tree& T, WindowKind kind, int n)
    : T_(T), vertices_(T.window(kind, n)), edges_(T.window(kind, n + 1)) {
  free_pos_.assign(edges_->edges.size(), -1);
  for (std::size_t v = 0; v < vertices_->vertices.size(); ++v) {
    const auto& ch = edges_->children[v];
    for (std::size_t k = 1; k < ch.size(); ++k) {
      free_pos_[static_cast<std::size_t>(ch[k] - 1)] = static_cast<int>(free_.size());
      free_.push_back(ch[k] - 1);
    }
  }
  for (std::size_t j = 0; j < free_.size(); ++j) {
    std::vector<std::int64_t> unit(free_.size(), 0);
    unit[j] = 1;
    basis_.push_back(element(unit));
  }
}

CochainVector CurrentBasis::element(const std::vector<std::int64_t>& coords) const {
  if (coords.size() != free_.size()) throw Error("current coordinate length mismatch");
  CochainVector c = CochainVector::zero(edges_, Domain::Edges);
  for (std::size_t j = 0; j < free_.size(); ++j) c.values[static_cast<std::size_t>(free_[j])] = coords[j];
  for (std::size_t v = 0; v < vertices_->vertices.size(); ++v) {
    const auto& ch = edges_->children[v];
    std::int64_t s = v > 0 ? c.values[v - 1] : 0;
    for (std::size_t k = 1; k < ch.size(); ++k) s += c.values[static_cast<std::size_t>(ch[k] - 1)];
    c.values[static_cast<std::size_t>(ch.front() - 1)] = -s;
  }
  return c;
}

CochainVector CurrentBasis::element(const IntVec& coords) const {
  std::vector<std::int64_t> c;
  for (const auto& z : coords) {
    if (!z.fits_slong_p()) throw TooLarge("current coordinate exceeds 64 bits");
    c.push_back(z.get_si());
  }
  return element(c);
}

IntVec CurrentBasis::coordinates(const CochainVector& phi) const {
  if (phi.domain != Domain::Edges || !phi.window->same_shape(*edges_)) throw WindowMismatch("current on the wrong window");
  if (!is_harmonic(T_, phi)) throw NotHarmonic("edge cochain is not a current");
  IntVec out;
  for (int e : free_) out.emplace_back(static_cast<long>(phi.values[static_cast<std::size_t>(e)]));
  return out;
}

IntMatrix CurrentBasis::action_matrix(const Mat2& g) const {
  std::vector<int> idx = pull_indices(T_, g.inverse(), *edges_, *edges_, Domain::Edges);
  IntMatrix rho(rank(), rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    int e = idx[static_cast<std::size_t>(free_[i])];
    if (e < 0) throw WindowEscape("group element does not preserve the window");
    for (std::size_t j = 0; j < rank(); ++j) rho(i, j) = static_cast<long>(basis_[j].values[static_cast<std::size_t>(e)]);
  }
  return rho;
}

IntMatrix CurrentBasis::s_twisted_matrix() const {
  IntMatrix rho = action_matrix(T_.s());
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) rho(i, j) = -rho(i, j);
  return rho;
}

}  // namespace btlab
