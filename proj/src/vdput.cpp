#include "btlab/vdput.hpp"

#include "btlab/errors.hpp"

namespace btlab {

int pair_value(const Tree& T, const End& L, const End& Lp, const Arrow& a) {
  if (L == Lp) throw EqualLines();
  int d1 = T.direction(a.src, L);
  int d2 = T.direction(a.src, Lp);
  if (d1 == d2) return 0;
  int k = T.direction_to_vertex(a.src, a.dst);
  if (k == d1) return 1;
  if (k == d2) return -1;
  return 0;
}

void FormalUnit::validate() const {
  long total = 0;
  for (const auto& f : factors) total += f.second;
  if (total != 0) throw InvalidConfig("formal unit must have total multiplicity 0");
}

// ------------------------------------------------------------ LineCurrent

void LineCurrent::add(const End& L, const End& Lp, long weight) {
  if (weight == 0 || L == Lp) return;
  terms_.push_back({L, Lp, weight});
}

LineCurrent& LineCurrent::operator+=(const LineCurrent& o) {
  for (const auto& t : o.terms_) terms_.push_back(t);
  return *this;
}

LineCurrent LineCurrent::operator+(const LineCurrent& o) const {
  LineCurrent r = *this;
  r += o;
  return r;
}

LineCurrent LineCurrent::operator-(const LineCurrent& o) const { return *this + o * -1; }

LineCurrent LineCurrent::operator*(long k) const {
  LineCurrent r;
  for (const auto& t : terms_) r.add(t.L, t.Lp, t.weight * k);
  return r;
}

std::int64_t LineCurrent::value(const Tree& T, const Arrow& a) const {
  if (terms_.empty()) return 0;
  int k = T.direction_to_vertex(a.src, a.dst);
  std::int64_t s = 0;
  for (const auto& t : terms_) {
    int d1 = T.direction(a.src, t.L);
    int d2 = T.direction(a.src, t.Lp);
    if (d1 == d2) continue;
    if (k == d1) s += t.weight;
    if (k == d2) s -= t.weight;
  }
  return s;
}

LineCurrent LineCurrent::translated(const Tree& T, const Mat2& g) const {
  LineCurrent r;
  for (const auto& t : terms_) r.add(T.act(g, t.L), T.act(g, t.Lp), t.weight);
  return r;
}

CochainVector LineCurrent::on_arrows(const Tree& T, WindowPtr w) const {
  CochainVector out = CochainVector::zero(w, Domain::Arrows);
  // Arrows are grouped by source, q+1 per vertex in neighbor order.
  std::size_t deg = static_cast<std::size_t>(w->q + 1);
  for (std::size_t v = 0; v < w->vertices.size(); ++v)
    for (const auto& t : terms_) {
      int d1 = T.direction(w->vertices[v], t.L);
      int d2 = T.direction(w->vertices[v], t.Lp);
      if (d1 == d2) continue;
      out.values[v * deg + static_cast<std::size_t>(d1)] += t.weight;
      out.values[v * deg + static_cast<std::size_t>(d2)] -= t.weight;
    }
  return out;
}

CochainVector LineCurrent::on_edges(const Tree& T, WindowPtr w) const {
  CochainVector out = CochainVector::zero(w, Domain::Edges);
  for (std::size_t j = 0; j < w->edges.size(); ++j) {
    const VertexLabel& child = w->vertices[j + 1];
    const VertexLabel& par = w->vertices[static_cast<std::size_t>(w->parent[j + 1])];
    bool par_even = T.parity(par) == Parity::Even;
    out.values[j] = par_even ? value(T, {par, child}) : value(T, {child, par});
  }
  return out;
}

nlohmann::json LineCurrent::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) arr.push_back({{"toward", t.L.str()}, {"from", t.Lp.str()}, {"weight", t.weight}});
  return arr;
}

LineCurrent transform(const FormalUnit& f, std::size_t base) {
  f.validate();
  if (f.factors.empty()) return {};
  if (base >= f.factors.size()) throw InvalidConfig("base line index out of range");
  const End& L0 = f.factors[base].first;
  LineCurrent c;
  for (const auto& [L, m] : f.factors) c.add(L, L0, m);
  return c;
}

// ------------------------------------------------------------- cocycles

End base_line(const Tree& T) { return T.make_end(T.field().one(), T.field().zero()); }

LineCurrent j_cocycle(const Tree& T, const End& L, const Mat2& g) { return LineCurrent::line(T.act(g, L), L); }

std::vector<End> theta_lines(const Tree& T) {
  const LocalField& K = T.field();
  std::vector<End> out{base_line(T)};
  for (const auto& z : K.unit_representatives()) out.push_back(T.make_end(K.one(), -(K.pi() * z)));
  return out;
}

LineCurrent theta_cocycle(const Tree& T, const Mat2& g) {
  LineCurrent c;
  for (const auto& L : theta_lines(T)) c.add(T.act(g, L), L, 1);
  return c;
}

LineCurrent theta_correction(const Tree& T) {
  LineCurrent c;
  End L0 = base_line(T);
  for (const auto& L : theta_lines(T)) c.add(L, L0, 1);
  return c;
}

bool theta_identity(const Tree& T, const Mat2& g, WindowPtr w) {
  LineCurrent lhs = theta_cocycle(T, g) - j_cocycle(T, base_line(T), g) * T.q();
  CochainVector left = lhs.on_arrows(T, w);
  LineCurrent c = theta_correction(T);
  Mat2 ginv = g.inverse();
  for (std::size_t i = 0; i < w->arrows.size(); ++i) {
    const Arrow& a = w->arrows[i];
    std::int64_t rhs = c.value(T, T.act(ginv, a)) - c.value(T, a);
    if (left.values[i] != rhs) return false;
  }
  return true;
}

LineCurrent beta_current(const Tree& T, const Mat2& g, int n) {
  const LocalField& K = T.field();
  End L = base_line(T);
  LineCurrent c;
  for (const auto& gi : coset_reps_G0_mod_GnB0(K, n)) {
    End giL = T.act(gi.matrix(), L);
    c.add(giL, L, 1);
    c.add(T.act(g, giL), L, -1);
  }
  return c;
}

bool beta_vanishing(const Tree& T, int n, const GroupElement& g, WindowPtr w) {
  if (!member(T.field(), g, SubgroupTag::max_compact())) throw InvalidConfig("beta_n is defined on G0");
  return beta_current(T, g.matrix(), n).on_arrows(T, w).is_zero();
}

// ---------------------------------------------------------------- flows

int flow_value(const Tree& T, const End& U, const VertexLabel& plus, const VertexLabel& minus) {
  return T.step_toward_end(plus, U) == minus ? 1 : 0;
}

CochainVector flow_phi(const Tree& T, const End& U, int n, WindowKind kind) {
  WindowPtr w = T.window(kind, n + 1);
  CochainVector out = CochainVector::zero(w, Domain::Edges);
  for (std::size_t j = 0; j < w->edges.size(); ++j) {
    const VertexLabel& child = w->vertices[j + 1];
    const VertexLabel& par = w->vertices[static_cast<std::size_t>(w->parent[j + 1])];
    out.values[j] = T.parity(par) == Parity::Even ? flow_value(T, U, par, child) : flow_value(T, U, child, par);
  }
  return out;
}

CochainVector path_psi(const Tree& T, const End& U, int n) {
  WindowPtr w = T.window(WindowKind::Tn, n + 1);
  CochainVector out = CochainVector::zero(w, Domain::Edges);
  VertexLabel cur = T.v0();
  for (int k = 0; k <= n; ++k) {
    VertexLabel next = T.step_toward_end(cur, U);
    bool cur_even = T.parity(cur) == Parity::Even;
    const VertexLabel& plus = cur_even ? cur : next;
    const VertexLabel& minus = cur_even ? next : cur;
    out.values[static_cast<std::size_t>(w->edge_index(Edge(cur, next)))] =
        T.step_toward_end(plus, U) == minus ? 1 : -1;
    cur = next;
  }
  return out;
}

}  // namespace btlab
