#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "btlab/bttree.hpp"
#include "btlab/cochains.hpp"
#include "btlab/groups.hpp"
#include "json.hpp"

namespace btlab {

// +1 if a lies on the geodesic between L' and L and points toward L, -1 if
// it points toward L', 0 off that geodesic.  Throws EqualLines if L == L'.
int pair_value(const Tree& T, const End& L, const End& Lp, const Arrow& a);

/// Product of F-rational linear forms with integer exponents summing to 0,
/// each form recorded by its kernel.  Scalars are not tracked.
struct FormalUnit {
  std::vector<std::pair<End, long>> factors;

  static FormalUnit quotient(const End& num, const End& den) { return {{{num, 1}, {den, -1}}}; }
  void validate() const;
};

/// Finite integer combination of geodesic line currents pair(L, L'),
/// evaluated lazily at arrows.
class LineCurrent {
 public:
  struct Term {
    End L, Lp;
    long weight;
  };

  LineCurrent() = default;
  static LineCurrent line(const End& L, const End& Lp) {
    LineCurrent c;
    c.add(L, Lp, 1);
    return c;
  }

  // Terms with L == L' or weight 0 contribute nothing and are dropped.
  void add(const End& L, const End& Lp, long weight);
  LineCurrent& operator+=(const LineCurrent& o);
  LineCurrent operator+(const LineCurrent& o) const;
  LineCurrent operator-(const LineCurrent& o) const;
  LineCurrent operator*(long k) const;

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  std::int64_t value(const Tree& T, const Arrow& a) const;
  // g . phi, i.e. the current with every line moved by g.
  LineCurrent translated(const Tree& T, const Mat2& g) const;

  // Values on the arrows A_{<=n} of a window.
  CochainVector on_arrows(const Tree& T, WindowPtr w) const;
  // Edge form {v+, v-} -> value at (v+, v-) on an edge window.
  CochainVector on_edges(const Tree& T, WindowPtr w) const;

  nlohmann::json to_json() const;

 private:
  std::vector<Term> terms_;
};

// Sum of m_i pair(L_i, L_base).
LineCurrent transform(const FormalUnit& f, std::size_t base = 0);

// [1 : 0], the kernel of (x, y) -> y.
End base_line(const Tree& T);

// pair(g L, L).
LineCurrent j_cocycle(const Tree& T, const End& L, const Mat2& g);

// Kernels of pi zeta x + y for zeta = 0 and zeta running over the unit
// representatives: [1 : 0] first, then [1 : -pi zeta].
std::vector<End> theta_lines(const Tree& T);
// Sum over those lines L_z of pair(g L_z, L_z).
LineCurrent theta_cocycle(const Tree& T, const Mat2& g);
// c = sum over those lines of pair(L_z, [1:0]).
LineCurrent theta_correction(const Tree& T);
// P(theta(g)) - q P(j(g)) == g.c - c on the arrows of w; the right side is
// evaluated by pulling arrows back along g.
bool theta_identity(const Tree& T, const Mat2& g, WindowPtr w);

// Sum over coset representatives g_i of G0 / G_{n+1} B0 of
// pair(g_i L, L) - pair(g g_i L, L) with L = [1:0].
LineCurrent beta_current(const Tree& T, const Mat2& g, int n);
// beta_current vanishes on every arrow of w.  g must lie in G0.
bool beta_vanishing(const Tree& T, int n, const GroupElement& g, WindowPtr w);

// 1 iff (v+, v-) points toward U.
int flow_value(const Tree& T, const End& U, const VertexLabel& plus, const VertexLabel& minus);
// flow_value on E_{n+1}.
CochainVector flow_phi(const Tree& T, const End& U, int n, WindowKind kind = WindowKind::Tn);
// +1 / -1 on the edges of the ray from v0 to U according as (v+, v-) points
// toward or away from U; 0 elsewhere.  Over E_{n+1}.
CochainVector path_psi(const Tree& T, const End& U, int n);

}  // namespace btlab
