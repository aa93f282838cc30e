#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btlab/bttree.hpp"
#include "btlab/groups.hpp"
#include "btlab/intlin.hpp"
#include "json.hpp"

namespace btlab {

enum class Domain { Vertices, Edges, Arrows };
std::string domain_name(Domain d);

/// Integer function on the vertices, edges or arrows of a window, stored in
/// the window's order.
struct CochainVector {
  WindowPtr window;
  Domain domain = Domain::Edges;
  std::vector<std::int64_t> values;

  static CochainVector zero(WindowPtr w, Domain d);
  static CochainVector indicator(WindowPtr w, Domain d, const std::vector<int>& support);
  static std::size_t domain_size(const SubtreeWindow& w, Domain d);

  std::size_t size() const { return values.size(); }
  bool is_zero() const;
  bool same_domain(const CochainVector& o) const;

  CochainVector operator+(const CochainVector& o) const;
  CochainVector operator-(const CochainVector& o) const;
  CochainVector operator-() const;
  CochainVector operator*(std::int64_t k) const;
  bool operator==(const CochainVector& o) const { return same_domain(o) && values == o.values; }

  // Values on the prefix domain of a smaller window of the same kind.
  CochainVector restrict_to(WindowPtr smaller) const;

  nlohmann::json to_json() const;
};

// Edge function on E_{n+1} (or E'_{n+1}) to vertex sums on V_n (or V'_n).
CochainVector sigma(const CochainVector& phi, WindowPtr target);
CochainVector sigma(const Tree& T, const CochainVector& phi);

bool is_harmonic(const Tree& T, const CochainVector& phi);

// Harmonic arrow function on A_{<=n} to the matching edge current on E_{n+1}.
CochainVector arrows_to_edges(const Tree& T, const CochainVector& phi);
CochainVector edges_to_arrows(const Tree& T, const CochainVector& psi);

// (g phi)(x) = phi(g^{-1} x) for x in the target window's domain.
CochainVector act_cochain(const Tree& T, const Mat2& g, const CochainVector& phi, WindowPtr target);
inline CochainVector act_cochain(const Tree& T, const Mat2& g, const CochainVector& phi) {
  return act_cochain(T, g, phi, phi.window);
}
// x -> -phi(s^{-1} x) on the same window.
CochainVector s_twisted_act(const Tree& T, const CochainVector& phi);

/// Orbits of a subgroup on one domain of a window, each labelled by the
/// standard apartment vertex v_i or edge e_i it contains.
struct OrbitBasis {
  SubgroupTag tag;
  int level = 0;
  WindowPtr window;
  Domain domain = Domain::Vertices;
  std::vector<std::vector<int>> orbits;
  std::vector<long> apartment_index;
  std::vector<int> orbit_of;
  std::vector<CochainVector> indicators;

  std::size_t size() const { return orbits.size(); }
  // Position of the orbit labelled by v_i / e_i, or -1.
  int position_of(long i) const;
  // Coordinates of an invariant cochain in the indicator basis.
  IntVec coordinates(const CochainVector& phi) const;
  CochainVector combination(const IntVec& coords) const;
};

OrbitBasis orbit_invariants(const Tree& T, SubgroupTag tag, WindowPtr w, Domain d);

/// Sigma restricted to invariant indicator functions: columns are edge
/// orbits of E_{n+1}, rows vertex orbits of V_n.  MaxCompact uses T_n,
/// Iwahori uses T'_n.
struct InvariantSigma {
  OrbitBasis vertices;
  OrbitBasis edges;
  IntMatrix matrix;
};

WindowKind window_kind_for(SubgroupTag tag);
InvariantSigma invariant_sigma(const Tree& T, SubgroupTag tag, int n);
IntMatrix sigma_matrix_on_invariants(const Tree& T, SubgroupTag tag, int n);

// Preimage of eta under Sigma, routing each vertex's balance through its
// first child edge.  Values already given by seed (an edge cochain on a
// smaller window of the same kind) are kept.
CochainVector solve_sigma(const Tree& T, const CochainVector& eta);
CochainVector solve_sigma(const Tree& T, const CochainVector& eta, const CochainVector& seed);
// Extends a current on E_{m} to a current on E_{m+1}.
CochainVector extend_current(const Tree& T, const CochainVector& phi);

/// Z-basis of the currents F(E_{n+1}): the coordinates are the values on
/// every child edge except the first one, at each vertex of V_n.
class CurrentBasis {
 public:
  CurrentBasis(const Tree& T, WindowKind kind, int n);

  std::size_t rank() const { return free_.size(); }
  WindowPtr window() const { return edges_; }
  const Tree& tree() const { return T_; }
  WindowKind kind() const { return edges_->kind; }
  int n() const { return vertices_->n; }
  const std::vector<int>& free_edges() const { return free_; }

  CochainVector element(const std::vector<std::int64_t>& coords) const;
  CochainVector element(const IntVec& coords) const;
  IntVec coordinates(const CochainVector& phi) const;
  const CochainVector& basis_vector(std::size_t j) const { return basis_[j]; }

  // rho(g) with coords(g phi) = rho(g) coords(phi).
  IntMatrix action_matrix(const Mat2& g) const;
  // Same for the twisted s-action.
  IntMatrix s_twisted_matrix() const;

 private:
  const Tree& T_;
  WindowPtr vertices_, edges_;
  std::vector<int> free_;
  std::vector<int> free_pos_;  // edge index -> coordinate or -1
  std::vector<CochainVector> basis_;
};

}  // namespace btlab
