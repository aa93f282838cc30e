#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "btlab/cochains.hpp"
#include "btlab/groups.hpp"
#include "btlab/intlin.hpp"

namespace btlab {

/// A finite group, given by a fully enumerated quotient, acting on Z^r by one
/// integer matrix per element, together with a generating set.
class FiniteGroupAction {
 public:
  // Largest |Q|^2 * r for which h1 certifies cocycles against all pairs.
  static constexpr std::uint64_t kMaxPairWork = 50000000;
  // Largest dense cocycle relation matrix h1 will assemble, in entries.
  static constexpr std::uint64_t kMaxRelationEntries = 4000000;

  FiniteGroupAction(std::shared_ptr<const FiniteQuotient> Q, std::vector<IntMatrix> rho, std::vector<std::size_t> gens);
  static FiniteGroupAction trivial(std::shared_ptr<const FiniteQuotient> Q, std::size_t r);

  const FiniteQuotient& group() const { return *Q_; }
  std::size_t order() const { return Q_->size(); }
  std::size_t rank() const { return r_; }
  const IntMatrix& rho(std::size_t g) const { return rho_[g]; }
  const std::vector<std::size_t>& generators() const { return gens_; }

  // Same action, different generating set (checked to generate).
  FiniteGroupAction with_generators(std::vector<std::size_t> gens) const;

  // rho(1) = 1 and rho(gh) = rho(g) rho(h) on `samples` seeded pairs.
  bool spot_check(std::uint64_t seed, int samples = 200) const;

 private:
  std::shared_ptr<const FiniteQuotient> Q_;
  std::size_t r_;
  std::vector<IntMatrix> rho_;
  std::vector<std::size_t> gens_;
};

// Quotient level through which the tag's group acts on F(E_{n+1}): n+1 on
// T_{n+1}, n+2 on T'_{n+1}.
int oracle_level(SubgroupTag tag, int n);

// Action of the image of G0 / Iwahori in GL2(O/pi^level) on the currents of
// CB, generated by the standard generators unless others are given.
FiniteGroupAction current_action(const CurrentBasis& CB, SubgroupTag tag, int level,
                                 const std::vector<GroupElement>* gens = nullptr);

using Cocycle = std::vector<IntVec>;  // one value per group element

Cocycle coboundary(const FiniteGroupAction& A, const IntVec& m);
// z(gh) = g z(h) + z(g) for all pairs.
bool is_cocycle(const FiniteGroupAction& A, const Cocycle& z);
// z(1) = 0 and z(gs) = z(g) + g z(s) for all g and generators s; equivalent
// to is_cocycle.
bool is_cocycle_on_generators(const FiniteGroupAction& A, const Cocycle& z);

// g -> coordinates of g phi - phi, with phi = solve_sigma(eta).
Cocycle delta_cocycle(const FiniteGroupAction& A, const CurrentBasis& CB, const CochainVector& eta);

// Z-basis of the invariants, as columns.
IntMatrix invariants(const FiniteGroupAction& A);
QuotientStructure h0(const FiniteGroupAction& A);

struct H1Data {
  QuotientStructure group;
  std::size_t cocycle_rank = 0;
};
// Throws TooLarge when either budget above is exceeded.
H1Data h1_data(const FiniteGroupAction& A);
inline QuotientStructure h1(const FiniteGroupAction& A) { return h1_data(A).group; }

// Least k >= 1 with k z a coboundary; nullopt if none.
std::optional<mpz_class> class_order_in_h1(const FiniteGroupAction& A, const Cocycle& z);

}  // namespace btlab
