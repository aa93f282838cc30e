#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "btlab/localfield.hpp"
#include "btlab/mat2.hpp"
#include "btlab/random.hpp"

namespace btlab {

/// Invertible 2x2 matrix over F with its determinant valuation.
class GroupElement {
 public:
  GroupElement(const LocalField& K, Mat2 m);

  const Mat2& matrix() const { return m_; }
  long det_valuation() const { return det_val_; }

  GroupElement operator*(const GroupElement& o) const { return GroupElement(m_ * o.m_, det_val_ + o.det_val_); }
  GroupElement inverse() const { return GroupElement(m_.inverse(), -det_val_); }
  // det(g) g^{-1}
  GroupElement adjunct() const { return GroupElement(m_.adjunct(), det_val_); }
  bool operator==(const GroupElement& o) const { return m_ == o.m_; }
  std::string str() const { return m_.str(); }

 private:
  GroupElement(Mat2 m, long dv) : m_(std::move(m)), det_val_(dv) {}
  Mat2 m_;
  long det_val_;
};

enum class SubgroupKind { FullG, G0det, MaxCompact, ConjMaxCompact, Iwahori, Congruence, UpperBorel };

struct SubgroupTag {
  SubgroupKind kind = SubgroupKind::FullG;
  int n = 0;  // level, Congruence only

  static SubgroupTag full() { return {SubgroupKind::FullG, 0}; }
  static SubgroupTag g0det() { return {SubgroupKind::G0det, 0}; }
  static SubgroupTag max_compact() { return {SubgroupKind::MaxCompact, 0}; }
  static SubgroupTag conj_max_compact() { return {SubgroupKind::ConjMaxCompact, 0}; }
  static SubgroupTag iwahori() { return {SubgroupKind::Iwahori, 0}; }
  static SubgroupTag congruence(int n) { return {SubgroupKind::Congruence, n}; }
  static SubgroupTag upper_borel() { return {SubgroupKind::UpperBorel, 0}; }

  std::string name() const;
  bool operator==(const SubgroupTag&) const = default;
};

bool member(const LocalField& K, const GroupElement& g, SubgroupTag tag);

GroupElement make_element(const LocalField& K, const Mat2& m);
GroupElement s_element(const LocalField& K);

/// Image of G0 (or of the Iwahori subgroup) in GL2(O/pi^N), fully enumerated.
/// Entries are coded as QuotientRing indices.
class FiniteQuotient {
 public:
  using Elem = std::array<std::uint32_t, 4>;
  static constexpr std::uint64_t kMaxOrder = 1000000;

  // Throws TooLarge when the closed-form order exceeds kMaxOrder.
  FiniteQuotient(const LocalField& K, SubgroupTag tag, int N);

  // q^{4(N-1)} (q^2-1)(q^2-q), divided by q+1 for the Iwahori image.
  static std::uint64_t expected_order(int q, SubgroupTag tag, int N);

  SubgroupTag tag() const { return tag_; }
  int level() const { return N_; }
  std::size_t size() const { return elems_.size(); }
  const Elem& element(std::size_t i) const { return elems_[i]; }
  const QuotientRing& ring() const { return R_; }

  bool contains(const Elem& e) const { return index_.count(pack(e)) != 0; }
  std::size_t index_of(const Elem& e) const;
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t i, std::size_t j) const;
  std::size_t inverse(std::size_t i) const;

  Elem reduce(const GroupElement& g) const;
  GroupElement lift(std::size_t i) const;

  // Indices of the subgroup generated by the given elements.
  std::vector<std::size_t> closure(const std::vector<Elem>& gens) const;

 private:
  std::uint64_t pack(const Elem& e) const;
  Elem mul_elems(const Elem& x, const Elem& y) const;

  LocalField K_;
  SubgroupTag tag_;
  int N_;
  QuotientRing R_;
  std::vector<Elem> elems_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::size_t identity_ = 0;
};

/// Sections of P^1(O/pi^{n+1}): [[1,0],[y,1]] for y in O/pi^{n+1}, then
/// [[x,1],[1,0]] for x in pi O/pi^{n+1}.  q^n (q+1) elements.
std::vector<GroupElement> coset_reps_G0_mod_GnB0(const LocalField& K, int n);
// g^{-1} h in G_{n+1} B0.
bool equivalent_mod_GnB0(const LocalField& K, const GroupElement& g, const GroupElement& h, int n);

/// E12(r), E21(r pi^eps) for additive generators r of O/pi^N (eps = 1 for
/// Iwahori), and diag(u,1), diag(1,u) for a greedily chosen generating set of
/// (O/pi^N)^x.  tag must be MaxCompact or Iwahori.
std::vector<GroupElement> generators(const LocalField& K, SubgroupTag tag, int N);

GroupElement random_element(const LocalField& K, SubgroupTag tag, Rng& rng, int size_bound = 3);
GroupElement random_element(const LocalField& K, SubgroupTag tag, std::uint64_t seed, int size_bound = 3);

}  // namespace btlab
