#include "btlab/oracle.hpp"

#include "btlab/errors.hpp"

namespace btlab {

FiniteGroupAction::FiniteGroupAction(std::shared_ptr<const FiniteQuotient> Q, std::vector<IntMatrix> rho,
                                     std::vector<std::size_t> gens)
    : Q_(std::move(Q)), r_(rho.empty() ? 0 : rho.front().rows()), rho_(std::move(rho)), gens_(std::move(gens)) {
  if (rho_.size() != Q_->size()) throw Error("one action matrix per group element required");
  std::vector<FiniteQuotient::Elem> ge;
  for (auto g : gens_) ge.push_back(Q_->element(g));
  if (Q_->closure(ge).size() != Q_->size()) throw Error("generators do not generate the group");
}

FiniteGroupAction FiniteGroupAction::trivial(std::shared_ptr<const FiniteQuotient> Q, std::size_t r) {
  std::vector<IntMatrix> rho(Q->size(), IntMatrix::identity(r));
  std::vector<std::size_t> gens(Q->size());
  for (std::size_t i = 0; i < gens.size(); ++i) gens[i] = i;
  return FiniteGroupAction(std::move(Q), std::move(rho), std::move(gens));
}

FiniteGroupAction FiniteGroupAction::with_generators(std::vector<std::size_t> gens) const {
  return FiniteGroupAction(Q_, rho_, std::move(gens));
}

bool FiniteGroupAction::spot_check(std::uint64_t seed, int samples) const {
  if (!(rho_[Q_->identity()] == IntMatrix::identity(r_))) return false;
  Rng rng(seed);
  long top = static_cast<long>(Q_->size()) - 1;
  for (int t = 0; t < samples; ++t) {
    auto g = static_cast<std::size_t>(rng.uniform(0, top));
    auto h = static_cast<std::size_t>(rng.uniform(0, top));
    if (!(rho_[Q_->mul(g, h)] == rho_[g] * rho_[h])) return false;
  }
  return true;
}

int oracle_level(SubgroupTag tag, int n) { return window_kind_for(tag) == WindowKind::Tn ? n + 1 : n + 2; }

FiniteGroupAction current_action(const CurrentBasis& CB, SubgroupTag tag, int level,
                                 const std::vector<GroupElement>* gens) {
  const LocalField& K = CB.tree().field();
  auto Q = std::make_shared<const FiniteQuotient>(K, tag, level);
  std::vector<IntMatrix> rho;
  rho.reserve(Q->size());
  for (std::size_t i = 0; i < Q->size(); ++i) rho.push_back(CB.action_matrix(Q->lift(i).matrix()));
  std::vector<GroupElement> standard;
  if (!gens) {
    standard = generators(K, tag, level);
    gens = &standard;
  }
  std::vector<std::size_t> idx;
  for (const auto& g : *gens) idx.push_back(Q->index_of(Q->reduce(g)));
  return FiniteGroupAction(Q, std::move(rho), std::move(idx));
}

// ----------------------------------------------------------------- cocycles

namespace {

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

bool relation_holds(const FiniteGroupAction& A, const Cocycle& z, std::size_t g, std::size_t h) {
  return z[A.group().mul(g, h)] == add(A.rho(g) * z[h], z[g]);
}

bool shape_ok(const FiniteGroupAction& A, const Cocycle& z) {
  if (z.size() != A.order()) return false;
  for (const auto& v : z)
    if (v.size() != A.rank()) return false;
  return true;
}

}  // namespace

Cocycle coboundary(const FiniteGroupAction& A, const IntVec& m) {
  Cocycle z(A.order());
  for (std::size_t g = 0; g < A.order(); ++g) {
    z[g] = A.rho(g) * m;
    for (std::size_t k = 0; k < m.size(); ++k) z[g][k] -= m[k];
  }
  return z;
}

bool is_cocycle(const FiniteGroupAction& A, const Cocycle& z) {
  if (!shape_ok(A, z)) return false;
  for (std::size_t g = 0; g < A.order(); ++g)
    for (std::size_t h = 0; h < A.order(); ++h)
      if (!relation_holds(A, z, g, h)) return false;
  return true;
}

bool is_cocycle_on_generators(const FiniteGroupAction& A, const Cocycle& z) {
  if (!shape_ok(A, z)) return false;
  for (const auto& x : z[A.group().identity()])
    if (x != 0) return false;
  for (std::size_t g = 0; g < A.order(); ++g)
    for (auto s : A.generators())
      if (!relation_holds(A, z, g, s)) return false;
  return true;
}

Cocycle delta_cocycle(const FiniteGroupAction& A, const CurrentBasis& CB, const CochainVector& eta) {
  const Tree& T = CB.tree();
  CochainVector phi = solve_sigma(T, eta);
  if (!phi.window->same_shape(*CB.window())) throw WindowMismatch("eta does not match the current basis");
  Cocycle z(A.order());
  for (std::size_t g = 0; g < A.order(); ++g)
    z[g] = CB.coordinates(act_cochain(T, A.group().lift(g).matrix(), phi) - phi);
  return z;
}

// ---------------------------------------------------------------- cohomology

namespace {

// Rows rho(s) - 1, stacked over the generators.
IntMatrix stacked_generator_matrix(const FiniteGroupAction& A) {
  std::size_t r = A.rank();
  IntMatrix M(A.generators().size() * r, r);
  for (std::size_t t = 0; t < A.generators().size(); ++t) {
    const IntMatrix& R = A.rho(A.generators()[t]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) M(t * r + i, j) = R(i, j) - (i == j ? 1 : 0);
  }
  return M;
}

}  // namespace

IntMatrix invariants(const FiniteGroupAction& A) {
  if (A.rank() == 0) return IntMatrix(0, 0);
  return kernel_basis(stacked_generator_matrix(A));
}

QuotientStructure h0(const FiniteGroupAction& A) {
  QuotientStructure Q;
  Q.free_rank = invariants(A).cols();
  return Q;
}

H1Data h1_data(const FiniteGroupAction& A) {
  std::uint64_t m = A.order(), r = A.rank();
  if (m * m * r > FiniteGroupAction::kMaxPairWork) throw TooLarge("h1: |Q|^2 r exceeds the pair-check budget");
  H1Data out;
  if (r == 0) return out;
  const FiniteQuotient& Q = A.group();
  const auto& gens = A.generators();
  if ((m * gens.size() * r + r) * m * r > FiniteGroupAction::kMaxRelationEntries)
    throw TooLarge("h1: cocycle relation matrix exceeds the dense budget");

  // Unknowns z(g)_k at column g*r + k.  Rows: z(gs) - z(g) - rho(g) z(s) = 0
  // for all g and generators s, then z(1) = 0.
  IntMatrix R(m * gens.size() * r + r, m * r);
  std::size_t row = 0;
  for (std::size_t g = 0; g < m; ++g)
    for (auto s : gens) {
      std::size_t gs = Q.mul(g, s);
      const IntMatrix& rg = A.rho(g);
      for (std::size_t k = 0; k < r; ++k, ++row) {
        R(row, gs * r + k) += 1;
        R(row, g * r + k) -= 1;
        for (std::size_t l = 0; l < r; ++l) R(row, s * r + l) -= rg(k, l);
      }
    }
  for (std::size_t k = 0; k < r; ++k, ++row) R(row, Q.identity() * r + k) = 1;

  IntMatrix Z = kernel_basis(R);
  std::size_t d = Z.cols();
  out.cocycle_rank = d;

  // Certify every basis cocycle on all pairs.
  for (std::size_t c = 0; c < d; ++c) {
    Cocycle z(m, IntVec(r));
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t k = 0; k < r; ++k) z[g][k] = Z(g * r + k, c);
    if (!is_cocycle(A, z)) throw Error("h1: kernel vector is not a cocycle");
  }

  // A cocycle is determined by its values on the generators.
  IntMatrix Zg(gens.size() * r, d);
  for (std::size_t t = 0; t < gens.size(); ++t)
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t c = 0; c < d; ++c) Zg(t * r + k, c) = Z(gens[t] * r + k, c);
  if (snf(Zg, false).rank != d) throw Error("h1: generator restriction is not injective");

  // Coboundaries of the unit vectors in cocycle coordinates.
  IntMatrix G = stacked_generator_matrix(A);
  IntMatrix B(d, r);
  for (std::size_t k = 0; k < r; ++k) {
    SolveResult sr = solve_integer(Zg, G.column(k));
    if (!sr.solvable) throw Error("h1: coboundary outside the cocycle lattice");
    for (std::size_t c = 0; c < d; ++c) B(c, k) = sr.x[c];
  }
  out.group = cokernel_structure(B);
  return out;
}

std::optional<mpz_class> class_order_in_h1(const FiniteGroupAction& A, const Cocycle& z) {
  if (!is_cocycle_on_generators(A, z)) throw Error("class_order_in_h1: not a cocycle");
  std::size_t r = A.rank();
  IntVec v;
  for (auto s : A.generators())
    for (std::size_t k = 0; k < r; ++k) v.push_back(z[s][k]);
  if (r == 0) return mpz_class(1);
  return class_order(v, stacked_generator_matrix(A));
}

}  // namespace btlab
