#include "kperf/abelian.hpp"

#include <algorithm>
#include <utility>

namespace kperf {

// Internal layout. With relations R (r x k) and U R V = D, the column map
// T = V^T carries generator coordinates to "slot" coordinates in which the
// relation lattice is diag(d_0, ..., d_{t-1}) Z + 0. Slot i has modulus
// d_i (0 past the diagonal). Unit moduli are dropped from the canonical
// form; free slots (modulus 0) are listed before torsion slots.
struct AbelianGroup::Data {
  Index k = 0;
  IntMat relations;  // r x k
  SmithForm snf;     // of relations
  IntMat to_slots;   // k x k, V^T
  IntMat from_slots; // k x k, (V^T)^{-1} = (V^{-1})^T
  std::vector<Int> slot_moduli;      // length k
  std::vector<Index> canon_slots;    // canonical index -> slot index
  std::vector<Int> canon_moduli;     // canonical index -> modulus (0 = free)
  Index free_rank = 0;
  std::vector<Int> torsion;          // moduli > 1, chain order
};

AbelianGroup::AbelianGroup() : AbelianGroup(from_relations(0, IntMat(0, 0))) {}

AbelianGroup AbelianGroup::from_relations(Index generators, IntMat relations) {
  if (generators < 0) throw DomainError("negative generator count");
  if (relations.size() == 0) relations = IntMat(0, generators);
  if (relations.cols() != generators)
    throw DomainError("relation matrix must have one column per generator");

  auto data = std::make_shared<Data>();
  data->k = generators;
  data->relations = std::move(relations);
  data->snf = smith_normal_form(data->relations);
  data->to_slots = data->snf.v.transpose();
  data->from_slots = data->snf.v_inv.transpose();

  const Index t = std::min(data->relations.rows(), data->k);
  data->slot_moduli.resize(static_cast<size_t>(data->k));
  for (Index i = 0; i < data->k; ++i)
    data->slot_moduli[static_cast<size_t>(i)] = i < t ? data->snf.d(i, i) : Int(0);

  // Free slots first, then torsion in chain order.
  for (Index i = 0; i < data->k; ++i) {
    if (data->slot_moduli[static_cast<size_t>(i)] == 0) {
      data->canon_slots.push_back(i);
      data->canon_moduli.push_back(0);
      ++data->free_rank;
    }
  }
  for (Index i = 0; i < data->k; ++i) {
    const Int& m = data->slot_moduli[static_cast<size_t>(i)];
    if (m > 1) {
      data->canon_slots.push_back(i);
      data->canon_moduli.push_back(m);
      data->torsion.push_back(m);
    }
  }
  return AbelianGroup(std::move(data));
}

AbelianGroup AbelianGroup::free_group(Index rank) {
  return from_relations(rank, IntMat(0, rank));
}

AbelianGroup AbelianGroup::cyclic(const Int& n) {
  IntMat rel(1, 1);
  rel(0, 0) = n;
  return from_relations(1, rel);
}

AbelianGroup AbelianGroup::from_invariants(Index free_rank, const std::vector<Int>& torsion) {
  Index k = free_rank + static_cast<Index>(torsion.size());
  IntMat rel = IntMat::Zero(static_cast<Index>(torsion.size()), k);
  for (Index i = 0; i < rel.rows(); ++i)
    rel(i, free_rank + i) = torsion[static_cast<size_t>(i)];
  return from_relations(k, rel);
}

Index AbelianGroup::generators() const { return d().k; }
const IntMat& AbelianGroup::relations() const { return d().relations; }
const SmithForm& AbelianGroup::relation_smith() const { return d().snf; }
Index AbelianGroup::free_rank() const { return d().free_rank; }
const std::vector<Int>& AbelianGroup::torsion_factors() const { return d().torsion; }

Int AbelianGroup::torsion_order() const {
  Int o = 1;
  for (const Int& f : d().torsion) o *= f;
  return o;
}

bool AbelianGroup::isomorphic_to(const AbelianGroup& o) const {
  return free_rank() == o.free_rank() && torsion_factors() == o.torsion_factors();
}

std::string AbelianGroup::structure_string() const {
  std::string s;
  if (free_rank() == 1) s = "Z";
  else if (free_rank() > 1) s = "Z^" + std::to_string(free_rank());
  for (const Int& f : torsion_factors()) {
    if (!s.empty()) s += " + ";
    s += "Z/" + f.get_str();
  }
  return s.empty() ? "0" : s;
}

Index AbelianGroup::canonical_dim() const {
  return static_cast<Index>(d().canon_slots.size());
}

const std::vector<Int>& AbelianGroup::canonical_moduli() const { return d().canon_moduli; }

IntVec AbelianGroup::reduce_canonical(IntVec canon) const {
  const auto& moduli = d().canon_moduli;
  if (canon.size() != canonical_dim()) throw DomainError("canonical dimension mismatch");
  for (Index i = 0; i < canon.size(); ++i) {
    const Int& m = moduli[static_cast<size_t>(i)];
    if (m != 0) canon(i) = mod_floor(canon(i), m);
  }
  return canon;
}

IntVec AbelianGroup::canonicalize(const IntVec& coords) const {
  if (coords.size() != d().k) throw DomainError("coordinate dimension mismatch");
  IntVec y = d().to_slots * coords;
  IntVec c(canonical_dim());
  for (Index i = 0; i < c.size(); ++i) c(i) = y(d().canon_slots[static_cast<size_t>(i)]);
  return reduce_canonical(std::move(c));
}

IntVec AbelianGroup::lift(const IntVec& canon) const {
  if (canon.size() != canonical_dim()) throw DomainError("canonical dimension mismatch");
  IntVec y = IntVec::Zero(d().k);
  for (Index i = 0; i < canon.size(); ++i)
    y(d().canon_slots[static_cast<size_t>(i)]) = canon(i);
  return d().from_slots * y;
}

bool AbelianGroup::is_zero(const IntVec& coords) const {
  IntVec c = canonicalize(coords);
  for (Index i = 0; i < c.size(); ++i)
    if (c(i) != 0) return false;
  return true;
}

GroupElement AbelianGroup::element(IntVec coords) const {
  return GroupElement(*this, std::move(coords));
}

GroupElement AbelianGroup::element(const std::vector<Int>& coords) const {
  return GroupElement(*this, to_intvec(coords));
}

GroupElement AbelianGroup::element(std::initializer_list<Int> coords) const {
  return element(std::vector<Int>(coords));
}

GroupElement AbelianGroup::zero() const { return element(IntVec(IntVec::Zero(d().k))); }

GroupElement AbelianGroup::canonical_generator(Index slot) const {
  if (slot < 0 || slot >= canonical_dim()) throw DomainError("canonical slot out of range");
  IntVec c = IntVec::Zero(canonical_dim());
  c(slot) = 1;
  return element(lift(c));
}

std::vector<GroupElement> AbelianGroup::generator_elements() const {
  std::vector<GroupElement> gens;
  for (Index i = 0; i < d().k; ++i) {
    IntVec e = IntVec::Zero(d().k);
    e(i) = 1;
    gens.push_back(element(std::move(e)));
  }
  return gens;
}

GroupElement::GroupElement(AbelianGroup group, IntVec coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
  if (coords_.size() != group_.generators())
    throw DomainError("element coordinate dimension mismatch");
}

Int GroupElement::order() const {
  IntVec c = canonical();
  const auto& moduli = group_.canonical_moduli();
  Int ord = 1;
  for (Index i = 0; i < c.size(); ++i) {
    const Int& m = moduli[static_cast<size_t>(i)];
    if (m == 0) {
      if (c(i) != 0) return 0;  // infinite order
    } else if (c(i) != 0) {
      ord = lcm_int(ord, m / gcd_int(m, c(i)));
    }
  }
  return ord;
}

namespace {
void require_same_parent(const GroupElement& x, const GroupElement& y) {
  if (!x.group().same_group(y.group()))
    throw DomainError("elements belong to different groups");
}
}  // namespace

GroupElement GroupElement::operator+(const GroupElement& o) const {
  require_same_parent(*this, o);
  return GroupElement(group_, coords_ + o.coords_);
}

GroupElement GroupElement::operator-(const GroupElement& o) const {
  require_same_parent(*this, o);
  return GroupElement(group_, coords_ - o.coords_);
}

GroupElement GroupElement::operator-() const { return GroupElement(group_, -coords_); }

GroupElement GroupElement::operator*(const Int& n) const {
  return GroupElement(group_, IntVec(coords_ * n));
}

bool GroupElement::operator==(const GroupElement& o) const {
  require_same_parent(*this, o);
  return canonical() == o.canonical();
}

bool element_equal(const GroupElement& x, const GroupElement& y) { return x == y; }

GroupHom::GroupHom(AbelianGroup source, AbelianGroup target, IntMat matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.size() == 0) matrix_ = IntMat(target_.generators(), source_.generators());
  if (matrix_.rows() != target_.generators() || matrix_.cols() != source_.generators())
    throw DomainError("hom matrix dimensions do not match generator counts");
  const IntMat& rel = source_.relations();
  for (Index r = 0; r < rel.rows(); ++r) {
    IntVec img = matrix_ * rel.row(r).transpose();
    if (!target_.is_zero(img)) {
      well_.ok = false;
      well_.violating_relation = r;
      well_.violating_image = std::move(img);
      break;
    }
  }
}

GroupHom GroupHom::identity(const AbelianGroup& g) {
  return GroupHom(g, g, IntMat::Identity(g.generators(), g.generators()));
}

GroupHom GroupHom::zero(const AbelianGroup& source, const AbelianGroup& target) {
  return GroupHom(source, target, IntMat::Zero(target.generators(), source.generators()));
}

GroupHom GroupHom::multiplication(const AbelianGroup& g, const Int& n) {
  IntMat m = IntMat::Identity(g.generators(), g.generators());
  m *= n;
  return GroupHom(g, g, std::move(m));
}

void GroupHom::require_well_defined() const {
  if (!well_.ok)
    throw DomainError("homomorphism is not well defined (source relation " +
                      std::to_string(well_.violating_relation) +
                      " maps outside the target relation lattice)");
}

GroupElement GroupHom::apply(const GroupElement& x) const {
  require_well_defined();
  if (!x.group().same_group(source_)) throw DomainError("element not in hom source");
  return target_.element(IntVec(matrix_ * x.coords()));
}

IntMat GroupHom::canonical_matrix() const {
  require_well_defined();
  IntMat c(target_.canonical_dim(), source_.canonical_dim());
  for (Index j = 0; j < c.cols(); ++j) {
    IntVec e = IntVec::Zero(source_.canonical_dim());
    e(j) = 1;
    c.col(j) = target_.canonicalize(matrix_ * source_.lift(e));
  }
  return c;
}

GroupHom GroupHom::pow(unsigned long n) const {
  if (!is_endomorphism()) throw DomainError("pow requires an endomorphism");
  GroupHom acc = identity(source_);
  GroupHom base = *this;
  while (n > 0) {
    if (n & 1) acc = compose(base, acc);
    n >>= 1;
    if (n) base = compose(base, base);
  }
  return acc;
}

GroupHom compose(const GroupHom& g, const GroupHom& h) {
  if (!h.target().same_group(g.source()))
    throw DomainError("compose: inner target differs from outer source");
  return GroupHom(h.source(), g.target(), IntMat(g.matrix() * h.matrix()));
}

namespace {

// Columns of gens generate a sublattice P of Z^k containing nothing special;
// relative to the ambient relations L this presents the subgroup (P + L)/L.
// Relations of the presentation: all c with gens * c in L.
IntMat presentation_relations(const AbelianGroup& ambient, const IntMat& gens) {
  IntMat rel_t = ambient.relations().transpose();  // k x r
  IntMat sys = hstack(gens, rel_t);                // k x (s + r)
  if (sys.size() == 0) sys = IntMat(ambient.generators(), gens.cols() + rel_t.cols());
  IntMat ker = kernel_basis(sys);
  return ker.topRows(gens.cols()).transpose();  // rows are relations over the s gens
}

}  // namespace

SubgroupResult subgroup_generated(const AbelianGroup& ambient, const IntMat& gens) {
  if (gens.rows() != ambient.generators() && gens.size() != 0)
    throw DomainError("subgroup generators have wrong dimension");
  IntMat g = gens.size() == 0 ? IntMat(ambient.generators(), 0) : gens;
  AbelianGroup sub = AbelianGroup::from_relations(g.cols(), presentation_relations(ambient, g));
  return SubgroupResult{sub, GroupHom(sub, ambient, g)};
}

SubgroupResult kernel(const GroupHom& h) {
  h.require_well_defined();
  const Index a = h.source().generators();
  // x in Z^a belongs to the kernel lattice iff M x lies in the target
  // relation lattice, i.e. (M | R_B^T) (x; z) = 0 for some z.
  IntMat sys = hstack(h.matrix(), h.target().relations().transpose());
  if (sys.size() == 0) sys = IntMat(h.target().generators(), a + h.target().relations().rows());
  IntMat ker = kernel_basis(sys);
  IntMat x_part = ker.topRows(a);
  return subgroup_generated(h.source(), x_part);
}

SubgroupResult cokernel(const GroupHom& h) {
  h.require_well_defined();
  IntMat rel = vstack(h.target().relations(), IntMat(h.matrix().transpose()));
  AbelianGroup q = AbelianGroup::from_relations(h.target().generators(), std::move(rel));
  const Index b = h.target().generators();
  return SubgroupResult{q, GroupHom(h.target(), q, IntMat::Identity(b, b))};
}

SubgroupResult image(const GroupHom& h) {
  h.require_well_defined();
  return subgroup_generated(h.target(), h.matrix());
}

SubgroupResult torsion_subgroup(const AbelianGroup& a, const Int& ell) {
  if (ell == 0) throw DomainError("torsion_subgroup: ell must be nonzero");
  return kernel(GroupHom::multiplication(a, ell));
}

bool sublattice_contains(const AbelianGroup& ambient, const IntMat& haystack,
                         const IntVec& needle) {
  IntMat sys = hstack(haystack, ambient.relations().transpose());
  if (sys.size() == 0) sys = IntMat(ambient.generators(), 0);
  return solve_linear(sys, needle).has_value();
}

bool sublattices_equal(const AbelianGroup& ambient, const IntMat& a, const IntMat& b) {
  for (Index j = 0; j < b.cols(); ++j)
    if (!sublattice_contains(ambient, a, b.col(j))) return false;
  for (Index j = 0; j < a.cols(); ++j)
    if (!sublattice_contains(ambient, b, a.col(j))) return false;
  return true;
}

bool subgroup_is_zero(const AbelianGroup& ambient, const IntMat& gens) {
  for (Index j = 0; j < gens.cols(); ++j)
    if (!ambient.is_zero(gens.col(j))) return false;
  return true;
}

}  // namespace kperf
