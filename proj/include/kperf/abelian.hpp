#pragma once

#include "kperf/snf.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kperf {

class GroupElement;
class GroupHom;

// A finitely generated abelian group Z^k / rowspan(relations), immutable
// after construction. The handle is cheap to copy; two handles denote the
// same parent group iff they share the underlying data (same_group).
//
// The constructor computes the Smith normal form of the relation matrix once
// and derives from it the canonical decomposition
//   Z^free_rank  (+)  Z/d_1 (+) ... (+) Z/d_s,   d_1 | d_2 | ... | d_s > 1,
// together with exact change-of-coordinate maps. Canonical coordinates list
// the free slots first, then the torsion slots in chain order; a torsion
// coordinate is always reduced to [0, d_i).
class AbelianGroup {
 public:
  AbelianGroup();  // trivial group, zero generators
  static AbelianGroup from_relations(Index generators, IntMat relations);
  static AbelianGroup free_group(Index rank);
  static AbelianGroup cyclic(const Int& n);
  // Z^free_rank (+) sum of Z/d for d in torsion (each d > 1; chain not required).
  static AbelianGroup from_invariants(Index free_rank, const std::vector<Int>& torsion);

  Index generators() const;
  const IntMat& relations() const;         // rows are relation vectors
  const SmithForm& relation_smith() const; // cached SNF of the relation matrix

  Index free_rank() const;
  const std::vector<Int>& torsion_factors() const;  // invariant factors > 1
  Int torsion_order() const;
  bool is_trivial() const { return canonical_dim() == 0; }
  bool is_finite() const { return free_rank() == 0; }
  bool isomorphic_to(const AbelianGroup& o) const;
  std::string structure_string() const;  // e.g. "Z^2 + Z/2 + Z/6"

  // Canonical coordinates: length free_rank + #torsion_factors; moduli are 0
  // on free slots and d_i on torsion slots.
  Index canonical_dim() const;
  const std::vector<Int>& canonical_moduli() const;
  IntVec canonicalize(const IntVec& coords) const;
  IntVec reduce_canonical(IntVec canon) const;  // reduce torsion slots mod d_i
  // A generator-coordinate representative of a canonical vector.
  IntVec lift(const IntVec& canon) const;

  bool is_zero(const IntVec& coords) const;  // coords lie in the relation lattice

  GroupElement element(IntVec coords) const;
  GroupElement element(const std::vector<Int>& coords) const;
  GroupElement element(std::initializer_list<Int> coords) const;
  GroupElement zero() const;
  GroupElement canonical_generator(Index slot) const;
  std::vector<GroupElement> generator_elements() const;  // e_0 .. e_{k-1}

  bool same_group(const AbelianGroup& o) const { return data_ == o.data_; }

 private:
  struct Data;
  explicit AbelianGroup(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  const Data& d() const { return *data_; }
  std::shared_ptr<const Data> data_;
};

// Element of an AbelianGroup, stored as generator coordinates. Equality and
// order are decided on the canonical form.
class GroupElement {
 public:
  GroupElement(AbelianGroup group, IntVec coords);

  const AbelianGroup& group() const { return group_; }
  const IntVec& coords() const { return coords_; }
  IntVec canonical() const { return group_.canonicalize(coords_); }

  bool is_zero() const { return group_.is_zero(coords_); }
  // Additive order; 0 means infinite.
  Int order() const;

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement operator*(const Int& n) const;
  bool operator==(const GroupElement& o) const;
  bool operator!=(const GroupElement& o) const { return !(*this == o); }

 private:
  AbelianGroup group_;
  IntVec coords_;
};

bool element_equal(const GroupElement& x, const GroupElement& y);

// Verdict of the well-definedness check of a candidate homomorphism: the
// image of every source relation must lie in the target relation lattice.
struct WellDefinedness {
  bool ok = true;
  Index violating_relation = -1;  // row index into source relations
  IntVec violating_image;         // its image in target generator coordinates
};

// Homomorphism between presented groups. matrix has one column per source
// generator holding the image in target generator coordinates. The
// well-definedness verdict is computed at construction and cached; operations
// that rely on it (kernel, composition, apply) refuse ill-defined maps.
class GroupHom {
 public:
  GroupHom(AbelianGroup source, AbelianGroup target, IntMat matrix);

  static GroupHom identity(const AbelianGroup& g);
  static GroupHom zero(const AbelianGroup& source, const AbelianGroup& target);
  static GroupHom multiplication(const AbelianGroup& g, const Int& n);

  const AbelianGroup& source() const { return source_; }
  const AbelianGroup& target() const { return target_; }
  const IntMat& matrix() const { return matrix_; }
  bool is_endomorphism() const { return source_.same_group(target_); }

  const WellDefinedness& well_definedness() const { return well_; }
  bool is_well_defined() const { return well_.ok; }
  void require_well_defined() const;

  GroupElement apply(const GroupElement& x) const;
  IntVec apply(const IntVec& coords) const { return matrix_ * coords; }

  // Action on canonical coordinates: an integer matrix c with
  // canonical(h(x)) = reduce(c * canonical(x)). Exact on free slots, taken
  // mod d_i on torsion slots.
  IntMat canonical_matrix() const;

  GroupHom pow(unsigned long n) const;  // endomorphisms only

 private:
  AbelianGroup source_, target_;
  IntMat matrix_;
  WellDefinedness well_;
};

using Endomorphism = GroupHom;

GroupHom compose(const GroupHom& g, const GroupHom& h);  // g after h

inline WellDefinedness hom_is_well_defined(const GroupHom& h) {
  return h.well_definedness();
}

// A subgroup of an ambient group presented on its own generators, with the
// inclusion (or, for quotients, projection) recorded as a GroupHom.
struct SubgroupResult {
  AbelianGroup group;
  GroupHom map;  // kernel/subgroup: inclusion into ambient; cokernel: projection
};

// Presented group for the subgroup of `ambient` generated by the columns of
// `gens` (generator coordinates), with injective inclusion map.
SubgroupResult subgroup_generated(const AbelianGroup& ambient, const IntMat& gens);

SubgroupResult kernel(const GroupHom& h);
SubgroupResult cokernel(const GroupHom& h);
SubgroupResult image(const GroupHom& h);

// A[ell] = { a : ell * a = 0 }, as a subgroup with explicit generators.
SubgroupResult torsion_subgroup(const AbelianGroup& a, const Int& ell);

// Lattices of subgroups given by generating vectors (columns), compared
// inside the ambient group, i.e. modulo the ambient relations.
bool sublattice_contains(const AbelianGroup& ambient, const IntMat& haystack,
                         const IntVec& needle);
bool sublattices_equal(const AbelianGroup& ambient, const IntMat& a, const IntMat& b);
bool subgroup_is_zero(const AbelianGroup& ambient, const IntMat& gens);

}  // namespace kperf
