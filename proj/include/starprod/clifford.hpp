#pragma once

#include <cstdint>
#include <vector>

#include "starprod/algebra.hpp"

namespace starprod {

/// A generated Clifford family: the algebra data (base product = the
/// curve at h = 0, i.e. the exterior product; involution = blade
/// reversal; bracket slot = first-order curve tangent, fermionic
/// convention) together with the full product curve in h.
struct CliffordAlgebra {
  AlgebraSpec spec;
  ProductCurve curve;
  /// Bitmask of generators present in each basis blade, in basis order.
  std::vector<std::uint16_t> blade_masks;
};

/// Builds Cliff(n) from the generator relations
///   e_i * e_j + e_j * e_i = 2 h delta_ij,
/// over the blade basis in graded lexicographic order (1, e1, ..., en,
/// e12, e13, ...). Every structure constant is a signed power of h, so
/// the product family is returned as an exact polynomial curve.
/// Supports 1 <= n <= 8 (2^n basis blades).
CliffordAlgebra clifford_algebra(int generators);

/// Hand-tabulated Cliff(2) curve kept as a fixture. It differs from the
/// generated curve in exactly one quadratic entry ((1; e12, e12) carries
/// +h^2 instead of -h^2), which makes it nonassociative for h != 0.
ProductCurve cliff2_tabulated_curve();

/// Hand-tabulated Cliff(3) curve kept as a fixture, expressed in the
/// cyclic bivector basis (1, e1, e2, e3, e23, e31, e12, e123). Compare
/// against the generated curve through cliff3_tabulated_basis_map(); the
/// tabulation omits several first-order entries.
ProductCurve cliff3_tabulated_curve();

/// Linear map sending cyclic-basis coordinates (e23, e31, e12 block
/// order, e31 = -e13) to graded-lex coordinates; a signed permutation,
/// hence orthogonal.
AutomorphismMap cliff3_tabulated_basis_map();

/// Algebra data wrapped around a tabulated fixture curve (n = 2 or 3):
/// base product and bracket slot from the tabulation, blade-reversal
/// involution, basis names in the tabulation's own ordering.
CliffordAlgebra clifford_tabulated_family(int generators);

/// The generator rotation e1 -> e2, e2 -> -e1 of Cliff(2): an orthogonal
/// automorphism of the whole family (fixes 1 and e12).
AutomorphismMap cliff2_generator_rotation();

}  // namespace starprod
