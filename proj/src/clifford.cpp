#include "starprod/clifford.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "starprod/errors.hpp"

namespace starprod {

namespace {

std::vector<int> blade_indices(std::uint16_t mask) {
  std::vector<int> idx;
  for (int i = 0; i < 16; ++i)
    if (mask >> i & 1) idx.push_back(i);
  return idx;
}

// Graded lexicographic order: by grade, then by the generator index
// list. For example n = 4 grade 2: e12, e13, e14, e23, e24, e34.
std::vector<std::uint16_t> blade_basis(int n) {
  std::vector<std::uint16_t> masks(std::size_t{1} << n);
  for (std::size_t m = 0; m < masks.size(); ++m) masks[m] = static_cast<std::uint16_t>(m);
  std::sort(masks.begin(), masks.end(), [](std::uint16_t a, std::uint16_t b) {
    int ga = std::popcount(a), gb = std::popcount(b);
    if (ga != gb) return ga < gb;
    return blade_indices(a) < blade_indices(b);
  });
  return masks;
}

struct BladeProduct {
  int sign;            // +1 or -1
  std::uint16_t mask;  // resulting blade
  int h_power;         // one factor of h per contracted generator pair
};

// Concatenates the generator lists, sorts with sign bookkeeping, and
// contracts adjacent equal generators (e_i e_i = h).
BladeProduct blade_multiply(std::uint16_t a, std::uint16_t b) {
  std::vector<int> seq = blade_indices(a);
  std::vector<int> rhs = blade_indices(b);
  seq.insert(seq.end(), rhs.begin(), rhs.end());

  int sign = 1;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (seq[i] > seq[i + 1]) {
        std::swap(seq[i], seq[i + 1]);
        sign = -sign;
        swapped = true;
      }
    }
  }

  int h_power = 0;
  std::uint16_t mask = 0;
  for (std::size_t i = 0; i < seq.size();) {
    if (i + 1 < seq.size() && seq[i] == seq[i + 1]) {
      ++h_power;
      i += 2;
    } else {
      mask |= static_cast<std::uint16_t>(1u << seq[i]);
      ++i;
    }
  }
  return {sign, mask, h_power};
}

std::string blade_name(std::uint16_t mask) {
  if (mask == 0) return "1";
  std::string s = "e";
  for (int i : blade_indices(mask)) s += std::to_string(i + 1);
  return s;
}

}  // namespace

CliffordAlgebra clifford_algebra(int generators) {
  if (generators < 1 || generators > 8)
    throw CapacityError("clifford_algebra supports 1..8 generators, got " +
                        std::to_string(generators));
  const int dim = 1 << generators;
  std::vector<std::uint16_t> masks = blade_basis(generators);
  std::vector<int> position(std::size_t{1} << generators);
  for (int i = 0; i < dim; ++i) position[masks[i]] = i;

  std::vector<ProductTensor> coeffs(static_cast<std::size_t>(generators) + 1,
                                    ProductTensor(dim, Field::Real));
  for (int b = 0; b < dim; ++b)
    for (int c = 0; c < dim; ++c) {
      BladeProduct r = blade_multiply(masks[b], masks[c]);
      coeffs[r.h_power].add_coeff(position[r.mask], b, c, r.sign);
    }

  CliffordAlgebra out;
  out.blade_masks = masks;
  out.curve = ProductCurve(dim, Field::Real, coeffs);

  AlgebraSpec& spec = out.spec;
  spec.dim = dim;
  spec.field = Field::Real;
  spec.bullet = out.curve.eval(0.0);
  spec.unit = ElementVector::Zero(dim);
  spec.unit[0] = 1.0;

  // Blade reversal: e_{i1...ik} -> reversed order = (-1)^{k(k-1)/2}.
  spec.involution.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  spec.involution.conjugates = true;
  for (int i = 0; i < dim; ++i) {
    int k = std::popcount(masks[i]);
    spec.involution.matrix(i, i) = (k * (k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  }

  spec.poisson = out.curve.eval(0.0, 1);
  spec.bracket_mode = BracketMode::FermionicTangent;

  spec.basis_names.reserve(dim);
  for (int i = 0; i < dim; ++i) spec.basis_names.push_back(blade_name(masks[i]));
  return out;
}

namespace {

struct Monomial {
  int a, b, c;
  double coefficient;
  int h_power;
};

ProductCurve curve_from_monomials(int dim, int degree, std::span<const Monomial> entries) {
  std::vector<ProductTensor> coeffs(static_cast<std::size_t>(degree) + 1,
                                    ProductTensor(dim, Field::Real));
  for (const Monomial& m : entries) coeffs[m.h_power].add_coeff(m.a, m.b, m.c, m.coefficient);
  return ProductCurve(dim, Field::Real, std::move(coeffs));
}

}  // namespace

ProductCurve cliff2_tabulated_curve() {
  // Basis (1, e1, e2, e12). Sixteen monomial structure constants; note
  // the (1; e12, e12) entry is tabulated as +h^2.
  static const Monomial entries[] = {
      {0, 0, 0, 1, 0},  {0, 1, 1, 1, 1},  {0, 2, 2, 1, 1},  {0, 3, 3, 1, 2},
      {1, 0, 1, 1, 0},  {1, 1, 0, 1, 0},  {1, 2, 3, -1, 1}, {1, 3, 2, 1, 1},
      {2, 0, 2, 1, 0},  {2, 1, 3, 1, 1},  {2, 2, 0, 1, 0},  {2, 3, 1, -1, 1},
      {3, 0, 3, 1, 0},  {3, 1, 2, 1, 0},  {3, 2, 1, -1, 0}, {3, 3, 0, 1, 0},
  };
  return curve_from_monomials(4, 2, entries);
}

ProductCurve cliff3_tabulated_curve() {
  // Basis (1, e1, e2, e3, e23, e31, e12, e123), bivectors in the cyclic
  // convention. Tabulated exactly as published; several first-order
  // entries are absent relative to the generated product.
  static const Monomial entries[] = {
      // component 1
      {0, 0, 0, 1, 0},   {0, 1, 1, 1, 1},   {0, 2, 2, 1, 1},   {0, 3, 3, 1, 1},
      {0, 4, 4, -1, 2},  {0, 5, 5, -1, 2},  {0, 6, 6, -1, 2},  {0, 7, 7, -1, 3},
      // component e1
      {1, 0, 1, 1, 0},   {1, 1, 0, 1, 0},   {1, 3, 5, 1, 1},   {1, 4, 7, -1, 2},
      {1, 5, 3, -1, 1},  {1, 7, 4, -1, 2},
      // component e2
      {2, 0, 2, 1, 0},   {2, 1, 6, 1, 1},   {2, 2, 0, 1, 0},   {2, 5, 7, -1, 2},
      {2, 6, 1, -1, 1},  {2, 7, 5, -1, 2},
      // component e3
      {3, 0, 3, 1, 0},   {3, 2, 4, 1, 1},   {3, 3, 0, 1, 0},   {3, 4, 2, -1, 1},
      {3, 6, 7, -1, 2},  {3, 7, 6, -1, 2},
      // component e23
      {4, 0, 4, 1, 0},   {4, 1, 7, 1, 1},   {4, 2, 3, 1, 0},   {4, 3, 2, -1, 0},
      {4, 4, 0, 1, 0},   {4, 7, 1, 1, 1},
      // component e31
      {5, 0, 5, 1, 0},   {5, 1, 3, -1, 0},  {5, 2, 7, 1, 1},   {5, 3, 1, 1, 0},
      {5, 5, 0, 1, 0},   {5, 7, 2, 1, 1},
      // component e12
      {6, 0, 6, 1, 0},   {6, 1, 2, 1, 0},   {6, 2, 1, -1, 0},  {6, 3, 7, 1, 1},
      {6, 6, 0, 1, 0},   {6, 7, 3, 1, 1},
      // component e123
      {7, 0, 7, 1, 0},   {7, 1, 4, 1, 0},   {7, 2, 5, 1, 0},   {7, 3, 6, 1, 0},
      {7, 4, 1, 1, 0},   {7, 5, 2, 1, 0},   {7, 6, 3, 1, 0},   {7, 7, 0, 1, 0},
  };
  return curve_from_monomials(8, 3, entries);
}

AutomorphismMap cliff3_tabulated_basis_map() {
  // Column j holds the graded-lex coordinates of tabulated basis
  // element j: identity on (1, e1, e2, e3, e123); e23 -> slot 6,
  // e31 -> -e13 (slot 5), e12 -> slot 4.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(8, 8);
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(2, 2) = 1;
  u(3, 3) = 1;
  u(6, 4) = 1;
  u(5, 5) = -1;
  u(4, 6) = 1;
  u(7, 7) = 1;
  return {u};
}

CliffordAlgebra clifford_tabulated_family(int generators) {
  if (generators != 2 && generators != 3)
    throw CapacityError("tabulated Clifford fixtures exist for n = 2 and n = 3 only");

  CliffordAlgebra out;
  out.curve = generators == 2 ? cliff2_tabulated_curve() : cliff3_tabulated_curve();
  const int dim = out.curve.dim();

  AlgebraSpec& spec = out.spec;
  spec.dim = dim;
  spec.field = Field::Real;
  spec.bullet = out.curve.eval(0.0);
  spec.unit = ElementVector::Zero(dim);
  spec.unit[0] = 1.0;
  spec.poisson = out.curve.eval(0.0, 1);
  spec.bracket_mode = BracketMode::FermionicTangent;

  std::vector<int> grades;
  if (generators == 2) {
    grades = {0, 1, 1, 2};
    spec.basis_names = {"1", "e1", "e2", "e12"};
    out.blade_masks = {0, 1, 2, 3};
  } else {
    grades = {0, 1, 1, 1, 2, 2, 2, 3};
    spec.basis_names = {"1", "e1", "e2", "e3", "e23", "e31", "e12", "e123"};
    out.blade_masks = {0, 1, 2, 4, 6, 5, 3, 7};
  }
  spec.involution.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  spec.involution.conjugates = true;
  for (int i = 0; i < dim; ++i) {
    int k = grades[i];
    spec.involution.matrix(i, i) = (k * (k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  }
  return out;
}

AutomorphismMap cliff2_generator_rotation() {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = 1;
  u(2, 1) = 1;   // e1 -> e2
  u(1, 2) = -1;  // e2 -> -e1
  u(3, 3) = 1;   // e12 -> e12
  return {u};
}

}  // namespace starprod
