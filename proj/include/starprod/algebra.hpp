#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "starprod/tensor.hpp"

namespace starprod {

/// Coordinates of an algebra element in the chosen basis. Real
/// algebras simply carry zero imaginary parts.
using ElementVector = Eigen::VectorXcd;

/// Structure constants of a bilinear product: coeff(a, b, c) is the
/// component along basis element a of e_b * e_c.
class ProductTensor {
 public:
  ProductTensor() = default;
  ProductTensor(int dim, Field field);
  ProductTensor(int dim, Field field, DenseTensor coeffs);

  int dim() const { return dim_; }
  Field field() const { return field_; }
  const DenseTensor& coeffs() const { return coeffs_; }
  DenseTensor& coeffs() { return coeffs_; }

  std::complex<double> coeff(int a, int b, int c) const;
  void set_coeff(int a, int b, int c, std::complex<double> value);
  void add_coeff(int a, int b, int c, std::complex<double> value);

  /// Realified coordinate vector (length dim^3, or 2*dim^3 when complex).
  Eigen::VectorXd ambient_coordinates() const;
  static ProductTensor from_ambient(const Eigen::VectorXd& x, int dim, Field field);
  /// Number of real coordinates of a product tensor over this field.
  static Eigen::Index ambient_dim(int dim, Field field);

  double max_abs() const { return coeffs_.max_abs(); }

  ProductTensor& operator+=(const ProductTensor& other);
  ProductTensor& operator*=(double s);
  bool operator==(const ProductTensor& other) const = default;

 private:
  int dim_ = 0;
  Field field_ = Field::Real;
  DenseTensor coeffs_;
};

/// Real-linear involution on element coordinates; over a complex field
/// the map is matrix * conj(.) when conjugates is set (the usual
/// antilinear star operation).
struct InvolutionMap {
  Eigen::MatrixXcd matrix;
  bool conjugates = true;

  ElementVector apply(const ElementVector& f) const {
    return conjugates ? (matrix * f.conjugate()).eval() : (matrix * f).eval();
  }
};

enum class BracketMode { Bosonic, FermionicTangent };

/// A finite-dimensional algebra given by structure-constant data: the
/// base commutative product, unit coordinates, involution, and bracket.
/// In fermionic-tangent mode the bracket slot holds the first-order
/// tangent of a product curve rather than an antisymmetric bracket, and
/// the bosonic bracket axioms are not expected to hold for it.
struct AlgebraSpec {
  int dim = 0;
  Field field = Field::Real;
  ProductTensor bullet;
  ElementVector unit;
  InvolutionMap involution;
  ProductTensor poisson;
  BracketMode bracket_mode = BracketMode::Bosonic;
  std::vector<std::string> basis_names;
};

/// Polynomial family of products s(h) = sum_m h^m C_m with exact
/// derivative evaluation.
class ProductCurve {
 public:
  ProductCurve() = default;
  ProductCurve(int dim, Field field, std::vector<ProductTensor> coefficients);

  int dim() const { return dim_; }
  Field field() const { return field_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<ProductTensor>& coefficients() const { return coefficients_; }

  /// Value (order 0) or exact first/second parameter derivative.
  ProductTensor eval(double h, int order = 0) const;

 private:
  int dim_ = 0;
  Field field_ = Field::Real;
  std::vector<ProductTensor> coefficients_;
};

/// Invertible linear map on element coordinates.
struct AutomorphismMap {
  Eigen::MatrixXcd matrix;

  Eigen::MatrixXcd inverse() const;
};

/// Worst-case residual per named axiom, with the basis triple (or pair)
/// that attains it. Unused witness slots are -1.
struct AxiomCheck {
  double residual = 0.0;
  std::array<int, 3> witness{-1, -1, -1};
};

struct AxiomReport {
  std::map<std::string, AxiomCheck> checks;

  double worst() const;
  bool passed(double tol) const;
  const AxiomCheck& check(const std::string& name) const;
};

/// (f * g)^a = sum_{b,c} p[a][b][c] f^b g^c.
ElementVector multiply(const ProductTensor& p, const ElementVector& f, const ElementVector& g);

/// Mixed associator A(p,q)[a,b,d,e] = sum_c p[a,b,c] q[c,d,e] - q[c,b,d] p[a,c,e].
/// A(p,p) contracted with (f, g, h) is f*(g*h) - (f*g)*h; it vanishes
/// exactly when p is associative.
DenseTensor associator_form(const ProductTensor& p, const ProductTensor& q);

/// Residuals of the star-product axioms for p over the algebra's unit
/// and involution: involution antihomomorphism, two-sided unit, and
/// associativity, each maximized over basis tuples.
AxiomReport check_star_axioms(const AlgebraSpec& alg, const ProductTensor& p);

/// Residuals of the bosonic bracket axioms (antisymmetry, Jacobi,
/// Leibniz over bullet), maximized over basis triples.
AxiomReport check_poisson_axioms(const ProductTensor& bullet, const ProductTensor& poisson);
AxiomReport check_poisson_axioms(const AlgebraSpec& alg);

/// Operator-norm bracket for the product seen as a bilinear map under
/// the Euclidean coordinate norm. The lower bound is the best sampled
/// |f*g| over random unit pairs; the upper bound is the spectral norm
/// of the (realified) n x n^2 flattening. lower <= sup norm <= upper.
std::pair<double, double> product_norm_estimate(const ProductTensor& p, int samples,
                                                std::uint64_t seed);

/// Conjugated product (U.p)(f,g) = U(p(U^-1 f, U^-1 g)) in coordinates.
ProductTensor pushforward_product(const AutomorphismMap& u, const ProductTensor& p);

/// Residuals of the structure-preservation conditions for U: product,
/// unit, involution, and bracket, over basis pairs.
AxiomReport check_automorphism(const AutomorphismMap& u, const AlgebraSpec& alg);

/// Validates the AlgebraSpec invariants; returns human-readable
/// descriptions of any violations (empty when clean). Bosonic mode
/// additionally requires commutativity of bullet and the bracket axioms.
std::vector<std::string> validate_algebra(const AlgebraSpec& alg, double tol);

}  // namespace starprod
