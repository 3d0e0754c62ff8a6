#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "starprod/algebra.hpp"
#include "starprod/linsolve.hpp"

namespace starprod {

enum class BlockKind { Associator, Unit, Involution, CustomQuadratic };

/// One block of constraint equations on ambient product coordinates.
/// Every block is at most quadratic, so the Jacobian is affine in x and
/// the second directional derivative H(v,v) is independent of x.
class ConstraintBlock {
 public:
  virtual ~ConstraintBlock() = default;
  virtual BlockKind kind() const = 0;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::VectorXd residual(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const = 0;
};

/// Quadratic associativity equations: the associator of the product
/// tensor encoded by x must vanish. n^4 equations over a real field,
/// 2 n^4 realified equations over a complex one.
class AssociatorBlock final : public ConstraintBlock {
 public:
  AssociatorBlock(int dim, Field field);

  BlockKind kind() const override { return BlockKind::Associator; }
  Eigen::Index rows() const override;
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const override;

  int dim() const { return dim_; }
  Field field() const { return field_; }
  /// Number of (real) multiplier coordinates paired with this block.
  Eigen::Index lambda_dim() const { return rows(); }

 private:
  int dim_;
  Field field_;
};

/// Linear two-sided unit equations x(1, e_b) = e_b and x(e_b, 1) = e_b.
class UnitBlock final : public ConstraintBlock {
 public:
  UnitBlock(int dim, Field field, const ElementVector& unit);

  BlockKind kind() const override { return BlockKind::Unit; }
  Eigen::Index rows() const override { return matrix_.rows(); }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd&) const override { return matrix_; }
  Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const override {
    return Eigen::VectorXd::Zero(matrix_.rows());
  }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd rhs_;
};

/// Linear compatibility of the product with the involution:
/// (x(e_b, e_c))^* = x(e_c^*, e_b^*) on all basis pairs.
class InvolutionBlock final : public ConstraintBlock {
 public:
  InvolutionBlock(int dim, Field field, const InvolutionMap& involution);

  BlockKind kind() const override { return BlockKind::Involution; }
  Eigen::Index rows() const override { return matrix_.rows(); }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override { return matrix_ * x; }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd&) const override { return matrix_; }
  Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const override {
    return Eigen::VectorXd::Zero(matrix_.rows());
  }

 private:
  Eigen::MatrixXd matrix_;
};

/// General quadratic constraints x^T Q x + l.x + c = 0 on the real
/// ambient coordinates (Q symmetric). Used for analytic test manifolds
/// such as spheres.
class CustomQuadraticBlock final : public ConstraintBlock {
 public:
  struct Constraint {
    Eigen::MatrixXd quadratic;  // symmetric
    Eigen::VectorXd linear;
    double constant = 0.0;
  };

  explicit CustomQuadraticBlock(std::vector<Constraint> constraints);

  BlockKind kind() const override { return BlockKind::CustomQuadratic; }
  Eigen::Index rows() const override { return static_cast<Eigen::Index>(constraints_.size()); }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const override;

 private:
  std::vector<Constraint> constraints_;
};

/// Which star-product conditions to impose.
struct ConstraintFlags {
  bool associativity = true;
  bool unit = false;
  bool involution = false;
};

/// A stack of constraint blocks over a common ambient space. The zero
/// set of the stacked residual is the constrained product manifold.
class QuadraticConstraintSystem {
 public:
  explicit QuadraticConstraintSystem(Eigen::Index ambient_dim) : ambient_dim_(ambient_dim) {}

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  Eigen::Index total_rows() const;
  bool empty() const { return blocks_.empty(); }
  const std::vector<std::shared_ptr<const ConstraintBlock>>& blocks() const { return blocks_; }

  void add_block(std::shared_ptr<const ConstraintBlock> block);

  /// Stacked block residuals, in block order.
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;
  /// Stacked m x N Jacobian of the residual.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  /// Stacked second directional derivatives H(v, v).
  Eigen::VectorXd second_directional(const Eigen::VectorXd& v) const;

  const AssociatorBlock* associator_block() const;

 private:
  Eigen::Index ambient_dim_;
  std::vector<std::shared_ptr<const ConstraintBlock>> blocks_;
};

/// Constraint system over the algebra's product-coordinate space with
/// the selected blocks.
QuadraticConstraintSystem build_constraint_system(const AlgebraSpec& alg, ConstraintFlags flags);

enum class MultiplierOperatorKind { PaperTwoTerm, FullJacobian };

const char* to_string(MultiplierOperatorKind kind);

/// Matrix mapping a constraint multiplier to ambient coordinates.
///
/// FullJacobian is the transpose of the stacked constraint Jacobian
/// (for a pure associator system, exactly the associator Jacobian
/// transpose). PaperTwoTerm is the compact two-term operator
///   (M lambda)[i,j,k] = sum_{a,b} x[a,b,i] lambda[a,b,j,k]
///                     - sum_{b,d} x[j,b,d] lambda[i,b,d,k],
/// which keeps two of the four Jacobian-transpose terms and drops
///   sum_{d,e} x[k,d,e] lambda[i,j,d,e] and
///   -sum_{a,e} x[a,i,e] lambda[a,j,k,e].
/// PaperTwoTerm requires an associator block and pairs lambda with that
/// block only.
Eigen::MatrixXd multiplier_operator(const QuadraticConstraintSystem& system,
                                    MultiplierOperatorKind kind, const Eigen::VectorXd& x);

/// The two dropped terms: full-jacobian operator minus the two-term
/// operator, for a pure associator block.
Eigen::MatrixXd two_term_dropped_terms(const AssociatorBlock& block, const Eigen::VectorXd& x);

/// Outcome of the multiplier solve M(x) lambda = xdd.
struct MultiplierReport {
  Eigen::VectorXd lambda;
  double relative_residual = 0.0;
  Eigen::Index rank = 0;
  MultiplierOperatorKind operator_kind = MultiplierOperatorKind::FullJacobian;
  bool consistent = false;
  double consistency_tol = 0.0;
};

/// Tests whether xdd lies in the range of the selected multiplier
/// operator at x, i.e. whether a curve through x with second derivative
/// xdd satisfies the multiplier form of the geodesic condition there.
MultiplierReport verify_geodesic_point(const QuadraticConstraintSystem& system,
                                       const Eigen::VectorXd& x, const Eigen::VectorXd& xdd,
                                       MultiplierOperatorKind kind,
                                       double rank_tol = kDefaultRankTol,
                                       double consistency_tol = 1e-10);

}  // namespace starprod
