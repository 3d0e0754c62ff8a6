#include "starprod/constraint.hpp"

#include <complex>
#include <limits>

#include "starprod/errors.hpp"

namespace starprod {

namespace {

using Cplx = std::complex<double>;

Eigen::Index n3(int n) { return static_cast<Eigen::Index>(n) * n * n; }
Eigen::Index n4(int n) { return static_cast<Eigen::Index>(n) * n * n * n; }

// Complex tensor view of realified ambient coordinates.
Eigen::VectorXcd to_complex_coords(const Eigen::VectorXd& x) {
  Eigen::VectorXcd z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = {x[2 * i], x[2 * i + 1]};
  return z;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& z) {
  Eigen::VectorXd out(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out[2 * i] = z[i].real();
    out[2 * i + 1] = z[i].imag();
  }
  return out;
}

// Realified matrix of a complex-linear map (no conjugation).
Eigen::MatrixXd realify_linear(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double re = m(r, c).real(), im = m(r, c).imag();
      out(2 * r, 2 * c) = re;
      out(2 * r, 2 * c + 1) = -im;
      out(2 * r + 1, 2 * c) = im;
      out(2 * r + 1, 2 * c + 1) = re;
    }
  return out;
}

void check_ambient(const Eigen::VectorXd& x, Eigen::Index expected, const char* what) {
  if (x.size() != expected)
    throw DimensionError(std::string(what) + ": ambient coordinate length " +
                         std::to_string(x.size()) + ", expected " + std::to_string(expected));
}

// Mixed associator B(u, w)[a,b,d,e] = sum_c u[a,b,c] w[c,d,e] - w[c,b,d] u[a,c,e]
// on flat scalar arrays indexed [(a*n + b)*n + c].
template <typename Scalar>
void mixed_associator(const Scalar* u, const Scalar* w, int n, Scalar* out) {
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };
  Eigen::Index r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          Scalar acc{};
          for (int c = 0; c < n; ++c)
            acc += u[X(a, b, c)] * w[X(c, d, e)] - w[X(c, b, d)] * u[X(a, c, e)];
          out[r++] = acc;
        }
}

// Four-delta-term associator Jacobian on flat scalar arrays:
// J[(a,b,d,e),(i,j,k)] = d(a,i) d(b,j) x[k,d,e] + x[a,b,i] d(d,j) d(e,k)
//                      - x[a,i,e] d(b,j) d(d,k) - x[j,b,d] d(a,i) d(e,k).
template <typename Matrix, typename Scalar>
void associator_jacobian(const Scalar* x, int n, Matrix& jac) {
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };
  auto R = [n](Eigen::Index a, Eigen::Index b, Eigen::Index d, Eigen::Index e) {
    return ((a * n + b) * n + d) * n + e;
  };
  jac.setZero();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          const Eigen::Index row = R(a, b, d, e);
          // term 1: i=a, j=b, free k
          for (int k = 0; k < n; ++k) jac(row, X(a, b, k)) += x[X(k, d, e)];
          // term 2: j=d, k=e, free i
          for (int i = 0; i < n; ++i) jac(row, X(i, d, e)) += x[X(a, b, i)];
          // term 3: j=b, k=d, free i
          for (int i = 0; i < n; ++i) jac(row, X(i, b, d)) -= x[X(a, i, e)];
          // term 4: i=a, k=e, free j
          for (int j = 0; j < n; ++j) jac(row, X(a, j, e)) -= x[X(j, b, d)];
        }
}

}  // namespace

AssociatorBlock::AssociatorBlock(int dim, Field field) : dim_(dim), field_(field) {
  if (dim <= 0) throw DimensionError("associator block dimension must be positive");
}

Eigen::Index AssociatorBlock::rows() const {
  return field_ == Field::Complex ? 2 * n4(dim_) : n4(dim_);
}

Eigen::VectorXd AssociatorBlock::residual(const Eigen::VectorXd& x) const {
  check_ambient(x, ProductTensor::ambient_dim(dim_, field_), "associator residual");
  if (field_ == Field::Real) {
    Eigen::VectorXd out(n4(dim_));
    mixed_associator(x.data(), x.data(), dim_, out.data());
    return out;
  }
  Eigen::VectorXcd z = to_complex_coords(x);
  Eigen::VectorXcd out(n4(dim_));
  mixed_associator(z.data(), z.data(), dim_, out.data());
  return realify(out);
}

Eigen::MatrixXd AssociatorBlock::jacobian(const Eigen::VectorXd& x) const {
  check_ambient(x, ProductTensor::ambient_dim(dim_, field_), "associator jacobian");
  if (field_ == Field::Real) {
    Eigen::MatrixXd jac(n4(dim_), n3(dim_));
    associator_jacobian(x.data(), dim_, jac);
    return jac;
  }
  Eigen::VectorXcd z = to_complex_coords(x);
  Eigen::MatrixXcd jac(n4(dim_), n3(dim_));
  associator_jacobian(z.data(), dim_, jac);
  return realify_linear(jac);
}

Eigen::VectorXd AssociatorBlock::second_directional(const Eigen::VectorXd& v) const {
  check_ambient(v, ProductTensor::ambient_dim(dim_, field_), "associator hessian");
  if (field_ == Field::Real) {
    Eigen::VectorXd out(n4(dim_));
    mixed_associator(v.data(), v.data(), dim_, out.data());
    return 2.0 * out;
  }
  Eigen::VectorXcd z = to_complex_coords(v);
  Eigen::VectorXcd out(n4(dim_));
  mixed_associator(z.data(), z.data(), dim_, out.data());
  return 2.0 * realify(out);
}

UnitBlock::UnitBlock(int dim, Field field, const ElementVector& unit) {
  if (unit.size() != dim) throw DimensionError("unit block: unit length must equal dim");
  const int n = dim;
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };

  // Rows: left-unit equations (a,b), then right-unit equations (a,b).
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n * n, n3(n));
  Eigen::VectorXcd rhs(2 * n * n);
  Eigen::Index r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b, ++r) {
      for (int c = 0; c < n; ++c) m(r, X(a, c, b)) += unit[c];
      rhs[r] = a == b ? 1.0 : 0.0;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b, ++r) {
      for (int c = 0; c < n; ++c) m(r, X(a, b, c)) += unit[c];
      rhs[r] = a == b ? 1.0 : 0.0;
    }

  if (field == Field::Real) {
    matrix_ = m.real();
    rhs_ = rhs.real();
  } else {
    matrix_ = realify_linear(m);
    rhs_ = realify(rhs);
  }
}

Eigen::VectorXd UnitBlock::residual(const Eigen::VectorXd& x) const {
  check_ambient(x, matrix_.cols(), "unit residual");
  return matrix_ * x - rhs_;
}

InvolutionBlock::InvolutionBlock(int dim, Field field, const InvolutionMap& involution) {
  if (involution.matrix.rows() != dim || involution.matrix.cols() != dim)
    throw DimensionError("involution block: map must be dim x dim");
  const int n = dim;
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };
  const Eigen::MatrixXcd& s = involution.matrix;

  if (field == Field::Real) {
    matrix_ = Eigen::MatrixXd::Zero(n3(n), n3(n));
    Eigen::Index r = 0;
    for (int p = 0; p < n; ++p)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c, ++r) {
          for (int a = 0; a < n; ++a) matrix_(r, X(a, b, c)) += s(p, a).real();
          for (int q = 0; q < n; ++q)
            for (int t = 0; t < n; ++t)
              matrix_(r, X(p, q, t)) -= (s(q, c) * s(t, b)).real();
        }
    return;
  }

  // Complex case, realified directly: the first term conjugates x when
  // the involution is antilinear, so the map is only real-linear.
  const bool conj = involution.conjugates;
  matrix_ = Eigen::MatrixXd::Zero(2 * n3(n), 2 * n3(n));
  Eigen::Index r = 0;
  auto add_coeff = [&](Eigen::Index row2, Eigen::Index col, Cplx coef, bool conjugated) {
    // Contribution coef * x[col] (or coef * conj(x[col])): write the
    // 2x2 real block into rows (row2, row2+1), cols (2col, 2col+1).
    double re = coef.real(), im = coef.imag();
    matrix_(row2, 2 * col) += re;
    matrix_(row2 + 1, 2 * col) += im;
    if (conjugated) {
      matrix_(row2, 2 * col + 1) += im;
      matrix_(row2 + 1, 2 * col + 1) += -re;
    } else {
      matrix_(row2, 2 * col + 1) += -im;
      matrix_(row2 + 1, 2 * col + 1) += re;
    }
  };
  for (int p = 0; p < n; ++p)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, r += 2) {
        for (int a = 0; a < n; ++a) add_coeff(r, X(a, b, c), s(p, a), conj);
        for (int q = 0; q < n; ++q)
          for (int t = 0; t < n; ++t) add_coeff(r, X(p, q, t), -s(q, c) * s(t, b), false);
      }
}

CustomQuadraticBlock::CustomQuadraticBlock(std::vector<Constraint> constraints)
    : constraints_(std::move(constraints)) {
  for (const Constraint& c : constraints_) {
    if (c.quadratic.rows() != c.quadratic.cols() || c.quadratic.rows() != c.linear.size())
      throw DimensionError("custom quadratic constraint: inconsistent shapes");
  }
}

Eigen::VectorXd CustomQuadraticBlock::residual(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(rows());
  for (Eigen::Index i = 0; i < rows(); ++i) {
    const Constraint& c = constraints_[i];
    check_ambient(x, c.linear.size(), "custom quadratic residual");
    out[i] = x.dot(c.quadratic * x) + c.linear.dot(x) + c.constant;
  }
  return out;
}

Eigen::MatrixXd CustomQuadraticBlock::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(rows(), x.size());
  for (Eigen::Index i = 0; i < rows(); ++i) {
    const Constraint& c = constraints_[i];
    out.row(i) = (2.0 * (c.quadratic * x) + c.linear).transpose();
  }
  return out;
}

Eigen::VectorXd CustomQuadraticBlock::second_directional(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(rows());
  for (Eigen::Index i = 0; i < rows(); ++i)
    out[i] = 2.0 * v.dot(constraints_[i].quadratic * v);
  return out;
}

Eigen::Index QuadraticConstraintSystem::total_rows() const {
  Eigen::Index m = 0;
  for (const auto& b : blocks_) m += b->rows();
  return m;
}

void QuadraticConstraintSystem::add_block(std::shared_ptr<const ConstraintBlock> block) {
  blocks_.push_back(std::move(block));
}

Eigen::VectorXd QuadraticConstraintSystem::residual(const Eigen::VectorXd& x) const {
  check_ambient(x, ambient_dim_, "constraint residual");
  Eigen::VectorXd out(total_rows());
  Eigen::Index r = 0;
  for (const auto& b : blocks_) {
    out.segment(r, b->rows()) = b->residual(x);
    r += b->rows();
  }
  return out;
}

Eigen::MatrixXd QuadraticConstraintSystem::jacobian(const Eigen::VectorXd& x) const {
  check_ambient(x, ambient_dim_, "constraint jacobian");
  Eigen::MatrixXd out(total_rows(), ambient_dim_);
  Eigen::Index r = 0;
  for (const auto& b : blocks_) {
    out.middleRows(r, b->rows()) = b->jacobian(x);
    r += b->rows();
  }
  return out;
}

Eigen::VectorXd QuadraticConstraintSystem::second_directional(const Eigen::VectorXd& v) const {
  check_ambient(v, ambient_dim_, "constraint hessian");
  Eigen::VectorXd out(total_rows());
  Eigen::Index r = 0;
  for (const auto& b : blocks_) {
    out.segment(r, b->rows()) = b->second_directional(v);
    r += b->rows();
  }
  return out;
}

const AssociatorBlock* QuadraticConstraintSystem::associator_block() const {
  for (const auto& b : blocks_)
    if (b->kind() == BlockKind::Associator)
      return static_cast<const AssociatorBlock*>(b.get());
  return nullptr;
}

QuadraticConstraintSystem build_constraint_system(const AlgebraSpec& alg, ConstraintFlags flags) {
  if (!flags.associativity && !flags.unit && !flags.involution)
    throw ConfigError("build_constraint_system: at least one constraint flag must be set");
  QuadraticConstraintSystem system(ProductTensor::ambient_dim(alg.dim, alg.field));
  if (flags.associativity)
    system.add_block(std::make_shared<AssociatorBlock>(alg.dim, alg.field));
  if (flags.unit)
    system.add_block(std::make_shared<UnitBlock>(alg.dim, alg.field, alg.unit));
  if (flags.involution)
    system.add_block(std::make_shared<InvolutionBlock>(alg.dim, alg.field, alg.involution));
  return system;
}

const char* to_string(MultiplierOperatorKind kind) {
  return kind == MultiplierOperatorKind::PaperTwoTerm ? "paper-two-term" : "full-jacobian";
}

namespace {

// Two-term operator over one scalar field:
// M[(p,q,r),(a,b,d,e)] = x[a,b,p] d(q,d) d(r,e) - x[q,b,d] d(a,p) d(r,e).
template <typename Matrix, typename Scalar>
void two_term_matrix(const Scalar* x, int n, Matrix& m) {
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };
  auto C = [n](Eigen::Index a, Eigen::Index b, Eigen::Index d, Eigen::Index e) {
    return ((a * n + b) * n + d) * n + e;
  };
  m.setZero();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        const Eigen::Index row = X(p, q, r);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) m(row, C(a, b, q, r)) += x[X(a, b, p)];
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d) m(row, C(p, b, d, r)) -= x[X(q, b, d)];
      }
}

}  // namespace

Eigen::MatrixXd multiplier_operator(const QuadraticConstraintSystem& system,
                                    MultiplierOperatorKind kind, const Eigen::VectorXd& x) {
  if (kind == MultiplierOperatorKind::FullJacobian) return system.jacobian(x).transpose();

  const AssociatorBlock* assoc = system.associator_block();
  if (assoc == nullptr)
    throw ConfigError("the two-term multiplier operator requires an associator block");
  const int n = assoc->dim();
  check_ambient(x, ProductTensor::ambient_dim(n, assoc->field()), "two-term operator");

  if (assoc->field() == Field::Real) {
    Eigen::MatrixXd m(n3(n), n4(n));
    two_term_matrix(x.data(), n, m);
    return m;
  }
  Eigen::VectorXcd z = to_complex_coords(x);
  Eigen::MatrixXcd m(n3(n), n4(n));
  two_term_matrix(z.data(), n, m);
  return realify_linear(m);
}

Eigen::MatrixXd two_term_dropped_terms(const AssociatorBlock& block, const Eigen::VectorXd& x) {
  const int n = block.dim();
  check_ambient(x, ProductTensor::ambient_dim(n, block.field()), "dropped terms");
  auto X = [n](Eigen::Index a, Eigen::Index b, Eigen::Index c) { return (a * n + b) * n + c; };
  auto C = [n](Eigen::Index a, Eigen::Index b, Eigen::Index d, Eigen::Index e) {
    return ((a * n + b) * n + d) * n + e;
  };
  auto fill = [&](auto* xv, auto& m) {
    m.setZero();
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
          const Eigen::Index row = X(p, q, r);
          // d(a,p) d(b,q) x[r,d,e]
          for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) m(row, C(p, q, d, e)) += xv[X(r, d, e)];
          // -x[a,p,e] d(b,q) d(d,r)
          for (int a = 0; a < n; ++a)
            for (int e = 0; e < n; ++e) m(row, C(a, q, r, e)) -= xv[X(a, p, e)];
        }
  };
  if (block.field() == Field::Real) {
    Eigen::MatrixXd m(n3(n), n4(n));
    fill(x.data(), m);
    return m;
  }
  Eigen::VectorXcd z = to_complex_coords(x);
  Eigen::MatrixXcd m(n3(n), n4(n));
  fill(z.data(), m);
  return realify_linear(m);
}

MultiplierReport verify_geodesic_point(const QuadraticConstraintSystem& system,
                                       const Eigen::VectorXd& x, const Eigen::VectorXd& xdd,
                                       MultiplierOperatorKind kind, double rank_tol,
                                       double consistency_tol) {
  if (xdd.size() != system.ambient_dim())
    throw DimensionError("verify_geodesic_point: xdd length must equal the ambient dimension");
  Eigen::MatrixXd m = multiplier_operator(system, kind, x);
  MultiplierReport report;
  report.operator_kind = kind;
  report.consistency_tol = consistency_tol;
  if (m.cols() == 0) {
    // No constraints: only xdd = 0 is normal.
    report.lambda = Eigen::VectorXd(0);
    report.relative_residual =
        xdd.norm() / std::max(xdd.norm(), std::numeric_limits<double>::epsilon());
    report.rank = 0;
    report.consistent = report.relative_residual < consistency_tol;
    return report;
  }
  LinearSystemReport solve = least_squares_solve(m, xdd, rank_tol);
  report.lambda = solve.solution;
  report.relative_residual = solve.relative_residual;
  report.rank = solve.numerical_rank;
  report.consistent = report.relative_residual < consistency_tol;
  return report;
}

}  // namespace starprod
