#include "starprod/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "starprod/errors.hpp"
#include "starprod/rng.hpp"

namespace starprod {

namespace {

std::size_t ucast(int v) { return static_cast<std::size_t>(v); }

void require_same_dim(int a, int b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
}

}  // namespace

ProductTensor::ProductTensor(int dim, Field field)
    : dim_(dim), field_(field), coeffs_({ucast(dim), ucast(dim), ucast(dim)}, field) {
  if (dim <= 0) throw DimensionError("product tensor dimension must be positive");
}

ProductTensor::ProductTensor(int dim, Field field, DenseTensor coeffs)
    : dim_(dim), field_(field), coeffs_(std::move(coeffs)) {
  if (coeffs_.rank() != 3 || coeffs_.extent(0) != ucast(dim) ||
      coeffs_.extent(1) != ucast(dim) || coeffs_.extent(2) != ucast(dim))
    throw DimensionError("product tensor coefficients must have cubic shape n x n x n");
  if (coeffs_.field() != field) throw DimensionError("coefficient field mismatch");
  if (!coeffs_.all_finite()) throw NumericError("product tensor entries must be finite");
}

std::complex<double> ProductTensor::coeff(int a, int b, int c) const {
  return coeffs_.at({ucast(a), ucast(b), ucast(c)});
}

void ProductTensor::set_coeff(int a, int b, int c, std::complex<double> value) {
  coeffs_.set({ucast(a), ucast(b), ucast(c)}, value);
}

void ProductTensor::add_coeff(int a, int b, int c, std::complex<double> value) {
  coeffs_.add({ucast(a), ucast(b), ucast(c)}, value);
}

Eigen::Index ProductTensor::ambient_dim(int dim, Field field) {
  Eigen::Index n3 = static_cast<Eigen::Index>(dim) * dim * dim;
  return field == Field::Complex ? 2 * n3 : n3;
}

Eigen::VectorXd ProductTensor::ambient_coordinates() const {
  std::span<const double> d = coeffs_.data();
  return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

ProductTensor ProductTensor::from_ambient(const Eigen::VectorXd& x, int dim, Field field) {
  if (x.size() != ambient_dim(dim, field))
    throw DimensionError("ambient coordinate length does not match dim/field");
  ProductTensor p(dim, field);
  std::copy(x.data(), x.data() + x.size(), p.coeffs_.data().begin());
  return p;
}

ProductTensor& ProductTensor::operator+=(const ProductTensor& other) {
  require_same_dim(dim_, other.dim_, "product sum");
  coeffs_ += other.coeffs_;
  return *this;
}

ProductTensor& ProductTensor::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

ProductCurve::ProductCurve(int dim, Field field, std::vector<ProductTensor> coefficients)
    : dim_(dim), field_(field), coefficients_(std::move(coefficients)) {
  for (const ProductTensor& c : coefficients_) {
    require_same_dim(c.dim(), dim, "product curve coefficient");
    if (c.field() != field) throw DimensionError("product curve coefficient field mismatch");
  }
}

ProductTensor ProductCurve::eval(double h, int order) const {
  if (order < 0 || order > 2) throw ConfigError("curve evaluation supports orders 0..2");
  ProductTensor out(dim_, field_);
  for (std::size_t m = 0; m < coefficients_.size(); ++m) {
    double factor = 0.0;
    auto mm = static_cast<double>(m);
    switch (order) {
      case 0: factor = std::pow(h, mm); break;
      case 1: factor = m >= 1 ? mm * std::pow(h, mm - 1) : 0.0; break;
      case 2: factor = m >= 2 ? mm * (mm - 1) * std::pow(h, mm - 2) : 0.0; break;
    }
    if (factor != 0.0) {
      ProductTensor term = coefficients_[m];
      term *= factor;
      out += term;
    }
  }
  return out;
}

Eigen::MatrixXcd AutomorphismMap::inverse() const {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(matrix);
  if (!lu.isInvertible())
    throw InvertibilityError("automorphism matrix is singular");
  return lu.inverse();
}

double AxiomReport::worst() const {
  double w = 0.0;
  for (const auto& [name, c] : checks) w = std::max(w, c.residual);
  return w;
}

bool AxiomReport::passed(double tol) const { return worst() < tol; }

const AxiomCheck& AxiomReport::check(const std::string& name) const {
  auto it = checks.find(name);
  if (it == checks.end()) throw ConfigError("no axiom check named '" + name + "'");
  return it->second;
}

ElementVector multiply(const ProductTensor& p, const ElementVector& f, const ElementVector& g) {
  require_same_dim(p.dim(), static_cast<int>(f.size()), "multiply (left factor)");
  require_same_dim(p.dim(), static_cast<int>(g.size()), "multiply (right factor)");
  const int n = p.dim();
  ElementVector out = ElementVector::Zero(n);
  for (int a = 0; a < n; ++a) {
    std::complex<double> acc = 0.0;
    for (int b = 0; b < n; ++b) {
      if (f[b] == 0.0) continue;
      for (int c = 0; c < n; ++c) acc += p.coeff(a, b, c) * f[b] * g[c];
    }
    out[a] = acc;
  }
  return out;
}

DenseTensor associator_form(const ProductTensor& p, const ProductTensor& q) {
  require_same_dim(p.dim(), q.dim(), "associator");
  if (p.field() != q.field()) throw DimensionError("associator: field mismatch");
  const std::size_t n = ucast(p.dim());

  // sum_c p[a,b,c] q[c,d,e] -> free axes (a,b | d,e), already in order.
  DenseTensor first = contract(p.coeffs(), q.coeffs(), {AxisPair{2, 0}});
  // sum_c q[c,b,d] p[a,c,e] -> free axes (b,d | a,e); reorder to (a,b,d,e).
  DenseTensor second = contract(q.coeffs(), p.coeffs(), {AxisPair{0, 1}});
  second = permute(second, {2, 0, 1, 3});

  second *= -1.0;
  first += second;
  (void)n;
  return first;
}

namespace {

// Scans a rank-4 associator for the entry of largest magnitude and
// reports its (b,d,e) argument triple as the witness. Ties resolve to
// the last entry in scan order.
AxiomCheck worst_associator_entry(const DenseTensor& assoc, int n) {
  AxiomCheck out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          double m = std::abs(assoc.at({ucast(a), ucast(b), ucast(d), ucast(e)}));
          if (m >= out.residual) {
            out.residual = m;
            out.witness = {b, d, e};
          }
        }
  return out;
}

ElementVector basis_vector(int n, int i) {
  ElementVector e = ElementVector::Zero(n);
  e[i] = 1.0;
  return e;
}

}  // namespace

AxiomReport check_star_axioms(const AlgebraSpec& alg, const ProductTensor& p) {
  require_same_dim(alg.dim, p.dim(), "star axiom check");
  const int n = alg.dim;
  AxiomReport report;

  // Two-sided unit.
  AxiomCheck left_unit, right_unit;
  for (int b = 0; b < n; ++b) {
    ElementVector e = basis_vector(n, b);
    double lu = (multiply(p, alg.unit, e) - e).cwiseAbs().maxCoeff();
    double ru = (multiply(p, e, alg.unit) - e).cwiseAbs().maxCoeff();
    if (lu > left_unit.residual) left_unit = {lu, {b, -1, -1}};
    if (ru > right_unit.residual) right_unit = {ru, {b, -1, -1}};
  }
  report.checks["unit-left"] = left_unit;
  report.checks["unit-right"] = right_unit;

  // Involution antihomomorphism: (e_b * e_c)^* = e_c^* * e_b^*.
  AxiomCheck invol;
  for (int b = 0; b < n; ++b) {
    ElementVector eb = basis_vector(n, b);
    ElementVector eb_star = alg.involution.apply(eb);
    for (int c = 0; c < n; ++c) {
      ElementVector ec = basis_vector(n, c);
      ElementVector lhs = alg.involution.apply(multiply(p, eb, ec));
      ElementVector rhs = multiply(p, alg.involution.apply(ec), eb_star);
      double m = (lhs - rhs).cwiseAbs().maxCoeff();
      if (m > invol.residual) invol = {m, {b, c, -1}};
    }
  }
  report.checks["involution-antihom"] = invol;

  report.checks["associativity"] = worst_associator_entry(associator_form(p, p), n);
  return report;
}

AxiomReport check_poisson_axioms(const ProductTensor& bullet, const ProductTensor& poisson) {
  require_same_dim(bullet.dim(), poisson.dim(), "bracket axiom check");
  const int n = bullet.dim();
  AxiomReport report;

  AxiomCheck antisym;
  for (int b = 0; b < n; ++b) {
    ElementVector eb = basis_vector(n, b);
    for (int c = 0; c < n; ++c) {
      ElementVector ec = basis_vector(n, c);
      double m = (multiply(poisson, eb, ec) + multiply(poisson, ec, eb)).cwiseAbs().maxCoeff();
      if (m > antisym.residual) antisym = {m, {b, c, -1}};
    }
  }
  report.checks["antisymmetry"] = antisym;

  AxiomCheck jacobi, leibniz;
  for (int b = 0; b < n; ++b) {
    ElementVector f = basis_vector(n, b);
    for (int c = 0; c < n; ++c) {
      ElementVector g = basis_vector(n, c);
      for (int d = 0; d < n; ++d) {
        ElementVector h = basis_vector(n, d);
        ElementVector cyc = multiply(poisson, f, multiply(poisson, g, h)) +
                            multiply(poisson, g, multiply(poisson, h, f)) +
                            multiply(poisson, h, multiply(poisson, f, g));
        double mj = cyc.cwiseAbs().maxCoeff();
        if (mj > jacobi.residual) jacobi = {mj, {b, c, d}};

        ElementVector leib = multiply(poisson, f, multiply(bullet, g, h)) -
                             multiply(bullet, multiply(poisson, f, g), h) -
                             multiply(bullet, g, multiply(poisson, f, h));
        double ml = leib.cwiseAbs().maxCoeff();
        if (ml > leibniz.residual) leibniz = {ml, {b, c, d}};
      }
    }
  }
  report.checks["jacobi"] = jacobi;
  report.checks["leibniz"] = leibniz;
  return report;
}

AxiomReport check_poisson_axioms(const AlgebraSpec& alg) {
  return check_poisson_axioms(alg.bullet, alg.poisson);
}

namespace {

// Realifies a bilinear map on complex coordinates into a real bilinear
// map on interleaved (re, im) coordinates, so one norm path serves both
// fields.
DenseTensor realified_bilinear(const ProductTensor& p) {
  if (p.field() == Field::Real) return p.coeffs();
  const std::size_t n = ucast(p.dim());
  DenseTensor out({2 * n, 2 * n, 2 * n}, Field::Real);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        std::complex<double> z = p.coeffs().at({a, b, c});
        if (z == 0.0) continue;
        double re = z.real(), im = z.imag();
        // (re+i*im)(fb_re+i*fb_im)(gc_re+i*gc_im), collected per component.
        // Output real part (index 2a), imaginary part (2a+1).
        const std::size_t ar = 2 * a, ai = 2 * a + 1;
        const std::size_t br = 2 * b, bi = 2 * b + 1;
        const std::size_t cr = 2 * c, ci = 2 * c + 1;
        out.add({ar, br, cr}, re);
        out.add({ar, br, ci}, -im);
        out.add({ar, bi, cr}, -im);
        out.add({ar, bi, ci}, -re);
        out.add({ai, br, cr}, im);
        out.add({ai, br, ci}, re);
        out.add({ai, bi, cr}, re);
        out.add({ai, bi, ci}, -im);
      }
  return out;
}

}  // namespace

std::pair<double, double> product_norm_estimate(const ProductTensor& p, int samples,
                                                std::uint64_t seed) {
  if (samples < 1) throw ConfigError("product_norm_estimate requires samples >= 1");
  DenseTensor real3 = realified_bilinear(p);
  const auto n = static_cast<Eigen::Index>(real3.extent(0));

  DenseTensor flat = flatten(real3, {0}, {1, 2});
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      flat.data().data(), n, n * n);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  double upper = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;

  Eigen::Map<const Eigen::VectorXd> t(real3.data().data(), n * n * n);
  SeededRng rng(seed);
  double lower = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd f = rng.gaussian_vector(n);
    Eigen::VectorXd g = rng.gaussian_vector(n);
    double fn = f.norm(), gn = g.norm();
    if (fn == 0.0 || gn == 0.0) continue;
    f /= fn;
    g /= gn;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < n; ++a) {
      double acc = 0.0;
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index c = 0; c < n; ++c) acc += t[(a * n + b) * n + c] * f[b] * g[c];
      out[a] = acc;
    }
    lower = std::max(lower, out.norm());
  }
  return {lower, upper};
}

ProductTensor pushforward_product(const AutomorphismMap& u, const ProductTensor& p) {
  const int n = p.dim();
  require_same_dim(static_cast<int>(u.matrix.rows()), n, "pushforward");
  Eigen::MatrixXcd uinv = u.inverse();

  ProductTensor out(n, p.field());
  // out[a,b,c] = sum U[a,x] p[x,y,z] Uinv[y,b] Uinv[z,c]
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      // w[x] = p[x,y,z], v = U w
      ElementVector w(n);
      for (int x = 0; x < n; ++x) w[x] = p.coeff(x, y, z);
      ElementVector v = u.matrix * w;
      for (int b = 0; b < n; ++b) {
        std::complex<double> uy = uinv(y, b);
        if (uy == 0.0) continue;
        for (int c = 0; c < n; ++c) {
          std::complex<double> uz = uinv(z, c);
          if (uz == 0.0) continue;
          for (int a = 0; a < n; ++a) out.add_coeff(a, b, c, v[a] * uy * uz);
        }
      }
    }
  return out;
}

AxiomReport check_automorphism(const AutomorphismMap& u, const AlgebraSpec& alg) {
  const int n = alg.dim;
  require_same_dim(static_cast<int>(u.matrix.rows()), n, "automorphism check");
  (void)u.inverse();  // invertibility gate
  AxiomReport report;

  AxiomCheck unit_check;
  unit_check.residual = ((u.matrix * alg.unit).eval() - alg.unit).cwiseAbs().maxCoeff();
  report.checks["unit-preservation"] = unit_check;

  AxiomCheck prod, invol, bracket;
  for (int b = 0; b < n; ++b) {
    ElementVector eb = basis_vector(n, b);
    ElementVector ub = u.matrix * eb;

    ElementVector istar = u.matrix * alg.involution.apply(eb);
    ElementVector star_i = alg.involution.apply(ub);
    double mi = (istar - star_i).cwiseAbs().maxCoeff();
    if (mi > invol.residual) invol = {mi, {b, -1, -1}};

    for (int c = 0; c < n; ++c) {
      ElementVector ec = basis_vector(n, c);
      ElementVector uc = u.matrix * ec;
      double mp = (multiply(alg.bullet, ub, uc) - u.matrix * multiply(alg.bullet, eb, ec))
                      .cwiseAbs()
                      .maxCoeff();
      if (mp > prod.residual) prod = {mp, {b, c, -1}};
      double mb = (multiply(alg.poisson, ub, uc) - u.matrix * multiply(alg.poisson, eb, ec))
                      .cwiseAbs()
                      .maxCoeff();
      if (mb > bracket.residual) bracket = {mb, {b, c, -1}};
    }
  }
  report.checks["product-preservation"] = prod;
  report.checks["involution-preservation"] = invol;
  report.checks["bracket-preservation"] = bracket;
  return report;
}

std::vector<std::string> validate_algebra(const AlgebraSpec& alg, double tol) {
  std::vector<std::string> problems;
  AxiomReport star = check_star_axioms(alg, alg.bullet);
  for (const auto& [name, c] : star.checks) {
    if (c.residual >= tol)
      problems.push_back("base product fails " + name + " (residual " +
                         std::to_string(c.residual) + ")");
  }
  if (alg.bracket_mode == BracketMode::Bosonic) {
    const int n = alg.dim;
    double comm = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          comm = std::max(comm, std::abs(alg.bullet.coeff(a, b, c) - alg.bullet.coeff(a, c, b)));
    if (comm >= tol)
      problems.push_back("base product is not commutative (max deviation " +
                         std::to_string(comm) + ")");
    AxiomReport bracket = check_poisson_axioms(alg);
    for (const auto& [name, c] : bracket.checks) {
      if (c.residual >= tol)
        problems.push_back("bracket fails " + name + " (residual " +
                           std::to_string(c.residual) + ")");
    }
  }
  double unit_norm_dev = std::abs(alg.unit.norm() - 1.0);
  if (unit_norm_dev >= tol)
    problems.push_back("unit coordinates do not have norm 1 (deviation " +
                       std::to_string(unit_norm_dev) + ")");
  return problems;
}

}  // namespace starprod
