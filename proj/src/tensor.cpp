#include "starprod/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "starprod/errors.hpp"

namespace starprod {

namespace {

std::string shape_string(std::span<const std::size_t> shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape, Field field)
    : shape_(std::move(shape)), field_(field) {
  size_ = 1;
  for (std::size_t e : shape_) {
    if (e == 0) throw DimensionError("tensor extents must be positive");
    size_ *= e;
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * shape_[i];
  }
  data_.assign(size_ * (is_complex() ? 2 : 1), 0.0);
}

std::size_t DenseTensor::offset(std::span<const std::size_t> idx) const {
  if (idx.size() != shape_.size())
    throw DimensionError("index rank " + std::to_string(idx.size()) +
                         " does not match tensor rank " + std::to_string(shape_.size()));
  std::size_t off = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= shape_[i])
      throw DimensionError("index " + std::to_string(idx[i]) + " out of range on axis " +
                           std::to_string(i) + " of shape " + shape_string(shape_));
    off += idx[i] * strides_[i];
  }
  return off;
}

double DenseTensor::real_at(std::span<const std::size_t> idx) const {
  std::size_t k = offset(idx);
  return is_complex() ? data_[2 * k] : data_[k];
}

std::complex<double> DenseTensor::at(std::span<const std::size_t> idx) const {
  return entry(offset(idx));
}

void DenseTensor::set(std::span<const std::size_t> idx, std::complex<double> value) {
  set_entry(offset(idx), value);
}

void DenseTensor::add(std::span<const std::size_t> idx, std::complex<double> value) {
  set_entry(offset(idx), entry(offset(idx)) + value);
}

std::complex<double> DenseTensor::entry(std::size_t k) const {
  if (is_complex()) return {data_[2 * k], data_[2 * k + 1]};
  return {data_[k], 0.0};
}

void DenseTensor::set_entry(std::size_t k, std::complex<double> value) {
  if (is_complex()) {
    data_[2 * k] = value.real();
    data_[2 * k + 1] = value.imag();
  } else {
    if (value.imag() != 0.0)
      throw NumericError("cannot store a complex value in a real tensor");
    data_[k] = value.real();
  }
}

bool DenseTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size_; ++k) m = std::max(m, std::abs(entry(k)));
  return m;
}

DenseTensor DenseTensor::to_complex() const {
  if (is_complex()) return *this;
  DenseTensor out(shape_, Field::Complex);
  for (std::size_t k = 0; k < size_; ++k) out.data_[2 * k] = data_[k];
  return out;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (shape_ != other.shape_ || field_ != other.field_)
    throw DimensionError("tensor sum requires identical shape and field");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scalar) {
  for (double& v : data_) v *= scalar;
  return *this;
}

namespace {

// Advances a row-major multi-index; returns false after wrap-around.
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> shape) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < shape[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs) {
  if (a.field() != b.field())
    throw DimensionError("contract requires operands over the same field");
  std::vector<bool> a_paired(a.rank(), false), b_paired(b.rank(), false);
  for (auto [ax, bx] : pairs) {
    if (ax >= a.rank() || bx >= b.rank())
      throw DimensionError("contracted axis out of range");
    if (a_paired[ax] || b_paired[bx]) throw DimensionError("axis contracted twice");
    if (a.extent(ax) != b.extent(bx))
      throw DimensionError("extent mismatch on contracted axes (" + std::to_string(ax) +
                           " of A: " + std::to_string(a.extent(ax)) + ", " +
                           std::to_string(bx) + " of B: " + std::to_string(b.extent(bx)) + ")");
    a_paired[ax] = true;
    b_paired[bx] = true;
  }

  std::vector<std::size_t> a_free, b_free, sum_shape, out_shape;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!a_paired[i]) {
      a_free.push_back(i);
      out_shape.push_back(a.extent(i));
    }
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!b_paired[i]) {
      b_free.push_back(i);
      out_shape.push_back(b.extent(i));
    }
  for (auto [ax, bx] : pairs) sum_shape.push_back(a.extent(ax));
  if (out_shape.empty()) out_shape.push_back(1);  // scalar result as a 1-vector

  const bool scalar_result =
      a_free.empty() && b_free.empty();  // shape (1) holds the full contraction
  DenseTensor out(out_shape, a.field());

  std::vector<std::size_t> a_idx(a.rank(), 0), b_idx(b.rank(), 0);
  std::vector<std::size_t> free_idx(a_free.size() + b_free.size(), 0);
  std::vector<std::size_t> s_idx;

  bool more_free = true;
  while (more_free) {
    std::complex<double> acc = 0.0;
    s_idx.assign(pairs.size(), 0);
    bool more_sum = true;
    if (pairs.empty()) {
      // outer product: one term
      for (std::size_t i = 0; i < a_free.size(); ++i) a_idx[a_free[i]] = free_idx[i];
      for (std::size_t i = 0; i < b_free.size(); ++i)
        b_idx[b_free[i]] = free_idx[a_free.size() + i];
      acc = a.at(a_idx) * b.at(b_idx);
    } else {
      while (more_sum) {
        for (std::size_t i = 0; i < a_free.size(); ++i) a_idx[a_free[i]] = free_idx[i];
        for (std::size_t i = 0; i < b_free.size(); ++i)
          b_idx[b_free[i]] = free_idx[a_free.size() + i];
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          a_idx[pairs[i].first] = s_idx[i];
          b_idx[pairs[i].second] = s_idx[i];
        }
        acc += a.at(a_idx) * b.at(b_idx);
        more_sum = next_index(s_idx, sum_shape);
      }
    }
    if (scalar_result) {
      out.set({0}, acc);
    } else {
      out.set(free_idx, acc);
    }
    if (free_idx.empty()) break;
    more_free = next_index(free_idx, std::span<const std::size_t>(out.shape()));
  }
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

DenseTensor permute(const DenseTensor& a, std::span<const std::size_t> order) {
  if (order.size() != a.rank()) throw DimensionError("permutation rank mismatch");
  std::vector<bool> seen(a.rank(), false);
  std::vector<std::size_t> out_shape(a.rank());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= a.rank() || seen[order[k]])
      throw DimensionError("axis order is not a permutation");
    seen[order[k]] = true;
    out_shape[k] = a.extent(order[k]);
  }
  DenseTensor out(out_shape, a.field());
  std::vector<std::size_t> out_idx(a.rank(), 0), in_idx(a.rank(), 0);
  do {
    for (std::size_t k = 0; k < order.size(); ++k) in_idx[order[k]] = out_idx[k];
    out.set(out_idx, a.at(in_idx));
  } while (next_index(out_idx, out_shape));
  return out;
}

DenseTensor permute(const DenseTensor& a, std::initializer_list<std::size_t> order) {
  return permute(a, std::span<const std::size_t>(order.begin(), order.size()));
}

namespace {

void check_axis_split(std::size_t rank, std::span<const std::size_t> row_axes,
                      std::span<const std::size_t> col_axes) {
  if (row_axes.size() + col_axes.size() != rank)
    throw DimensionError("row and column axes must cover all axes exactly once");
  std::vector<bool> seen(rank, false);
  auto mark = [&](std::size_t ax) {
    if (ax >= rank) throw DimensionError("axis " + std::to_string(ax) + " out of range");
    if (seen[ax]) throw DimensionError("axis " + std::to_string(ax) + " listed twice");
    seen[ax] = true;
  };
  for (std::size_t ax : row_axes) mark(ax);
  for (std::size_t ax : col_axes) mark(ax);
}

}  // namespace

DenseTensor flatten(const DenseTensor& a, std::span<const std::size_t> row_axes,
                    std::span<const std::size_t> col_axes) {
  check_axis_split(a.rank(), row_axes, col_axes);
  std::size_t rows = 1, cols = 1;
  for (std::size_t ax : row_axes) rows *= a.extent(ax);
  for (std::size_t ax : col_axes) cols *= a.extent(ax);

  std::vector<std::size_t> order(row_axes.begin(), row_axes.end());
  order.insert(order.end(), col_axes.begin(), col_axes.end());
  DenseTensor rearranged = permute(a, order);

  // Same entry layout, matrix shape.
  DenseTensor out({rows, cols}, a.field());
  std::copy(rearranged.data().begin(), rearranged.data().end(), out.data().begin());
  return out;
}

DenseTensor flatten(const DenseTensor& a, std::initializer_list<std::size_t> row_axes,
                    std::initializer_list<std::size_t> col_axes) {
  return flatten(a, std::span<const std::size_t>(row_axes.begin(), row_axes.size()),
                 std::span<const std::size_t>(col_axes.begin(), col_axes.size()));
}

DenseTensor unflatten(const DenseTensor& matrix, std::span<const std::size_t> shape,
                      std::span<const std::size_t> row_axes,
                      std::span<const std::size_t> col_axes) {
  if (matrix.rank() != 2) throw DimensionError("unflatten expects a matrix");
  check_axis_split(shape.size(), row_axes, col_axes);
  std::size_t rows = 1, cols = 1;
  for (std::size_t ax : row_axes) rows *= shape[ax];
  for (std::size_t ax : col_axes) cols *= shape[ax];
  if (rows != matrix.extent(0) || cols != matrix.extent(1))
    throw DimensionError("matrix shape does not match the requested split");

  std::vector<std::size_t> order(row_axes.begin(), row_axes.end());
  order.insert(order.end(), col_axes.begin(), col_axes.end());
  std::vector<std::size_t> permuted_shape(shape.size());
  for (std::size_t k = 0; k < order.size(); ++k) permuted_shape[k] = shape[order[k]];

  DenseTensor rearranged(permuted_shape, matrix.field());
  std::copy(matrix.data().begin(), matrix.data().end(), rearranged.data().begin());

  // Inverse permutation restores the original axis order.
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  return permute(rearranged, inverse);
}

DenseTensor unflatten(const DenseTensor& matrix, std::initializer_list<std::size_t> shape,
                      std::initializer_list<std::size_t> row_axes,
                      std::initializer_list<std::size_t> col_axes) {
  return unflatten(matrix, std::span<const std::size_t>(shape.begin(), shape.size()),
                   std::span<const std::size_t>(row_axes.begin(), row_axes.size()),
                   std::span<const std::size_t>(col_axes.begin(), col_axes.size()));
}

}  // namespace starprod
