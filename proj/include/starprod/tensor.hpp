#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace starprod {

enum class Field { Real, Complex };

/// Dense multi-index array in row-major order. Real scalars are stored
/// one double per entry; complex scalars are stored as two doubles
/// (re, im) per entry with the field recorded in the metadata. The
/// shape is fixed at construction.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::size_t> shape, Field field = Field::Real);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_[axis]; }
  /// Number of entries (scalars, not stored doubles).
  std::size_t size() const { return size_; }
  Field field() const { return field_; }
  bool is_complex() const { return field_ == Field::Complex; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// Linear entry index of a multi-index.
  std::size_t offset(std::span<const std::size_t> idx) const;

  double real_at(std::span<const std::size_t> idx) const;
  double real_at(std::initializer_list<std::size_t> idx) const {
    return real_at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  std::complex<double> at(std::span<const std::size_t> idx) const;
  std::complex<double> at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  void set(std::span<const std::size_t> idx, std::complex<double> value);
  void set(std::initializer_list<std::size_t> idx, std::complex<double> value) {
    set(std::span<const std::size_t>(idx.begin(), idx.size()), value);
  }
  void add(std::span<const std::size_t> idx, std::complex<double> value);
  void add(std::initializer_list<std::size_t> idx, std::complex<double> value) {
    add(std::span<const std::size_t>(idx.begin(), idx.size()), value);
  }

  /// Entry access by linear entry index.
  std::complex<double> entry(std::size_t k) const;
  void set_entry(std::size_t k, std::complex<double> value);

  bool all_finite() const;
  double max_abs() const;

  DenseTensor to_complex() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator*=(double scalar);
  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

  bool operator==(const DenseTensor& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;  // in entries
  std::size_t size_ = 0;
  Field field_ = Field::Real;
  std::vector<double> data_;
};

using AxisPair = std::pair<std::size_t, std::size_t>;

/// Sum-of-products contraction of paired axes. The result shape is the
/// free axes of A followed by the free axes of B; both operands must be
/// over the same scalar field.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs);
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<AxisPair> pairs);

/// Reorders axes: result axis k is input axis order[k].
DenseTensor permute(const DenseTensor& a, std::span<const std::size_t> order);
DenseTensor permute(const DenseTensor& a, std::initializer_list<std::size_t> order);

/// Reshapes to a matrix whose rows run lexicographically over row_axes
/// and columns over col_axes. row_axes followed by col_axes must be a
/// permutation of all axes. Entry-preserving bijection.
DenseTensor flatten(const DenseTensor& a, std::span<const std::size_t> row_axes,
                    std::span<const std::size_t> col_axes);
DenseTensor flatten(const DenseTensor& a, std::initializer_list<std::size_t> row_axes,
                    std::initializer_list<std::size_t> col_axes);

/// Inverse of flatten for the given original shape and axis split.
DenseTensor unflatten(const DenseTensor& matrix, std::span<const std::size_t> shape,
                      std::span<const std::size_t> row_axes,
                      std::span<const std::size_t> col_axes);
DenseTensor unflatten(const DenseTensor& matrix, std::initializer_list<std::size_t> shape,
                      std::initializer_list<std::size_t> row_axes,
                      std::initializer_list<std::size_t> col_axes);

}  // namespace starprod
