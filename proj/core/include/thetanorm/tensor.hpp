#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace thetanorm {

class MultiIndex;

/// Dimensions (n_1, ..., n_d) of a real d-way array.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<int> dims);
  Shape(std::initializer_list<int> dims) : Shape(std::vector<int>(dims)) {}

  int order() const { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  const std::vector<int>& dims() const { return dims_; }
  int max_dim() const;

  /// Total number of entries N = n_1 * ... * n_d.
  std::size_t size() const { return size_; }

  /// Row-major (last coordinate fastest) offset of a 1-based multi-index.
  std::size_t offset(const MultiIndex& index) const;
  MultiIndex index(std::size_t offset) const;
  bool contains(const MultiIndex& index) const;

  /// "2x3x4"
  std::string to_string() const;
  /// Accepts "2,3,4" or "2x3x4".
  static Shape parse(const std::string& text);

  bool operator==(const Shape&) const = default;

 private:
  std::vector<int> dims_;
  std::size_t size_ = 0;
};

/// A point of [n_1] x ... x [n_d]. Coordinates are 1-based.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> coords) : coords_(std::move(coords)) {}
  MultiIndex(std::initializer_list<int> coords) : coords_(coords) {}

  int order() const { return static_cast<int>(coords_.size()); }
  int operator[](int mode) const { return coords_[static_cast<std::size_t>(mode)]; }
  int& operator[](int mode) { return coords_[static_cast<std::size_t>(mode)]; }
  const std::vector<int>& coords() const { return coords_; }

  /// "1,2,1"
  std::string to_string() const;

  /// Lexicographic order on coordinates.
  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> coords_;
};

/// Dense real tensor stored row-major (last coordinate fastest).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(const Shape& shape) { return Tensor(shape); }
  static Tensor basis(const Shape& shape, const MultiIndex& index);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t offset) const { return values_[offset]; }
  double& operator[](std::size_t offset) { return values_[offset]; }
  double at(const MultiIndex& index) const { return values_.at(shape_.offset(index)); }
  double& at(const MultiIndex& index) { return values_.at(shape_.offset(index)); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  Eigen::Map<const Eigen::VectorXd> vector() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

  double frobenius_norm() const;
  double max_abs() const;
  double l1_norm() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double scale);
  friend Tensor operator+(Tensor lhs, const Tensor& rhs) { return lhs += rhs; }
  friend Tensor operator-(Tensor lhs, const Tensor& rhs) { return lhs -= rhs; }
  friend Tensor operator*(double scale, Tensor t) { return t *= scale; }

  /// Frobenius inner product.
  double dot(const Tensor& other) const;

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// One square matrix per mode; acts multilinearly on tensors.
struct ModeTransform {
  std::vector<Eigen::MatrixXd> factors;
};

enum class PairVariant { standard, barred };
enum class TensorKind { gaussian, signed_entries };

std::string to_string(TensorKind kind);
TensorKind parse_tensor_kind(const std::string& text);

/// Componentwise (min, max) of two multi-indices.
std::pair<MultiIndex, MultiIndex> wedge_vee(const MultiIndex& a, const MultiIndex& b);

/// Like wedge_vee, but coordinates where a and b agree map to n_i in both outputs.
std::pair<MultiIndex, MultiIndex> bar_wedge_vee(const MultiIndex& a, const MultiIndex& b,
                                                const Shape& shape);

/// True iff {a, b} is a fixed point of the (barred) wedge/vee rewrite.
/// Throws std::invalid_argument when a == b.
bool is_reduced_pair(const MultiIndex& a, const MultiIndex& b, PairVariant variant,
                     const Shape& shape);

Tensor rank1_tensor(std::span<const Eigen::VectorXd> factors);
Tensor rank1_tensor(std::initializer_list<Eigen::VectorXd> factors);

/// max_{a,b} |x_a x_b - x_{a^b} x_{avb}|.
double rank1_residual(const Tensor& x);

/// rank1_residual(x) <= tol * max|x_a|^2.
bool is_rank1(const Tensor& x, double tol = 1e-8);

/// Sum of r rank-1 terms, deterministic in seed.
Tensor random_low_rank(const Shape& shape, int rank, TensorKind kind, std::uint64_t seed);

/// Tensor with i.i.d. standard normal entries.
Tensor random_gaussian(const Shape& shape, std::uint64_t seed);

/// Rows are indexed by the modes in row_modes (0-based), columns by the rest;
/// both sides flattened lexicographically.
Eigen::MatrixXd matricize(const Tensor& x, std::span<const int> row_modes);

Tensor mode_transform(const Tensor& x, const ModeTransform& t);

ModeTransform random_orthogonal_transform(const Shape& shape, std::uint64_t seed);
ModeTransform random_signed_permutation(const Shape& shape, std::uint64_t seed);

}  // namespace thetanorm
