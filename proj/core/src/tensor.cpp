#include "thetanorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace thetanorm {

Shape::Shape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("shape must have at least one mode");
  size_ = 1;
  for (int n : dims_) {
    if (n < 1) throw std::invalid_argument("shape dimensions must be positive");
    size_ *= static_cast<std::size_t>(n);
  }
}

int Shape::max_dim() const { return *std::max_element(dims_.begin(), dims_.end()); }

std::size_t Shape::offset(const MultiIndex& index) const {
  if (index.order() != order()) throw std::invalid_argument("multi-index order mismatch");
  std::size_t off = 0;
  for (int i = 0; i < order(); ++i) {
    int c = index[i];
    if (c < 1 || c > dims_[i]) throw std::out_of_range("multi-index out of range");
    off = off * static_cast<std::size_t>(dims_[i]) + static_cast<std::size_t>(c - 1);
  }
  return off;
}

MultiIndex Shape::index(std::size_t offset) const {
  if (offset >= size_) throw std::out_of_range("offset out of range");
  std::vector<int> coords(dims_.size());
  for (int i = order() - 1; i >= 0; --i) {
    auto n = static_cast<std::size_t>(dims_[i]);
    coords[i] = static_cast<int>(offset % n) + 1;
    offset /= n;
  }
  return MultiIndex(std::move(coords));
}

bool Shape::contains(const MultiIndex& index) const {
  if (index.order() != order()) return false;
  for (int i = 0; i < order(); ++i)
    if (index[i] < 1 || index[i] > dims_[i]) return false;
  return true;
}

std::string Shape::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims_[i]);
  }
  return out;
}

Shape Shape::parse(const std::string& text) {
  std::vector<int> dims;
  std::string token;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), 'x', ',');
  std::istringstream in(normalized);
  while (std::getline(in, token, ',')) {
    auto first = token.find_first_not_of(" \t");
    auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty shape entry in '" + text + "'");
    token = token.substr(first, last - first + 1);
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid shape entry '" + token + "'");
    }
    if (used != token.size()) throw std::invalid_argument("invalid shape entry '" + token + "'");
    dims.push_back(n);
  }
  return Shape(std::move(dims));
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords_[i]);
  }
  return out;
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), values_(shape_.size(), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.size())
    throw std::invalid_argument("tensor has " + std::to_string(values_.size()) +
                                " values, shape " + shape_.to_string() + " needs " +
                                std::to_string(shape_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("tensor entries must be finite");
}

Tensor Tensor::basis(const Shape& shape, const MultiIndex& index) {
  Tensor t(shape);
  t.at(index) = 1.0;
  return t;
}

double Tensor::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor::l1_norm() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.shape_ != shape_) throw std::invalid_argument("shape mismatch in tensor sum");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (other.shape_ != shape_) throw std::invalid_argument("shape mismatch in tensor difference");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Tensor& Tensor::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

double Tensor::dot(const Tensor& other) const {
  if (other.shape_ != shape_) throw std::invalid_argument("shape mismatch in inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
  return s;
}

std::string to_string(TensorKind kind) {
  return kind == TensorKind::gaussian ? "gaussian" : "signed";
}

TensorKind parse_tensor_kind(const std::string& text) {
  if (text == "gaussian") return TensorKind::gaussian;
  if (text == "signed") return TensorKind::signed_entries;
  throw std::invalid_argument("unknown tensor kind '" + text + "' (expected gaussian or signed)");
}

namespace {

void require_same_order(const MultiIndex& a, const MultiIndex& b) {
  if (a.order() != b.order())
    throw std::invalid_argument("multi-indices of different order: (" + a.to_string() +
                                ") vs (" + b.to_string() + ")");
}

}  // namespace

std::pair<MultiIndex, MultiIndex> wedge_vee(const MultiIndex& a, const MultiIndex& b) {
  require_same_order(a, b);
  std::vector<int> lo(a.coords()), hi(a.coords());
  for (int i = 0; i < a.order(); ++i) {
    lo[i] = std::min(a[i], b[i]);
    hi[i] = std::max(a[i], b[i]);
  }
  return {MultiIndex(std::move(lo)), MultiIndex(std::move(hi))};
}

std::pair<MultiIndex, MultiIndex> bar_wedge_vee(const MultiIndex& a, const MultiIndex& b,
                                                const Shape& shape) {
  require_same_order(a, b);
  if (a.order() != shape.order()) throw std::invalid_argument("multi-index does not match shape");
  std::vector<int> lo(a.coords()), hi(a.coords());
  for (int i = 0; i < a.order(); ++i) {
    if (a[i] == b[i]) {
      lo[i] = hi[i] = shape.dim(i);
    } else {
      lo[i] = std::min(a[i], b[i]);
      hi[i] = std::max(a[i], b[i]);
    }
  }
  return {MultiIndex(std::move(lo)), MultiIndex(std::move(hi))};
}

bool is_reduced_pair(const MultiIndex& a, const MultiIndex& b, PairVariant variant,
                     const Shape& shape) {
  require_same_order(a, b);
  if (a == b) throw std::invalid_argument("reduced pairs are defined for a != b only");
  auto [lo, hi] = variant == PairVariant::standard ? wedge_vee(a, b) : bar_wedge_vee(a, b, shape);
  return (lo == a && hi == b) || (lo == b && hi == a);
}

Tensor rank1_tensor(std::span<const Eigen::VectorXd> factors) {
  if (factors.empty()) throw std::invalid_argument("rank-1 tensor needs at least one factor");
  std::vector<int> dims;
  for (const auto& f : factors) {
    if (f.size() == 0) throw std::invalid_argument("rank-1 factors must be nonempty");
    dims.push_back(static_cast<int>(f.size()));
  }
  Shape shape(dims);
  std::vector<double> values(shape.size());
  for (std::size_t off = 0; off < values.size(); ++off) {
    MultiIndex a = shape.index(off);
    double v = 1.0;
    for (int i = 0; i < shape.order(); ++i) v *= factors[static_cast<std::size_t>(i)](a[i] - 1);
    values[off] = v;
  }
  return Tensor(shape, std::move(values));
}

Tensor rank1_tensor(std::initializer_list<Eigen::VectorXd> factors) {
  return rank1_tensor(std::span<const Eigen::VectorXd>(factors.begin(), factors.size()));
}

double rank1_residual(const Tensor& x) {
  const Shape& shape = x.shape();
  const std::size_t n = shape.size();
  std::vector<MultiIndex> idx;
  idx.reserve(n);
  for (std::size_t off = 0; off < n; ++off) idx.push_back(shape.index(off));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto [lo, hi] = wedge_vee(idx[i], idx[j]);
      double r = x[i] * x[j] - x.at(lo) * x.at(hi);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

bool is_rank1(const Tensor& x, double tol) {
  double scale = x.max_abs();
  return rank1_residual(x) <= tol * scale * scale;
}

Tensor random_low_rank(const Shape& shape, int rank, TensorKind kind, std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Tensor sum(shape);
  std::vector<Eigen::VectorXd> factors(static_cast<std::size_t>(shape.order()));
  for (int term = 0; term < rank; ++term) {
    for (int i = 0; i < shape.order(); ++i) {
      Eigen::VectorXd f(shape.dim(i));
      for (Eigen::Index j = 0; j < f.size(); ++j)
        f(j) = kind == TensorKind::gaussian ? normal(rng) : (coin(rng) ? 1.0 : -1.0);
      factors[static_cast<std::size_t>(i)] = std::move(f);
    }
    double weight = kind == TensorKind::gaussian ? 1.0 : normal(rng);
    sum += weight * rank1_tensor(factors);
  }
  return sum;
}

Tensor random_gaussian(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(shape.size());
  for (double& v : values) v = normal(rng);
  return Tensor(shape, std::move(values));
}

Eigen::MatrixXd matricize(const Tensor& x, std::span<const int> row_modes) {
  const Shape& shape = x.shape();
  const int d = shape.order();
  std::vector<bool> is_row(static_cast<std::size_t>(d), false);
  for (int m : row_modes) {
    if (m < 0 || m >= d) throw std::invalid_argument("row mode out of range");
    is_row[static_cast<std::size_t>(m)] = true;
  }
  int row_count = static_cast<int>(std::count(is_row.begin(), is_row.end(), true));
  if (row_count == 0 || row_count == d)
    throw std::invalid_argument("row modes must be a nonempty proper subset of the modes");

  Eigen::Index rows = 1, cols = 1;
  for (int i = 0; i < d; ++i) (is_row[static_cast<std::size_t>(i)] ? rows : cols) *= shape.dim(i);
  Eigen::MatrixXd out(rows, cols);
  for (std::size_t off = 0; off < shape.size(); ++off) {
    MultiIndex a = shape.index(off);
    Eigen::Index r = 0, c = 0;
    for (int i = 0; i < d; ++i) {
      if (is_row[static_cast<std::size_t>(i)])
        r = r * shape.dim(i) + (a[i] - 1);
      else
        c = c * shape.dim(i) + (a[i] - 1);
    }
    out(r, c) = x[off];
  }
  return out;
}

Tensor mode_transform(const Tensor& x, const ModeTransform& t) {
  const Shape& shape = x.shape();
  if (static_cast<int>(t.factors.size()) != shape.order())
    throw std::invalid_argument("mode transform needs one matrix per mode");
  std::vector<double> cur(x.values().begin(), x.values().end());
  std::vector<double> next(cur.size());
  std::size_t left = 1;
  for (int i = 0; i < shape.order(); ++i) {
    const auto& q = t.factors[static_cast<std::size_t>(i)];
    const auto n = static_cast<std::size_t>(shape.dim(i));
    if (static_cast<std::size_t>(q.rows()) != n || static_cast<std::size_t>(q.cols()) != n)
      throw std::invalid_argument("mode transform matrix " + std::to_string(i) +
                                  " does not match dimension " + std::to_string(n));
    const std::size_t right = shape.size() / (left * n);
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < right; ++r) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            s += q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                 cur[(l * n + k) * right + r];
          next[(l * n + j) * right + r] = s;
        }
    std::swap(cur, next);
    left *= n;
  }
  return Tensor(shape, std::move(cur));
}

ModeTransform random_orthogonal_transform(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ModeTransform t;
  for (int i = 0; i < shape.order(); ++i) {
    const int n = shape.dim(i);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) g(r, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < n; ++c)
      if (rmat(c, c) < 0) q.col(c) = -q.col(c);
    t.factors.push_back(std::move(q));
  }
  return t;
}

ModeTransform random_signed_permutation(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  ModeTransform t;
  for (int i = 0; i < shape.order(); ++i) {
    const int n = shape.dim(i);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) p(r, perm[static_cast<std::size_t>(r)]) = coin(rng) ? 1.0 : -1.0;
    t.factors.push_back(std::move(p));
  }
  return t;
}

}  // namespace thetanorm
