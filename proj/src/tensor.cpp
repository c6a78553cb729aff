#include "zw/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zw {

Tensor::Tensor(std::vector<int> shape_) : shape(std::move(shape_)) {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  data.assign(n, cplx(0.0));
}

Tensor Tensor::scalar(cplx v) {
  Tensor t;
  t.data[0] = v;
  return t;
}

std::size_t Tensor::flat(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) f = f * shape[i] + idx[i];
  return f;
}

bool Tensor::next_index(std::vector<int>& idx, const std::vector<int>& shape) {
  for (int i = static_cast<int>(shape.size()) - 1; i >= 0; --i) {
    if (++idx[i] < shape[i]) return true;
    idx[i] = 0;
  }
  return false;
}

double max_abs(const Tensor& t) {
  double m = 0;
  for (const cplx& v : t.data) m = std::max(m, std::abs(v));
  return m;
}

namespace {
void require_same_shape(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) throw ZwError(ErrorKind::BoundaryMismatch, "tensor shapes differ");
}
}  // namespace

double rel_deviation(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  const double scale = std::max(max_abs(a), max_abs(b));
  if (scale < kZeroFloor) return 0.0;
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m / scale;
}

bool approx_equal(const Tensor& a, const Tensor& b, double tol) {
  return a.shape == b.shape && rel_deviation(a, b) <= tol;
}

bool proportional(const Tensor& a, const Tensor& b, double tol, cplx* factor) {
  if (a.shape != b.shape) return false;
  const double na = max_abs(a), nb = max_abs(b);
  if (na < kZeroFloor && nb < kZeroFloor) {
    if (factor) *factor = 1.0;
    return true;
  }
  if (na < kZeroFloor || nb < kZeroFloor || na <= tol * nb || nb <= tol * na) return false;
  // Least-squares lambda with a ~ lambda b.
  cplx num = 0;
  double den = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::conj(b.data[i]) * a.data[i];
    den += std::norm(b.data[i]);
  }
  const cplx lambda = num / den;
  if (factor) *factor = lambda;
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - lambda * b.data[i]));
  return m <= tol * na;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  Tensor r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

Tensor operator*(cplx s, const Tensor& t) {
  Tensor r = t;
  for (cplx& v : r.data) v *= s;
  return r;
}

Tensor kron(const Tensor& a, const Tensor& b) {
  std::vector<int> shape = a.shape;
  shape.insert(shape.end(), b.shape.begin(), b.shape.end());
  Tensor r(shape);
  std::size_t k = 0;
  for (const cplx& x : a.data)
    for (const cplx& y : b.data) r.data[k++] = x * y;
  return r;
}

Tensor compose_tensors(const Tensor& first, int m1, const Tensor& second, int m2) {
  const int n1 = static_cast<int>(first.shape.size()) - m1;
  const int n2 = static_cast<int>(second.shape.size()) - m2;
  if (n2 != m1) throw ZwError(ErrorKind::BoundaryMismatch, "arity mismatch in composition");
  std::size_t rows1 = 1, cols1 = 1, rows2 = 1;
  for (int i = 0; i < m1; ++i) rows1 *= first.shape[i];
  for (int i = m1; i < m1 + n1; ++i) cols1 *= first.shape[i];
  for (int i = 0; i < m2; ++i) rows2 *= second.shape[i];
  for (int i = 0; i < m1; ++i)
    if (first.shape[i] != second.shape[m2 + i])
      throw ZwError(ErrorKind::BoundaryMismatch, "dimension mismatch in composition");
  std::vector<int> shape(second.shape.begin(), second.shape.begin() + m2);
  shape.insert(shape.end(), first.shape.begin() + m1, first.shape.end());
  Tensor r(shape);
  for (std::size_t i = 0; i < rows2; ++i)
    for (std::size_t k = 0; k < rows1; ++k) {
      const cplx s = second.data[i * rows1 + k];
      if (s == cplx(0.0)) continue;
      for (std::size_t j = 0; j < cols1; ++j) r.data[i * cols1 + j] += s * first.data[k * cols1 + j];
    }
  return r;
}

Tensor permute_axes(const Tensor& t, const std::vector<int>& perm) {
  std::vector<int> shape(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shape[i] = t.shape[perm[i]];
  Tensor r(shape);
  if (r.data.empty()) return r;
  std::vector<int> idx(shape.size(), 0), old(shape.size(), 0);
  std::size_t k = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) old[perm[i]] = idx[i];
    r.data[k++] = t.data[t.flat(old)];
  } while (Tensor::next_index(idx, shape));
  return r;
}

Tensor dagger_tensor(const Tensor& t, int m) {
  const int total = static_cast<int>(t.shape.size());
  std::vector<int> perm;
  for (int i = m; i < total; ++i) perm.push_back(i);
  for (int i = 0; i < m; ++i) perm.push_back(i);
  Tensor r = permute_axes(t, perm);
  for (cplx& v : r.data) v = std::conj(v);
  return r;
}

Tensor basis_ket(int k, int dim) {
  Tensor t({dim});
  t.data.at(k) = 1.0;
  return t;
}

}  // namespace zw
