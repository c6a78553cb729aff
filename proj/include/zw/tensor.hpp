#pragma once

#include <vector>

#include "zw/error.hpp"

namespace zw {

/** Dense complex tensor, row-major; for diagrams the axes are the outputs
 *  followed by the inputs, each of dimension capacity+1. */
struct Tensor {
  std::vector<int> shape;
  std::vector<cplx> data;

  Tensor() : data{cplx(1.0)} {}
  explicit Tensor(std::vector<int> shape_);
  static Tensor scalar(cplx v);

  std::size_t size() const { return data.size(); }
  std::size_t flat(const std::vector<int>& idx) const;
  cplx at(const std::vector<int>& idx) const { return data[flat(idx)]; }
  cplx& at(const std::vector<int>& idx) { return data[flat(idx)]; }
  /** Advances a multi-index in row-major order; false after the last one. */
  static bool next_index(std::vector<int>& idx, const std::vector<int>& shape);
};

double max_abs(const Tensor& t);
/** Magnitude below which a whole tensor counts as zero: exact cancellations
 *  (e.g. sums of roots of unity) leave rounding noise of this order. */
inline constexpr double kZeroFloor = 1e-12;
/** max|a-b| normalised by the largest magnitude in either tensor; 0 when
 *  both are below kZeroFloor. Shapes must agree (BoundaryMismatch otherwise). */
double rel_deviation(const Tensor& a, const Tensor& b);
bool approx_equal(const Tensor& a, const Tensor& b, double tol = 1e-9);
/** a == lambda * b for a nonzero lambda (or both zero). */
bool proportional(const Tensor& a, const Tensor& b, double tol = 1e-9, cplx* factor = nullptr);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator*(cplx s, const Tensor& t);
Tensor kron(const Tensor& a, const Tensor& b);
/** Applies `second` (m2 outputs, n2 inputs) after `first` (m1, n1), with
 *  m1 == n2: the usual matrix product in outputs-first layout. */
Tensor compose_tensors(const Tensor& first, int m1, const Tensor& second, int m2);
/** Axis permutation: result axis i is old axis perm[i]. */
Tensor permute_axes(const Tensor& t, const std::vector<int>& perm);
/** Conjugate transpose for an m-output tensor. */
Tensor dagger_tensor(const Tensor& t, int m);

/** Basis vector |k> in dimension dim. */
Tensor basis_ket(int k, int dim);

}  // namespace zw
