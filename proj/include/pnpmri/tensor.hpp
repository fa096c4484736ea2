#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "pnpmri/errors.hpp"

namespace pnpmri {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Dense row-major complex tensor. The last axis has stride 1. Carrier for
/// images [nx,ny,nt], k-space stacks [C,M,nt], coefficient frames, vectors.
/// Values are treated as immutable once constructed and are safe to share
/// read-only across threads.
struct ComplexTensor {
  Shape shape;
  std::vector<cplx> data;

  ComplexTensor() = default;
  explicit ComplexTensor(Shape s) : shape(std::move(s)), data(shape_numel(shape)) {}
  ComplexTensor(Shape s, std::vector<cplx> d);

  static ComplexTensor zeros(Shape s) { return ComplexTensor(std::move(s)); }

  std::size_t size() const { return data.size(); }
  std::size_t ndim() const { return shape.size(); }
  std::size_t dim(std::size_t axis) const { return shape.at(axis); }

  cplx& operator[](std::size_t i) { return data[i]; }
  const cplx& operator[](std::size_t i) const { return data[i]; }

  bool same_shape(const ComplexTensor& other) const { return shape == other.shape; }
};

void require_same_shape(const ComplexTensor& a, const ComplexTensor& b, const char* where);

bool all_finite(const ComplexTensor& t);
void require_finite(const ComplexTensor& t, const char* where);

// Euclidean inner product, conjugate-linear in the first argument.
cplx dot(const ComplexTensor& a, const ComplexTensor& b);
double norm2(const ComplexTensor& a);  // squared norm
double norm(const ComplexTensor& a);

// y += alpha * x
void axpy(cplx alpha, const ComplexTensor& x, ComplexTensor& y);
void scale(ComplexTensor& x, cplx alpha);

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator*(cplx alpha, const ComplexTensor& a);
ComplexTensor operator*(double alpha, const ComplexTensor& a);
ComplexTensor& operator+=(ComplexTensor& a, const ComplexTensor& b);
ComplexTensor& operator-=(ComplexTensor& a, const ComplexTensor& b);

/// a*x + b*y, elementwise.
ComplexTensor lincomb(cplx a, const ComplexTensor& x, cplx b, const ComplexTensor& y);

// Real-isomorphic view: [re(z_0..z_{N-1}), im(z_0..z_{N-1})].
std::vector<double> to_real_pairs(const ComplexTensor& t);
ComplexTensor from_real_pairs(const std::vector<double>& v, const Shape& shape);

}  // namespace pnpmri
