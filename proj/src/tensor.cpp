#include "pnpmri/tensor.hpp"

#include <cmath>
#include <sstream>

namespace pnpmri {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << "]";
  return os.str();
}

ComplexTensor::ComplexTensor(Shape s, std::vector<cplx> d) : shape(std::move(s)), data(std::move(d)) {
  if (data.size() != shape_numel(shape))
    throw ShapeError("tensor: data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_str(shape));
}

void require_same_shape(const ComplexTensor& a, const ComplexTensor& b, const char* where) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(where) + ": shape mismatch " + shape_str(a.shape) + " vs " +
                     shape_str(b.shape));
}

bool all_finite(const ComplexTensor& t) {
  for (const cplx& v : t.data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void require_finite(const ComplexTensor& t, const char* where) {
  if (!all_finite(t)) throw NumericError(std::string(where) + ": non-finite tensor entries");
}

cplx dot(const ComplexTensor& a, const ComplexTensor& b) {
  require_same_shape(a, b, "dot");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.data[i]) * b.data[i];
  return acc;
}

double norm2(const ComplexTensor& a) {
  double acc = 0.0;
  for (const cplx& v : a.data) acc += std::norm(v);
  return acc;
}

double norm(const ComplexTensor& a) { return std::sqrt(norm2(a)); }

void axpy(cplx alpha, const ComplexTensor& x, ComplexTensor& y) {
  require_same_shape(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y.data[i] += alpha * x.data[i];
}

void scale(ComplexTensor& x, cplx alpha) {
  for (cplx& v : x.data) v *= alpha;
}

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b) {
  require_same_shape(a, b, "operator+");
  ComplexTensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.data[i] += b.data[i];
  return r;
}

ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b) {
  require_same_shape(a, b, "operator-");
  ComplexTensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.data[i] -= b.data[i];
  return r;
}

ComplexTensor operator*(cplx alpha, const ComplexTensor& a) {
  ComplexTensor r = a;
  scale(r, alpha);
  return r;
}

ComplexTensor operator*(double alpha, const ComplexTensor& a) { return cplx(alpha, 0.0) * a; }

ComplexTensor& operator+=(ComplexTensor& a, const ComplexTensor& b) {
  axpy(1.0, b, a);
  return a;
}

ComplexTensor& operator-=(ComplexTensor& a, const ComplexTensor& b) {
  axpy(-1.0, b, a);
  return a;
}

ComplexTensor lincomb(cplx a, const ComplexTensor& x, cplx b, const ComplexTensor& y) {
  require_same_shape(x, y, "lincomb");
  ComplexTensor r(x.shape);
  for (std::size_t i = 0; i < r.size(); ++i) r.data[i] = a * x.data[i] + b * y.data[i];
  return r;
}

std::vector<double> to_real_pairs(const ComplexTensor& t) {
  std::vector<double> v(2 * t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = t.data[i].real();
    v[t.size() + i] = t.data[i].imag();
  }
  return v;
}

ComplexTensor from_real_pairs(const std::vector<double>& v, const Shape& shape) {
  const std::size_t n = shape_numel(shape);
  if (v.size() != 2 * n) throw ShapeError("from_real_pairs: length mismatch");
  ComplexTensor t(shape);
  for (std::size_t i = 0; i < n; ++i) t.data[i] = cplx(v[i], v[n + i]);
  return t;
}

}  // namespace pnpmri
