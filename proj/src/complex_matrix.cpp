#include "wirt/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "wirt/kernels.hpp"

namespace wirt {

std::string to_string(StructureClass s) {
  switch (s) {
    case StructureClass::Unstructured: return "unstructured";
    case StructureClass::Diagonal: return "diagonal";
    case StructureClass::Symmetric: return "symmetric";
    case StructureClass::AntiSymmetric: return "antisymmetric";
    case StructureClass::Hermitian: return "hermitian";
    case StructureClass::AntiHermitian: return "antihermitian";
  }
  return "unstructured";
}

StructureClass structure_from_string(const std::string& name) {
  if (name == "unstructured") return StructureClass::Unstructured;
  if (name == "diagonal") return StructureClass::Diagonal;
  if (name == "symmetric") return StructureClass::Symmetric;
  if (name == "antisymmetric") return StructureClass::AntiSymmetric;
  if (name == "hermitian") return StructureClass::Hermitian;
  if (name == "antihermitian") return StructureClass::AntiHermitian;
  throw ShapeError("unknown structure class: " + name);
}

ComplexMatrix::ComplexMatrix(int n) : n_(n) {
  if (n < 1 || n > 256) {
    throw ShapeError("matrix dimension out of range [1, 256]: " +
                     std::to_string(n));
  }
  re_.assign(static_cast<std::size_t>(n) * n, 0.0);
  im_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) m.re_[m.idx(i, i)] = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::scaled_identity(int n, cxd s) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, s);
  return m;
}

void ComplexMatrix::check_same_dim(const ComplexMatrix& o) const {
  if (n_ != o.n_) {
    throw ShapeError("dimension mismatch: " + std::to_string(n_) + " vs " +
                     std::to_string(o.n_));
  }
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
  check_same_dim(o);
  ComplexMatrix c(n_);
  kernels::active().add(re_.data(), im_.data(), o.re_.data(), o.im_.data(),
                        c.re_.data(), c.im_.data(), size());
  return c;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
  check_same_dim(o);
  ComplexMatrix c(n_);
  kernels::active().sub(re_.data(), im_.data(), o.re_.data(), o.im_.data(),
                        c.re_.data(), c.im_.data(), size());
  return c;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  check_same_dim(o);
  ComplexMatrix c(n_);
  kernels::active().matmul(re_.data(), im_.data(), o.re_.data(), o.im_.data(),
                           c.re_.data(), c.im_.data(),
                           static_cast<std::size_t>(n_));
  return c;
}

ComplexMatrix ComplexMatrix::scaled(cxd s) const {
  ComplexMatrix c(n_);
  kernels::active().scale(re_.data(), im_.data(), s.real(), s.imag(),
                          c.re_.data(), c.im_.data(), size());
  return c;
}

ComplexMatrix ComplexMatrix::hadamard(const ComplexMatrix& o) const {
  check_same_dim(o);
  ComplexMatrix c(n_);
  kernels::active().hadamard(re_.data(), im_.data(), o.re_.data(),
                             o.im_.data(), c.re_.data(), c.im_.data(), size());
  return c;
}

void ComplexMatrix::accumulate(cxd s, const ComplexMatrix& o) {
  check_same_dim(o);
  kernels::active().axpy(s.real(), s.imag(), o.re_.data(), o.im_.data(),
                         re_.data(), im_.data(), size());
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix c(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) c.set(j, i, (*this)(i, j));
  return c;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix c(n_);
  c.re_ = re_;
  for (std::size_t k = 0; k < im_.size(); ++k) c.im_[k] = -im_[k];
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix c(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) c.set(j, i, std::conj((*this)(i, j)));
  return c;
}

ComplexMatrix ComplexMatrix::pow(int k) const {
  if (k < 0) throw ShapeError("pow expects a non-negative exponent");
  ComplexMatrix acc = identity(n_);
  for (int r = 0; r < k; ++r) acc = acc * *this;
  return acc;
}

cxd ComplexMatrix::trace() const {
  cxd t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frob_norm_sq() const {
  return kernels::active().norm2(re_.data(), im_.data(), size());
}

double ComplexMatrix::frob_norm() const { return std::sqrt(frob_norm_sq()); }

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (std::size_t k = 0; k < re_.size(); ++k)
    m = std::max(m, std::hypot(re_[k], im_[k]));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (std::size_t k = 0; k < re_.size(); ++k)
    if (!std::isfinite(re_[k]) || !std::isfinite(im_[k])) return false;
  return true;
}

double ComplexMatrix::hermiticity_defect() const {
  double d = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  return hermiticity_defect() <= tol * std::max(1.0, max_abs());
}

double ComplexMatrix::structure_defect(StructureClass s) const {
  double d = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const cxd v = (*this)(i, j);
      const cxd w = (*this)(j, i);
      switch (s) {
        case StructureClass::Unstructured:
          break;
        case StructureClass::Diagonal:
          if (i != j) d = std::max(d, std::abs(v));
          break;
        case StructureClass::Symmetric:
          d = std::max(d, std::abs(v - w));
          break;
        case StructureClass::AntiSymmetric:
          d = std::max(d, std::abs(v + w));
          break;
        case StructureClass::Hermitian:
          d = std::max(d, std::abs(v - std::conj(w)));
          break;
        case StructureClass::AntiHermitian:
          d = std::max(d, std::abs(v + std::conj(w)));
          break;
      }
    }
  }
  return d;
}

bool ComplexMatrix::equals(const ComplexMatrix& o, double tol) const {
  if (n_ != o.n_) return false;
  return max_abs_diff(*this, o) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("dimension mismatch in max_abs_diff");
  }
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

ComplexMatrix structure_project(const ComplexMatrix& m, StructureClass s) {
  const int n = m.dim();
  ComplexMatrix out(n);
  switch (s) {
    case StructureClass::Unstructured:
      return m;
    case StructureClass::Diagonal:
      for (int i = 0; i < n; ++i) out.set(i, i, m(i, i));
      return out;
    case StructureClass::Symmetric:
      for (int i = 0; i < n; ++i) {
        out.set(i, i, m(i, i));
        for (int j = i + 1; j < n; ++j) {
          const cxd v = 0.5 * (m(i, j) + m(j, i));
          out.set(i, j, v);
          out.set(j, i, v);
        }
      }
      return out;
    case StructureClass::AntiSymmetric:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const cxd v = 0.5 * (m(i, j) - m(j, i));
          out.set(i, j, v);
          out.set(j, i, -v);
        }
      return out;
    case StructureClass::Hermitian:
      for (int i = 0; i < n; ++i) {
        out.set(i, i, cxd(m(i, i).real(), 0.0));
        for (int j = i + 1; j < n; ++j) {
          const cxd v = 0.5 * (m(i, j) + std::conj(m(j, i)));
          out.set(i, j, v);
          out.set(j, i, std::conj(v));
        }
      }
      return out;
    case StructureClass::AntiHermitian:
      for (int i = 0; i < n; ++i) {
        out.set(i, i, cxd(0.0, m(i, i).imag()));
        for (int j = i + 1; j < n; ++j) {
          const cxd v = 0.5 * (m(i, j) - std::conj(m(j, i)));
          out.set(i, j, v);
          out.set(j, i, -std::conj(v));
        }
      }
      return out;
  }
  throw ShapeError("unknown structure class");
}

}  // namespace wirt
