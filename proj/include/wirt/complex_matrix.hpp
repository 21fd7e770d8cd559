#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wirt {

using cxd = std::complex<double>;

// Structure classes a declared matrix variable may carry. The class fixes
// which real coordinates of the matrix are independent.
enum class StructureClass {
  Unstructured,
  Diagonal,
  Symmetric,
  AntiSymmetric,
  Hermitian,
  AntiHermitian,
};

std::string to_string(StructureClass s);
StructureClass structure_from_string(const std::string& name);

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense square complex matrix, row-major, with separate re/im planes so the
// arithmetic kernels can run vectorized over contiguous doubles. Values are
// immutable in spirit: arithmetic returns new matrices.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int n);
  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int n) { return ComplexMatrix(n); }
  static ComplexMatrix scaled_identity(int n, cxd s);

  int dim() const { return n_; }
  std::size_t size() const { return re_.size(); }

  cxd operator()(int i, int j) const {
    return {re_[idx(i, j)], im_[idx(i, j)]};
  }
  void set(int i, int j, cxd v) {
    re_[idx(i, j)] = v.real();
    im_[idx(i, j)] = v.imag();
  }
  void add_at(int i, int j, cxd v) {
    re_[idx(i, j)] += v.real();
    im_[idx(i, j)] += v.imag();
  }

  double* re_data() { return re_.data(); }
  double* im_data() { return im_.data(); }
  const double* re_data() const { return re_.data(); }
  const double* im_data() const { return im_.data(); }

  ComplexMatrix operator+(const ComplexMatrix& o) const;
  ComplexMatrix operator-(const ComplexMatrix& o) const;
  ComplexMatrix operator*(const ComplexMatrix& o) const;
  ComplexMatrix scaled(cxd s) const;
  ComplexMatrix hadamard(const ComplexMatrix& o) const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  ComplexMatrix adjoint() const;
  ComplexMatrix pow(int k) const;  // k >= 0

  void accumulate(cxd s, const ComplexMatrix& o);  // *this += s * o

  cxd trace() const;
  double frob_norm_sq() const;
  double frob_norm() const;
  double max_abs() const;
  bool all_finite() const;

  // Max |A - A^dagger| entry; 0 for exactly Hermitian.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-10) const;

  // Largest absolute deviation from the named structure class.
  double structure_defect(StructureClass s) const;

  bool equals(const ComplexMatrix& o, double tol) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  void check_same_dim(const ComplexMatrix& o) const;

  int n_;
  std::vector<double> re_, im_;
};

// || a - b ||_max over entries.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Nearest matrix in the structure class (Frobenius projection), built
// entrywise so the result's structure_defect is exactly zero.
ComplexMatrix structure_project(const ComplexMatrix& m, StructureClass s);

}  // namespace wirt
