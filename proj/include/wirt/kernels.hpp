#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wirt::kernels {

// Dense complex arrays are stored split (separate re/im planes); every kernel
// takes raw planes plus a length or square dimension. Output planes must not
// alias the inputs. A Backend is one coherent implementation of the whole set;
// the active backend is chosen at process start from CPU features and can be
// overridden (tests exercise every compiled backend and cross-check them).
struct Backend {
  const char* name;

  // c = a + b, elementwise over len entries.
  void (*add)(const double* ar, const double* ai, const double* br,
              const double* bi, double* cr, double* ci, std::size_t len);
  // c = a - b.
  void (*sub)(const double* ar, const double* ai, const double* br,
              const double* bi, double* cr, double* ci, std::size_t len);
  // c = (sr + i*si) * a.
  void (*scale)(const double* ar, const double* ai, double sr, double si,
                double* cr, double* ci, std::size_t len);
  // c = a .* b (elementwise complex product).
  void (*hadamard)(const double* ar, const double* ai, const double* br,
                   const double* bi, double* cr, double* ci, std::size_t len);
  // c += (sr + i*si) * a.
  void (*axpy)(double sr, double si, const double* ar, const double* ai,
               double* cr, double* ci, std::size_t len);
  // C = A * B for square row-major n x n matrices. C must be distinct storage.
  void (*matmul)(const double* ar, const double* ai, const double* br,
                 const double* bi, double* cr, double* ci, std::size_t n);
  // sum |a_k|^2.
  double (*norm2)(const double* ar, const double* ai, std::size_t len);
};

// Currently selected backend.
const Backend& active();

// Backends compiled into this binary ("scalar" always; "avx2" when built on
// x86-64 and the CPU supports AVX2+FMA).
std::vector<std::string> available();

// Force a backend by name; returns false (leaving selection unchanged) if the
// name is unknown or unsupported on this CPU. The WIRT_KERNELS environment
// variable applies the same override at startup.
bool select(const std::string& name);

// Always-present reference implementation.
const Backend& scalar_backend();

}  // namespace wirt::kernels
