// AVX2+FMA backend. This TU is compiled with -mavx2 -mfma and must only be
// reached through runtime dispatch after a cpuid check.

#include <immintrin.h>

#include <cstddef>
#include <cstring>

#include "wirt/kernels.hpp"

namespace wirt::kernels {
namespace {

void add_avx2(const double* ar, const double* ai, const double* br,
              const double* bi, double* cr, double* ci, std::size_t len) {
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    _mm256_storeu_pd(cr + k, _mm256_add_pd(_mm256_loadu_pd(ar + k),
                                           _mm256_loadu_pd(br + k)));
    _mm256_storeu_pd(ci + k, _mm256_add_pd(_mm256_loadu_pd(ai + k),
                                           _mm256_loadu_pd(bi + k)));
  }
  for (; k < len; ++k) {
    cr[k] = ar[k] + br[k];
    ci[k] = ai[k] + bi[k];
  }
}

void sub_avx2(const double* ar, const double* ai, const double* br,
              const double* bi, double* cr, double* ci, std::size_t len) {
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    _mm256_storeu_pd(cr + k, _mm256_sub_pd(_mm256_loadu_pd(ar + k),
                                           _mm256_loadu_pd(br + k)));
    _mm256_storeu_pd(ci + k, _mm256_sub_pd(_mm256_loadu_pd(ai + k),
                                           _mm256_loadu_pd(bi + k)));
  }
  for (; k < len; ++k) {
    cr[k] = ar[k] - br[k];
    ci[k] = ai[k] - bi[k];
  }
}

void scale_avx2(const double* ar, const double* ai, double sr, double si,
                double* cr, double* ci, std::size_t len) {
  const __m256d vsr = _mm256_set1_pd(sr);
  const __m256d vsi = _mm256_set1_pd(si);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    _mm256_storeu_pd(cr + k, _mm256_fmsub_pd(vsr, xr, _mm256_mul_pd(vsi, xi)));
    _mm256_storeu_pd(ci + k, _mm256_fmadd_pd(vsr, xi, _mm256_mul_pd(vsi, xr)));
  }
  for (; k < len; ++k) {
    cr[k] = sr * ar[k] - si * ai[k];
    ci[k] = sr * ai[k] + si * ar[k];
  }
}

void hadamard_avx2(const double* ar, const double* ai, const double* br,
                   const double* bi, double* cr, double* ci, std::size_t len) {
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k);
    const __m256d yi = _mm256_loadu_pd(bi + k);
    _mm256_storeu_pd(cr + k, _mm256_fmsub_pd(xr, yr, _mm256_mul_pd(xi, yi)));
    _mm256_storeu_pd(ci + k, _mm256_fmadd_pd(xr, yi, _mm256_mul_pd(xi, yr)));
  }
  for (; k < len; ++k) {
    cr[k] = ar[k] * br[k] - ai[k] * bi[k];
    ci[k] = ar[k] * bi[k] + ai[k] * br[k];
  }
}

void axpy_avx2(double sr, double si, const double* ar, const double* ai,
               double* cr, double* ci, std::size_t len) {
  const __m256d vsr = _mm256_set1_pd(sr);
  const __m256d vsi = _mm256_set1_pd(si);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    __m256d accr = _mm256_loadu_pd(cr + k);
    __m256d acci = _mm256_loadu_pd(ci + k);
    accr = _mm256_fmadd_pd(vsr, xr, accr);
    accr = _mm256_fnmadd_pd(vsi, xi, accr);
    acci = _mm256_fmadd_pd(vsr, xi, acci);
    acci = _mm256_fmadd_pd(vsi, xr, acci);
    _mm256_storeu_pd(cr + k, accr);
    _mm256_storeu_pd(ci + k, acci);
  }
  for (; k < len; ++k) {
    cr[k] += sr * ar[k] - si * ai[k];
    ci[k] += sr * ai[k] + si * ar[k];
  }
}

void matmul_avx2(const double* ar, const double* ai, const double* br,
                 const double* bi, double* cr, double* ci, std::size_t n) {
  std::memset(cr, 0, n * n * sizeof(double));
  std::memset(ci, 0, n * n * sizeof(double));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double re = ar[i * n + k];
      const double im = ai[i * n + k];
      const __m256d vre = _mm256_set1_pd(re);
      const __m256d vim = _mm256_set1_pd(im);
      const double* brow = br + k * n;
      const double* birow = bi + k * n;
      double* crow = cr + i * n;
      double* cirow = ci + i * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const __m256d yr = _mm256_loadu_pd(brow + j);
        const __m256d yi = _mm256_loadu_pd(birow + j);
        __m256d accr = _mm256_loadu_pd(crow + j);
        __m256d acci = _mm256_loadu_pd(cirow + j);
        accr = _mm256_fmadd_pd(vre, yr, accr);
        accr = _mm256_fnmadd_pd(vim, yi, accr);
        acci = _mm256_fmadd_pd(vre, yi, acci);
        acci = _mm256_fmadd_pd(vim, yr, acci);
        _mm256_storeu_pd(crow + j, accr);
        _mm256_storeu_pd(cirow + j, acci);
      }
      for (; j < n; ++j) {
        crow[j] += re * brow[j] - im * birow[j];
        cirow[j] += re * birow[j] + im * brow[j];
      }
    }
  }
}

double norm2_avx2(const double* ar, const double* ai, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    acc = _mm256_fmadd_pd(xr, xr, acc);
    acc = _mm256_fmadd_pd(xi, xi, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; k < len; ++k) total += ar[k] * ar[k] + ai[k] * ai[k];
  return total;
}

constexpr Backend kAvx2 = {
    "avx2",        add_avx2,  sub_avx2,    scale_avx2,
    hadamard_avx2, axpy_avx2, matmul_avx2, norm2_avx2,
};

}  // namespace

const Backend& avx2_backend() { return kAvx2; }

}  // namespace wirt::kernels
