#include "wirt/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace wirt::kernels {

#if defined(WIRT_HAVE_AVX2)
const Backend& avx2_backend();  // defined in kernels_avx2.cpp
#endif

namespace {

void add_scalar(const double* ar, const double* ai, const double* br,
                const double* bi, double* cr, double* ci, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    cr[k] = ar[k] + br[k];
    ci[k] = ai[k] + bi[k];
  }
}

void sub_scalar(const double* ar, const double* ai, const double* br,
                const double* bi, double* cr, double* ci, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    cr[k] = ar[k] - br[k];
    ci[k] = ai[k] - bi[k];
  }
}

void scale_scalar(const double* ar, const double* ai, double sr, double si,
                  double* cr, double* ci, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    cr[k] = sr * ar[k] - si * ai[k];
    ci[k] = sr * ai[k] + si * ar[k];
  }
}

void hadamard_scalar(const double* ar, const double* ai, const double* br,
                     const double* bi, double* cr, double* ci,
                     std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    cr[k] = ar[k] * br[k] - ai[k] * bi[k];
    ci[k] = ar[k] * bi[k] + ai[k] * br[k];
  }
}

void axpy_scalar(double sr, double si, const double* ar, const double* ai,
                 double* cr, double* ci, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    cr[k] += sr * ar[k] - si * ai[k];
    ci[k] += sr * ai[k] + si * ar[k];
  }
}

// ikj order: the inner loop runs over contiguous rows of B and C, with the
// A(i,k) factor broadcast, so it vectorizes the same way in every backend.
void matmul_scalar(const double* ar, const double* ai, const double* br,
                   const double* bi, double* cr, double* ci, std::size_t n) {
  std::memset(cr, 0, n * n * sizeof(double));
  std::memset(ci, 0, n * n * sizeof(double));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double re = ar[i * n + k];
      const double im = ai[i * n + k];
      const double* brow = br + k * n;
      const double* birow = bi + k * n;
      double* crow = cr + i * n;
      double* cirow = ci + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        crow[j] += re * brow[j] - im * birow[j];
        cirow[j] += re * birow[j] + im * brow[j];
      }
    }
  }
}

double norm2_scalar(const double* ar, const double* ai, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += ar[k] * ar[k] + ai[k] * ai[k];
  return acc;
}

constexpr Backend kScalar = {
    "scalar",     add_scalar,  sub_scalar,    scale_scalar,
    hadamard_scalar, axpy_scalar, matmul_scalar, norm2_scalar,
};

const Backend* g_active = nullptr;

const Backend* pick_default() {
#if defined(WIRT_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_backend();
#endif
  return &kScalar;
}

const Backend* startup_select() {
  const Backend* chosen = pick_default();
  if (const char* forced = std::getenv("WIRT_KERNELS")) {
    for (const std::string& name : available()) {
      if (name == forced) {
        if (name == "scalar") chosen = &kScalar;
#if defined(WIRT_HAVE_AVX2)
        if (name == "avx2") chosen = &avx2_backend();
#endif
      }
    }
  }
  return chosen;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active() {
  if (g_active == nullptr) g_active = startup_select();
  return *g_active;
}

std::vector<std::string> available() {
  std::vector<std::string> names = {"scalar"};
#if defined(WIRT_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    names.push_back("avx2");
#endif
  return names;
}

bool select(const std::string& name) {
  if (name == "scalar") {
    g_active = &kScalar;
    return true;
  }
#if defined(WIRT_HAVE_AVX2)
  if (name == "avx2" && __builtin_cpu_supports("avx2") &&
      __builtin_cpu_supports("fma")) {
    g_active = &avx2_backend();
    return true;
  }
#endif
  return false;
}

}  // namespace wirt::kernels
