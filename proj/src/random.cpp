#include "wirt/random.hpp"

#include <cmath>

namespace wirt {

ComplexMatrix random_matrix(int n, Rng& rng, double scale) {
  ComplexMatrix m(n);
  const double s = scale / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.set(i, j, cxd(s * rng.gauss(), s * rng.gauss()));
  return m;
}

ComplexMatrix random_structured(int n, StructureClass s, Rng& rng,
                                double scale) {
  ComplexMatrix g = random_matrix(n, rng, scale);
  ComplexMatrix m(n);
  switch (s) {
    case StructureClass::Unstructured:
      return g;
    case StructureClass::Diagonal:
      for (int i = 0; i < n; ++i) m.set(i, i, g(i, i));
      return m;
    case StructureClass::Symmetric:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m.set(i, j, (g(i, j) + g(j, i)) * 0.5);
      return m;
    case StructureClass::AntiSymmetric:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m.set(i, j, i == j ? cxd(0.0) : (g(i, j) - g(j, i)) * 0.5);
      return m;
    case StructureClass::Hermitian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m.set(i, j, (g(i, j) + std::conj(g(j, i))) * 0.5);
      return m;
    case StructureClass::AntiHermitian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m.set(i, j, (g(i, j) - std::conj(g(j, i))) * 0.5);
      return m;
  }
  return g;
}

ComplexMatrix random_density(int n, Rng& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix p = g * g.adjoint();
  // Exact Hermitian symmetrization; GG^dagger already is up to rounding.
  p = (p + p.adjoint()).scaled(0.5);
  const double tr = p.trace().real();
  return p.scaled(1.0 / tr);
}

ComplexMatrix random_hpd(int n, Rng& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix p = g * g.adjoint();
  p = (p + p.adjoint()).scaled(0.5).scaled(1.0 / n);
  ComplexMatrix shift = ComplexMatrix::identity(n);
  return p + shift.scaled(0.25);
}

std::vector<cxd> random_vector(int n, Rng& rng, double scale) {
  std::vector<cxd> v(n);
  const double s = scale / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) v[i] = cxd(s * rng.gauss(), s * rng.gauss());
  return v;
}

}  // namespace wirt
