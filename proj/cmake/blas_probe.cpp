// Configure-time probe: exits 0 when the BLAS/LAPACK kernels selected for
// this CPU produce correct products and eigendecompositions.
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

int main() {
  const int n = 320;
  std::vector<double> a(n * n), b(n * n), c(n * n, 0.0);
  unsigned s = 12345;
  auto next = [&] {
    s = s * 1103515245u + 12345u;
    return static_cast<double>((s >> 8) & 0xffff) / 65536.0 - 0.5;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) a[i + j * n] = a[j + i * n] = next();
  for (auto& x : b) x = next();
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, a.data(), n, b.data(), n, 0.0, c.data(), n);
  double worst = 0.0;
  for (int j = 0; j < n; j += 7)
    for (int i = 0; i < n; i += 5) {
      double r = 0.0;
      for (int k = 0; k < n; ++k) r += a[i + k * n] * b[k + j * n];
      worst = std::fmax(worst, std::fabs(r - c[i + j * n]));
    }
  std::vector<double> v = a, w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, w.data()) != 0) return 1;
  for (int j = 0; j < n; j += 11)
    for (int i = 0; i < n; ++i) {
      double r = -w[j] * v[i + j * n];
      for (int k = 0; k < n; ++k) r += a[i + k * n] * v[k + j * n];
      worst = std::fmax(worst, std::fabs(r));
    }
  std::printf("%g\n", worst);
  return worst < 1e-9 ? 0 : 1;
}
