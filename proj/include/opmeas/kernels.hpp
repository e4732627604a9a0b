#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Hot array kernels behind the measure sweeps and the cascade grids.
//
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant selected at runtime. The two are
// equivalence-tested; results may differ by floating-point reassociation
// only. The environment variable OPMEAS_KERNELS (scalar|avx2|auto)
// overrides the automatic choice before first use.

namespace opmeas::kernels {

using cplx = std::complex<double>;

struct Table {
  // sum of x[0..n)
  double (*sum)(const double* x, std::size_t n);
  // dot product of two real arrays
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += alpha * x over interleaved complex arrays
  void (*zaxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // acc[i] += |x[i]|^2
  void (*zabs2_accum)(const cplx* x, double* acc, std::size_t n);
  // x[i] *= c[i] for a real coefficient array
  void (*zscale_real)(const double* c, cplx* x, std::size_t n);
  const char* name;
};

const Table& scalar_table();
// Null when the build or the running CPU lacks AVX2+FMA.
const Table* avx2_table();

const Table& active();
// Accepts "scalar", "avx2", "auto". Returns false if the backend is
// unavailable (the active table is left unchanged).
bool select(std::string_view name);
std::string_view active_name();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void zaxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  active().zaxpy(alpha, x, y, n);
}
inline void zabs2_accum(const cplx* x, double* acc, std::size_t n) {
  active().zabs2_accum(x, acc, n);
}
inline void zscale_real(const double* c, cplx* x, std::size_t n) {
  active().zscale_real(c, x, n);
}

}  // namespace opmeas::kernels
