// AVX2+FMA variants of the array kernels. This translation unit is compiled
// with -mavx2 -mfma; nothing here may run before the CPU check in
// kernels.cpp has passed.

#include <immintrin.h>

#include "opmeas/kernels.hpp"

namespace opmeas::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    yi = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), yi);
    _mm256_storeu_pd(y + i, yi);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Two interleaved complex doubles per 256-bit register. With
// v = (xr0, xi0, xr1, xi1) and sw = (xi0, xr0, xi1, xr1),
// fmaddsub(ar, v, ai*sw) yields (ar*xr - ai*xi, ar*xi + ai*xr, ...).
void zaxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2, xp += 4, yp += 4) {
    __m256d v = _mm256_loadu_pd(xp);
    __m256d sw = _mm256_permute_pd(v, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, sw));
    _mm256_storeu_pd(yp, _mm256_add_pd(_mm256_loadu_pd(yp), prod));
  }
  if (i < n) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(alpha.real() * xr - alpha.imag() * xi,
                 alpha.real() * xi + alpha.imag() * xr);
  }
}

void zabs2_accum_avx2(const cplx* x, double* acc, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2, xp += 4) {
    __m256d v = _mm256_loadu_pd(xp);
    __m256d sq = _mm256_mul_pd(v, v);
    // (r0+i0, r0+i0, r1+i1, r1+i1) -> pick one lane of each half
    __m256d h = _mm256_hadd_pd(sq, sq);
    __m128d pair = _mm_unpacklo_pd(_mm256_castpd256_pd128(h),
                                   _mm256_extractf128_pd(h, 1));
    _mm_storeu_pd(acc + i, _mm_add_pd(_mm_loadu_pd(acc + i), pair));
  }
  if (i < n) {
    const double xr = x[i].real(), xi = x[i].imag();
    acc[i] += xr * xr + xi * xi;
  }
}

void zscale_real_avx2(const double* c, cplx* x, std::size_t n) {
  double* xp = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2, xp += 4) {
    __m128d cp = _mm_loadu_pd(c + i);
    __m256d cd = _mm256_insertf128_pd(
        _mm256_castpd128_pd256(_mm_unpacklo_pd(cp, cp)),
        _mm_unpackhi_pd(cp, cp), 1);
    _mm256_storeu_pd(xp, _mm256_mul_pd(_mm256_loadu_pd(xp), cd));
  }
  if (i < n) x[i] *= c[i];
}

}  // namespace

extern const Table kAvx2Table;
constexpr Table kAvx2Table{sum_avx2,         dot_avx2,         axpy_avx2,
                           zaxpy_avx2,       zabs2_accum_avx2, zscale_real_avx2,
                           "avx2"};

}  // namespace opmeas::kernels
