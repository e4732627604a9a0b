#include "opmeas/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace opmeas::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void zaxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void zabs2_accum_scalar(const cplx* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    acc[i] += xr * xr + xi * xi;
  }
}

void zscale_real_scalar(const double* c, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= c[i];
}

constexpr Table kScalar{sum_scalar,        dot_scalar,         axpy_scalar,
                        zaxpy_scalar,      zabs2_accum_scalar, zscale_real_scalar,
                        "scalar"};

const Table* pick_default() {
  const char* env = std::getenv("OPMEAS_KERNELS");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && avx2_table() != nullptr) return avx2_table();
    // "auto" or anything unrecognized falls through
  }
  if (const Table* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const Table*>& active_slot() {
  static std::atomic<const Table*> slot{pick_default()};
  return slot;
}

}  // namespace

const Table& scalar_table() { return kScalar; }

#if defined(OPMEAS_HAVE_AVX2_TU)
// Defined in kernels_avx2.cpp; constant-initialized, so touching it never
// executes code from that translation unit. The function pointers inside
// are only dereferenced after the CPU check below.
extern const Table kAvx2Table;

const Table* avx2_table() {
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2Table : nullptr;
}
#else
const Table* avx2_table() { return nullptr; }
#endif

const Table& active() { return *active_slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "scalar") {
    active_slot().store(&kScalar, std::memory_order_relaxed);
    return true;
  }
  if (name == "avx2") {
    if (const Table* t = avx2_table()) {
      active_slot().store(t, std::memory_order_relaxed);
      return true;
    }
    return false;
  }
  if (name == "auto") {
    active_slot().store(avx2_table() != nullptr ? avx2_table() : &kScalar,
                        std::memory_order_relaxed);
    return true;
  }
  return false;
}

std::string_view active_name() { return active().name; }

}  // namespace opmeas::kernels
