#include "gridbench/metrics/simd.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define GRIDBENCH_HAVE_AVX2_KERNEL 1
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#define GRIDBENCH_HAVE_NEON_KERNEL 1
#endif

namespace gridbench::metrics::simd {
namespace {

Sums scalar_sums(const double* u, const double* v, std::size_t n) {
  Sums s;
  for (std::size_t i = 0; i < n; ++i) {
    s.uv += u[i] * v[i];
    s.uu += u[i] * u[i];
    s.vv += v[i] * v[i];
  }
  return s;
}

#ifdef GRIDBENCH_HAVE_AVX2_KERNEL
__attribute__((target("avx2"))) double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

__attribute__((target("avx2"))) Sums avx2_sums(const double* u, const double* v, std::size_t n) {
  __m256d uv = _mm256_setzero_pd(), uu = _mm256_setzero_pd(), vv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(u + i);
    const __m256d b = _mm256_loadu_pd(v + i);
    uv = _mm256_add_pd(uv, _mm256_mul_pd(a, b));
    uu = _mm256_add_pd(uu, _mm256_mul_pd(a, a));
    vv = _mm256_add_pd(vv, _mm256_mul_pd(b, b));
  }
  Sums s{hsum(uv), hsum(uu), hsum(vv)};
  for (; i < n; ++i) {
    s.uv += u[i] * v[i];
    s.uu += u[i] * u[i];
    s.vv += v[i] * v[i];
  }
  return s;
}
#endif

#ifdef GRIDBENCH_HAVE_NEON_KERNEL
Sums neon_sums(const double* u, const double* v, std::size_t n) {
  float64x2_t uv = vdupq_n_f64(0), uu = vdupq_n_f64(0), vv = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(u + i);
    const float64x2_t b = vld1q_f64(v + i);
    uv = vaddq_f64(uv, vmulq_f64(a, b));
    uu = vaddq_f64(uu, vmulq_f64(a, a));
    vv = vaddq_f64(vv, vmulq_f64(b, b));
  }
  Sums s{vaddvq_f64(uv), vaddvq_f64(uu), vaddvq_f64(vv)};
  for (; i < n; ++i) {
    s.uv += u[i] * v[i];
    s.uu += u[i] * u[i];
    s.vv += v[i] * v[i];
  }
  return s;
}
#endif

}  // namespace

Kernel scalar_kernel() { return {"scalar", &scalar_sums}; }

std::vector<Kernel> available_kernels() {
  std::vector<Kernel> out{scalar_kernel()};
#ifdef GRIDBENCH_HAVE_AVX2_KERNEL
  if (__builtin_cpu_supports("avx2")) out.push_back({"avx2", &avx2_sums});
#endif
#ifdef GRIDBENCH_HAVE_NEON_KERNEL
  out.push_back({"neon", &neon_sums});
#endif
  return out;
}

const Kernel& active_kernel() {
  static const Kernel chosen = [] {
    const char* force = std::getenv("GRIDBENCH_SIMD");
    auto all = available_kernels();
    if (force && std::strcmp(force, "scalar") == 0) return all.front();
    return all.back();
  }();
  return chosen;
}

}  // namespace gridbench::metrics::simd
