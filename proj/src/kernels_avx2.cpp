#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>

// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma; the
// dispatcher in kernels.cpp only routes here after a runtime CPU check.

namespace nashlab::kernels::avx2 {

namespace {

// Cephes-style expm reduction: exp(x) = 2^n * expr(r), r = x - n ln2,
// expr via a 6/6 rational approximation accurate to ~1 ulp on |r| <= ln2/2.
constexpr double kLog2E = 1.4426950408889634073599;
constexpr double kC1 = 6.93145751953125e-1;
constexpr double kC2 = 1.42860682030941723212e-6;
constexpr double kP0 = 1.26177193074810590878e-4;
constexpr double kP1 = 3.02994407707441961300e-2;
constexpr double kP2 = 9.99999999999999999910e-1;
constexpr double kQ0 = 3.00198505138664455042e-6;
constexpr double kQ1 = 2.52448340349684104192e-3;
constexpr double kQ2 = 2.27265548208155028766e-1;
constexpr double kQ3 = 2.00000000000000000005e0;
constexpr double kLo = -708.0;
constexpr double kHi = 709.0;

inline double exp_one(double x) {
  x = x < kLo ? kLo : (x > kHi ? kHi : x);
  double n = std::nearbyint(kLog2E * x);
  x = std::fma(-n, kC1, x);
  x = std::fma(-n, kC2, x);
  double xx = x * x;
  double px = x * std::fma(std::fma(kP0, xx, kP1), xx, kP2);
  double qx = std::fma(std::fma(std::fma(kQ0, xx, kQ1), xx, kQ2), xx, kQ3);
  double e = 1.0 + 2.0 * px / (qx - px);
  int64_t bits = (static_cast<int64_t>(n) + 1023) << 52;
  double scale;
  std::memcpy(&scale, &bits, sizeof(scale));
  return e * scale;
}

inline __m256d exp4(__m256d x) {
  const __m256d lo = _mm256_set1_pd(kLo), hi = _mm256_set1_pd(kHi);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(kC1), x);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(kC2), x);
  __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(kP0), xx, _mm256_set1_pd(kP1));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(kP2));
  __m256d px = _mm256_mul_pd(x, p);
  __m256d q = _mm256_fmadd_pd(_mm256_set1_pd(kQ0), xx, _mm256_set1_pd(kQ1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(kQ2));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(kQ3));
  __m256d e = _mm256_add_pd(
      _mm256_set1_pd(1.0),
      _mm256_div_pd(_mm256_add_pd(px, px), _mm256_sub_pd(q, px)));
  // 2^n via exponent bits
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

inline double hmax(__m256d v) {
  __m128d a = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  a = _mm_max_sd(a, _mm_unpackhi_pd(a, a));
  return _mm_cvtsd_f64(a);
}

inline double hsum(__m256d v) {
  __m128d a = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  a = _mm_add_sd(a, _mm_unpackhi_pd(a, a));
  return _mm_cvtsd_f64(a);
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

void blend(std::span<double> y, std::span<const double> w, double lambda) {
  const size_t n = y.size();
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vk = _mm256_set1_pd(1.0 - lambda);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(&y[i]);
    __m256d vw = _mm256_loadu_pd(&w[i]);
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(vl, vw, _mm256_mul_pd(vk, vy)));
  }
  const double keep = 1.0 - lambda;
  for (; i < n; ++i) y[i] = std::fma(lambda, w[i], keep * y[i]);
}

void axpy(std::span<double> y, std::span<const double> x, double a) {
  const size_t n = y.size();
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(&y[i]);
    __m256d vx = _mm256_loadu_pd(&x[i]);
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, vx, vy));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void vexp(std::span<double> x) {
  const size_t n = x.size();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(&x[i], exp4(_mm256_loadu_pd(&x[i])));
  for (; i < n; ++i) x[i] = exp_one(x[i]);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  __m256d m = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
    m = _mm256_max_pd(m, _mm256_and_pd(d, kAbsMask));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

double max_abs(std::span<const double> a) {
  const size_t n = a.size();
  __m256d m = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    m = _mm256_max_pd(m, _mm256_and_pd(_mm256_loadu_pd(&a[i]), kAbsMask));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

double sum(std::span<const double> a) {
  const size_t n = a.size();
  __m256d s = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) s = _mm256_add_pd(s, _mm256_loadu_pd(&a[i]));
  double r = hsum(s);
  for (; i < n; ++i) r += a[i];
  return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  __m256d s = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    s = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), s);
  double r = hsum(s);
  for (; i < n; ++i) r = std::fma(a[i], b[i], r);
  return r;
}

void scale(std::span<double> x, double a) {
  const size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(&x[i], _mm256_mul_pd(_mm256_loadu_pd(&x[i]), va));
  for (; i < n; ++i) x[i] *= a;
}

}  // namespace nashlab::kernels::avx2
