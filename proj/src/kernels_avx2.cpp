#include "cogpow/kernels.hpp"

// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma; only reachable after
// the runtime cpuid check in avx2_table(). The elementwise exp/log use the
// classic Cephes double-precision reductions (Pade approximant for exp,
// mantissa polynomial for log), accurate to a couple of ulp, which the
// equivalence tests pin against libm.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace cogpow::kern::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

// 2^k for integral-valued k with |k| <= 1023, via the exponent field.
inline __m256d pow2i(__m256d k) {
  __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i k64 = _mm256_cvtepi32_epi64(k32);
  k64 = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
  k64 = _mm256_slli_epi64(k64, 52);
  return _mm256_castsi256_pd(k64);
}

inline __m256d exp4(__m256d xin) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d one = _mm256_set1_pd(1.0);

  // clamp keeps the scaling arithmetic sane; saturated lanes are fixed below
  __m256d x = _mm256_min_pd(xin, _mm256_set1_pd(710.0));
  x = _mm256_max_pd(x, _mm256_set1_pd(-746.0));

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, ln2_hi, x);
  x = _mm256_fnmadd_pd(n, ln2_lo, x);

  __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));
  __m256d y = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  y = _mm256_fmadd_pd(_mm256_set1_pd(2.0), y, one);

  // y *= 2^n, split so the exponent stays representable down to subnormals
  __m256d nh = _mm256_round_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d nl = _mm256_sub_pd(n, nh);
  y = _mm256_mul_pd(_mm256_mul_pd(y, pow2i(nh)), pow2i(nl));

  const __m256d max_log = _mm256_set1_pd(709.782712893383996732);
  const __m256d min_log = _mm256_set1_pd(-745.133219101941108420);
  __m256d lo_mask = _mm256_cmp_pd(xin, min_log, _CMP_LT_OQ);
  __m256d hi_mask = _mm256_cmp_pd(xin, max_log, _CMP_GT_OQ);
  __m256d nan_mask = _mm256_cmp_pd(xin, xin, _CMP_UNORD_Q);
  y = _mm256_andnot_pd(lo_mask, y);
  y = _mm256_blendv_pd(y, _mm256_set1_pd(HUGE_VAL), hi_mask);
  y = _mm256_blendv_pd(y, xin, nan_mask);
  return y;
}

inline __m256d log4(__m256d xin) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d min_normal = _mm256_set1_pd(2.2250738585072014e-308);

  // rescale subnormal inputs into the normal range
  __m256d pos = _mm256_cmp_pd(xin, zero, _CMP_GT_OQ);
  __m256d sub = _mm256_and_pd(pos, _mm256_cmp_pd(xin, min_normal, _CMP_LT_OQ));
  __m256d x = _mm256_blendv_pd(
      xin, _mm256_mul_pd(xin, _mm256_set1_pd(18014398509481984.0)), sub);
  __m256d ebias = _mm256_and_pd(sub, _mm256_set1_pd(54.0));

  __m256i b = _mm256_castpd_si256(x);
  __m256i expfield = _mm256_srli_epi64(b, 52);
  __m256i mant =
      _mm256_or_si256(_mm256_and_si256(b, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant);

  // pack the four low 32-bit lanes of the 64-bit exponents and widen to pd
  __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(expfield, idx));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(e32), _mm256_set1_pd(1022.0));
  e = _mm256_sub_pd(e, ebias);

  // frexp-style normalization to m in [sqrt(1/2), sqrt(2))
  __m256d mlt =
      _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(mlt, one));
  m = _mm256_add_pd(m, _mm256_and_pd(mlt, m));
  m = _mm256_sub_pd(m, one);

  __m256d z = _mm256_mul_pd(m, m);

  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(m, _mm256_set1_pd(1.12873587189467229188e1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(m, z), _mm256_div_pd(p, q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);

  // specials: log(0) = -inf, log(x<0) = NaN, log(inf) = inf, NaN -> NaN
  __m256d inf_mask = _mm256_cmp_pd(xin, _mm256_set1_pd(HUGE_VAL), _CMP_EQ_OQ);
  __m256d zero_mask = _mm256_cmp_pd(xin, zero, _CMP_EQ_OQ);
  __m256d neg_mask = _mm256_cmp_pd(xin, zero, _CMP_LT_OQ);
  __m256d nan_mask = _mm256_cmp_pd(xin, xin, _CMP_UNORD_Q);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(HUGE_VAL), inf_mask);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(-HUGE_VAL), zero_mask);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(NAN), neg_mask);
  r = _mm256_blendv_pd(r, xin, nan_mask);
  return r;
}

double sum_avx2(const double* x, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double max_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
      if (x[i] > m) m = x[i];
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmax(acc);
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void mul_acc_avx2(double* acc, const double* a, const double* b,
                  std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                _mm256_loadu_pd(acc + i));
    _mm256_storeu_pd(acc + i, v);
  }
  for (; i < n; ++i) acc[i] += a[i] * b[i];
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void exp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void log_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::log(x[i]);
}

double sum_log_offset_avx2(const double* x, double c, std::size_t n) {
  __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, log4(_mm256_add_pd(vc, _mm256_loadu_pd(x + i))));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::log(c + x[i]);
  return s;
}

const Table avx2_impl = {
    sum_avx2,  max_avx2, dot_avx2, mul_acc_avx2,
    axpy_avx2, exp_avx2, log_avx2, sum_log_offset_avx2,
};

}  // namespace

const Table* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_impl;
  return nullptr;
}

}  // namespace cogpow::kern::detail

#else  // non-x86 build: no AVX2 variant

namespace cogpow::kern::detail {
const Table* avx2_table() { return nullptr; }
}  // namespace cogpow::kern::detail

#endif
