#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "disclab/kernels.hpp"

namespace disclab::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double weighted_box_count(const PointView& ps, const double* x) {
  const std::size_t n = ps.n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (std::size_t j = 0; j < ps.d; ++j) {
      const __m256d t = _mm256_loadu_pd(ps.axes + j * n + k);
      mask = _mm256_and_pd(mask, _mm256_cmp_pd(t, _mm256_set1_pd(x[j]), _CMP_LT_OQ));
    }
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(ps.weights + k)));
  }
  double sum = hsum(acc);
  for (; k < n; ++k) {
    bool inside = true;
    for (std::size_t j = 0; j < ps.d && inside; ++j) inside = ps.axes[j * n + k] < x[j];
    if (inside) sum += ps.weights[k];
  }
  return sum;
}

double kernel_row_sum(const PointView& ps, std::size_t k) {
  const std::size_t n = ps.n;
  const __m256d one = _mm256_set1_pd(1.0);
  // Lane-wise Kahan accumulation.
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t l = 0;
  for (; l + 4 <= n; l += 4) {
    __m256d prod = _mm256_loadu_pd(ps.weights + l);
    for (std::size_t j = 0; j < ps.d; ++j) {
      const double* axis = ps.axes + j * n;
      const __m256d m = _mm256_max_pd(_mm256_set1_pd(axis[k]), _mm256_loadu_pd(axis + l));
      prod = _mm256_mul_pd(prod, _mm256_sub_pd(one, m));
    }
    const __m256d y = _mm256_sub_pd(prod, comp);
    const __m256d t = _mm256_add_pd(sum, y);
    comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }
  alignas(32) double lanes[4];
  alignas(32) double lane_comp[4];
  _mm256_store_pd(lanes, sum);
  _mm256_store_pd(lane_comp, comp);

  double total = 0.0;
  double c = 0.0;
  auto add = [&](double v) {
    const double t = total + v;
    if (std::abs(total) >= std::abs(v)) {
      c += (total - t) + v;
    } else {
      c += (v - t) + total;
    }
    total = t;
  };
  for (int i = 0; i < 4; ++i) {
    add(lanes[i]);
    add(-lane_comp[i]);
  }
  for (; l < n; ++l) {
    double prod = ps.weights[l];
    for (std::size_t j = 0; j < ps.d; ++j) {
      const double* axis = ps.axes + j * n;
      prod *= 1.0 - std::max(axis[k], axis[l]);
    }
    add(prod);
  }
  return total + c;
}

}  // namespace disclab::kernels::avx2
