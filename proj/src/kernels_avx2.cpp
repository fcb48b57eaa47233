#include <immintrin.h>

#include <bit>

#include "chemosched/kernels.hpp"

namespace chemosched::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void advance(std::span<const double> ls, double beta, double shift, std::span<double> out) {
  const __m256d vbeta = _mm256_set1_pd(beta);
  const __m256d vshift = _mm256_set1_pd(shift);
  const std::size_t n = ls.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d x = _mm256_loadu_pd(ls.data() + j);
    _mm256_storeu_pd(out.data() + j, _mm256_add_pd(vshift, _mm256_mul_pd(vbeta, x)));
  }
  for (; j < n; ++j) out[j] = shift + beta * ls[j];
}

void clamp_below(std::span<double> v, double floor) {
  const __m256d vfloor = _mm256_set1_pd(floor);
  const std::size_t n = v.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d x = _mm256_loadu_pd(v.data() + j);
    // x < floor ? floor : x, matching the scalar select (NaN keeps x).
    const __m256d lt = _mm256_cmp_pd(x, vfloor, _CMP_LT_OQ);
    _mm256_storeu_pd(v.data() + j, _mm256_blendv_pd(x, vfloor, lt));
  }
  for (; j < n; ++j) v[j] = v[j] < floor ? floor : v[j];
}

void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d x = _mm256_loadu_pd(a.data() + j);
    const __m256d y = _mm256_loadu_pd(b.data() + j);
    const __m256d lt = _mm256_cmp_pd(x, y, _CMP_LT_OQ);
    _mm256_storeu_pd(out.data() + j, _mm256_blendv_pd(x, y, lt));
  }
  for (; j < n; ++j) out[j] = a[j] < b[j] ? b[j] : a[j];
}

std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const std::size_t n = v.size();
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d x = _mm256_loadu_pd(v.data() + j);
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(vlo, x, _CMP_LE_OQ), _mm256_cmp_pd(x, vhi, _CMP_LE_OQ));
    const unsigned bits = static_cast<unsigned>(_mm256_movemask_pd(in));
    for (std::size_t l = 0; l < kLanes; ++l) mask[j + l] = static_cast<std::uint8_t>((bits >> l) & 1U);
    count += static_cast<std::size_t>(std::popcount(bits));
  }
  for (; j < n; ++j) {
    const bool in = lo <= v[j] && v[j] <= hi;
    mask[j] = in ? 1 : 0;
    count += in ? 1 : 0;
  }
  return count;
}

std::ptrdiff_t find_dominator(const LabelColumns& kept, const LabelProbe& p, const Tolerances& tol) {
  const double cost_le = p.cost + tol.cost;
  const double cost_lt = p.cost - tol.cost;
  const double ls_le = p.ls + tol.ls;
  const double ls_lt = p.ls - tol.ls;
  const double max_le = p.ls_max + tol.ls;
  const double max_lt = p.ls_max - tol.ls;

  const __m256d v_cost_le = _mm256_set1_pd(cost_le);
  const __m256d v_cost_lt = _mm256_set1_pd(cost_lt);
  const __m256d v_ls_le = _mm256_set1_pd(ls_le);
  const __m256d v_ls_lt = _mm256_set1_pd(ls_lt);
  const __m256d v_max_le = _mm256_set1_pd(max_le);
  const __m256d v_max_lt = _mm256_set1_pd(max_lt);
  const __m256d v_cd = _mm256_set1_pd(p.cooldown);
  const __m256d v_ls_min = _mm256_set1_pd(p.ls_min);

  const std::size_t n = kept.cost.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d c = _mm256_loadu_pd(kept.cost.data() + j);
    const __m256d l = _mm256_loadu_pd(kept.ls.data() + j);
    const __m256d m = _mm256_loadu_pd(kept.ls_max.data() + j);
    const __m256d d = _mm256_loadu_pd(kept.cooldown.data() + j);

    __m256d weak = _mm256_cmp_pd(c, v_cost_le, _CMP_LE_OQ);
    weak = _mm256_and_pd(weak, _mm256_cmp_pd(l, v_ls_le, _CMP_LE_OQ));
    weak = _mm256_and_pd(weak, _mm256_cmp_pd(m, v_max_le, _CMP_LE_OQ));
    weak = _mm256_and_pd(weak, _mm256_cmp_pd(d, v_cd, _CMP_LE_OQ));
    weak = _mm256_and_pd(weak, _mm256_cmp_pd(l, v_ls_min, _CMP_GE_OQ));

    __m256d strict = _mm256_cmp_pd(c, v_cost_lt, _CMP_LT_OQ);
    strict = _mm256_or_pd(strict, _mm256_cmp_pd(l, v_ls_lt, _CMP_LT_OQ));
    strict = _mm256_or_pd(strict, _mm256_cmp_pd(m, v_max_lt, _CMP_LT_OQ));
    strict = _mm256_or_pd(strict, _mm256_cmp_pd(d, v_cd, _CMP_LT_OQ));

    const int bits = _mm256_movemask_pd(_mm256_and_pd(weak, strict));
    if (bits != 0) return static_cast<std::ptrdiff_t>(j) + std::countr_zero(static_cast<unsigned>(bits));
  }
  for (; j < n; ++j) {
    const bool weak = kept.cost[j] <= cost_le && kept.ls[j] <= ls_le && kept.ls_max[j] <= max_le &&
                      kept.cooldown[j] <= p.cooldown && kept.ls[j] >= p.ls_min;
    const bool strict = kept.cost[j] < cost_lt || kept.ls[j] < ls_lt || kept.ls_max[j] < max_lt ||
                        kept.cooldown[j] < p.cooldown;
    if (weak && strict) return static_cast<std::ptrdiff_t>(j);
  }
  return -1;
}

}  // namespace chemosched::kernels::avx2
