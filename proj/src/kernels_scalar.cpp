#include <algorithm>

#include "chemosched/kernels.hpp"

namespace chemosched::kernels::scalar {

void advance(std::span<const double> ls, double beta, double shift, std::span<double> out) {
  for (std::size_t j = 0; j < ls.size(); ++j) out[j] = shift + beta * ls[j];
}

void clamp_below(std::span<double> v, double floor) {
  for (double& x : v) x = x < floor ? floor : x;
}

void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] < b[j] ? b[j] : a[j];
}

std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
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
  for (std::size_t j = 0; j < kept.cost.size(); ++j) {
    const bool weak = kept.cost[j] <= cost_le && kept.ls[j] <= ls_le && kept.ls_max[j] <= max_le &&
                      kept.cooldown[j] <= p.cooldown && kept.ls[j] >= p.ls_min;
    const bool strict = kept.cost[j] < cost_lt || kept.ls[j] < ls_lt || kept.ls_max[j] < max_lt ||
                        kept.cooldown[j] < p.cooldown;
    if (weak && strict) return static_cast<std::ptrdiff_t>(j);
  }
  return -1;
}

}  // namespace chemosched::kernels::scalar
