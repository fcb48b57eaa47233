#pragma once

// Data-parallel inner loops of the label solver.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime.  The variants are required to produce
// bit-identical results: the AVX2 code issues the same multiply and add (no
// FMA) in the same order as the scalar loop, and comparisons are exact.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace chemosched::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

// True if the variant was compiled in and the CPU supports it.
bool available(Isa isa);

// Variant used by the free functions below.  Defaults to the best available
// one; the CHEMOSCHED_ISA environment variable ("scalar" or "avx2") overrides
// the default at first use.
Isa active();

// Throws chemosched::Error(kUnsupported) if the variant is unavailable.
void select(Isa isa);

// out[j] = shift + beta * ls[j]
void advance(std::span<const double> ls, double beta, double shift, std::span<double> out);

// v[j] = max(v[j], floor)
void clamp_below(std::span<double> v, double floor);

// out[j] = max(a[j], b[j])
void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out);

// mask[j] = lo <= v[j] && v[j] <= hi; returns the number of set entries.
std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask);

// Structure-of-arrays view over a set of labels.
struct LabelColumns {
  std::span<const double> cost;
  std::span<const double> ls;
  std::span<const double> ls_max;
  std::span<const double> cooldown;
};

struct LabelProbe {
  double cost;
  double ls;
  double ls_max;
  double cooldown;
  // Entries with a smaller log size never dominate the probe.
  double ls_min = -std::numeric_limits<double>::infinity();
};

struct Tolerances {
  double cost;
  double ls;
};

// Index of the first column entry that dominates the probe, or -1.  Entry q
// dominates p when q <= p on every component (cost and log components up to
// their tolerance), q < p on at least one by more than the tolerance, and
// q.ls >= p.ls_min.
std::ptrdiff_t find_dominator(const LabelColumns& kept, const LabelProbe& probe, const Tolerances& tol);

// Explicit-variant entry points, used by the equivalence tests.
namespace scalar {
void advance(std::span<const double> ls, double beta, double shift, std::span<double> out);
void clamp_below(std::span<double> v, double floor);
void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out);
std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask);
std::ptrdiff_t find_dominator(const LabelColumns& kept, const LabelProbe& probe, const Tolerances& tol);
}  // namespace scalar

namespace avx2 {
void advance(std::span<const double> ls, double beta, double shift, std::span<double> out);
void clamp_below(std::span<double> v, double floor);
void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out);
std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask);
std::ptrdiff_t find_dominator(const LabelColumns& kept, const LabelProbe& probe, const Tolerances& tol);
}  // namespace avx2

}  // namespace chemosched::kernels
