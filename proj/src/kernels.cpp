#include "chemosched/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "chemosched/error.hpp"

namespace chemosched::kernels {

#ifndef CHEMOSCHED_HAVE_AVX2
namespace avx2 {
namespace {
[[noreturn]] void unavailable() { throw Error(ErrorKind::kUnsupported, "AVX2 kernels were not compiled in"); }
}  // namespace
void advance(std::span<const double>, double, double, std::span<double>) { unavailable(); }
void clamp_below(std::span<double>, double) { unavailable(); }
void running_max(std::span<const double>, std::span<const double>, std::span<double>) { unavailable(); }
std::size_t band_mask(std::span<const double>, double, double, std::span<std::uint8_t>) { unavailable(); }
std::ptrdiff_t find_dominator(const LabelColumns&, const LabelProbe&, const Tolerances&) { unavailable(); }
}  // namespace avx2
#endif

namespace {

struct Table {
  void (*advance)(std::span<const double>, double, double, std::span<double>);
  void (*clamp_below)(std::span<double>, double);
  void (*running_max)(std::span<const double>, std::span<const double>, std::span<double>);
  std::size_t (*band_mask)(std::span<const double>, double, double, std::span<std::uint8_t>);
  std::ptrdiff_t (*find_dominator)(const LabelColumns&, const LabelProbe&, const Tolerances&);
};

constexpr Table kScalarTable{scalar::advance, scalar::clamp_below, scalar::running_max, scalar::band_mask,
                             scalar::find_dominator};
constexpr Table kAvx2Table{avx2::advance, avx2::clamp_below, avx2::running_max, avx2::band_mask,
                           avx2::find_dominator};

bool cpu_has_avx2() {
#if defined(CHEMOSCHED_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("CHEMOSCHED_ISA")) {
    const std::string requested(env);
    if (requested == "scalar") return Isa::kScalar;
    if (requested == "avx2" && available(Isa::kAvx2)) return Isa::kAvx2;
  }
  return available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& table() { return current().load(std::memory_order_relaxed) == Isa::kAvx2 ? kAvx2Table : kScalarTable; }

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: return cpu_has_avx2();
  }
  return false;
}

Isa active() { return current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!available(isa)) {
    throw Error(ErrorKind::kUnsupported, "kernel variant " + std::string(to_string(isa)) + " is unavailable");
  }
  current().store(isa, std::memory_order_relaxed);
}

void advance(std::span<const double> ls, double beta, double shift, std::span<double> out) {
  table().advance(ls, beta, shift, out);
}

void clamp_below(std::span<double> v, double floor) { table().clamp_below(v, floor); }

void running_max(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  table().running_max(a, b, out);
}

std::size_t band_mask(std::span<const double> v, double lo, double hi, std::span<std::uint8_t> mask) {
  return table().band_mask(v, lo, hi, mask);
}

std::ptrdiff_t find_dominator(const LabelColumns& kept, const LabelProbe& probe, const Tolerances& tol) {
  return table().find_dominator(kept, probe, tol);
}

}  // namespace chemosched::kernels
