#include <atomic>
#include <cassert>

#include "mscale/kernels/kernels.hpp"

namespace mscale::kernels {

namespace {

bool detect_avx2() {
#if defined(MSCALE_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect_avx2() ? Isa::avx2 : Isa::scalar};
  return isa;
}

}  // namespace

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  selected().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void weighted_central_difference(std::span<const double> plus, std::span<const double> minus,
                                 std::span<const double> center, std::span<const double> log_weight,
                                 std::span<double> out, double inv_2h) {
  const std::size_t n = out.size();
  assert(plus.size() >= n && minus.size() >= n && center.size() >= n && log_weight.size() >= n);
#if defined(MSCALE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::weighted_central_difference(plus.data(), minus.data(), center.data(), log_weight.data(), out.data(), n,
                                      inv_2h);
    return;
  }
#endif
  scalar::weighted_central_difference(plus.data(), minus.data(), center.data(), log_weight.data(), out.data(), n,
                                      inv_2h);
}

double max_abs(std::span<const double> x) {
#if defined(MSCALE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::max_abs(x.data(), x.size());
#endif
  return scalar::max_abs(x.data(), x.size());
}

}  // namespace mscale::kernels
