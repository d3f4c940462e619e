#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops of the grid operators. Each kernel has a scalar
// reference and, on x86-64, an AVX2/FMA variant picked at runtime from CPUID.
// The variants are equivalence-tested against the reference.

namespace mscale::kernels {

enum class Isa { scalar, avx2 };

/// out[i] = (plus[i] - minus[i]) * inv_2h + center[i] * log_weight[i]
///
/// Second-order central difference plus the weight term of a weighted
/// derivative; plus/minus are the neighbours along the differentiated axis.
void weighted_central_difference(std::span<const double> plus, std::span<const double> minus,
                                 std::span<const double> center, std::span<const double> log_weight,
                                 std::span<double> out, double inv_2h);

/// max_i |x[i]|; 0 for an empty range.
double max_abs(std::span<const double> x);

/// Isa used by the dispatching entry points above.
Isa active_isa();
bool avx2_available();
/// Pin the dispatch (tests and benchmarks). Requesting avx2 on a machine
/// without it falls back to scalar.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

namespace scalar {
void weighted_central_difference(const double* plus, const double* minus, const double* center,
                                 const double* log_weight, double* out, std::size_t n, double inv_2h);
double max_abs(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
void weighted_central_difference(const double* plus, const double* minus, const double* center,
                                 const double* log_weight, double* out, std::size_t n, double inv_2h);
double max_abs(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace mscale::kernels
