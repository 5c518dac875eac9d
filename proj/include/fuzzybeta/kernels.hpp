#pragma once

// Data-parallel inner loops of the score, Hessian and information
// computations. Matrices are column-major with n rows (one per observation).
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant compiled in its own translation unit. The variant is
// picked once at runtime from CPUID; FUZZYBETA_SIMD=scalar forces the
// reference path. Variants agree to rounding (summation order differs).

#include <cstddef>
#include <string_view>

namespace fuzzybeta::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // out[i] = sum_j a[j*n + i] * coef[j]
  void (*linear_predictor)(const double* a, std::size_t n, std::size_t p, const double* coef,
                           double* out);
  // out[j] = sum_i a[j*n + i] * w[i]
  void (*transposed_product)(const double* a, std::size_t n, std::size_t p, const double* w,
                             double* out);
  // out[k*p + j] = sum_i a[j*n + i] * w[i] * b[k*n + i]   (p x q, column-major)
  void (*weighted_cross)(const double* a, std::size_t p, const double* b, std::size_t q,
                         std::size_t n, const double* w, double* out);
};

const KernelTable& scalar_table();

// nullptr when not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// Table selected for this process.
const KernelTable& active();

// Choice for a given FUZZYBETA_SIMD value ("", "auto", "scalar", "avx2").
const KernelTable& select(std::string_view request);

namespace detail {
extern const KernelTable kAvx2Table;
}

}  // namespace fuzzybeta::kernels
