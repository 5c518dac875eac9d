#include "fuzzybeta/kernels.hpp"

namespace fuzzybeta::kernels {
namespace {

void linear_predictor(const double* a, std::size_t n, std::size_t p, const double* coef,
                      double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double c = coef[j];
    const double* col = a + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * col[i];
  }
}

void transposed_product(const double* a, std::size_t n, std::size_t p, const double* w,
                        double* out) {
  for (std::size_t j = 0; j < p; ++j) {
    const double* col = a + j * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += col[i] * w[i];
    out[j] = s;
  }
}

void weighted_cross(const double* a, std::size_t p, const double* b, std::size_t q,
                    std::size_t n, const double* w, double* out) {
  for (std::size_t k = 0; k < q; ++k) {
    const double* bk = b + k * n;
    for (std::size_t j = 0; j < p; ++j) {
      const double* aj = a + j * n;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += aj[i] * w[i] * bk[i];
      out[k * p + j] = s;
    }
  }
}

const KernelTable kScalarTable{Isa::scalar, "scalar", &linear_predictor, &transposed_product,
                               &weighted_cross};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace fuzzybeta::kernels
