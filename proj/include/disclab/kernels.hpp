#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant; the active one is chosen once at startup from CPU
// features and can be pinned with DISCLAB_ISA=scalar|avx2.

#include <cstddef>
#include <string_view>

namespace disclab::kernels {

enum class Isa { scalar, avx2 };

/// Non-owning view of an axis-major point set.
struct PointView {
  std::size_t d;
  std::size_t n;
  const double* axes;     // axes[j*n + k]
  const double* weights;  // n entries
};

using BoxCountFn = double (*)(const PointView&, const double* x);
using KernelRowFn = double (*)(const PointView&, std::size_t k);

struct KernelTable {
  BoxCountFn weighted_box_count;
  KernelRowFn kernel_row_sum;
};

bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Throws Error{invalid_argument} if `isa` is not available.
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;
const KernelTable& table_for(Isa isa);

/// sum_k a_k [t_k < x componentwise].
double weighted_box_count(const PointView& ps, const double* x);

/// sum_l a_l prod_j (1 - max(t_kj, t_lj)), compensated.
double kernel_row_sum(const PointView& ps, std::size_t k);

namespace scalar {
double weighted_box_count(const PointView& ps, const double* x);
double kernel_row_sum(const PointView& ps, std::size_t k);
}  // namespace scalar

namespace avx2 {
double weighted_box_count(const PointView& ps, const double* x);
double kernel_row_sum(const PointView& ps, std::size_t k);
}  // namespace avx2

}  // namespace disclab::kernels
