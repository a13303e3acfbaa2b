#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "disclab/error.hpp"
#include "disclab/kernels.hpp"

namespace disclab::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::weighted_box_count, &scalar::kernel_row_sum};
#if defined(DISCLAB_WITH_AVX2)
constexpr KernelTable kAvx2{&avx2::weighted_box_count, &avx2::kernel_row_sum};
#endif

bool cpu_has_avx2() noexcept {
#if defined(DISCLAB_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return has;
#else
  return false;
#endif
}

Isa detect() noexcept {
  const bool has_avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("DISCLAB_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && has_avx2) return Isa::avx2;
  }
  return has_avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::invalid_argument,
                std::string("instruction set not available: ") + std::string(isa_name(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& table_for(Isa isa) {
#if defined(DISCLAB_WITH_AVX2)
  if (isa == Isa::avx2) {
    if (!cpu_has_avx2()) throw Error(ErrorKind::invalid_argument, "avx2 not available");
    return kAvx2;
  }
#endif
  if (isa != Isa::scalar) throw Error(ErrorKind::invalid_argument, "instruction set not built");
  return kScalar;
}

double weighted_box_count(const PointView& ps, const double* x) {
  return table_for(active_isa()).weighted_box_count(ps, x);
}

double kernel_row_sum(const PointView& ps, std::size_t k) {
  return table_for(active_isa()).kernel_row_sum(ps, k);
}

}  // namespace disclab::kernels
