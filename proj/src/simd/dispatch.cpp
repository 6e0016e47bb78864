#include <cstdlib>
#include <cstring>

#include "xrt/simd/kernels.hpp"

namespace xrt::simd {

const KernelTable& scalar_table() {
  static const KernelTable table{scalar::dot, scalar::dot3, scalar::poly_eval};
  return table;
}

namespace {

struct Selection {
  const KernelTable* table;
  Isa isa;
};

Selection select() {
  const char* force = std::getenv("XRT_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0) return {&scalar_table(), Isa::Scalar};
  if (const KernelTable* t = avx2_table()) return {t, Isa::Avx2};
  if (const KernelTable* t = neon_table()) return {t, Isa::Neon};
  return {&scalar_table(), Isa::Scalar};
}

const Selection& selection() {
  static const Selection s = select();
  return s;
}

}  // namespace

const KernelTable& active() { return *selection().table; }
Isa active_isa() { return selection().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    case Isa::Scalar: break;
  }
  return "scalar";
}

}  // namespace xrt::simd
