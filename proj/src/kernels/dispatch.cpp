// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "twm/kernels.hpp"

namespace twm::kernels {

namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(TWM_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(TWM_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  const char* forced = std::getenv("TWM_ISA");
  if (forced && std::string_view(forced) == "scalar")
    return detail::scalar_table();
  if (available(Isa::Avx2)) return table(Isa::Avx2);
  if (available(Isa::Neon)) return table(Isa::Neon);
  return detail::scalar_table();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "?";
}

bool available(Isa isa) { return cpu_supports(isa); }

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
    if (available(isa)) out.push_back(isa);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!available(isa))
    throw std::invalid_argument("kernel variant '" +
                                std::string(isa_name(isa)) +
                                "' is not available on this CPU");
  switch (isa) {
#if defined(TWM_HAVE_AVX2)
    case Isa::Avx2:
      return detail::avx2_table();
#endif
#if defined(TWM_HAVE_NEON)
    case Isa::Neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

}  // namespace twm::kernels
