#pragma once
// q-th roots of unity in V = Z_p[pi] for q = p (s = 1).  The primitive root
// is pinned by zeta = 1 + pi (mod pi^2) and lifted digit by digit: Newton is
// unreliable here because the derivative p*zeta^{p-1} is not a unit, while
// the digit search makes guaranteed progress of one pi-digit per step.

#include <vector>

#include "padicalc/params.hpp"
#include "padicalc/scalar.hpp"

namespace padicalc {

inline std::vector<PadicScalar> roots_of_unity(const TruncationParams& pm) {
  if (pm.s != 1)
    throw UnsupportedError("roots of unity beyond q = p need the extended cyclotomic ring");
  const int32_t p = pm.p;
  const int32_t prec = pm.piPrec();
  const int32_t work = prec + p + 2;

  PadicScalar zeta = PadicScalar::one(p, work) + PadicScalar::pi(p, work);
  if (p > 2) {
    for (int32_t j = 2; j < prec; ++j) {
      // one digit of zeta per step: v(zeta^p - 1) must reach (p-1) + j + 1
      bool found = false;
      for (int32_t dd = 0; dd < p && !found; ++dd) {
        PadicScalar cand = zeta;
        if (dd != 0)
          cand += PadicScalar::pi(p, work, j).mul_int(dd);
        PadicScalar err = cand.pow(p) - PadicScalar::one(p, work);
        auto v = err.val_pi();
        if (!v || *v >= (int64_t)(p - 1) + j + 1) {
          zeta = cand;
          found = true;
        }
      }
      if (!found) throw DomainError("root lifting stalled (precision too small?)");
    }
  }
  std::vector<PadicScalar> roots;
  PadicScalar cur = PadicScalar::one(p, work);
  for (int64_t i = 0; i < pm.q(); ++i) {
    roots.push_back(cur.with_prec(prec));
    cur = cur * zeta;
  }
  return roots;
}

}  // namespace padicalc
