"""Classical one-measure Szegő recursion straight from a moment sequence.

Used as an independent cross-check of the multi-index solvers: nothing here
touches moment matrices or the linear solvers. Sign convention: alpha_m is
Phi_m(0), so Phi_{m+1} = z Phi_m + alpha_{m+1} Phi*_m and
Phi*_{m+1} = Phi*_m + conj(alpha_{m+1}) z Phi_m.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .poly import Poly


class SingularMinorError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SzegoStep:
    degree: int
    phi: Poly
    phistar: Poly
    alpha: object  # Phi_m(0); 1 at m = 0
    rho: object  # 1 - |alpha_m|^2; 0 at m = 0 by the empty-index convention


def szego_oracle(
    moments: Sequence,
    N: int,
    is_zero: Optional[Callable[[object], bool]] = None,
) -> list[SzegoStep]:
    """Run the recursion for degrees 0..N.

    ``moments[p]`` is nu^p for p = 0..N; negative moments come from Hermitian
    symmetry. Raises SingularMinorError when a Toeplitz minor vanishes.
    """
    if len(moments) < N + 1:
        raise ValueError(f"need moments nu^0..nu^{N}, got {len(moments)}")
    zero = is_zero or (lambda x: x == 0)

    def nu(p: int):
        return moments[p] if p >= 0 else moments[-p].conjugate()

    phi = [moments[0] * 0 + 1]
    star = list(phi)
    out = [SzegoStep(0, Poly(phi), Poly(star), phi[0], phi[0] * 0)]
    for m in range(N):
        # <z Phi_m, 1> and <Phi*_m, 1>
        num = sum((c * nu(a + 1) for a, c in enumerate(phi)), moments[0] * 0)
        den = sum((c * nu(a) for a, c in enumerate(star)), moments[0] * 0)
        if zero(den):
            raise SingularMinorError(f"Toeplitz minor of order {m + 1} vanishes")
        alpha = -num / den
        zphi = [0 * alpha] + phi
        star_pad = star + [0 * alpha]
        new_phi = [a + alpha * b for a, b in zip(zphi, star_pad)]
        new_star = [b + alpha.conjugate() * a for a, b in zip(zphi, star_pad)]
        phi, star = new_phi, new_star
        out.append(SzegoStep(m + 1, Poly(phi), Poly(star), alpha, 1 - alpha * alpha.conjugate()))
    return out
