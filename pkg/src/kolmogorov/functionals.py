"""
Test functionals of the Kolmogorov operator with closed-form derivatives
"""

from abc import ABC, abstractmethod
from typing import List, NamedTuple, Optional, Sequence, Tuple

from src.core.exceptions import SpectralDomainError
from src.spectral import SpectralField, apply_A_power, l2_inner, sobolev_norm


class HessianForm(NamedTuple):
    """Quadratic form h -> c ||h||_s^2 + d <w, h>^2"""
    c: float
    s: float
    d: float = 0.0
    w: Optional[SpectralField] = None

    def evaluate(self, h: SpectralField) -> float:
        value = self.c * sobolev_norm(h, self.s) ** 2 if self.c else 0.0
        if self.d and self.w is not None:
            value += self.d * l2_inner(self.w, h) ** 2
        return value


class SmoothFunctional(ABC):
    """
    Smooth functional f on the truncated phase space

    Gradients are taken with respect to the real inner product of H,
    so Df(x)[h] = l2_inner(gradient(x), h).
    """

    name: str = "f"

    @abstractmethod
    def value(self, x: SpectralField) -> float:
        pass

    @abstractmethod
    def gradient(self, x: SpectralField) -> SpectralField:
        pass

    @abstractmethod
    def hessian_forms(self, x: SpectralField) -> List[HessianForm]:
        """D^2 f(x) as a sum of HessianForm terms"""
        pass

    def hessian_quadform(self, x: SpectralField, h: SpectralField) -> float:
        return sum(form.evaluate(h) for form in self.hessian_forms(x))


class LyapunovFunctional(SmoothFunctional):
    """
    f(x) = (1 + ||x||_p^2)^{-eps_p} with eps_p = 1 / (2p - 1)

    Bounded by 1 with bounded derivatives, so its Kolmogorov image is
    integrable against every invariant measure of the Galerkin system.
    """

    def __init__(self, p: int):
        if p < 1:
            raise SpectralDomainError(f"Order p must be at least 1, got {p}", operation="LyapunovFunctional")
        self.p = p
        self.eps = 1.0 / (2 * p - 1)
        self.name = f"lyapunov_p{p}"

    def _level(self, x: SpectralField) -> float:
        return 1.0 + sobolev_norm(x, float(self.p)) ** 2

    def value(self, x: SpectralField) -> float:
        return self._level(x) ** -self.eps

    def gradient(self, x: SpectralField) -> SpectralField:
        scale = -2.0 * self.eps * self._level(x) ** (-self.eps - 1.0)
        return apply_A_power(x, float(self.p)) * scale

    def hessian_forms(self, x: SpectralField) -> List[HessianForm]:
        level = self._level(x)
        eps = self.eps
        return [HessianForm(
            c=-2.0 * eps * level ** (-eps - 1.0),
            s=float(self.p),
            d=4.0 * eps * (eps + 1.0) * level ** (-eps - 2.0),
            w=apply_A_power(x, float(self.p)),
        )]

    def __repr__(self) -> str:
        return f"LyapunovFunctional(p={self.p}, eps={self.eps:.6g})"


class QuadraticFunctional(SmoothFunctional):
    """f(x) = |x|^2"""

    name = "energy"

    def value(self, x: SpectralField) -> float:
        return sobolev_norm(x, 0.0) ** 2

    def gradient(self, x: SpectralField) -> SpectralField:
        return x * 2.0

    def hessian_forms(self, x: SpectralField) -> List[HessianForm]:
        return [HessianForm(c=2.0, s=0.0)]


class CombinedFunctional(SmoothFunctional):
    """Linear combination sum c_i f_i"""

    def __init__(self, terms: Sequence[Tuple[float, SmoothFunctional]], name: str = "combined"):
        if not terms:
            raise SpectralDomainError("Combined functional needs at least one term", operation="CombinedFunctional")
        self.terms = [(float(c), f) for c, f in terms]
        self.name = name

    def value(self, x: SpectralField) -> float:
        return sum(c * f.value(x) for c, f in self.terms)

    def gradient(self, x: SpectralField) -> SpectralField:
        result = SpectralField.zeros(x.truncation)
        for c, f in self.terms:
            result = result + f.gradient(x) * c
        return result

    def hessian_forms(self, x: SpectralField) -> List[HessianForm]:
        return [
            HessianForm(c * form.c, form.s, c * form.d, form.w)
            for c, f in self.terms
            for form in f.hessian_forms(x)
        ]


def lyapunov_value(x: SpectralField, lf: LyapunovFunctional) -> float:
    return lf.value(x)


def lyapunov_gradient(x: SpectralField, lf: LyapunovFunctional) -> SpectralField:
    return lf.gradient(x)


def lyapunov_hessian_quadform(x: SpectralField, lf: LyapunovFunctional, h: SpectralField) -> float:
    return lf.hessian_quadform(x, h)
