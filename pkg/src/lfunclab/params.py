"""The T-dependent parameter family for the mollifier experiments.

Asymptotic defaults:

    W = (ln ln ln T)^4        X = T^(1/(ln ln ln T)^2)
    Y = T^(1/(ln ln T)^2)     sigma0 = 1/2 + W / ln T
    K1 = ceil(100 ln ln T)    K2 = ceil(100 ln ln ln T)

At desk scale these invert the intended hierarchy (X > T for T <= 1e6
because (ln ln ln T)^2 < 1), so when the defaults violate
Y <= X <= T^(1/10) the constructor clamps X = T^(1/10) and
Y = max(3, T^(1/100)), then forces 2 <= Y <= X. Every adjustment is
recorded in ``clamp_notes`` so run metadata can echo it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

_E_TO_E = math.e**math.e


@dataclass(frozen=True)
class Params:
    T: float
    W: float
    X: float
    Y: float
    sigma0: float
    K1: int
    K2: int
    clamped: bool = False
    clamp_notes: tuple[str, ...] = field(default_factory=tuple)
    overrides: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.T < _E_TO_E:
            raise DomainError(f"T = {self.T} below e^e")
        if not (0.5 < self.sigma0 <= 1.0):
            raise DomainError(f"sigma0 = {self.sigma0} outside (1/2, 1]")
        if not (2.0 <= self.Y <= self.X):
            raise DomainError(f"need 2 <= Y <= X, got Y={self.Y}, X={self.X}")
        if not (self.K1 >= self.K2 >= 1):
            raise DomainError(f"need K1 >= K2 >= 1, got K1={self.K1}, K2={self.K2}")

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "W": self.W,
            "X": self.X,
            "Y": self.Y,
            "sigma0": self.sigma0,
            "K1": self.K1,
            "K2": self.K2,
            "clamped": self.clamped,
            "clamp_notes": list(self.clamp_notes),
        }


def make_params(T: float, **overrides) -> Params:
    """Defaults with the desk-scale clamp, then per-field overrides."""
    if T < _E_TO_E:
        raise DomainError(f"T = {T} below e^e")
    lnT = math.log(T)
    lnlnT = math.log(lnT)
    lnlnlnT = math.log(lnlnT) if lnlnT > 1.0 else 1e-9
    W = lnlnlnT**4
    X = T ** (1.0 / lnlnlnT**2)
    Y = T ** (1.0 / lnlnT**2)
    sigma0 = 0.5 + W / lnT
    K1 = max(1, math.ceil(100.0 * lnlnT))
    K2 = max(1, math.ceil(100.0 * lnlnlnT))

    notes = []
    clamped = False
    if not (Y <= X <= T ** (1.0 / 10.0)):
        X_new = T ** (1.0 / 10.0)
        Y_new = max(3.0, T ** (1.0 / 100.0))
        notes.append(f"asymptotic defaults inverted (X={X:.3g}, Y={Y:.3g}); "
                     f"clamped X={X_new:.6g}, Y={Y_new:.6g}")
        X, Y = X_new, Y_new
        clamped = True

    for key, val in overrides.items():
        if key not in {"W", "X", "Y", "sigma0", "K1", "K2"}:
            raise DomainError(f"unknown Params override {key!r}")
        if key == "W":
            W = float(val)
            sigma0 = 0.5 + W / lnT
        elif key == "X":
            X = float(val)
        elif key == "Y":
            Y = float(val)
        elif key == "sigma0":
            sigma0 = float(val)
        elif key == "K1":
            K1 = int(val)
        elif key == "K2":
            K2 = int(val)

    # hard floor so that degenerate T never produces an inverted window
    if X < 2.0:
        notes.append(f"X={X:.6g} below 2; floored to 2")
        X = 2.0
        clamped = True
    if Y > X:
        notes.append(f"Y={Y:.6g} above X={X:.6g}; lowered to X")
        Y = X
        clamped = True
    if Y < 2.0:
        notes.append(f"Y={Y:.6g} below 2; floored to 2")
        Y = 2.0
        clamped = True
    if K2 > K1:
        notes.append(f"K2={K2} above K1={K1}; lowered to K1")
        K2 = K1
        clamped = True

    return Params(
        T=float(T), W=W, X=X, Y=Y, sigma0=sigma0, K1=K1, K2=K2,
        clamped=clamped, clamp_notes=tuple(notes),
        overrides=tuple(sorted((k, float(v)) for k, v in overrides.items())),
    )
