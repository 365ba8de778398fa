"""Parameter triple of a 2-spin system and complex-literal parsing."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DomainError

_FLOAT_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def _parse_float(text: str) -> float:
    if not _FLOAT_RE.match(text):
        raise DomainError(f"not a float literal: {text!r}")
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse 'FLOAT', 'FLOATi', or 'FLOAT±FLOATi' (also accepts 'j')."""
    s = text.strip()
    if not s:
        raise DomainError("empty complex literal")
    if s[-1] not in "ij":
        return complex(_parse_float(s), 0.0)
    body = s[:-1]
    # split at the last sign that starts the imaginary part (not an
    # exponent sign, not the leading sign)
    split = -1
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break
    if split < 0:
        re_text, im_text = "", body
    else:
        re_text, im_text = body[:split], body[split:]
    if im_text in ("", "+"):
        im_part = 1.0
    elif im_text == "-":
        im_part = -1.0
    else:
        im_part = _parse_float(im_text)
    re_part = _parse_float(re_text) if re_text else 0.0
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    """Inverse of parse_complex, 'a+bi' form with repr precision."""
    if z.imag == 0.0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


@dataclass(frozen=True)
class Params:
    """Edge interactions (beta for ++, gamma for --) and vertex weight lam.

    gamma must be nonzero for every recursion-based operation; purely
    enumerative ones tolerate gamma = 0.
    """

    beta: complex
    gamma: complex
    lam: complex

    def require_gamma(self) -> None:
        if self.gamma == 0:
            raise DomainError("gamma = 0 is not supported by recursion-based operations")

    def is_real(self) -> bool:
        return (
            self.beta.imag == 0.0 and self.gamma.imag == 0.0 and self.lam.imag == 0.0
        )

    def as_real_triple(self) -> tuple[float, float, float]:
        if not self.is_real():
            raise DomainError("expected real parameters")
        return (self.beta.real, self.gamma.real, self.lam.real)
