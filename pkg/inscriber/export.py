"""OFF export with decimal approximations; the one lossy output of the package."""

import hashlib
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from inscriber.builder import InscribedPolytope
from inscriber.errors import ParseError
from inscriber.formats import dumps, polytope_to_dict

DEFAULT_DIGITS = 17


def decimal_string(value: Fraction, digits: int) -> str:
    """value rounded half-even to `digits` places after the point."""
    value = Fraction(value)
    whole = len(str(abs(value.numerator) // value.denominator))
    with localcontext() as ctx:
        ctx.prec = whole + digits + 5
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        rounded = exact.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    return format(rounded, "f")


def source_hash(p: InscribedPolytope) -> str:
    return hashlib.sha256(dumps(polytope_to_dict(p)).encode("utf-8")).hexdigest()


def to_off(p: InscribedPolytope, digits: int = DEFAULT_DIGITS) -> str:
    if not p.facets:
        raise ParseError("refusing to export a polytope without facets")
    if digits < 0:
        raise ParseError(f"digits must be non-negative, got {digits}")
    lines = ["OFF" if p.d == 3 else "nOFF"]
    lines.append(f"# source-sha256: {source_hash(p)}")
    lines.append(f"# digits: {digits}")
    if p.d != 3:
        lines.append(str(p.d))
    lines.append(f"{len(p.vertices)} {len(p.facets)} 0")
    for v in p.vertices:
        lines.append(" ".join(decimal_string(c, digits) for c in v))
    for f in p.facets:
        lines.append(" ".join(str(i) for i in (len(f),) + tuple(f)))
    return "\n".join(lines) + "\n"


def write_off(path, p: InscribedPolytope, digits: int = DEFAULT_DIGITS) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_off(p, digits), encoding="utf-8")
    return path
