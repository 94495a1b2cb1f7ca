"""Exact evaluation of annular exterior gl_n webs in Levi-twisted representations,
with relation suites and Ariki-Koike image computations."""

from .linear_algebra import BasisSpace, LinMap
from .rep_engine import LeviDatum
from .scalar_field import FieldElem, format_scalar, parse_scalar
from .web_ir import evaluate, parse, to_text, typecheck

__all__ = ["BasisSpace", "FieldElem", "LeviDatum", "LinMap", "evaluate", "format_scalar", "parse",
           "parse_scalar", "to_text", "typecheck"]
__version__ = "0.1.0"
