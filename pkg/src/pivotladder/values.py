"""Attribute value kinds and the comparison rules built on them.

Values are plain Python scalars: str, int, float, bool. Kinds are strict:
a comparison between values of different kinds is defined only for equality
and is always false (int 3 and real 3.0 are *not* equal). ``None`` never
appears in stored attribute maps; loaders normalize explicit nulls to an
absent key, and predicate evaluation treats both identically.
"""

from __future__ import annotations

from typing import Union

AttributeValue = Union[str, int, float, bool]

TEXT = "text"
INTEGER = "integer"
REAL = "real"
BOOLEAN = "boolean"
NULL = "null"

_ORDERED_KINDS = {INTEGER, REAL}


def kind_of(value) -> str:
    """Classify a scalar. bool is checked before int (bool subclasses int)."""
    if value is None:
        return NULL
    if isinstance(value, bool):
        return BOOLEAN
    if isinstance(value, int):
        return INTEGER
    if isinstance(value, float):
        return REAL
    if isinstance(value, str):
        return TEXT
    raise TypeError(f"unsupported attribute value type: {type(value).__name__}")


def values_equal(a, b) -> bool:
    """Equality under strict kinds: cross-kind is false except null==null."""
    ka, kb = kind_of(a), kind_of(b)
    if ka != kb:
        return False
    if ka == NULL:
        return True
    return a == b


def values_ordered(op: str, a, b) -> bool:
    """Ordered comparison; false whenever the kinds differ or don't order."""
    ka, kb = kind_of(a), kind_of(b)
    if ka != kb or ka not in _ORDERED_KINDS:
        return False
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"not an ordering operator: {op}")


def value_label(value) -> str:
    """Canonical display string, used for histogram bin labels."""
    k = kind_of(value)
    if k == BOOLEAN:
        return "true" if value else "false"
    if k == REAL:
        return repr(value)
    if k == NULL:
        return "∅"
    return str(value)
