"""Frozen syntax nodes with cached structural hashing.

Notations and formulas are deep trees that get used as dictionary keys over
and over; recomputing a recursive hash on every lookup would dominate the
running time, so each node memoizes its hash on first use.
"""
from dataclasses import dataclass, fields


def node(cls):
    cls = dataclass(frozen=True, eq=False)(cls)
    names = tuple(f.name for f in fields(cls))
    tag = cls.__name__

    def key(self):
        return tuple(getattr(self, n) for n in names)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((tag,) + key(self))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        return hash(self) == hash(other) and key(self) == key(other)

    def __reduce__(self):
        # the memoized hash depends on per-process string hashing
        return (cls, key(self))

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    cls.__reduce__ = __reduce__
    return cls
