"""Exact probability and information measures over finite alphabets.

Every distribution is a dense float64 tensor whose axes are named
:class:`Alphabet` objects.  Information quantities are in bits.

    >>> bit = Alphabet("a", 2)
    >>> p = JointDistribution([bit, Alphabet("b", 2)], [[0.5, 0.0], [0.0, 0.5]])
    >>> mutual_information(p, "a", "b")
    1.0
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    NumericalError,
    UnsupportedConditionError,
    UsageError,
    ValidationError,
)

#: raw mass may deviate from 1 by this much before construction rejects it
NORMALIZATION_ATOL = 1e-6
#: largest dense tensor (number of cells) we are willing to build
MAX_CELLS = 10**7
#: information values in (-NEGATIVE_ATOL, 0) are round-off and clamp to 0
NEGATIVE_ATOL = 1e-10


@dataclass(frozen=True)
class Alphabet:
    """A finite symbol set.  ``labels`` default to ``"0" .. "size-1"``."""

    name: str
    size: int
    labels: tuple = None

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise ValidationError(f"alphabet {self.name!r}: size must be a positive integer, got {self.size!r}")
        object.__setattr__(self, "size", int(self.size))
        if self.labels is None:
            labels = tuple(str(i) for i in range(self.size))
        else:
            labels = tuple(str(l) for l in self.labels)
            if len(labels) != self.size:
                raise ValidationError(
                    f"alphabet {self.name!r}: {len(labels)} labels for size {self.size}")
            if len(set(labels)) != len(labels):
                raise ValidationError(f"alphabet {self.name!r}: labels are not unique")
        object.__setattr__(self, "labels", labels)

    def index(self, symbol) -> int:
        """Position of ``symbol`` (a label string or an integer index)."""
        if isinstance(symbol, (int, np.integer)) and not isinstance(symbol, bool):
            if 0 <= symbol < self.size:
                return int(symbol)
            raise UsageError(f"alphabet {self.name!r}: index {symbol} out of range")
        try:
            return self.labels.index(str(symbol))
        except ValueError:
            raise UsageError(f"alphabet {self.name!r} has no symbol {symbol!r}") from None


def _check_capacity(shape):
    cells = 1
    for n in shape:
        cells *= int(n)
    if cells > MAX_CELLS:
        raise CapacityError(f"dense tensor of {cells} cells exceeds the cap of {MAX_CELLS}")


def _normalized(mass, what, atol=NORMALIZATION_ATOL):
    mass = np.array(mass, dtype=np.float64)
    if not np.all(np.isfinite(mass)):
        raise ValidationError(f"{what}: non-finite entries")
    if np.any(mass < 0):
        raise ValidationError(f"{what}: negative entries")
    total = mass.sum()
    if abs(total - 1.0) > atol:
        raise ValidationError(f"{what}: total mass {total!r} is not 1 (tolerance {atol})")
    return mass if total == 1.0 else mass / total


class JointDistribution:
    """Normalized probability tensor over an ordered tuple of named axes.

    Raw mass must sum to 1 within ``1e-6``; it is then renormalized.  The
    stored array is read-only.
    """

    __slots__ = ("_axes", "_mass")

    def __init__(self, axes: Sequence[Alphabet], mass, *, atol: float = NORMALIZATION_ATOL):
        axes = tuple(axes)
        if not axes:
            raise UsageError("a joint distribution needs at least one axis")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate axis names {names}")
        shape = tuple(a.size for a in axes)
        _check_capacity(shape)
        mass = np.asarray(mass, dtype=np.float64)
        if mass.shape != shape:
            raise ValidationError(f"mass has shape {mass.shape}, axes imply {shape}")
        mass = _normalized(mass, "joint distribution", atol)
        mass.setflags(write=False)
        self._axes = axes
        self._mass = mass

    @property
    def axes(self) -> tuple:
        return self._axes

    @property
    def names(self) -> tuple:
        return tuple(a.name for a in self._axes)

    @property
    def mass(self) -> np.ndarray:
        return self._mass

    @property
    def shape(self) -> tuple:
        return self._mass.shape

    def axis_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"no axis {name!r} in {self.names}") from None

    def alphabet(self, name: str) -> Alphabet:
        return self._axes[self.axis_index(name)]

    def __repr__(self):
        return f"JointDistribution(axes={self.names}, shape={self.shape})"


class Channel:
    """Row-stochastic table ``rows[i, j] = p(output=j | input=i)``.

    Rows must sum to 1 within ``1e-6`` and are renormalized on construction.
    """

    __slots__ = ("input", "output", "_rows")

    def __init__(self, input: Alphabet, output: Alphabet, rows, *, atol: float = NORMALIZATION_ATOL):
        rows = np.array(rows, dtype=np.float64)
        if rows.shape != (input.size, output.size):
            raise ValidationError(
                f"channel {input.name}->{output.name}: rows have shape {rows.shape}, "
                f"expected {(input.size, output.size)}")
        if not np.all(np.isfinite(rows)) or np.any(rows < 0):
            raise ValidationError(f"channel {input.name}->{output.name}: entries must be finite and >= 0")
        sums = rows.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > atol)
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"channel {input.name}->{output.name}: row {input.labels[i]!r} sums to {sums[i]!r}")
        rows = rows / sums[:, None]
        rows.setflags(write=False)
        self.input = input
        self.output = output
        self._rows = rows

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @classmethod
    def identity(cls, input: Alphabet, output: Alphabet | None = None) -> "Channel":
        output = output or Alphabet(input.name + "'", input.size, input.labels)
        return cls(input, output, np.eye(input.size))

    @classmethod
    def constant(cls, input: Alphabet, output: Alphabet, symbol=0) -> "Channel":
        rows = np.zeros((input.size, output.size))
        rows[:, output.index(symbol)] = 1.0
        return cls(input, output, rows)

    @classmethod
    def deterministic(cls, input: Alphabet, output: Alphabet, mapping: Sequence[int]) -> "Channel":
        mapping = np.asarray(mapping, dtype=int)
        if mapping.shape != (input.size,) or mapping.min() < 0 or mapping.max() >= output.size:
            raise ValidationError(f"deterministic map {mapping.tolist()} is not total over {input.name}")
        rows = np.zeros((input.size, output.size))
        rows[np.arange(input.size), mapping] = 1.0
        return cls(input, output, rows)

    def __repr__(self):
        return f"Channel({self.input.name}->{self.output.name}, shape={self._rows.shape})"


# ---------------------------------------------------------------------------
# array-level kernels (no validation; shared with the vectorized search code)

def entropy_bits(p: np.ndarray, axis=None) -> np.ndarray:
    """-sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(p, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=axis)


def mi_bits_2d(pab: np.ndarray) -> float:
    """Mutual information of a 2-D joint table, unclamped."""
    pa = pab.sum(axis=1, keepdims=True)
    pb = pab.sum(axis=0, keepdims=True)
    outer = pa * pb
    nz = pab > 0
    return float(np.sum(pab[nz] * np.log2(pab[nz] / outer[nz])))


def _clamp(value: float, what: str) -> float:
    if value < 0:
        if value < -NEGATIVE_ATOL:
            raise NumericalError(f"{what} = {value!r} bits is negative beyond {NEGATIVE_ATOL}")
        return 0.0
    return float(value)


# ---------------------------------------------------------------------------
# distribution-level operations

def _as_group(joint: JointDistribution, group) -> tuple:
    if isinstance(group, str):
        group = (group,)
    group = tuple(group)
    for name in group:
        joint.axis_index(name)
    return group


def marginalize(joint: JointDistribution, keep: Iterable[str]) -> JointDistribution:
    """Sum out every axis not in ``keep``; result axes follow the order of ``keep``."""
    keep = _as_group(joint, keep)
    if not keep:
        raise UsageError("marginalize needs at least one axis to keep")
    if len(set(keep)) != len(keep):
        raise UsageError(f"repeated axes in {keep}")
    if keep == joint.names:
        return joint
    idx = [joint.axis_index(n) for n in keep]
    drop = tuple(i for i in range(len(joint.axes)) if i not in idx)
    mass = joint.mass.sum(axis=drop) if drop else joint.mass
    # after summing, remaining axes are in original order
    remaining = sorted(idx)
    mass = np.transpose(mass, [remaining.index(i) for i in idx])
    return JointDistribution([joint.axes[i] for i in idx], mass)


def condition(joint: JointDistribution, axis: str, value) -> JointDistribution:
    """The renormalized slice ``p(. | axis = value)`` over the remaining axes."""
    ax = joint.axis_index(axis)
    if len(joint.axes) < 2:
        raise UsageError("cannot condition a single-axis distribution on its own axis")
    alpha = joint.axes[ax]
    i = alpha.index(value)
    slab = np.take(joint.mass, i, axis=ax)
    total = slab.sum()
    if total <= 0:
        raise UnsupportedConditionError(
            f"{alpha.name} = {alpha.labels[i]!r} has zero probability")
    rest = [a for k, a in enumerate(joint.axes) if k != ax]
    return JointDistribution(rest, slab / total)


def entropy(joint: JointDistribution, axes=None) -> float:
    """Shannon entropy in bits of a single-axis distribution, or of the marginal over ``axes``."""
    if axes is None:
        if len(joint.axes) != 1:
            raise UsageError(f"entropy needs a single-axis distribution or an explicit axis group, got {joint.names}")
        p = joint.mass
    else:
        p = marginalize(joint, axes).mass
    return max(float(entropy_bits(p)), 0.0)


def binary_entropy(p: float) -> float:
    """h2(p) in bits."""
    p = float(p)
    if not 0.0 <= p <= 1.0 or p != p:
        raise UsageError(f"binary_entropy: {p!r} is not a probability")
    return float(entropy_bits(np.array([p, 1.0 - p])))


def _pair_table(joint: JointDistribution, a, b) -> np.ndarray:
    a = _as_group(joint, a)
    b = _as_group(joint, b)
    if not a or not b:
        raise UsageError("both axis groups must be nonempty")
    if set(a) & set(b):
        raise UsageError(f"axis groups {a} and {b} overlap")
    m = marginalize(joint, a + b).mass
    na = int(np.prod(m.shape[: len(a)]))
    return m.reshape(na, -1)


def mutual_information(joint: JointDistribution, a, b) -> float:
    """I(A; B) in bits between two disjoint axis groups (names or sequences of names)."""
    return _clamp(mi_bits_2d(_pair_table(joint, a, b)), "mutual information")


def _conditional_slices(joint, a, b, c):
    a = _as_group(joint, a)
    b = _as_group(joint, b)
    if not isinstance(c, str):
        raise UsageError("the conditioning axis must be a single axis name")
    joint.axis_index(c)
    if c in a or c in b or set(a) & set(b):
        raise UsageError(f"axis groups {a}, {b} and conditioner {c!r} must be disjoint")
    sub = marginalize(joint, (c,) + a + b)
    alpha = sub.axes[0]
    na = int(np.prod([joint.alphabet(n).size for n in a]))
    for i in range(alpha.size):
        slab = sub.mass[i].reshape(na, -1)
        w = slab.sum()
        if w > 0:
            yield alpha.labels[i], float(w), slab / w


def mutual_information_by_value(joint: JointDistribution, a, b, c: str) -> dict:
    """Table ``{c label: I(A; B | C = c)}``; values of C with zero mass are omitted."""
    return {label: _clamp(mi_bits_2d(slab), f"I(A;B|{c}={label})")
            for label, _, slab in _conditional_slices(joint, a, b, c)}


def conditional_mutual_information(joint: JointDistribution, a, b, c: str) -> float:
    """I(A; B | C) = sum_c p(c) I(A; B | C = c), in bits."""
    total = 0.0
    for label, w, slab in _conditional_slices(joint, a, b, c):
        total += w * _clamp(mi_bits_2d(slab), f"I(A;B|{c}={label})")
    return _clamp(total, "conditional mutual information")


def push_through_channel(joint: JointDistribution, channel: Channel, axis: str | None = None,
                         mode: str = "replace") -> JointDistribution:
    """Compose ``joint`` with ``channel`` acting on ``axis``.

    ``replace`` swaps the axis for the channel output in place;
    ``append`` keeps it and adds the output as the last axis, so the new
    variable is conditionally independent of everything else given ``axis``.
    """
    axis = channel.input.name if axis is None else axis
    ax = joint.axis_index(axis)
    src = joint.axes[ax]
    if src.size != channel.input.size or src.labels != channel.input.labels:
        raise UsageError(f"channel input {channel.input} does not match axis {src}")
    out = channel.output
    others = [a.name for k, a in enumerate(joint.axes) if mode == "append" or k != ax]
    if out.name in others:
        raise UsageError(f"output axis name {out.name!r} already present")
    moved = np.moveaxis(joint.mass, ax, -1)
    if mode == "replace":
        mass = np.moveaxis(moved @ channel.rows, -1, ax)
        axes = list(joint.axes)
        axes[ax] = out
    elif mode == "append":
        mass = np.moveaxis(moved[..., None] * channel.rows, -2, ax)
        axes = list(joint.axes) + [out]
    else:
        raise UsageError(f"unknown mode {mode!r}; use 'replace' or 'append'")
    return JointDistribution(axes, mass)
