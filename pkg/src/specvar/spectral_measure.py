"""Folded spectral measures on [0, pi].

A weakly stationary sequence with symmetric spectral measure is represented
one-sided: the two symmetric atoms at +-t are stored as one folded atom at t
carrying their combined mass, so no factor-of-two ambiguity survives into any
formula.  A measure consists of

* an optional atom at the origin (``atom_at_zero``),
* finitely many atoms in (0, pi] with positive masses,
* an absolutely continuous part given by disjoint density pieces on (0, pi].

``G(x)`` denotes the cumulative mass of [0, x].  Atoms are counted when
``x >= location`` (right-continuous convention), which differs from a
left-continuous convention only at the countably many jump points and does
not affect any integral.

Measures are immutable after construction and all operations here are pure
functions, so instances are safe to share across workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, SerializationError, ValidationError
from .quadrature import integrate
from .specfun import trig_power_moments

PI = math.pi
_PI_SLACK = 1e-12  # how far beyond float pi interval bounds may stray


def _clamp_pi(x: float, what: str) -> float:
    if x > PI:
        if x > PI + _PI_SLACK:
            raise DomainError(f"{what} = {x!r} exceeds pi")
        return PI
    return x


@dataclass(frozen=True)
class PowerDensity:
    """Density ``coef * y**exponent`` on the interval (lo, hi].

    ``exponent > -1`` keeps the mass finite even when ``lo == 0``.
    """

    lo: float
    hi: float
    coef: float
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", _clamp_pi(float(self.hi), "density hi"))
        object.__setattr__(self, "coef", float(self.coef))
        object.__setattr__(self, "exponent", float(self.exponent))
        if not 0.0 <= self.lo < self.hi:
            raise DomainError(
                f"power density needs 0 <= lo < hi <= pi, got ({self.lo}, {self.hi})")
        if not self.coef >= 0.0:
            raise DomainError(f"power density coefficient must be >= 0, got {self.coef}")
        if not self.exponent > -1.0:
            raise DomainError(
                f"power density exponent must exceed -1, got {self.exponent}")

    def eval(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y > self.lo) & (y <= self.hi)
        out = np.zeros_like(y)
        out[inside] = self.coef * y[inside] ** self.exponent
        return out

    def mass_upto(self, x):
        """Integral of the density over (lo, min(x, hi)]; vectorized in x."""
        x = np.asarray(x, dtype=float)
        b = np.clip(x, self.lo, self.hi)
        q = self.exponent + 1.0
        return self.coef * (b ** q - self.lo ** q) / q

    @property
    def mass(self) -> float:
        return float(self.mass_upto(self.hi))

    def cos_transform(self, k, tol=1e-12):
        """``int cos(k y) * density(y) dy`` for an array of integers k >= 1."""
        k = np.asarray(k, dtype=float)
        p = self.exponent
        hi_m, _ = trig_power_moments(p, k * self.hi)
        if self.lo > 0.0:
            lo_m, _ = trig_power_moments(p, k * self.lo)
        else:
            lo_m = 0.0
        return self.coef * k ** (-(p + 1.0)) * (hi_m - lo_m)

    def integrate_against(self, g, points=(), tol=1e-10, max_panels=200_000):
        """``int density(y) * g(y) dy`` for smooth (piecewise) vectorized g."""
        p = self.exponent
        if self.lo == 0.0 and p != 0.0 and not p.is_integer():
            return integrate(lambda y: self.coef * g(y), 0.0, self.hi,
                             points=points, tol=tol, edge_beta=p,
                             max_panels=max_panels)[0]
        return integrate(lambda y: self.coef * y ** p * g(y), self.lo, self.hi,
                         points=points, tol=tol, max_panels=max_panels)[0]

    def robinson_part(self) -> float:
        """``int y**-2 density(y) dy``; +inf when divergent at the origin."""
        p = self.exponent
        if self.coef == 0.0:
            return 0.0
        if self.lo == 0.0 and p <= 1.0:
            return math.inf
        if p == 1.0:
            return self.coef * math.log(self.hi / self.lo)
        q = p - 1.0
        return self.coef * (self.hi ** q - self.lo ** q) / q


@dataclass(frozen=True)
class TableDensity:
    """Piecewise-linear density through (ys, vals); support (ys[0], ys[-1]]."""

    ys: tuple
    vals: tuple

    def __post_init__(self):
        ys = tuple(float(v) for v in self.ys)
        vals = tuple(float(v) for v in self.vals)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "vals", vals)
        if len(ys) < 2 or len(ys) != len(vals):
            raise DomainError("table density needs matching grids of length >= 2")
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise DomainError("table density grid must be strictly increasing")
        if ys[0] < 0.0:
            raise DomainError("table density grid must start at >= 0")
        if ys[-1] > PI + _PI_SLACK:
            raise DomainError("table density grid must end at <= pi")
        if any(v < 0.0 for v in vals):
            raise DomainError("table density values must be nonnegative")

    @property
    def lo(self) -> float:
        return self.ys[0]

    @property
    def hi(self) -> float:
        return min(self.ys[-1], PI)

    def _arrays(self):
        return np.asarray(self.ys), np.asarray(self.vals)

    def eval(self, y):
        y = np.asarray(y, dtype=float)
        ys, vals = self._arrays()
        out = np.interp(y, ys, vals)
        out[(y < ys[0]) | (y > ys[-1])] = 0.0
        return out

    def mass_upto(self, x):
        x = np.asarray(x, dtype=float)
        ys, vals = self._arrays()
        seg = 0.5 * (vals[1:] + vals[:-1]) * np.diff(ys)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        b = np.clip(x, ys[0], ys[-1])
        i = np.clip(np.searchsorted(ys, b, side="right") - 1, 0, len(ys) - 2)
        fb = np.interp(b, ys, vals)
        partial = 0.5 * (vals[i] + fb) * (b - ys[i])
        return cum[i] + partial

    @property
    def mass(self) -> float:
        return float(self.mass_upto(self.ys[-1]))

    def cos_transform(self, k, tol=1e-12):
        # exact per linear segment:
        # int (a + s*y) cos(ky) dy = [f(y) sin(ky)/k] + s (cos(kb)-cos(ka))/k^2
        k = np.asarray(k, dtype=float)
        ys, vals = self._arrays()
        out = np.zeros_like(k)
        a, b = ys[:-1], ys[1:]
        fa, fb = vals[:-1], vals[1:]
        s = (fb - fa) / (b - a)
        for i0 in range(0, len(k), 8192):
            kk = k[i0:i0 + 8192, None]
            term = (fb[None, :] * np.sin(kk * b[None, :])
                    - fa[None, :] * np.sin(kk * a[None, :])) / kk
            term += s[None, :] * (np.cos(kk * b[None, :])
                                  - np.cos(kk * a[None, :])) / kk ** 2
            out[i0:i0 + 8192] = term.sum(axis=1)
        return out

    def integrate_against(self, g, points=(), tol=1e-10, max_panels=200_000):
        pts = np.concatenate([np.asarray(points, dtype=float), np.asarray(self.ys)])
        return integrate(lambda y: self.eval(y) * g(y), self.lo, self.hi,
                         points=pts, tol=tol, max_panels=max_panels)[0]

    def robinson_part(self) -> float:
        ys, vals = self._arrays()
        total = 0.0
        for a, b, fa, fb in zip(ys[:-1], ys[1:], vals[:-1], vals[1:]):
            if a == 0.0:
                if fa == 0.0 and fb == 0.0:
                    continue
                return math.inf
            s = (fb - fa) / (b - a)
            alpha = fa - s * a
            total += alpha * (1.0 / a - 1.0 / b) + s * math.log(b / a)
        return total


@dataclass(frozen=True)
class OpaqueDensity:
    """Caller-supplied density evaluator on (lo, hi]; library use only.

    The evaluator must accept ndarray input.  Opaque pieces cannot be
    serialized and their transforms fall back to generic quadrature.
    """

    lo: float
    hi: float
    fn: Callable

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", _clamp_pi(float(self.hi), "density hi"))
        if not 0.0 <= self.lo < self.hi:
            raise DomainError(
                f"opaque density needs 0 <= lo < hi <= pi, got ({self.lo}, {self.hi})")

    def eval(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        inside = (y > self.lo) & (y <= self.hi)
        out[inside] = np.asarray(self.fn(y[inside]), dtype=float)
        return out

    def mass_upto(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            b = min(max(xi, self.lo), self.hi)
            out[i] = 0.0 if b <= self.lo else integrate(
                self.fn, self.lo, b, tol=1e-11)[0]
        return out

    @property
    def mass(self) -> float:
        return float(self.mass_upto(self.hi)[0])

    def cos_transform(self, k, tol=1e-12):
        k = np.asarray(k, dtype=float)
        out = np.empty_like(k)
        for i, kk in enumerate(k):
            zeros = np.arange(1, int(kk * (self.hi - self.lo) / math.pi) + 1)
            pts = self.lo + zeros * math.pi / kk
            out[i] = integrate(lambda y: self.fn(y) * np.cos(kk * y),
                               self.lo, self.hi, points=pts, tol=tol)[0]
        return out

    def integrate_against(self, g, points=(), tol=1e-10, max_panels=200_000):
        return integrate(lambda y: np.asarray(self.fn(y)) * g(y),
                         self.lo, self.hi, points=points, tol=tol,
                         max_panels=max_panels)[0]

    def robinson_part(self) -> float:
        # divergence at a 0 endpoint cannot be decided symbolically; adaptive
        # quadrature either converges or raises NumericError
        return integrate(lambda y: np.asarray(self.fn(y)) / y ** 2,
                         self.lo, self.hi, tol=1e-9)[0]


DensityPiece = Union[PowerDensity, TableDensity, OpaqueDensity]


@dataclass(frozen=True)
class SpectralMeasure:
    """Folded spectral measure: origin atom + atoms in (0, pi] + density."""

    atom_at_zero: float = 0.0
    atoms: tuple = ()
    density: tuple = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        a0 = float(self.atom_at_zero)
        if not (math.isfinite(a0) and a0 >= 0.0):
            raise DomainError(f"atom_at_zero must be finite and >= 0, got {a0}")
        object.__setattr__(self, "atom_at_zero", a0)

        atoms = tuple((
            _clamp_pi(float(loc), "atom location"), float(mass))
            for loc, mass in self.atoms)
        for loc, mass in atoms:
            if not loc > 0.0:
                raise DomainError(f"atom location must lie in (0, pi], got {loc}")
            if not (math.isfinite(mass) and mass > 0.0):
                raise DomainError(f"atom mass must be finite and > 0, got {mass}")
        locs = [loc for loc, _ in atoms]
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise DomainError("atom locations must be strictly increasing")
        object.__setattr__(self, "atoms", atoms)

        pieces = tuple(sorted(self.density, key=lambda p: p.lo))
        for left, right in zip(pieces, pieces[1:]):
            if right.lo < left.hi:
                raise DomainError(
                    f"density pieces overlap: ({left.lo}, {left.hi}] and "
                    f"({right.lo}, {right.hi}]")
        object.__setattr__(self, "density", pieces)

    def atom_arrays(self):
        """Atom locations and masses as float arrays (possibly empty)."""
        if not self.atoms:
            return np.empty(0), np.empty(0)
        arr = np.asarray(self.atoms, dtype=float)
        return arr[:, 0], arr[:, 1]

    @property
    def total_mass(self) -> float:
        return float(g_eval(self, PI))

    @property
    def is_atomic(self) -> bool:
        return not self.density


def g_eval(m: SpectralMeasure, x):
    """Cumulative mass G(x) of [0, x]; x may be a scalar or an array."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0) or np.any(x > PI + _PI_SLACK):
        raise DomainError("g_eval argument must lie in [0, pi]")
    x = np.minimum(x, PI)
    out = np.full_like(x, m.atom_at_zero)
    if m.atoms:
        locs, masses = m.atom_arrays()
        cum = np.concatenate([[0.0], np.cumsum(masses)])
        out += cum[np.searchsorted(locs, x, side="right")]
    for piece in m.density:
        out += piece.mass_upto(x)
    return float(out[0]) if scalar else out


def autocovariance(m: SpectralMeasure, k: int, tol: float = 1e-12) -> float:
    """Lag-k autocovariance r_k of the sequence with spectral measure m.

    Folded form: ``r_k = atom_at_zero + sum cos(k loc) mass
    + int cos(k y) density(y) dy``; in particular r_0 is the total mass.
    """
    if k != int(k) or k < 0:
        raise DomainError(f"lag must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k == 0:
        return float(g_eval(m, PI))
    total = m.atom_at_zero
    if m.atoms:
        locs, masses = m.atom_arrays()
        # extended precision: the angle rounding of k*loc at double would
        # otherwise be amplified by the weights of covariance sums
        ld_cos = np.cos(np.longdouble(k) * locs.astype(np.longdouble))
        total += float((masses.astype(np.longdouble) * ld_cos).sum())
    for piece in m.density:
        total += float(piece.cos_transform(np.array([k]), tol=tol)[0])
    return total


def autocovariance_batch(m: SpectralMeasure, n: int, tol: float = 1e-12):
    """Array of r_0 .. r_{n-1} (vectorized over lags)."""
    if n < 1:
        raise DomainError(f"batch length must be >= 1, got {n}")
    r = np.empty(n)
    r[0] = g_eval(m, PI)
    if n == 1:
        return r
    k = np.arange(1, n)
    acc = np.full(n - 1, m.atom_at_zero)
    if m.atoms:
        # extended precision for the same reason as in autocovariance()
        locs, masses = m.atom_arrays()
        ld_locs = locs.astype(np.longdouble)
        ld_masses = masses.astype(np.longdouble)
        for i0 in range(0, n - 1, 32768):
            kk = k[i0:i0 + 32768, None].astype(np.longdouble)
            block = (np.cos(kk * ld_locs[None, :])
                     * ld_masses[None, :]).sum(axis=1)
            acc[i0:i0 + 32768] += np.asarray(block, dtype=float)
    for piece in m.density:
        acc += piece.cos_transform(k, tol=tol)
    r[1:] = acc
    return r


def robinson_integral(m: SpectralMeasure) -> float:
    """``int_(0,pi] y**-2 dG(y)``, +inf when divergent.

    Finiteness of this integral is the boundedness criterion for the whole
    sequence sup_n Var(S_n); any origin atom makes it +inf.
    """
    if m.atom_at_zero > 0.0:
        return math.inf
    total = 0.0
    if m.atoms:
        locs, masses = m.atom_arrays()
        total += float((masses / locs ** 2).sum())
    for piece in m.density:
        part = piece.robinson_part()
        if math.isinf(part):
            return math.inf
        total += part
    return total


# --- JSON serialization ----------------------------------------------------

def measure_to_dict(m: SpectralMeasure) -> dict:
    """Measure as a plain dict matching the JSON schema."""
    density = []
    for piece in m.density:
        if isinstance(piece, PowerDensity):
            density.append({"type": "power", "coef": piece.coef,
                            "exp": piece.exponent, "lo": piece.lo,
                            "hi": piece.hi})
        elif isinstance(piece, TableDensity):
            density.append({"type": "table", "ys": list(piece.ys),
                            "vals": list(piece.vals)})
        else:
            raise SerializationError(
                "opaque density pieces cannot be serialized; rebuild the "
                "measure with power or table pieces")
    return {"atom_at_zero": m.atom_at_zero,
            "atoms": [{"y": loc, "mass": mass} for loc, mass in m.atoms],
            "density": density}


def _expect_number(obj, path, minimum=None, strict=False):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ValidationError("expected a number", path)
    v = float(obj)
    if not math.isfinite(v):
        raise ValidationError("expected a finite number", path)
    if minimum is not None and (v <= minimum if strict else v < minimum):
        op = ">" if strict else ">="
        raise ValidationError(f"expected a number {op} {minimum}", path)
    return v


def _check_keys(obj, allowed, path):
    if not isinstance(obj, dict):
        raise ValidationError("expected an object", path)
    for key in obj:
        if key not in allowed:
            raise ValidationError("unknown key", f"{path}.{key}" if path else key)


def measure_from_dict(d: dict) -> SpectralMeasure:
    """Build a measure from schema-shaped data, validating with key paths."""
    _check_keys(d, {"atom_at_zero", "atoms", "density"}, "")
    atom0 = _expect_number(d.get("atom_at_zero", 0.0), "atom_at_zero", 0.0)

    atoms = []
    raw_atoms = d.get("atoms", [])
    if not isinstance(raw_atoms, list):
        raise ValidationError("expected a list", "atoms")
    for i, entry in enumerate(raw_atoms):
        path = f"atoms[{i}]"
        _check_keys(entry, {"y", "mass"}, path)
        if "y" not in entry or "mass" not in entry:
            raise ValidationError("entry needs keys y and mass", path)
        y = _expect_number(entry["y"], f"{path}.y", 0.0, strict=True)
        if y > PI + _PI_SLACK:
            raise ValidationError("atom location exceeds pi", f"{path}.y")
        mass = _expect_number(entry["mass"], f"{path}.mass", 0.0, strict=True)
        atoms.append((min(y, PI), mass))
    atoms.sort()
    for (y1, _), (y2, _) in zip(atoms, atoms[1:]):
        if y1 == y2:
            raise ValidationError(f"duplicate atom location {y1}", "atoms")

    pieces = []
    raw_density = d.get("density", [])
    if not isinstance(raw_density, list):
        raise ValidationError("expected a list", "density")
    for i, entry in enumerate(raw_density):
        path = f"density[{i}]"
        if not isinstance(entry, dict) or "type" not in entry:
            raise ValidationError("density piece needs a type", path)
        kind = entry["type"]
        if kind == "power":
            _check_keys(entry, {"type", "coef", "exp", "lo", "hi"}, path)
            coef = _expect_number(entry.get("coef", 0.0), f"{path}.coef", 0.0)
            exp = _expect_number(entry.get("exp"), f"{path}.exp")
            lo = _expect_number(entry.get("lo", 0.0), f"{path}.lo", 0.0)
            hi = _expect_number(entry.get("hi", PI), f"{path}.hi")
            if hi > PI + _PI_SLACK:
                raise ValidationError("interval end exceeds pi", f"{path}.hi")
            if not exp > -1.0:
                raise ValidationError("exponent must exceed -1", f"{path}.exp")
            try:
                pieces.append(PowerDensity(lo=lo, hi=min(hi, PI), coef=coef,
                                           exponent=exp))
            except DomainError as exc:
                raise ValidationError(str(exc), path) from exc
        elif kind == "table":
            _check_keys(entry, {"type", "ys", "vals"}, path)
            ys = entry.get("ys")
            vals = entry.get("vals")
            if not isinstance(ys, list) or not isinstance(vals, list):
                raise ValidationError("table needs ys and vals lists", path)
            ys = [_expect_number(v, f"{path}.ys[{j}]") for j, v in enumerate(ys)]
            vals = [_expect_number(v, f"{path}.vals[{j}]", 0.0)
                    for j, v in enumerate(vals)]
            try:
                pieces.append(TableDensity(ys=tuple(ys), vals=tuple(vals)))
            except DomainError as exc:
                raise ValidationError(str(exc), path) from exc
        else:
            raise ValidationError(f"unknown density type {kind!r}", f"{path}.type")

    try:
        return SpectralMeasure(atom_at_zero=atom0, atoms=tuple(atoms),
                               density=tuple(pieces))
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc


def measure_to_json(m: SpectralMeasure) -> str:
    return json.dumps(measure_to_dict(m), sort_keys=True)


def measure_from_json(text: str) -> SpectralMeasure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return measure_from_dict(data)
