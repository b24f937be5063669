"""Coefficient data model for canonical systems, in both gauges.

Coefficients are piecewise constant on a strictly increasing grid
``0 = l_0 < l_1 < ... < l_N`` (the stored ``grid`` array holds the right
endpoints ``l_1..l_N``).  A disk-gauge system is the pair (measure density
``m_k >= 0``, unit-disk coefficient ``a_k``) per interval; a general-gauge
system is the triple (density ``n_k >= 0``, Hermitian ``P_k >= 0``,
anti-Hermitian ``Q_k``) with trace(j P) = trace(j Q) = 0.  Only absolutely
continuous measures (densities) are supported; any continuous measure can be
reparametrized to this class without changing observables.

Beyond the last knot a tail policy applies:

* ``constant`` -- extend the last interval's coefficients forever,
* ``periodic`` -- repeat the whole pattern with period ``l_N``,
* ``finite``   -- the system ends at ``l_N``.

JSON schema (one object per system)::

    {"grid": [l1, ...], "m": [...], "a": [[re, im], ...],
     "tail": "constant|periodic|finite"}

General-gauge variant: ``{"grid": [...], "n": [...], "P": [...], "Q": [...],
"tail": ...}`` where each P/Q entry is a 2x2 array of ``[re, im]`` pairs.
Full-line systems are ``{"left": {...}, "right": {...}}`` with the left half
stored mirrored (position l in the file means -l on the line).
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import CoefficientError, DomainError, InputError, ParseError, PreconditionError
from .mat2 import J, herm_eigs, mat2, norm2

TAIL_CONSTANT = "constant"
TAIL_PERIODIC = "periodic"
TAIL_FINITE = "finite"
_TAILS = (TAIL_CONSTANT, TAIL_PERIODIC, TAIL_FINITE)

#: slack accepted on |a| <= 1 and on Hermiticity/trace constraints.
COEFF_TOL = 1e-12


@dataclass(frozen=True)
class ABPair:
    """The Hermitian/anti-Hermitian generator pair attached to a unit-disk
    coefficient: A = [[1, -conj(a)], [-a, 1]], B = [[0, conj(a)], [-a, 0]]."""

    a: complex
    A: np.ndarray
    B: np.ndarray

    @property
    def a_plus_b(self):
        """A + B = [[1, 0], [-2a, 1]]."""
        return self.A + self.B


def ab_from_a(a, tol=COEFF_TOL):
    """Expand a unit-disk coefficient into its (A, B) generator pair."""
    a = complex(a)
    if not np.isfinite(a.real) or not np.isfinite(a.imag):
        raise InputError("coefficient a must be finite")
    if abs(a) > 1.0 + tol:
        raise CoefficientError(f"coefficient out of range: |a| = {abs(a)} > 1")
    ac = np.conj(a)
    A = mat2(1.0, -ac, -a, 1.0)
    B = mat2(0.0, ac, -a, 0.0)
    return ABPair(a, A, B)


def _as_grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise CoefficientError("grid must be a nonempty 1-d array of knots")
    if not np.all(np.isfinite(g)):
        raise CoefficientError("grid has non-finite entries")
    if g[0] <= 0.0 or np.any(np.diff(g) <= 0.0):
        raise CoefficientError("grid must be strictly increasing and start above 0")
    return g


@dataclass(frozen=True)
class ArovParameters:
    """Piecewise-constant disk-gauge parameters (m, a) with a tail policy.

    Immutable after construction; safe to share across threads.
    """

    grid: np.ndarray
    m: np.ndarray
    a: np.ndarray
    tail: str = TAIL_CONSTANT

    def __post_init__(self):
        g = _as_grid(self.grid)
        m = np.asarray(self.m, dtype=float)
        a = np.asarray(self.a, dtype=complex)
        if m.shape != g.shape or a.shape != g.shape:
            raise CoefficientError(
                f"m and a must have one entry per interval: grid has {g.size}, "
                f"m has {m.size}, a has {a.size}"
            )
        if not np.all(np.isfinite(m)):
            raise CoefficientError("density m has non-finite entries")
        bad = np.nonzero(m < 0.0)[0]
        if bad.size:
            raise CoefficientError(f"density m[{bad[0]}] = {m[bad[0]]} is negative")
        if not np.all(np.isfinite(a.view(float))):
            raise CoefficientError("coefficient a has non-finite entries")
        bad = np.nonzero(np.abs(a) > 1.0 + COEFF_TOL)[0]
        if bad.size:
            raise CoefficientError(
                f"coefficient a[{bad[0]}] has |a| = {abs(a[bad[0]])} > 1"
            )
        if self.tail not in _TAILS:
            raise CoefficientError(f"unknown tail policy {self.tail!r}")
        g.setflags(write=False)
        m.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", a)

    @property
    def n_intervals(self):
        return self.grid.size

    @property
    def length(self):
        """Right endpoint of the stored grid."""
        return float(self.grid[-1])

    @property
    def knots(self):
        """All knots including the leading 0."""
        return np.concatenate(([0.0], self.grid))

    @property
    def widths(self):
        return np.diff(self.knots)

    @property
    def mu_knots(self):
        """Cumulative measure at the knots; mu(0) = 0."""
        return np.concatenate(([0.0], np.cumsum(self.m * self.widths)))

    def mu(self, l):
        """Cumulative measure mu(l), tail-aware; continuous, nondecreasing,
        piecewise linear with mu(0) = 0."""
        l = float(l)
        if l < 0.0:
            raise DomainError(f"mu is defined for l >= 0, got {l}")
        L = self.length
        mk = self.mu_knots
        if l <= L:
            return float(np.interp(l, self.knots, mk))
        if self.tail == TAIL_FINITE:
            raise DomainError(f"l = {l} beyond finite tail at {L}")
        if self.tail == TAIL_CONSTANT:
            return float(mk[-1] + self.m[-1] * (l - L))
        q, r = divmod(l, L)
        return float(q * mk[-1] + np.interp(r, self.knots, mk))

    def l_of_mu(self, mu):
        """Leftmost l with mu(l) == mu (inverse of the distribution function)."""
        mu = float(mu)
        if mu < 0.0:
            raise DomainError("mu must be nonnegative")
        mk = self.mu_knots
        if mu <= mk[-1]:
            idx = int(np.searchsorted(mk, mu, side="left"))
            if idx == 0:
                return 0.0
            a, b = mk[idx - 1], mk[idx]
            if b == a:
                return float(self.knots[idx - 1])
            frac = (mu - a) / (b - a)
            return float(self.knots[idx - 1] + frac * self.widths[idx - 1])
        if self.tail == TAIL_FINITE or self.total_mass() <= mk[-1]:
            raise DomainError(f"mu = {mu} beyond total mass {mk[-1]}")
        if self.tail == TAIL_CONSTANT:
            return self.length + (mu - mk[-1]) / self.m[-1]
        q, r = divmod(mu - mk[-1], mk[-1]) if mk[-1] > 0 else (0.0, 0.0)
        return float((q + 1) * self.length + self.l_of_mu(r))

    def total_mass(self):
        """Total measure mass under the tail policy (may be inf)."""
        mk = float(self.mu_knots[-1])
        if self.tail == TAIL_FINITE:
            return mk
        if self.tail == TAIL_CONSTANT:
            return np.inf if self.m[-1] > 0 else mk
        return np.inf if mk > 0 else 0.0

    def coefficient_at(self, l):
        """Interval coefficient a at position l (right-continuous)."""
        a, _ = self.piece_at(l)
        return a

    def piece_at(self, l):
        """(a, m) of the interval containing l (right-continuous)."""
        l = float(l)
        if l < 0.0:
            raise DomainError("l must be nonnegative")
        L = self.length
        if l >= L:
            if self.tail == TAIL_FINITE:
                if l > L:
                    raise DomainError(f"l = {l} beyond finite tail at {L}")
                return complex(self.a[-1]), float(self.m[-1])
            if self.tail == TAIL_CONSTANT:
                return complex(self.a[-1]), float(self.m[-1])
            l = l % L
        k = int(np.searchsorted(self.grid, l, side="right"))
        k = min(k, self.n_intervals - 1)
        return complex(self.a[k]), float(self.m[k])

    def kappa_integral(self, l):
        """Closed-form integral of 2 a exp(-2 mu) d(mu) over [0, l]; exact for
        the stored piecewise-constant class."""
        l = float(l)
        if l < 0.0:
            raise DomainError("l must be nonnegative")
        total = 0j
        mu_lo = 0.0
        for a_k, d_k in self.pieces(l):
            mu_hi = mu_lo + d_k
            total += a_k * (np.exp(-2.0 * mu_lo) - np.exp(-2.0 * mu_hi))
            mu_lo = mu_hi
        return complex(total)

    def pieces(self, l_to, l_from=0.0):
        """Ordered (a, d_mu) pieces covering [l_from, l_to]; tail-aware.

        Zero-mass pieces are skipped.  Raises DomainError past a finite tail.
        """
        l_from, l_to = float(l_from), float(l_to)
        if l_from < 0.0 or l_to < l_from:
            raise DomainError(f"bad span [{l_from}, {l_to}]")
        out = []
        L = self.length
        knots = self.knots
        lo = l_from
        while lo < l_to:
            if lo >= L:
                if self.tail == TAIL_FINITE:
                    raise DomainError(f"span reaches l = {l_to} beyond finite tail at {L}")
                if self.tail == TAIL_CONSTANT:
                    d = (l_to - lo) * self.m[-1]
                    if d > 0:
                        out.append((complex(self.a[-1]), float(d)))
                    break
                # periodic: fold back into the base pattern
                shift = np.floor(lo / L) * L
                sub_to = min(l_to - shift, L)
                out.extend(self.pieces(sub_to, lo - shift))
                lo = shift + sub_to
                continue
            k = int(np.searchsorted(self.grid, lo, side="right"))
            hi = min(knots[k + 1], l_to)
            d = (hi - lo) * self.m[k]
            if d > 0:
                out.append((complex(self.a[k]), float(d)))
            lo = hi
        return out

    def to_dict(self):
        return {
            "grid": self.grid.tolist(),
            "m": self.m.tolist(),
            "a": [[z.real, z.imag] for z in self.a],
            "tail": self.tail,
        }


def constant_parameters(a, m=1.0, length=1.0, tail=TAIL_CONSTANT):
    """Single-interval system with constant coefficients."""
    return ArovParameters(
        grid=np.array([float(length)]),
        m=np.array([float(m)]),
        a=np.array([complex(a)]),
        tail=tail,
    )


def reflect(p):
    """Half-line reflection in disk gauge.

    The input describes coefficients on the negative half-line, stored
    mirrored (position l in storage means -l on the line).  The reflected
    right-half-line system keeps the grid and density and conjugates the
    coefficient.  Involution: reflect(reflect(p)) == p bit for bit.
    """
    return ArovParameters(
        grid=np.array(p.grid, copy=True),
        m=np.array(p.m, copy=True),
        a=np.conj(p.a),
        tail=p.tail,
    )


def strip_head(p, l0):
    """Remove the leading [0, l0] of the system (coefficient stripping via
    truncation of the parameters).  For periodic systems this rotates the
    pattern, preserving the period."""
    l0 = float(l0)
    if l0 < 0.0:
        raise DomainError("l0 must be nonnegative")
    if l0 == 0.0:
        return p
    L = p.length
    if l0 >= L:
        if p.tail == TAIL_FINITE:
            raise DomainError(f"cannot strip {l0} from a finite system of length {L}")
        if p.tail == TAIL_CONSTANT:
            return constant_parameters(p.a[-1], p.m[-1], length=max(L, 1.0))
        l0 = l0 % L
        if l0 == 0.0:
            return p
    if p.tail == TAIL_PERIODIC:
        # rotate: tail (l0, L] first, then the head (0, l0] moved to (L-l0, L]
        j = int(np.searchsorted(p.grid, l0, side="left"))
        tail_from = j + 1 if p.grid[j] == l0 else j
        new_grid = np.concatenate(
            (p.grid[tail_from:] - l0, L - l0 + p.grid[:j], [L])
        )
        new_m = np.concatenate((p.m[tail_from:], p.m[:j], p.m[j:j + 1]))
        new_a = np.concatenate((p.a[tail_from:], p.a[:j], p.a[j:j + 1]))
        return ArovParameters(new_grid, new_m, new_a, p.tail)
    keep = p.grid > l0 + 1e-15 * max(1.0, L)
    new_grid = p.grid[keep] - l0
    new_m = p.m[keep]
    new_a = p.a[keep]
    if new_grid.size == 0:
        new_grid = np.array([L - l0])
        new_m = p.m[-1:]
        new_a = p.a[-1:]
    return ArovParameters(new_grid, new_m, new_a, p.tail)


def reparametrize(p, g_breaks, g_values):
    """Change of length variable: new parameters with cumulative measure
    ``mu~(l) = mu(g(l))`` and coefficient ``a~(l) = a(g(l))``.

    ``g`` is given as a piecewise-linear increasing map through the points
    ``(g_breaks[i], g_values[i])`` with g(0) = 0, extended linearly beyond the
    last breakpoint.  The transfer matrix of the result at l equals the
    original's at g(l); observables do not change.  Periodic tails are not
    supported (the image of a periodic pattern under a generic map is not
    periodic).
    """
    xb = np.asarray(g_breaks, dtype=float)
    gv = np.asarray(g_values, dtype=float)
    if xb.ndim != 1 or xb.shape != gv.shape or xb.size < 2:
        raise PreconditionError("grid map needs matching break/value arrays (>= 2 points)")
    if xb[0] != 0.0 or gv[0] != 0.0:
        raise PreconditionError("grid map must satisfy g(0) = 0")
    if np.any(np.diff(xb) <= 0.0) or np.any(np.diff(gv) <= 0.0):
        raise PreconditionError("grid map must be strictly increasing")
    if p.tail == TAIL_PERIODIC:
        raise DomainError("reparametrize does not support periodic tails")

    slope_end = (gv[-1] - gv[-2]) / (xb[-1] - xb[-2])

    def g(x):
        if x <= xb[-1]:
            return float(np.interp(x, xb, gv))
        return float(gv[-1] + slope_end * (x - xb[-1]))

    def g_inv(y):
        if y <= gv[-1]:
            return float(np.interp(y, gv, xb))
        return float(xb[-1] + (y - gv[-1]) / slope_end)

    L_new = g_inv(p.length)
    # refine: every slope break of g and every preimage of an old knot
    breakpoints = sorted(
        {float(b) for b in xb if 0.0 < b < L_new}
        | {g_inv(k) for k in p.grid if g_inv(float(k)) < L_new}
        | {L_new}
    )
    new_grid, new_m, new_a = [], [], []
    lo = 0.0
    for hi in breakpoints:
        width = hi - lo
        if width <= 0.0:
            continue
        span = g(hi) - g(lo)
        mid_old = 0.5 * (g(hi) + g(lo))
        a_k, m_k = p.piece_at(mid_old)
        new_grid.append(hi)
        new_m.append(m_k * span / width)
        new_a.append(a_k)
        lo = hi
    return ArovParameters(np.array(new_grid), np.array(new_m), np.array(new_a), p.tail)


@dataclass(frozen=True)
class GeneralCoefficients:
    """Piecewise-constant general-gauge coefficients (n, P, Q)."""

    grid: np.ndarray
    n: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    tail: str = TAIL_FINITE

    def __post_init__(self):
        g = _as_grid(self.grid)
        n = np.asarray(self.n, dtype=float)
        P = np.asarray(self.P, dtype=complex)
        Q = np.asarray(self.Q, dtype=complex)
        if n.shape != g.shape:
            raise CoefficientError("n must have one entry per interval")
        if P.shape != (g.size, 2, 2) or Q.shape != (g.size, 2, 2):
            raise CoefficientError("P and Q must be stacks of 2x2 matrices, one per interval")
        if self.tail not in _TAILS:
            raise CoefficientError(f"unknown tail policy {self.tail!r}")
        for arr in (g, n, P, Q):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def n_intervals(self):
        return self.grid.size

    @property
    def length(self):
        return float(self.grid[-1])

    @property
    def knots(self):
        return np.concatenate(([0.0], self.grid))

    @property
    def widths(self):
        return np.diff(self.knots)

    def to_dict(self):
        def cplx(mstack):
            return [
                [[[z.real, z.imag] for z in row] for row in mat] for mat in mstack
            ]

        return {
            "grid": self.grid.tolist(),
            "n": self.n.tolist(),
            "P": cplx(self.P),
            "Q": cplx(self.Q),
            "tail": self.tail,
        }


def validate_general(c, tol=1e-10):
    """Check every general-gauge invariant; return the input on success.

    Violations raise CoefficientError naming the first failed constraint:
    n >= 0, P Hermitian positive semidefinite, Q anti-Hermitian,
    trace(j P) = trace(j Q) = 0.
    """
    bad = np.nonzero(c.n < 0.0)[0]
    if bad.size:
        raise CoefficientError(f"n[{bad[0]}] = {c.n[bad[0]]} is negative")
    for k in range(c.n_intervals):
        P, Q = c.P[k], c.Q[k]
        if not np.all(np.isfinite(P.view(float))) or not np.all(np.isfinite(Q.view(float))):
            raise CoefficientError(f"non-finite P/Q at interval {k}")
        scale = max(1.0, norm2(P))
        if norm2(P - P.conj().T) > tol * scale:
            raise CoefficientError(f"P[{k}] not Hermitian")
        lo, _ = herm_eigs(0.5 * (P + P.conj().T))
        if lo < -tol * scale:
            raise CoefficientError(f"P[{k}] not positive semidefinite (eig {lo})")
        if norm2(Q + Q.conj().T) > tol * max(1.0, norm2(Q)):
            raise CoefficientError(f"Q[{k}] not anti-Hermitian")
        if abs(np.trace(J @ P)) > tol * scale:
            raise CoefficientError(f"trace(j P[{k}]) = {np.trace(J @ P)} nonzero")
        if abs(np.trace(J @ Q)) > tol * max(1.0, norm2(Q)):
            raise CoefficientError(f"trace(j Q[{k}]) = {np.trace(J @ Q)} nonzero")
    return c


def dirac_coefficients(length=1.0, n_intervals=1, tail=TAIL_FINITE):
    """P = I, Q = 0, nu = Lebesgue: the classical Dirac form."""
    grid = np.linspace(0.0, float(length), n_intervals + 1)[1:]
    P = np.broadcast_to(np.eye(2, dtype=complex), (n_intervals, 2, 2)).copy()
    Q = np.zeros((n_intervals, 2, 2), dtype=complex)
    return GeneralCoefficients(grid, np.ones(n_intervals), P, Q, tail)


def schroedinger_coefficients(q, grid, tail=TAIL_FINITE):
    """Half-line Schroedinger form with piecewise-constant potential q:
    P = [[1,1],[1,1]]/2 and Q = (i/2) [[q-1, q+1], [q+1, q-1]]."""
    grid = _as_grid(grid)
    q = np.broadcast_to(np.asarray(q, dtype=float), grid.shape)
    n = grid.size
    P = np.empty((n, 2, 2), dtype=complex)
    Q = np.empty((n, 2, 2), dtype=complex)
    P[:] = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
    for k, qk in enumerate(q):
        Q[k] = 0.5j * np.array([[qk - 1.0, qk + 1.0], [qk + 1.0, qk - 1.0]])
    return GeneralCoefficients(grid, np.ones(n), P, Q, tail)


# ---------------------------------------------------------------------------
# JSON input/output


def _parse_complex_list(values, key):
    out = []
    for i, v in enumerate(values):
        if isinstance(v, (int, float)):
            out.append(complex(v))
        elif isinstance(v, (list, tuple)) and len(v) == 2:
            out.append(complex(float(v[0]), float(v[1])))
        else:
            raise ParseError(f"{key}[{i}]: expected number or [re, im] pair, got {v!r}")
    return np.array(out, dtype=complex)


def _parse_matrix_stack(values, key):
    try:
        arr = np.asarray(
            [[[complex(float(e[0]), float(e[1])) if isinstance(e, (list, tuple))
               else complex(e) for e in row] for row in m] for m in values],
            dtype=complex,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{key}: expected a list of 2x2 matrices of [re, im] pairs ({exc})")
    if arr.ndim != 3 or arr.shape[1:] != (2, 2):
        raise ParseError(f"{key}: expected a list of 2x2 matrices, got shape {arr.shape}")
    return arr


def parameters_from_dict(d):
    """Build an ArovParameters or GeneralCoefficients from a parsed JSON dict."""
    if not isinstance(d, dict):
        raise ParseError(f"coefficient object must be a JSON object, got {type(d).__name__}")
    missing = {"grid"} - d.keys()
    if missing:
        raise ParseError(f"missing key {missing.pop()!r} in coefficient object")
    tail = d.get("tail", TAIL_CONSTANT)
    if "a" in d or "m" in d:
        for key in ("m", "a"):
            if key not in d:
                raise ParseError(f"missing key {key!r} in disk-gauge coefficient object")
        try:
            return ArovParameters(
                np.asarray(d["grid"], dtype=float),
                np.asarray(d["m"], dtype=float),
                _parse_complex_list(d["a"], "a"),
                tail,
            )
        except CoefficientError:
            raise
    if "P" in d or "Q" in d or "n" in d:
        for key in ("n", "P", "Q"):
            if key not in d:
                raise ParseError(f"missing key {key!r} in general-gauge coefficient object")
        c = GeneralCoefficients(
            np.asarray(d["grid"], dtype=float),
            np.asarray(d["n"], dtype=float),
            _parse_matrix_stack(d["P"], "P"),
            _parse_matrix_stack(d["Q"], "Q"),
            d.get("tail", TAIL_FINITE),
        )
        return validate_general(c)
    raise ParseError("coefficient object has neither (m, a) nor (n, P, Q) keys")


def load_parameters(path):
    """Parse a coefficient file.  Returns ArovParameters, GeneralCoefficients
    or, for full-line files, a (left, right) tuple."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if isinstance(data, dict) and ("left" in data or "right" in data):
        for key in ("left", "right"):
            if key not in data:
                raise ParseError(f"full-line file needs both halves, missing {key!r}")
        return parameters_from_dict(data["left"]), parameters_from_dict(data["right"])
    return parameters_from_dict(data)


def save_parameters(obj, path):
    if isinstance(obj, tuple):
        payload = {"left": obj[0].to_dict(), "right": obj[1].to_dict()}
    else:
        payload = obj.to_dict()
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
