"""Transfer-matrix propagation, gauge conversion, and parameter recovery.

The evolution is ``dM/dmu = M G`` with a generator that is constant on each
coefficient interval and trace free, so the interval propagator has the exact
closed form

    exp(G d) = cosh(x) I + d * sinhc(x) G,    x^2 = -det(G) d^2,

where ``sinhc(x) = sinh(x)/x``.  This is both faster than generic stepping
and exactly determinant preserving (det exp = cosh^2 - sinh^2 = 1), which is
why no ODE integrator appears anywhere in the propagation path.  For the
disk-gauge generator ``G = (i z A - B) j`` the square of the growth rate is
``-det G = |a|^2 - z^2 (1 - |a|^2)``.

Entries grow like exp(Re(x)); for large |z| or long systems the propagators
are accumulated in scaled form ``exp(c) M`` with a real log-scale ``c`` and a
max-entry-normalized ``M``, so nothing overflows before 10^308 even at
y * sigma of several thousand.  ``transfer_scaled`` is the primitive;
``transfer`` materializes it and refuses to overflow silently.

Propagation over distinct spectral points is embarrassingly parallel: all
coefficient data is read-only and every (z, l) output cell is independent;
only the within-z prefix products are ordered.
"""

from dataclasses import dataclass

import numpy as np

from . import coefficients as coeff
from .errors import DomainError, GaugeError, InconsistencyError, InputError
from .mat2 import (J, JKind, adjugate, det2, identity, j_defect, norm2,
                   su11_normalizer)

GAUGE_AROV = "arov"
GAUGE_PDB = "pdb"
GAUGE_RAW = "raw"

#: |x| below which sinh(x)/x switches to its Taylor polynomial.
_SINHC_SWITCH = 1e-6

#: |Re x| above which interval propagators are built pre-scaled.
_SCALE_SWITCH = 30.0

_RENORM_HI = 1e30
_RENORM_LO = 1e-30


def generator(z, a):
    """Disk-gauge interval generator (i z A - B) j =
    [[-iz, -conj(a)(iz+1)], [a(iz-1), iz]]; trace free."""
    iz = 1j * complex(z)
    ac = np.conj(a)
    return np.array([[-iz, -ac * (iz + 1.0)], [a * (iz - 1.0), iz]], dtype=complex)


def general_generator(z, P, Q):
    """General-gauge interval generator (i z P - Q) j; trace free because
    trace(j P) = trace(j Q) = 0."""
    return (1j * complex(z) * P - Q) @ J


def _sinhc(x):
    """sinh(x)/x, even, with a Taylor branch keeping relative error far below
    double round-off for |x| < 1e-6."""
    if abs(x) < _SINHC_SWITCH:
        x2 = x * x
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0))
    return np.sinh(x) / x


def expm_tracefree(g, d):
    """exp(g * d) for trace-free 2x2 g, closed form.  Overflows for
    Re(x) beyond ~700; use expm_tracefree_scaled past that."""
    rho = np.sqrt(complex(-det2(g)))
    x = rho * d
    return np.cosh(x) * identity() + (d * _sinhc(x)) * g


def expm_tracefree_scaled(g, d):
    """(M, c) with exp(g * d) = exp(c) * M, c real, entries of M order one."""
    rho = np.sqrt(complex(-det2(g)))
    x = rho * d
    c = abs(x.real)
    if c < _SCALE_SWITCH:
        return expm_tracefree(g, d), 0.0
    # cosh/sinh with exp(|Re x|) factored out; both remainders are bounded by 1
    ep = np.exp(x - c)
    em = np.exp(-x - c)
    ch = 0.5 * (ep + em)
    sh = 0.5 * (ep - em)
    m = ch * identity() + (sh / rho) * g
    return m, c


def _renorm(m, c):
    s = float(np.max(np.abs(m)))
    if s > _RENORM_HI or (0.0 < s < _RENORM_LO):
        return m / s, c + np.log(s)
    return m, c


def _matpow_scaled(m, c, k):
    """(exp(c) m)^k in scaled form, by binary exponentiation."""
    r, cr = identity(), 0.0
    base, cb = m, c
    while k > 0:
        if k & 1:
            r, cr = _renorm(r @ base, cr + cb)
        k >>= 1
        if k:
            base, cb = _renorm(base @ base, 2.0 * cb)
    return r, cr


def propagate_constant(z, a, dmu):
    """Propagator of a constant-coefficient piece of measure mass dmu."""
    a = complex(a)
    if abs(a) > 1.0 + coeff.COEFF_TOL:
        raise InputError(f"|a| = {abs(a)} > 1")
    dmu = float(dmu)
    if dmu < 0.0:
        raise InputError("dmu must be nonnegative")
    return expm_tracefree(generator(z, a), dmu)


def _scaled_product(pieces_zg):
    m, c = identity(), 0.0
    for g, d in pieces_zg:
        mk, ck = expm_tracefree_scaled(g, d)
        m, c = _renorm(m @ mk, c + ck)
    return m, c


def transfer_scaled(z, p, l):
    """Scaled transfer matrix of a disk-gauge system: (M, c) with the true
    value exp(c) * M.  Handles constant and periodic tails in O(log) factor
    multiplications past the stored grid."""
    l = float(l)
    if l < 0.0:
        raise DomainError("l must be nonnegative")
    L = p.length
    head = min(l, L)
    m, c = _scaled_product((generator(z, a), d) for a, d in p.pieces(head))
    if l > L:
        if p.tail == coeff.TAIL_FINITE:
            raise DomainError(f"l = {l} beyond finite tail at {L}")
        if p.tail == coeff.TAIL_CONSTANT:
            dmu = p.m[-1] * (l - L)
            mk, ck = expm_tracefree_scaled(generator(z, p.a[-1]), dmu)
            m, c = _renorm(m @ mk, c + ck)
        else:
            q, r = divmod(l - L, L)
            if q > 0:
                pat, cpat = _scaled_product(
                    (generator(z, a), d) for a, d in p.pieces(L)
                )
                mq, cq = _matpow_scaled(pat, cpat, int(q))
                m, c = _renorm(m @ mq, c + cq)
            if r > 0:
                mr, cr = _scaled_product(
                    (generator(z, a), d) for a, d in p.pieces(r)
                )
                m, c = _renorm(m @ mr, c + cr)
    return m, c


def _materialize(m, c, what):
    if c > 700.0:
        raise InputError(
            f"{what}: entries reach exp({c:.1f}); use the scaled interface"
        )
    return np.exp(c) * m


def transfer(z, p, l):
    """Transfer matrix at spectral point z and length l.

    Ordered product of closed-form interval propagators; exact for the stored
    piecewise-constant coefficients, including a partial last interval.
    """
    m, c = transfer_scaled(z, p, l)
    return _materialize(m, c, "transfer")


def transfer_between(z, p, l_from, l_to):
    """Stripped segment 𝒜(z, l_from)^(-1) 𝒜(z, l_to), computed directly as
    the product over [l_from, l_to] (better conditioned than inverting)."""
    m, c = _scaled_product(
        (generator(z, a), d) for a, d in p.pieces(l_to, l_from)
    )
    return _materialize(m, c, "transfer_between")


def transfer_general_scaled(z, c_, t):
    """Scaled transfer matrix of a general-gauge system."""
    t = float(t)
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    L = c_.length
    knots = c_.knots
    pieces = []
    for k in range(c_.n_intervals):
        if knots[k] >= t:
            break
        w = min(knots[k + 1], t) - knots[k]
        d = w * c_.n[k]
        if d > 0:
            pieces.append((general_generator(z, c_.P[k], c_.Q[k]), d))
    m, c = _scaled_product(pieces)
    if t > L:
        if c_.tail == coeff.TAIL_FINITE:
            raise DomainError(f"t = {t} beyond finite tail at {L}")
        if c_.tail == coeff.TAIL_CONSTANT:
            d = c_.n[-1] * (t - L)
            mk, ck = expm_tracefree_scaled(
                general_generator(z, c_.P[-1], c_.Q[-1]), d
            )
            m, c = _renorm(m @ mk, c + ck)
        else:
            raise DomainError("periodic tails not supported for general coefficients")
    return m, c


def transfer_general(z, c_, t):
    """Transfer matrix of a validated general-gauge system at (z, t)."""
    m, c = transfer_general_scaled(z, c_, t)
    return _materialize(m, c, "transfer_general")


# ---------------------------------------------------------------------------
# Families over (z, l) grids


@dataclass
class TransferFamily:
    """Sampled transfer matrices over a spectral grid and a length grid.

    values[i, k] is the matrix at (zs[i], ls[k]); gauge is one of
    "arov", "pdb", "raw".
    """

    zs: np.ndarray
    ls: np.ndarray
    values: np.ndarray
    gauge: str = GAUGE_RAW

    def __post_init__(self):
        self.zs = np.asarray(self.zs, dtype=complex).ravel()
        self.ls = np.asarray(self.ls, dtype=float).ravel()
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.zs.size, self.ls.size, 2, 2):
            raise InputError(
                f"family values shaped {self.values.shape}, expected "
                f"({self.zs.size}, {self.ls.size}, 2, 2)"
            )
        if np.any(np.diff(self.ls) < 0):
            raise InputError("family length grid must be nondecreasing")

    def z_index(self, z, tol=1e-12):
        hits = np.nonzero(np.abs(self.zs - complex(z)) <= tol)[0]
        if hits.size == 0:
            raise InputError(f"family has no spectral point z = {z}")
        return int(hits[0])

    def det_errors(self):
        d = self.values[..., 0, 0] * self.values[..., 1, 1] - \
            self.values[..., 0, 1] * self.values[..., 1, 0]
        return np.abs(d - 1.0)

    def validate(self, det_tol=1e-10, class_tol=1e-10):
        """Check the structural invariants; raises on the first violation.

        Identity at l = 0 (when present), unit determinants, j-contractive
        stripped segments for Im z > 0 (j-unitary on the real axis), and the
        triangular z = i structure when tagged "arov".
        """
        if self.ls.size and self.ls[0] == 0.0:
            for i, z in enumerate(self.zs):
                if norm2(self.values[i, 0] - np.eye(2)) > det_tol:
                    raise GaugeError(f"family value at (z={z}, l=0) is not the identity")
        worst_det = float(np.max(self.det_errors())) if self.values.size else 0.0
        if worst_det > det_tol:
            raise InconsistencyError(f"max |det - 1| = {worst_det} exceeds {det_tol}")
        for i, z in enumerate(self.zs):
            if complex(z).imag < 0:
                continue
            for k in range(self.ls.size - 1):
                stripped = adjugate(self.values[i, k]) @ self.values[i, k + 1]
                _, cls = j_defect(stripped, class_tol)
                if complex(z).imag == 0:
                    good = cls.kind is JKind.UNITARY
                else:
                    good = cls.is_contractive
                if not good:
                    raise InconsistencyError(
                        f"stripped segment at (z={z}, l={self.ls[k]}->{self.ls[k+1]}) "
                        f"is {cls.kind.value}, family is not j-monotonic"
                    )
        if self.gauge == GAUGE_AROV:
            iz = self.z_index(1j)
            for k, l in enumerate(self.ls):
                t = self.values[iz, k]
                scale = max(1.0, norm2(t))
                if abs(t[0, 1]) > det_tol * scale or t[0, 0].real <= 0 or t[1, 1].real <= 0:
                    raise GaugeError(
                        f"value at (z=i, l={l}) violates the claimed triangular structure"
                    )
        return self


def transfer_prefix(z, p, ls):
    """Transfer matrices at an ascending list of lengths, composed
    incrementally (one pass over the coefficient intervals)."""
    ls = np.asarray(ls, dtype=float)
    out = np.empty((ls.size, 2, 2), dtype=complex)
    m, c = identity(), 0.0
    prev = 0.0
    for k, l in enumerate(ls):
        if l < prev:
            raise InputError("length grid must be ascending")
        if l > prev:
            seg, cs = _scaled_product(
                (generator(z, a), d) for a, d in p.pieces(l, prev)
            )
            m, c = _renorm(m @ seg, c + cs)
            prev = l
        out[k] = _materialize(m, c, "transfer_prefix")
    return out


def transfer_family(system, zs, ls):
    """Build a TransferFamily from disk-gauge or general-gauge coefficients."""
    zs = np.asarray(zs, dtype=complex).ravel()
    ls = np.sort(np.asarray(ls, dtype=float).ravel())
    values = np.empty((zs.size, ls.size, 2, 2), dtype=complex)
    if isinstance(system, coeff.ArovParameters):
        for i, z in enumerate(zs):
            values[i] = transfer_prefix(z, p=system, ls=ls)
        tag = GAUGE_AROV
    elif isinstance(system, coeff.GeneralCoefficients):
        for i, z in enumerate(zs):
            for k, l in enumerate(ls):
                values[i, k] = transfer_general(z, system, l)
        tag = GAUGE_PDB if np.all(np.abs(system.Q) == 0.0) else GAUGE_RAW
    else:
        raise InputError(f"unsupported coefficient object {type(system).__name__}")
    return TransferFamily(zs, ls, values, tag)


def to_arov_gauge(f, det_tol=1e-10, class_tol=1e-10):
    """Gauge the family so its z = i column is lower triangular with positive
    diagonal.  Returns the regauged family and the SU(1,1) factors U(l_k).
    Weyl disks are unaffected."""
    iz = f.z_index(1j)
    us = np.empty((f.ls.size, 2, 2), dtype=complex)
    values = np.empty_like(f.values)
    for k in range(f.ls.size):
        u = su11_normalizer(f.values[iz, k], det_tol=det_tol, class_tol=class_tol)
        us[k] = u
        values[:, k] = f.values[:, k] @ u
    return TransferFamily(f.zs, f.ls, values, GAUGE_AROV), us


def to_pdb_gauge(f):
    """Gauge the family so its z = 0 column is the identity."""
    iz = f.z_index(0j)
    values = np.empty_like(f.values)
    for k in range(f.ls.size):
        t0 = f.values[iz, k]
        d = det2(t0)
        if d == 0:
            raise InputError("singular z = 0 value; family is corrupt")
        v = adjugate(t0) / d
        values[:, k] = f.values[:, k] @ v
    return TransferFamily(f.zs, f.ls, values, GAUGE_PDB)


@dataclass
class RecoveryResult:
    """Parameters recovered from an Arov-gauge family, with the distribution
    function and disk-center samples that produced them."""

    params: coeff.ArovParameters
    mu: np.ndarray
    kappa: np.ndarray
    zero_mass: np.ndarray  # interval indices that carried no measure


def recover_parameters(f, tol=1e-8, lower_tol=1e-12):
    """Read (m_k, a_k) back off an Arov-gauge family.

    mu(l_k) = log A11(i, l_k) and kappa(l_k) = -A21/A11; the per-interval
    coefficient is the interval-integrated quotient
    a_k = (kappa_{k+1} - kappa_k) / (exp(-2 mu_k) - exp(-2 mu_{k+1})),
    which is exact for piecewise-constant coefficients and robust to grid
    nonuniformity.  Intervals with zero measure get a = 0 and are flagged.
    """
    if f.gauge != GAUGE_AROV:
        raise GaugeError(f"recovery needs an Arov-tagged family, got {f.gauge!r}")
    if f.ls[0] != 0.0:
        raise InputError("recovery needs the family to start at l = 0")
    iz = f.z_index(1j)
    col = f.values[iz]
    nl = f.ls.size
    mu = np.empty(nl)
    kappa = np.empty(nl, dtype=complex)
    for k in range(nl):
        t = col[k]
        scale = max(1.0, norm2(t))
        if abs(t[0, 1]) > lower_tol * scale:
            raise GaugeError(
                f"value at z=i, l={f.ls[k]} is not lower triangular "
                f"(|A12| = {abs(t[0, 1])})"
            )
        a11 = t[0, 0]
        if a11.real <= 0.0 or abs(a11.imag) > lower_tol * scale:
            raise GaugeError(
                f"value at z=i, l={f.ls[k]} has nonpositive A11 = {a11}"
            )
        mu[k] = np.log(a11.real)
        kappa[k] = -t[1, 0] / a11
    dmu = np.diff(mu)
    dl = np.diff(f.ls)
    if np.any(dl <= 0.0):
        raise InputError("recovery needs strictly increasing lengths")
    weights = np.exp(-2.0 * mu[:-1]) - np.exp(-2.0 * mu[1:])
    dk = np.diff(kappa)
    a = np.zeros(nl - 1, dtype=complex)
    zero = weights <= 0.0
    live = ~zero
    a[live] = dk[live] / weights[live]
    bad = np.nonzero(np.abs(a) > 1.0 + tol)[0]
    if bad.size:
        raise InconsistencyError(
            f"recovered |a[{bad[0]}]| = {abs(a[bad[0]])} > 1: "
            "input family was not j-monotonic"
        )
    over = np.abs(a) > 1.0  # round-off past the circle, within tol: project back
    if over.any():
        a[over] /= np.abs(a[over])
    params = coeff.ArovParameters(
        grid=f.ls[1:].copy(), m=dmu / dl, a=a, tail=coeff.TAIL_FINITE
    )
    return RecoveryResult(params, mu, kappa, np.nonzero(zero)[0])


def family_csv_rows(f):
    """Yield CSV rows (z_re, z_im, l, a11_re, a11_im, ..., a22_im, det_err)."""
    for i, z in enumerate(f.zs):
        for k, l in enumerate(f.ls):
            t = f.values[i, k]
            yield (
                z.real, z.imag, float(l),
                t[0, 0].real, t[0, 0].imag, t[0, 1].real, t[0, 1].imag,
                t[1, 0].real, t[1, 0].imag, t[1, 1].real, t[1, 1].imag,
                float(abs(det2(t) - 1.0)),
            )


FAMILY_CSV_COLUMNS = (
    "z_re", "z_im", "l",
    "a11_re", "a11_im", "a12_re", "a12_im",
    "a21_re", "a21_im", "a22_re", "a22_im",
    "det_err",
)
