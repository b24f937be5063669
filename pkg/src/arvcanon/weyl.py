"""Weyl-disk geometry and the half-line Schur functions.

Every j-contractive unit-determinant matrix T maps the closed unit disk to a
disk: normalize T to lower-triangular form [[lam, 0], [h, 1/lam]] with the
SU(1,1) factor; the image disk has center -h/lam and radius lam^(-2), and its
diameter equals 2 / (|T11|^2 - |T12|^2) directly in terms of T.  Along a
j-monotonic family the disks are nested, and in the limit-point case they
shrink to the Schur function value s_plus(z).  Disks are stored as
center/radius (never as quadratic forms) so nesting checks stay O(1).
Evaluations at distinct spectral points are independent and can run on any
number of threads; coefficient data is only ever read.
"""

from dataclasses import dataclass

import numpy as np

from . import coefficients as coeff
from . import propagate as prop
from .errors import (BudgetError, DegenerateActionError, InconsistencyError,
                     PreconditionError)
from .mat2 import DET_TOL, as_mat2, det2, j_defect, mobius_right

LIMIT_POINT = "limit_point"
LIMIT_CIRCLE = "limit_circle"

#: default disk-shrinkage target for Schur evaluation.
SCHUR_TOL = 1e-9

#: slack allowed when asserting monotone nesting of successive disks.
NESTING_SLACK = 1e-10


@dataclass(frozen=True)
class Disk:
    """Closed disk inside the closed unit disk."""

    center: complex
    radius: float

    def contains(self, w, slack=0.0):
        return abs(complex(w) - self.center) <= self.radius + slack

    def nested_in(self, other, slack=NESTING_SLACK):
        """Whether self is contained in other, up to slack."""
        return abs(self.center - other.center) <= other.radius - self.radius + slack


def _disk_from_scaled(m, logc):
    """Disk of the true matrix exp(logc) * m with unit determinant.

    Scale invariance of the defining quadratic form makes the center
    computable from m alone; the radius needs the scale and is formed in the
    log domain so it cleanly underflows to 0 rather than overflowing.
    """
    a, b = m[0, 0], m[0, 1]
    lam2 = abs(a) ** 2 - abs(b) ** 2
    if lam2 <= 0.0:
        raise PreconditionError("matrix is not j-contractive (|T11| <= |T12|)")
    lam = np.sqrt(lam2)
    # first column of T U for the normalizer U built from (a, b)
    h = (m[1, 0] * np.conj(a) - m[1, 1] * np.conj(b)) / lam
    center = complex(-h / lam)
    log_r = -2.0 * logc - np.log(lam2)
    radius = float(np.exp(log_r)) if log_r < 700.0 else np.inf
    return Disk(center, radius)


def weyl_disk(t, assume_contractive=False, det_tol=DET_TOL, class_tol=1e-10):
    """Weyl disk of a j-contractive matrix with det T = 1."""
    t = as_mat2(t, "T")
    if not assume_contractive:
        if abs(det2(t) - 1.0) > det_tol:
            raise PreconditionError(f"weyl_disk needs det T = 1, got {det2(t)}")
        _, cls = j_defect(t, class_tol)
        if not cls.is_contractive:
            raise PreconditionError(
                f"weyl_disk needs a j-contractive matrix, got {cls.kind.value}"
            )
    return _disk_from_scaled(t, 0.0)


def diameter_direct(t):
    """Diameter formula 2 / (|T11|^2 - |T12|^2), straight from T (no
    normalization); agrees with 2 * radius of weyl_disk(T)."""
    denom = abs(t[0, 0]) ** 2 - abs(t[0, 1]) ** 2
    if denom <= 0.0:
        raise PreconditionError("matrix is not j-contractive (|T11| <= |T12|)")
    return 2.0 / denom


def weyl_disk_at(system, z, l):
    """Weyl disk of a coefficient system at (z, l), via scaled propagation so
    deep/large-|z| disks neither overflow nor lose their center."""
    z = complex(z)
    if z.imag <= 0.0:
        raise PreconditionError(f"Weyl disks need Im z > 0, got z = {z}")
    if isinstance(system, coeff.ArovParameters):
        m, c = prop.transfer_scaled(z, system, l)
    elif isinstance(system, coeff.GeneralCoefficients):
        m, c = prop.transfer_general_scaled(z, system, l)
    else:
        raise PreconditionError(
            f"unsupported coefficient object {type(system).__name__}"
        )
    return _disk_from_scaled(m, c)


def classify_limit(p):
    """Limit point iff the total measure mass under the tail policy is
    infinite; finite tails and zero tail density give limit circle."""
    return LIMIT_POINT if np.isinf(p.total_mass()) else LIMIT_CIRCLE


@dataclass(frozen=True)
class SchurValue:
    """Schur-function sample with the residual disk radius that certified it
    and the length at which the iteration stopped."""

    value: complex
    residual_radius: float
    l_stop: float


def _unimodular_constant(p):
    """The degenerate single-coefficient case: constant a with |a| = 1 makes
    s_plus identically that constant."""
    a0 = p.a[0]
    if abs(abs(a0) - 1.0) > 1e-14:
        return None
    if not np.all(np.abs(p.a - a0) <= 1e-14):
        return None
    if p.tail == coeff.TAIL_FINITE:
        return None
    return complex(a0)


def schur_plus(z, p, tol=SCHUR_TOL, l_max=None):
    """Half-line Schur function by Weyl-disk shrinkage.

    Doubles l from 1, computing the disk of the (scaled) transfer matrix,
    until the radius drops below tol; monotone nesting is asserted at every
    step.  Needs the limit-point case and Im z > 0.  On budget exhaustion a
    BudgetError carries the last disk.
    """
    z = complex(z)
    if z.imag <= 0.0:
        raise PreconditionError(f"schur_plus needs Im z > 0, got z = {z}")
    if classify_limit(p) != LIMIT_POINT:
        raise PreconditionError("schur_plus needs the limit-point case")
    shortcut = _unimodular_constant(p)
    if shortcut is not None:
        return SchurValue(shortcut, 0.0, 0.0)
    if l_max is None:
        l_max = 1e4 / z.imag
    l = min(1.0, l_max)
    prev = None
    while True:
        m, c = prop.transfer_scaled(z, p, l)
        disk = _disk_from_scaled(m, c)
        if prev is not None and not disk.nested_in(prev):
            raise InconsistencyError(
                f"Weyl disks failed to nest at l = {l}: "
                f"|dc| = {abs(disk.center - prev.center):.3e}, "
                f"r_prev - r = {prev.radius - disk.radius:.3e}"
            )
        if disk.radius < tol:
            return SchurValue(disk.center, disk.radius, l)
        if l >= l_max:
            raise BudgetError(
                f"Weyl disks did not shrink below {tol} by l = {l} "
                f"(radius {disk.radius:.3e})",
                last_disk=disk,
                l_stop=l,
            )
        prev = disk
        l = min(2.0 * l, l_max)


def schur_stripped(s, t):
    """Schur value after stripping by the transfer matrix t: the Moebius
    image of s under the right action of t."""
    image = mobius_right(complex(s), t)
    if image.at_infinity:
        raise DegenerateActionError(
            "stripped Schur value at projective infinity (|s| = 1 boundary collision)"
        )
    return image.as_complex()


def mobius_factor(z):
    """The reflection weight v(z) = (z - i) / (z + i)."""
    z = complex(z)
    return (z - 1j) / (z + 1j)


def schur_minus(z, p_left, tol=SCHUR_TOL, l_max=None):
    """Left half-line Schur function s_minus(z) = v(z) * s_plus of the
    reflected system; vanishes at z = i by construction."""
    value = schur_plus(z, coeff.reflect(p_left), tol=tol, l_max=l_max)
    v = mobius_factor(z)
    return SchurValue(v * value.value, abs(v) * value.residual_radius, value.l_stop)


def herglotz_from_schur(s):
    """Cayley transform m = i (1 + s) / (1 - s); maps the closed unit disk
    onto the closed upper half-plane, with a pole (projective infinity) at
    s = 1."""
    s = complex(s)
    if s == 1.0:
        raise DegenerateActionError("Herglotz transform has a pole at s = 1")
    return 1j * (1.0 + s) / (1.0 - s)
