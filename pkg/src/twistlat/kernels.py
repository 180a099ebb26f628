"""Hot numeric kernels: log-domain trace recursion, Farey-tree tallies, half-plane census.

Three inner loops dominate the runtime of every experiment in this package:

  * ``log_trace_descent``  -- trace of a slope from the three basis traces, in the
    log domain (traces reach e^500 and beyond, so plain floats are not an option);
  * ``tree_accumulate``    -- pruned depth-first tally over the Farey tree of slopes;
  * ``census_grid``        -- exact count of parabolic lattice elements in a metric
    ball of the upper half-plane, scanned over a primitive-pair grid.

Each kernel is a single self-contained function compiled with numba ``@njit``
when available.  Set ``TWISTLAT_BACKEND=python`` to force the uncompiled
fallbacks (identical code paths, identical results, just slower); the census
additionally has a vectorised numpy fallback.  ``benchmarks/bench_backends.py``
compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

LOG2 = math.log(2.0)

_env = os.environ.get("TWISTLAT_BACKEND", "").strip().lower()
if _env in ("python", "numpy"):
    HAVE_NUMBA = False
elif _env in ("", "numba"):
    try:
        import numba

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    raise RuntimeError(f"TWISTLAT_BACKEND must be 'numba' or 'python', got {_env!r}")


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "python"


def log_sub(la: float, lb: float) -> float:
    """log(e^la - e^lb); requires la > lb."""
    return la + math.log1p(-math.exp(lb - la))


def length_from_log_trace(lt: float) -> float:
    """Geodesic length 2*acosh(t/2) from log(t), stable for arbitrarily large t."""
    if lt < 350.0:
        return 2.0 * math.acosh(0.5 * math.exp(lt))
    return 2.0 * (lt - LOG2 + math.log1p(math.sqrt(1.0 - 4.0 * math.exp(-2.0 * lt))))


def log_trace_threshold(length: float) -> float:
    """log(2*cosh(L/2)): the trace cutoff equivalent to geodesic length <= L."""
    return 0.5 * length + math.log1p(math.exp(-length))


# ---------------------------------------------------------------------------
# slope trace in the log domain
# ---------------------------------------------------------------------------
#
# Stern-Brocot descent toward the target fraction p/q.  Runs of consecutive
# same-direction steps satisfy the three-term recursion
#     v_{j+1} = t_mul * v_j - v_{j-1}
# whose solution is v_j = A*lam^j + B*lam^-j with lam + 1/lam = t_mul, so a run
# of length k costs O(1) instead of O(k).  Short runs are iterated directly:
# cheaper and free of the (mild) cancellation in forming A.


def _log_trace_descent_impl(p, q, lx, ly, lz):
    if q == 0:
        return lx
    if p == 0:
        return ly
    if p < 0:
        # mirror basis: the (-p, q) curve on (x, y, z) is the (p, q) curve on
        # (x, y, x*y - z)
        p = -p
        d = lz - lx - ly
        if d >= 0.0:
            return math.nan  # triple too unbalanced to mirror in float logs
        lz = lx + ly + math.log1p(-math.exp(d))
    if p == 1 and q == 1:
        return lz
    pl = 0
    ql = 1
    la = ly
    pr = 1
    qr = 0
    lb = lx
    pm = 1
    qm = 1
    lm = lz
    while True:
        cm = p * qm - q * pm
        if cm == 0:
            return lm
        if cm > 0:
            step = q * pr - p * qr  # > 0
            k = (cm + step - 1) // step
            lvm1 = la
            lv0 = lm
            lmul = lb
        else:
            step = p * ql - q * pl  # > 0
            k = ((-cm) + step - 1) // step
            lvm1 = lb
            lv0 = lm
            lmul = la

        use_closed = k > 12
        l_am = 0.0
        s_a = 0
        l_bm = 0.0
        s_b = 0
        llam = 0.0
        if use_closed:
            # lam = e^{len/2} where len = 2*acosh(t_mul/2)
            if lmul < 350.0:
                llam = math.acosh(0.5 * math.exp(lmul))
            else:
                llam = lmul - LOG2 + math.log1p(
                    math.sqrt(1.0 - 4.0 * math.exp(-2.0 * lmul))
                )
            ldenom = llam + math.log1p(-math.exp(-2.0 * llam))
            u = llam + lv0
            if u > lvm1:
                l_am = u + math.log1p(-math.exp(lvm1 - u)) - ldenom
                s_a = 1
            elif u < lvm1:
                l_am = lvm1 + math.log1p(-math.exp(u - lvm1)) - ldenom
                s_a = -1
            else:
                s_a = 0
            if s_a <= 0:
                use_closed = False  # growing family must have A > 0
            else:
                # B = v0 - A
                if lv0 > l_am:
                    l_bm = lv0 + math.log1p(-math.exp(l_am - lv0))
                    s_b = 1
                elif lv0 < l_am:
                    l_bm = l_am + math.log1p(-math.exp(lv0 - l_am))
                    s_b = -1
                else:
                    s_b = 0

        if use_closed:
            lk = 0.0
            lkm1 = 0.0
            for off in range(2):
                j = k - 1 + off
                t1 = l_am + j * llam
                if s_b == 0:
                    lv = t1
                else:
                    dd = (l_bm - j * llam) - t1
                    if s_b > 0:
                        if dd <= 0.0:
                            lv = t1 + math.log1p(math.exp(dd))
                        else:
                            lv = (l_bm - j * llam) + math.log1p(math.exp(-dd))
                    else:
                        lv = t1 + math.log1p(-math.exp(dd))
                if off == 0:
                    lkm1 = lv
                else:
                    lk = lv
            lvm1 = lkm1
            lv0 = lk
        else:
            j = 0
            while j < k:
                lnew = lmul + lv0 + math.log1p(-math.exp(lvm1 - lmul - lv0))
                lvm1 = lv0
                lv0 = lnew
                j += 1

        if cm > 0:
            pl = pm + (k - 1) * pr
            ql = qm + (k - 1) * qr
            la = lvm1
            pm = pm + k * pr
            qm = qm + k * qr
            lm = lv0
        else:
            pr = pm + (k - 1) * pl
            qr = qm + (k - 1) * ql
            lb = lvm1
            pm = pm + k * pl
            qm = qm + k * ql
            lm = lv0


# ---------------------------------------------------------------------------
# pruned Farey-tree tally
# ---------------------------------------------------------------------------
#
# Walks both wedges of the Farey tree of canonical slopes.  A subtree is pruned
# once its mediant trace dominates both interval endpoints and exceeds the
# threshold: from such a node every deeper trace is strictly larger (child =
# t1*t2 - t3 with t1, t2 > 2).  Before domination sets in the walk must keep
# descending; properness of the trace function makes that region finite.
#
# modes: 0 -> count slopes with log-trace <= lthr
#        1 -> sum of floor(param / length) over those slopes (weighted curves)
#        2 -> sum of floor(exp(param - 2*log(length))) (power-truncated census)


def _tree_accumulate_impl(lx, ly, lz, lthr, mode, param, cap):
    d = lz - lx - ly
    if d >= 0.0:
        return -1  # cannot form mirror trace
    lz2 = lx + ly + math.log1p(-math.exp(d))

    total = 0
    # the two base slopes (1,0) and (0,1)
    for lt in (lx, ly):
        if lt <= lthr:
            if mode == 0:
                total += 1
            else:
                if lt < 350.0:
                    ell = 2.0 * math.acosh(0.5 * math.exp(lt))
                else:
                    ell = 2.0 * (
                        lt - LOG2 + math.log1p(math.sqrt(1.0 - 4.0 * math.exp(-2.0 * lt)))
                    )
                if mode == 1:
                    w = int(param / ell)
                    total += w if w > 1 else 1
                else:
                    w = int(math.exp(param - 2.0 * math.log(ell)))
                    total += w if w > 1 else 1

    stack = np.empty((cap, 3), np.float64)
    for wedge in range(2):
        if wedge == 0:
            stack[0, 0] = ly  # left endpoint (0,1)
            stack[0, 1] = lx  # right endpoint (1,0)
            stack[0, 2] = lz  # mediant (1,1)
        else:
            stack[0, 0] = lx  # left endpoint (-1,0) ~ (1,0)
            stack[0, 1] = ly  # right endpoint (0,1)
            stack[0, 2] = lz2  # mediant (-1,1)
        sp = 1
        while sp > 0:
            sp -= 1
            la = stack[sp, 0]
            lb = stack[sp, 1]
            lm = stack[sp, 2]
            if lm <= lthr:
                if mode == 0:
                    total += 1
                else:
                    if lm < 350.0:
                        ell = 2.0 * math.acosh(0.5 * math.exp(lm))
                    else:
                        ell = 2.0 * (
                            lm
                            - LOG2
                            + math.log1p(math.sqrt(1.0 - 4.0 * math.exp(-2.0 * lm)))
                        )
                    if mode == 1:
                        w = int(param / ell)
                        total += w if w > 1 else 1
                    else:
                        w = int(math.exp(param - 2.0 * math.log(ell)))
                        total += w if w > 1 else 1
            elif lm >= la and lm >= lb:
                continue  # dominated and over threshold: whole subtree larger
            if sp + 2 > cap:
                return -2  # stack overflow: caller retries with a larger cap
            lchild = la + lm + math.log1p(-math.exp(lb - la - lm))
            rchild = lm + lb + math.log1p(-math.exp(la - lm - lb))
            stack[sp, 0] = la
            stack[sp, 1] = lm
            stack[sp, 2] = lchild
            stack[sp + 1, 0] = lm
            stack[sp + 1, 1] = lb
            stack[sp + 1, 2] = rchild
            sp += 2
    return total


# ---------------------------------------------------------------------------
# half-plane census grid
# ---------------------------------------------------------------------------
#
# A power-n twist about the slope (p, q) moves the point z = x0 + i*y0 by the
# Teichmueller distance 0.5*acosh(1 + (n*lam)^2 / 2) where
# lam = ((p - q*x0)^2 + (q*y0)^2) / y0.  Hence displacement <= R iff
# |n|*lam <= 2*sinh(R) (R in d_T units, metric scale 1/2).  The kernel counts,
# over canonical primitive (p, q) with lam <= t_enum,
#     n_d : slopes with lam <= t_count, and
#     n_m : sum of floor(t_count / lam)  (power truncation, exact).
# Signed powers double both; the wrapper applies that.


def _census_grid_impl(x0, y0, t_count, t_enum, q_lo, q_hi):
    n_d = 0
    n_m = 0
    if q_lo == 0:
        lam = 1.0 / y0  # slope (1, 0)
        if lam <= t_count:
            n_d += 1
            w = int(t_count / lam)
            n_m += w if w > 1 else 1
        q_lo = 1
    q = q_lo
    while q <= q_hi:
        qy = q * y0
        rad2 = t_enum * y0 - qy * qy
        if rad2 >= 0.0:
            w = math.sqrt(rad2)
            plo = int(math.ceil(q * x0 - w))
            phi = int(math.floor(q * x0 + w))
            p = plo
            while p <= phi:
                a = p if p >= 0 else -p
                b = q
                while b != 0:
                    a, b = b, a % b
                if a == 1:
                    dx = p - q * x0
                    lam = (dx * dx + qy * qy) / y0
                    if lam <= t_count:
                        n_d += 1
                        m = int(t_count / lam)
                        n_m += m if m > 1 else 1
                p += 1
        q += 1
    return n_d, n_m


# plain-python fallbacks keep their own names so both backends stay importable
log_trace_descent_py = _log_trace_descent_impl
tree_accumulate_py = _tree_accumulate_impl
census_grid_py = _census_grid_impl

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    log_trace_descent_jit = _jit(_log_trace_descent_impl)
    tree_accumulate_jit = _jit(_tree_accumulate_impl)
    census_grid_jit = _jit(_census_grid_impl)
else:
    log_trace_descent_jit = None
    tree_accumulate_jit = None
    census_grid_jit = None


def census_grid_numpy(x0, y0, t_count, t_enum, q_lo, q_hi):
    """Vectorised numpy variant of the census grid (fallback backend)."""
    n_d = 0
    n_m = 0
    if q_lo == 0:
        lam = 1.0 / y0
        if lam <= t_count:
            n_d += 1
            n_m += max(1, int(t_count / lam))
        q_lo = 1
    for q in range(q_lo, q_hi + 1):
        qy = q * y0
        rad2 = t_enum * y0 - qy * qy
        if rad2 < 0.0:
            continue
        w = math.sqrt(rad2)
        plo = int(math.ceil(q * x0 - w))
        phi = int(math.floor(q * x0 + w))
        if phi < plo:
            continue
        p = np.arange(plo, phi + 1, dtype=np.int64)
        p = p[np.gcd(np.abs(p), q) == 1]
        if p.size == 0:
            continue
        dx = p.astype(np.float64) - q * x0
        lam = (dx * dx + qy * qy) / y0
        lam = lam[lam <= t_count]
        n_d += int(lam.size)
        if lam.size:
            n_m += int(np.maximum(1, (t_count / lam).astype(np.int64)).sum())
    return n_d, n_m


_INT_GUARD = 1 << 31  # descent cross-products stay inside int64 below this


def log_trace_descent(p: int, q: int, lx: float, ly: float, lz: float) -> float:
    """log-trace of the canonical slope (p, q) on basis log-traces (lx, ly, lz).

    Dispatches to the jitted kernel when the integer state provably fits in
    int64; arbitrarily large slopes take the big-int python path.
    """
    if HAVE_NUMBA and -_INT_GUARD < p < _INT_GUARD and q < _INT_GUARD:
        lt = log_trace_descent_jit(p, q, lx, ly, lz)
    else:
        lt = log_trace_descent_py(p, q, lx, ly, lz)
    if math.isnan(lt):
        raise ArithmeticError(
            "trace recursion lost the mirror trace to cancellation; "
            "the basis triple is too unbalanced for log-domain floats"
        )
    return lt


def tree_accumulate(lx: float, ly: float, lz: float, lthr: float,
                    mode: int, param: float = 0.0) -> int:
    fn = tree_accumulate_jit if HAVE_NUMBA else tree_accumulate_py
    cap = min(max(8192, int(64.0 * (lthr + 16.0))), 1 << 20)
    while True:
        total = fn(lx, ly, lz, lthr, mode, param, cap)
        if total == -1:
            raise ArithmeticError("basis triple too unbalanced for tree walk")
        if total != -2:
            return int(total)
        if cap >= 1 << 24:
            raise ArithmeticError("Farey tree walk exceeded the stack bound")
        cap *= 4


def census_grid(x0: float, y0: float, t_count: float, t_enum: float | None = None,
                q_lo: int = 0, q_hi: int | None = None) -> tuple[int, int]:
    if t_enum is None:
        t_enum = t_count
    if q_hi is None:
        q_hi = int(math.floor(math.sqrt(max(t_enum / y0, 0.0))))
    if HAVE_NUMBA:
        n_d, n_m = census_grid_jit(x0, y0, t_count, t_enum, q_lo, q_hi)
    else:
        n_d, n_m = census_grid_numpy(x0, y0, t_count, t_enum, q_lo, q_hi)
    return int(n_d), int(n_m)
