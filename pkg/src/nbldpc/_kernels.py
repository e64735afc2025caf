"""Hot decode loop: numba-compiled kernel with a pure-numpy fallback.

Backend selection: set ``NBLDPC_BACKEND=numpy`` to force the vectorized
numpy path, ``NBLDPC_BACKEND=numba`` to require the compiled kernel, or
leave unset (``auto``) to use numba when it imports.  Both paths implement
identical update formulas; ``benchmarks/bench_backends.py`` compares them.

Stop codes returned by the loops: 0 = iteration cap reached, 1 = the
constraint residual ||A v + e1 - rhs||^2 dropped below the tolerance,
2 = the box residual ||v - e2||^2 did.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_BACKEND = os.environ.get("NBLDPC_BACKEND", "auto").strip().lower()

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return wrap


def backend_name() -> str:
    if _ENV_BACKEND == "numpy":
        return "numpy"
    if _ENV_BACKEND == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("NBLDPC_BACKEND=numba but numba is not importable")
        return "numba"
    if _ENV_BACKEND not in ("", "auto"):
        raise RuntimeError(f"unknown NBLDPC_BACKEND value {_ENV_BACKEND!r}")
    return "numba" if HAVE_NUMBA else "numpy"


@njit(cache=True, nogil=True)
def _apply_a(v, gidx, m_ineq, n_blocks, block_len, out):
    rows = gidx.shape[0]
    half = gidx.shape[2]
    for r in range(rows):
        f1 = 0.0
        f2 = 0.0
        f3 = 0.0
        for x in range(half):
            f1 += v[gidx[r, 0, x]]
            f2 += v[gidx[r, 1, x]]
            f3 += v[gidx[r, 2, x]]
        out[4 * r] = f1 - f2 - f3
        out[4 * r + 1] = f2 - f1 - f3
        out[4 * r + 2] = f3 - f1 - f2
        out[4 * r + 3] = f1 + f2 + f3
    for i in range(n_blocks):
        s = 0.0
        base = i * block_len
        for b in range(block_len):
            s += v[base + b]
        out[m_ineq + i] = s


@njit(cache=True, nogil=True)
def _apply_at(u, gidx, m_ineq, n_blocks, block_len, out):
    for i in range(n_blocks):
        val = u[m_ineq + i]
        base = i * block_len
        for b in range(block_len):
            out[base + b] = val
    rows = gidx.shape[0]
    half = gidx.shape[2]
    for r in range(rows):
        u0 = u[4 * r]
        u1 = u[4 * r + 1]
        u2 = u[4 * r + 2]
        u3 = u[4 * r + 3]
        s1 = u0 - u1 - u2 + u3
        s2 = u1 - u0 - u2 + u3
        s3 = u2 - u0 - u1 + u3
        for x in range(half):
            out[gidx[r, 0, x]] += s1
            out[gidx[r, 1, x]] += s2
            out[gidx[r, 2, x]] += s3


@njit(cache=True, nogil=True)
def decode_loop(
    lam_term,
    rhs,
    gidx,
    m_ineq,
    n_blocks,
    block_len,
    active_m,
    cw,
    tmw,
    omg,
    smk,
    kmo,
    kap,
    rho_over_mu,
    mu_over_rho_plus_mu,
    beta,
    xi,
    t_max,
    v,
    e1,
    e2,
    p,
    z1,
    z2,
    y1s,
    y2s,
    phi,
    av,
    work_m,
):
    n = v.shape[0]
    m = rhs.shape[0]
    r1 = np.inf
    r2 = np.inf
    it = 0
    while it < t_max:
        # phi = A^T(rhs - e1 - y1/mu) + (e2 - y2/mu) + (rho/mu) p - lam_term
        for j in range(m):
            work_m[j] = rhs[j] - e1[j] - y1s[j]
        _apply_at(work_m, gidx, m_ineq, n_blocks, block_len, phi)
        for l in range(n):
            phi[l] += e2[l] - y2s[l] + rho_over_mu * p[l] - lam_term[l]

        # closed-form block solve for v
        for i in range(n_blocks):
            base = i * block_len
            s = 0.0
            for b in range(block_len):
                s += phi[base + b]
            if cw:
                common = omg[i] * s + kmo[i] * phi[base]
                v[base] = smk[i] * phi[base] + kap[i] * s
                for b in range(1, block_len):
                    v[base + b] = tmw[i] * phi[base + b] + common
            else:
                common = omg[i] * s
                for b in range(block_len):
                    v[base + b] = tmw[i] * phi[base + b] + common

        _apply_a(v, gidx, m_ineq, n_blocks, block_len, av)

        for j in range(active_m):
            arg = mu_over_rho_plus_mu * (rhs[j] - av[j] - y1s[j] + rho_over_mu * z1[j])
            e1[j] = arg if arg > 0.0 else 0.0

        for l in range(n):
            arg = mu_over_rho_plus_mu * (v[l] + y2s[l] + rho_over_mu * z2[l])
            if arg < 0.0:
                arg = 0.0
            elif arg > 1.0:
                arg = 1.0
            e2[l] = arg

        for l in range(n):
            p[l] += beta * (v[l] - p[l])
        for j in range(active_m):
            z1[j] += beta * (e1[j] - z1[j])
        for l in range(n):
            z2[l] += beta * (e2[l] - z2[l])

        r1 = 0.0
        for j in range(m):
            t = av[j] + e1[j] - rhs[j]
            y1s[j] += t
            r1 += t * t
        r2 = 0.0
        for l in range(n):
            t = v[l] - e2[l]
            y2s[l] += t
            r2 += t * t

        it += 1
        if r1 <= xi:
            return it, 1, r1, r2
        if r2 <= xi:
            return it, 2, r1, r2
    return it, 0, r1, r2
