"""Numba-jitted enhancement loop: explicit per-bin, per-frame recursion.

Small fixed-size matrices (N x N, N = 18 by default) make a hand-rolled
Cholesky solve cheaper than LAPACK round trips.  All buffers are
preallocated once per call; no allocation inside the frame loop.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _chol_solve(a, g, cl, w, z):
    """Solve ``a z = g`` via Cholesky for Hermitian ``a``; False on failure."""
    n = a.shape[0]
    for j in range(n):
        s = a[j, j].real
        for m in range(j):
            s -= cl[j, m].real ** 2 + cl[j, m].imag ** 2
        if not np.isfinite(s) or s <= 0.0:
            return False
        dj = np.sqrt(s)
        cl[j, j] = dj
        for i in range(j + 1, n):
            t = a[i, j]
            for m in range(j):
                t -= cl[i, m] * np.conj(cl[j, m])
            cl[i, j] = t / dj
    for i in range(n):
        t = g[i]
        for m in range(i):
            t -= cl[i, m] * w[m]
        w[i] = t / cl[i, i].real
    for i in range(n - 1, -1, -1):
        t = w[i]
        for m in range(i + 1, n):
            t -= np.conj(cl[m, i]) * z[m]
        z[i] = t / cl[i, i].real
    return True


@njit(cache=True)
def enhance_bins(
    y_grid,
    mu_grid,
    init_psd,
    spp_grid,
    use_model_spp,
    use_mpdr,
    alpha_n,
    lambda_y,
    delta,
    lambda_dda,
    xi_floor,
    prior_ratio,
    xi_h1,
    psd_floor,
):
    """Same contract as ``numpy_impl.enhance_bins``."""
    num_bins, num_frames = y_grid.shape
    n = mu_grid.shape[1]

    xhat = np.zeros((num_bins, num_frames), dtype=np.complex128)
    spp_out = np.zeros((num_bins, num_frames))
    fallbacks = 0
    max_resid = 0.0

    phi_n = np.zeros((n, n), dtype=np.complex128)
    phi_y = np.zeros((n, n), dtype=np.complex128)
    a = np.zeros((n, n), dtype=np.complex128)
    cl = np.zeros((n, n), dtype=np.complex128)
    yv = np.zeros(n, dtype=np.complex128)
    gy = np.zeros(n, dtype=np.complex128)
    gx = np.zeros(n, dtype=np.complex128)
    w = np.zeros(n, dtype=np.complex128)
    z = np.zeros(n, dtype=np.complex128)
    h = np.zeros(n, dtype=np.complex128)

    exp_factor = xi_h1 / (1.0 + xi_h1)
    glr0 = prior_ratio * (1.0 + xi_h1)
    one_m_y = 1.0 - lambda_y

    for k in range(num_bins):
        init = init_psd[k]
        if init < psd_floor:
            init = psd_floor
        for i in range(n):
            yv[i] = 0.0
            for j in range(n):
                phi_n[i, j] = 0.0
                phi_y[i, j] = 0.0
            phi_n[i, i] = init
            phi_y[i, i] = init
        prev_sp = 0.0
        prev_phin = init

        for l in range(num_frames):
            for i in range(n - 1, 0, -1):
                yv[i] = yv[i - 1]
            yv[0] = y_grid[k, l]
            py = yv[0].real ** 2 + yv[0].imag ** 2

            if use_model_spp:
                spp = 1.0 / (1.0 + glr0 * np.exp(-(py / prev_phin) * exp_factor))
            else:
                spp = spp_grid[k, l]
            spp_out[k, l] = spp

            lam_n = alpha_n + (1.0 - alpha_n) * spp
            one_m_n = 1.0 - lam_n
            for i in range(n):
                for j in range(n):
                    o = yv[i] * np.conj(yv[j])
                    phi_n[i, j] = lam_n * phi_n[i, j] + one_m_n * o
                    phi_y[i, j] = lambda_y * phi_y[i, j] + one_m_y * o

            phin00 = phi_n[0, 0].real
            if phin00 < psd_floor:
                phin00 = psd_floor
            ml = py / phin00 - 1.0
            if ml < 0.0:
                ml = 0.0
            xi = lambda_dda * (prev_sp / prev_phin) + (1.0 - lambda_dda) * ml
            if xi < xi_floor:
                xi = xi_floor

            d0 = phi_y[0, 0].real
            if d0 > 0.0:
                for i in range(n):
                    gy[i] = phi_y[i, 0] / d0
            else:
                for i in range(n):
                    gy[i] = 0.0
            gy[0] = 1.0
            for i in range(n):
                gx[i] = gy[i] + (gy[i] - mu_grid[k, i]) / xi

            tr = 0.0
            if use_mpdr:
                for i in range(n):
                    tr += phi_y[i, i].real
            else:
                for i in range(n):
                    tr += phi_n[i, i].real
            ok = np.isfinite(tr) and tr > 0.0
            if ok:
                load = delta * tr / n
                if use_mpdr:
                    for i in range(n):
                        for j in range(n):
                            a[i, j] = phi_y[i, j]
                        a[i, i] = phi_y[i, i] + load
                else:
                    for i in range(n):
                        for j in range(n):
                            a[i, j] = phi_n[i, j]
                        a[i, i] = phi_n[i, i] + load
                ok = _chol_solve(a, gx, cl, w, z)
            if ok:
                d = 0.0 + 0.0j
                for i in range(n):
                    d += np.conj(gx[i]) * z[i]
                if np.isfinite(d.real) and np.isfinite(d.imag) and d.real > 0.0:
                    for i in range(n):
                        h[i] = z[i] / d
                else:
                    ok = False
            if not ok:
                fallbacks += 1
                h[0] = 1.0
                for i in range(1, n):
                    h[i] = 0.0

            c = 0.0 + 0.0j
            for i in range(n):
                c += np.conj(h[i]) * gx[i]
            resid = abs(c - 1.0)
            if resid > max_resid:
                max_resid = resid

            xv = 0.0 + 0.0j
            for i in range(n):
                xv += np.conj(h[i]) * yv[i]
            xhat[k, l] = xv
            prev_sp = xv.real ** 2 + xv.imag ** 2
            prev_phin = phin00

    return xhat, spp_out, fallbacks, max_resid
