"""Pure-numpy enhancement loop, vectorized over frequency bins.

Frames are strictly sequential (the recursions are stateful); within a
frame every bin is updated with batched array ops and one batched
Hermitian solve.  Semantics match ``numba_impl`` operation for
operation; only the execution order across bins differs.
"""

import numpy as np


def _solve_batch(a, rhs):
    """Batched linear solve; per-bin retry isolating failures to their bin."""
    try:
        return np.linalg.solve(a, rhs[:, :, None])[:, :, 0], None
    except np.linalg.LinAlgError:
        out = np.zeros_like(rhs)
        bad = np.zeros(a.shape[0], dtype=bool)
        for i in range(a.shape[0]):
            try:
                out[i] = np.linalg.solve(a[i], rhs[i])
            except np.linalg.LinAlgError:
                bad[i] = True
        return out, bad


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
    """Run the full per-bin enhancement recursion over an STFT grid.

    Returns ``(xhat, spp_out, fallback_count, max_constraint_dev)`` where
    ``xhat`` is the enhanced coefficient grid, ``spp_out`` the SPP
    actually used per bin/frame, ``fallback_count`` the number of
    passthrough filters emitted after failed solves and
    ``max_constraint_dev`` the largest ``|h^H gamma_x - 1|`` observed.
    """
    num_bins, num_frames = y_grid.shape
    n = mu_grid.shape[1]
    eye = np.eye(n)

    xhat = np.zeros((num_bins, num_frames), dtype=np.complex128)
    spp_out = np.zeros((num_bins, num_frames))
    fallbacks = 0
    max_resid = 0.0

    init = np.maximum(np.asarray(init_psd, dtype=np.float64), psd_floor)
    phi_n = init[:, None, None] * eye[None].astype(np.complex128)
    phi_y = phi_n.copy()
    ymat = np.zeros((num_bins, n), dtype=np.complex128)
    prev_sp = np.zeros(num_bins)
    prev_phin = init.copy()
    e1 = np.zeros(n, dtype=np.complex128)
    e1[0] = 1.0

    exp_factor = xi_h1 / (1.0 + xi_h1)
    glr0 = prior_ratio * (1.0 + xi_h1)

    for l in range(num_frames):
        ymat[:, 1:] = ymat[:, :-1]
        ymat[:, 0] = y_grid[:, l]
        py = ymat[:, 0].real ** 2 + ymat[:, 0].imag ** 2

        if use_model_spp:
            spp = 1.0 / (1.0 + glr0 * np.exp(-(py / prev_phin) * exp_factor))
        else:
            spp = spp_grid[:, l]
        spp_out[:, l] = spp

        outer = ymat[:, :, None] * np.conj(ymat[:, None, :])
        lam_n = (alpha_n + (1.0 - alpha_n) * spp)[:, None, None]
        phi_n = lam_n * phi_n + (1.0 - lam_n) * outer
        phi_y = lambda_y * phi_y + (1.0 - lambda_y) * outer

        phin00 = np.maximum(phi_n[:, 0, 0].real, psd_floor)
        ml = np.maximum(py / phin00 - 1.0, 0.0)
        xi = np.maximum(
            lambda_dda * (prev_sp / prev_phin) + (1.0 - lambda_dda) * ml, xi_floor
        )

        d0 = phi_y[:, 0, 0].real
        gy = phi_y[:, :, 0] / np.where(d0 > 0.0, d0, 1.0)[:, None]
        gy[d0 <= 0.0] = 0.0
        gy[:, 0] = 1.0
        gx = gy + (gy - mu_grid) / xi[:, None]

        b = phi_y if use_mpdr else phi_n
        tr = np.einsum("kii->k", b).real
        good = np.isfinite(tr) & (tr > 0.0)
        load = np.where(good, delta * tr / n, 0.0)
        a = b + load[:, None, None] * eye[None]
        a[~good] = eye
        z, solve_bad = _solve_batch(a, gx)
        d = np.einsum("ki,ki->k", np.conj(gx), z)
        ok = good & np.isfinite(d) & (d.real > 0.0)
        if solve_bad is not None:
            ok &= ~solve_bad
        with np.errstate(invalid="ignore", divide="ignore"):
            h = np.where(ok[:, None], z / np.where(ok, d, 1.0)[:, None], e1[None, :])
        fallbacks += int(np.count_nonzero(~ok))

        resid = np.abs(np.einsum("ki,ki->k", np.conj(h), gx) - 1.0)
        frame_max = float(resid.max())
        if frame_max > max_resid:
            max_resid = frame_max

        xv = np.einsum("ki,ki->k", np.conj(h), ymat)
        xhat[:, l] = xv
        prev_sp = xv.real ** 2 + xv.imag ** 2
        prev_phin = phin00

    return xhat, spp_out, fallbacks, max_resid
