"""Batched projected-gradient ascent for homogeneous forms with nonnegative
coefficients, over the nonnegative unit l^p sphere (p > 1) or the standard
simplex (p = 1), plus a Newton polish on the first-order system.

Rows of ``X`` are independent restarts. ``fg(X)`` returns (values, gradients)
for all rows; ``degree`` is the homogeneity degree of the form.
"""

import numpy as np

ARMIJO_SIGMA = 1e-4
ARMIJO_SHRINK = 0.5
MAX_BACKTRACKS = 60
GREEDY_HALVINGS = 8
STALL_WINDOW = 10
STALL_RTOL = 1e-14
PRUNE_RTOL = 0.1


def retract_sphere(Y, p):
    Y = np.maximum(Y, 0.0)
    s = np.sum(Y**p, axis=-1, keepdims=True) ** (1.0 / p)
    return Y / np.where(s > 0, s, 1.0)


def project_simplex(Y):
    """Euclidean projection of each row onto {x >= 0, sum x = 1}."""
    Y = np.atleast_2d(Y)
    n = Y.shape[1]
    U = -np.sort(-Y, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ind = np.arange(1, n + 1)
    cond = U - css / ind > 0
    rho = n - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(Y.shape[0]), rho - 1] / rho
    return np.maximum(Y - theta[:, None], 0.0)


def kkt_residuals(X, F, G, p, degree):
    """First-order residual per row.

    On the support |g_i - degree*F*x_i^(p-1)|; off the support the positive
    part of the same quantity (0^0 = 1 gives the simplex condition at p = 1).
    """
    target = degree * F[:, None] * np.power(X, p - 1.0)
    diff = G - target
    pos = X > 0
    on = np.where(pos, np.abs(diff), 0.0).max(axis=1, initial=0.0)
    off = np.where(pos, 0.0, np.maximum(diff, 0.0)).max(axis=1, initial=0.0)
    return np.maximum(on, off)


def _direction(X, G, p):
    if p == 1:
        return G
    V = np.power(X, p - 1.0)
    vv = np.sum(V * V, axis=1, keepdims=True)
    c = np.sum(G * V, axis=1, keepdims=True) / np.where(vv > 0, vv, 1.0)
    return G - c * V


def _retract(Y, p):
    return project_simplex(Y) if p == 1 else retract_sphere(Y, p)


def _prune(fg, Xa, D, Y, Fy, Gy, accepted, p):
    """Zero coordinates that are small and still shrinking.

    Near a boundary maximizer such coordinates decay slowly, sublinearly
    when the maximizer is degenerate. The pruned point is kept only when its
    value does not drop; a wrongly pruned coordinate has positive gradient
    and regrows.
    """
    small = (Y < PRUNE_RTOL * Y.max(axis=1, keepdims=True)) & (Y > 0) & (D < 0)
    rows = np.flatnonzero(accepted & small.any(axis=1))
    if rows.size == 0:
        return
    Z = np.where(small[rows], 0.0, Y[rows])
    Z = retract_sphere(Z, p)
    Fz, Gz = fg(Z)
    ok = Fz >= Fy[rows]
    hit = rows[ok]
    Y[hit], Fy[hit], Gy[hit] = Z[ok], Fz[ok], Gz[ok]


def gradient_ascent(fg, X, p, degree, stop_tol, max_iter, step_rule="armijo", fixed_step=1e-2):
    """Run projected ascent on every row until its residual drops below
    ``stop_tol``, its value stalls, or the line search fails.

    Returns (X, F, G, residuals, iterations per row).
    """
    X = np.array(X, dtype=np.float64)
    R = X.shape[0]
    F, G = fg(X)
    res = kkt_residuals(X, F, G, p, degree)
    iters = np.zeros(R, dtype=int)
    active = res > stop_tol
    history = [F.copy()]
    step = np.ones(R)
    for it in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Xa, Fa, Ga = X[idx], F[idx], G[idx]
        D = _direction(Xa, Ga, p)
        if step_rule == "fixed":
            Y = _retract(Xa + fixed_step * D, p)
            Fy, Gy = fg(Y)
            accepted = np.ones(len(idx), dtype=bool)
        else:
            # restart each row's search just above its last accepted step
            t = np.minimum(1.0, 2.0 * step[idx])
            Y = np.empty_like(Xa)
            Fy = np.empty_like(Fa)
            Gy = np.empty_like(Ga)
            accepted = np.zeros(len(idx), dtype=bool)
            pending = np.arange(len(idx))
            dd = np.sum(D * D, axis=1)
            for _ in range(MAX_BACKTRACKS):
                Yc = _retract(Xa[pending] + t[pending, None] * D[pending], p)
                Fc, Gc = fg(Yc)
                if p == 1:
                    gain = np.sum(Ga[pending] * (Yc - Xa[pending]), axis=1)
                else:
                    gain = t[pending] * dd[pending]
                ok = (Fc >= Fa[pending] + ARMIJO_SIGMA * gain) & (gain > 0)
                hit = pending[ok]
                Y[hit], Fy[hit], Gy[hit] = Yc[ok], Fc[ok], Gc[ok]
                accepted[hit] = True
                pending = pending[~ok]
                if pending.size == 0:
                    break
                t[pending] *= ARMIJO_SHRINK
            # an accepted step may overshoot to a near-mirror point; keep
            # halving while the value still improves
            better = np.flatnonzero(accepted)
            for _ in range(GREEDY_HALVINGS):
                if better.size == 0:
                    break
                tc = t[better] * ARMIJO_SHRINK
                Yc = _retract(Xa[better] + tc[:, None] * D[better], p)
                Fc, Gc = fg(Yc)
                ok = Fc > Fy[better]
                hit = better[ok]
                Y[hit], Fy[hit], Gy[hit], t[hit] = Yc[ok], Fc[ok], Gc[ok], tc[ok]
                better = hit
        if p != 1:
            _prune(fg, Xa, D, Y, Fy, Gy, accepted, p)
        moved = idx[accepted]
        if step_rule != "fixed":
            step[moved] = t[accepted]
        X[moved], F[moved], G[moved] = Y[accepted], Fy[accepted], Gy[accepted]
        iters[moved] += 1
        res[moved] = kkt_residuals(X[moved], F[moved], G[moved], p, degree)
        # rows whose line search failed cannot make further progress
        active[idx[~accepted]] = False
        active &= res > stop_tol
        history.append(F.copy())
        if len(history) > STALL_WINDOW:
            old = history.pop(0)
            stalled = np.abs(F - old) <= STALL_RTOL * np.maximum(np.abs(F), 1e-300)
            active &= ~stalled
    return X, F, G, res, iters


def newton_polish(fg, hess, x, p, degree, tol, max_steps=30, support_rtol=1e-9):
    """Newton iterations on the first-order system restricted to the support.

    A step is kept only if the value does not drop and the residual shrinks.
    Returns (x, f, g, residual, steps taken).
    """
    x = np.array(x, dtype=np.float64)
    f, g = (a[0] for a in fg(x[None, :]))
    res = kkt_residuals(x[None], np.array([f]), g[None], p, degree)[0]
    steps = 0
    for _ in range(max_steps):
        if res <= tol:
            break
        S = np.flatnonzero(x > support_rtol * x.max())
        xs = x[S]
        mu = degree * f
        H = hess(x)[np.ix_(S, S)]
        v = np.power(xs, p - 1.0)
        J = np.zeros((len(S) + 1, len(S) + 1))
        J[:-1, :-1] = H - mu * (p - 1.0) * np.diag(np.power(xs, p - 2.0)) if p != 1 else H
        J[:-1, -1] = -v
        J[-1, :-1] = p * v
        rhs = np.concatenate([g[S] - mu * v, [np.sum(np.power(xs, p)) - 1.0]])
        delta = np.linalg.lstsq(J, rhs, rcond=None)[0]
        xs_new = xs - delta[:-1]
        if np.any(xs_new <= 0) or not np.all(np.isfinite(xs_new)):
            break
        cand = np.zeros_like(x)
        cand[S] = xs_new
        cand = _retract(cand[None, :], p)[0]
        fc, gc = (a[0] for a in fg(cand[None, :]))
        rc = kkt_residuals(cand[None], np.array([fc]), gc[None], p, degree)[0]
        if fc < f - 1e-14 * abs(f) or rc >= res:
            break
        x, f, g, res = cand, fc, gc, rc
        steps += 1
    return x, f, g, res, steps


def fd_hessian(fg, h=1e-6):
    """Central-difference Hessian built from an analytic gradient."""
    def hess(x):
        n = x.shape[0]
        E = np.eye(n) * h
        _, gp = fg(x[None, :] + E)
        _, gm = fg(x[None, :] - E)
        H = (gp - gm).T / (2 * h)
        return 0.5 * (H + H.T)
    return hess
