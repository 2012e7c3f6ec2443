"""Independent oracle for frozen test values.

Builds the left-invariant metric in coordinates (v, y, lam = log a) from the
group law alone, then gets geodesics by integrating the coordinate geodesic
equation and curvature from symbolic Christoffel symbols. Nothing here uses the
frame connection formulas or the closed-form geodesic of the library.

    python3 tests/oracles/metric_oracle.py > tests/oracles/values.json
"""

import json

import mpmath
import numpy as np
import sympy as sp
from scipy.integrate import solve_ivp


def quaternion_left(unit):
    # basis 1, i, j, k; column c is unit * e_c
    table = {
        1: [(1, 1), (0, -1), (3, 1), (2, -1)],
        2: [(2, 1), (3, -1), (0, -1), (1, 1)],
        3: [(3, 1), (2, 1), (1, -1), (0, -1)],
    }
    L = np.zeros((4, 4))
    for c, (row, sign) in enumerate(table[unit]):
        L[row, c] = sign
    return L


INSTANCES = {
    "heisenberg": [np.array([[0.0, -1.0], [1.0, 0.0]])],
    "htype_k2": [quaternion_left(1), quaternion_left(2)],
    "quaternionic": [quaternion_left(u) for u in (1, 2, 3)],
}


def clifford_residual(gens):
    k = len(gens)
    m = gens[0].shape[0]
    res = 0.0
    for a in range(k):
        for b in range(k):
            M = gens[a] @ gens[b] + gens[b] @ gens[a] + (2.0 if a == b else 0.0) * np.eye(m)
            res = max(res, np.abs(M).max())
    return res


class Space:
    def __init__(self, gens):
        self.gens = [sp.Matrix(g.astype(int)) for g in gens]
        self.k = len(gens)
        self.m = gens[0].shape[0]
        self.n = self.m + self.k + 1
        self.coords = sp.symbols(f"x0:{self.n}", real=True)
        self._build_metric()

    def bracket(self, U, V):
        # <[U,V], Z_a> = <J_a U, V>
        return sp.Matrix([(g * U).dot(V) for g in self.gens])

    def mult(self, p, q):
        U, X, a = p
        U2, X2, a2 = q
        sa = sp.sqrt(a)
        return (U + sa * U2, X + a * X2 + sp.Rational(1, 2) * sa * self.bracket(U, U2), a * a2)

    def _build_metric(self):
        m, k, n = self.m, self.k, self.n
        x = self.coords
        U = sp.Matrix(x[:m])
        X = sp.Matrix(x[m:m + k])
        lam = x[n - 1]
        a = sp.exp(lam)
        # frame at p = d/dt of p * exp(t e_j) at t = 0 (group law only)
        t = sp.Symbol("t", real=True)
        cols = []
        for j in range(n):
            e = [0] * n
            e[j] = t
            q = (sp.Matrix(e[:m]), sp.Matrix(e[m:m + k]), sp.exp(e[n - 1]))
            U2, X2, a2 = self.mult((U, X, a), q)
            curve = list(U2) + list(X2) + [sp.log(a2)]
            cols.append([sp.simplify(sp.diff(c, t).subs(t, 0)) for c in curve])
        F = sp.Matrix(cols).T  # coordinate components of frame vectors
        Finv = sp.simplify(F.inv())
        self.F = F
        self.g = sp.simplify(Finv.T * Finv)
        ginv = sp.simplify(F * F.T)
        Gam = [[[0] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    Gam[i][j][l] = sp.simplify(sum(
                        ginv[i, r] * (sp.diff(self.g[r, j], x[l]) + sp.diff(self.g[r, l], x[j]) - sp.diff(self.g[j, l], x[r]))
                        for r in range(n)) / 2)
        self.Gam = Gam
        self.gam_fn = sp.lambdify(x, [[[Gam[i][j][l] for l in range(n)] for j in range(n)] for i in range(n)], "numpy")
        self.F_fn = sp.lambdify(x, F, "numpy")
        self.g_fn = sp.lambdify(x, self.g, "numpy")

    def riemann_at(self, point):
        # R^i_{jkl} = d_k Gam^i_{lj} - d_l Gam^i_{kj} + Gam^i_{kr} Gam^r_{lj} - Gam^i_{lr} Gam^r_{kj}
        n, x, G = self.n, self.coords, self.Gam
        sub = dict(zip(x, point))
        Gv = np.array([[[float(G[i][j][l].subs(sub)) for l in range(n)] for j in range(n)] for i in range(n)])
        dG = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    for q in range(n):
                        dG[i, j, l, q] = float(sp.diff(G[i][j][l], x[q]).subs(sub))
        R = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(n):
                for kk in range(n):
                    for l in range(n):
                        R[i, j, kk, l] = (dG[i, l, j, kk] - dG[i, kk, j, l]
                                          + Gv[i, kk, :] @ Gv[:, l, j] - Gv[i, l, :] @ Gv[:, kk, j])
        return R

    def sectional(self, point, u_frame, v_frame):
        F = np.array(self.F_fn(*point), dtype=float)
        g = np.array(self.g_fn(*point), dtype=float)
        u = F @ u_frame
        v = F @ v_frame
        R = self.riemann_at(point)
        # <R(u,v)v,u> with R(X,Y)Z = R^i_{jkl} Z^j X^k Y^l
        Ruvv = np.einsum("ijkl,j,k,l->i", R, v, u, v)
        num = u @ g @ Ruvv
        den = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
        return num / den

    def geodesic(self, direction, T):
        n = self.n
        x0 = np.zeros(n)
        v0 = np.array(self.F_fn(*x0), dtype=float) @ direction

        def rhs(_, s):
            x, v = s[:n], s[n:]
            Gm = np.array(self.gam_fn(*x), dtype=float)
            return np.concatenate([v, -np.einsum("ijl,j,l->i", Gm, v, v)])

        sol = solve_ivp(rhs, (0.0, T), np.concatenate([x0, v0]), method="DOP853", rtol=1e-13, atol=1e-14)
        x = sol.y[:n, -1]
        return {"U": x[:self.m].tolist(), "X": x[self.m:self.m + self.k].tolist(), "a": float(np.exp(x[-1]))}


def unit(v):
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v)


def jacobi_cubic_roots(v2, y2, mu):
    # (x + 1)(x + 1/4)^2 - (27/64) v2^2 y2 (1 + mu)
    rhs = 27.0 / 64.0 * v2 * v2 * y2 * (1.0 + mu)
    coeffs = np.polymul([1.0, 1.0], np.polymul([1.0, 0.25], [1.0, 0.25]))
    coeffs[-1] -= rhs
    return sorted(float(r.real) for r in np.roots(coeffs))


def volume_sigma(n, Q, r):
    mpmath.mp.dps = 40
    f = lambda s: (n - 1) * mpmath.log(mpmath.sinh(s / 2)) + (2 * Q - n + 1) * mpmath.log(mpmath.cosh(s / 2))
    return float(mpmath.diff(f, r))


def main():
    out = {"clifford_residual": {k: clifford_residual(v) for k, v in INSTANCES.items()}}

    geo = {}
    curv = {}
    for name, direction, plane in [
        ("heisenberg", [0.3, -0.4, 0.5, 0.2], ([0.6, 0.0, 0.3, -0.2], [0.1, 0.7, -0.4, 0.5])),
        ("htype_k2", [0.3, -0.4, 0.1, 0.25, 0.5, -0.3, 0.2],
         ([0.6, 0.0, 0.3, -0.2, 0.1, 0.2, 0.4], [0.1, 0.7, -0.4, 0.5, 0.3, -0.1, 0.0])),
    ]:
        S = Space(INSTANCES[name])
        d = unit(direction)
        geo[name] = {"direction": d.tolist(), "t": [1.5, -2.0],
                     "points": [S.geodesic(d, 1.5), S.geodesic(d, -2.0)]}
        u, v = unit(plane[0]), np.array(plane[1], dtype=float)
        v = unit(v - (v @ u) * u)
        n = S.n
        pt = np.zeros(n)
        pt[0], pt[S.m], pt[-1] = 0.7, -0.4, np.log(1.8)
        curv[name] = {"u": u.tolist(), "v": v.tolist(),
                      "K_identity": S.sectional(np.zeros(n), u, v),
                      "K_point": S.sectional(pt, u, v),
                      "point": {"U0": 0.7, "X0": -0.4, "a": 1.8}}
    out["geodesic"] = geo
    out["sectional"] = curv

    out["jacobi_cubic"] = [
        {"v2": v2, "y2": y2, "mu": mu, "roots": jacobi_cubic_roots(v2, y2, mu)}
        for v2, y2, mu in [(2.0 / 3.0, 1.0 / 3.0, 0.0), (0.0, 0.5, 0.0), (0.5, 0.3, -0.4), (0.8, 0.15, -0.9)]
    ]
    out["volume_sigma"] = {
        "heisenberg": {"n": 4, "Q": 2.0, "r": [1.0, 30.0], "sigma": [volume_sigma(4, 2.0, 1.0), volume_sigma(4, 2.0, 30.0)]},
        "quaternionic": {"n": 8, "Q": 5.0, "r": [1.0, 30.0], "sigma": [volume_sigma(8, 5.0, 1.0), volume_sigma(8, 5.0, 30.0)]},
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
