"""Regenerate tests/fixtures/*.json from independent numpy/scipy computations.

Matrix functions go through scipy.linalg.logm/sqrtm (Schur based), Petz metrics
through an explicit d^2 x d^2 superoperator, so the frozen values do not share a
code path with the C++ eigendecomposition routines.

    python3 tests/oracles/generate_fixtures.py
"""
import json
import pathlib
from functools import reduce

import numpy as np
import scipy.linalg as sl

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

PAIRS = {
    "qubit_a": (
        [[0.77, 0.08 - 0.28j], [0.08 + 0.28j, 0.23]],
        [[0.72, 0.06 + 0.24j], [0.06 - 0.24j, 0.28]],
    ),
    "qubit_b": (
        [[0.6, -0.43 + 0.01j], [-0.43 - 0.01j, 0.4]],
        [[0.23, -0.02 + 0.11j], [-0.02 - 0.11j, 0.77]],
    ),
    "qutrit": (
        [[0.23, 0.04 - 0.09j, 0.18 - 0.17j],
         [0.04 + 0.09j, 0.25, 0.16 - 0.06j],
         [0.18 + 0.17j, 0.16 + 0.06j, 0.52]],
        [[0.37, 0.17 - 0.07j, -0.02 + 0.08j],
         [0.17 + 0.07j, 0.37, -0.03 + 0.2j],
         [-0.02 - 0.08j, -0.03 - 0.2j, 0.26]],
    ),
}
# source pairs for the conversion fixtures, D(source) ~ 2 D(target)
SOURCES = {
    "qubit_a": (
        [[0.43, -0.34 - 0.05j], [-0.34 + 0.05j, 0.57]],
        [[0.6, 0.35 + 0.12j], [0.35 - 0.12j, 0.4]],
    ),
    "qubit_b": (
        [[0.81, 0.2 - 0.2j], [0.2 + 0.2j, 0.19]],
        [[0.16, -0.15 - 0.16j], [-0.15 + 0.16j, 0.84]],
    ),
}

STEP = 1e-3
STRIDE = 50


def arr(m):
    return np.array(m, dtype=complex)


def logm(a):
    return sl.logm(a)


def sqrtm(a):
    return sl.sqrtm(a)


def umegaki(r, s):
    return np.trace(r @ (logm(r) - logm(s))).real


def rld(r, s):
    q = sqrtm(r)
    return np.trace(r @ logm(q @ np.linalg.inv(s) @ q)).real


def dmax(r, s):
    si = np.linalg.inv(sqrtm(s))
    return float(np.log(np.linalg.eigvalsh(si @ r @ si).max()))


def fidelity(r, s):
    return float(np.log(np.linalg.svd(sqrtm(r) @ sqrtm(s), compute_uv=False).sum()))


def kron_pow(a, n):
    return reduce(np.kron, [a] * n)


def petz(r, x, y, f):
    d = r.shape[0]
    eye = np.eye(d)
    left = np.kron(r, eye)
    right = np.kron(eye, r.T)
    ratio = left @ np.linalg.inv(right)
    w, v = np.linalg.eig(ratio)
    fr = v @ np.diag([f(z.real) for z in w]) @ np.linalg.inv(v)
    k = right @ fr
    return complex(np.vdot(x.reshape(-1), np.linalg.solve(k, y.reshape(-1))))


F = {
    "sld": lambda x: (1 + x) / 2,
    "rld": lambda x: 2 * x / (1 + x),
    "bkm": lambda x: 1.0 if abs(x - 1) < 1e-12 else (x - 1) / np.log(x),
    "wy": lambda x: ((np.sqrt(x) + 1) / 2) ** 2,
}


def f_alpha(alpha):
    def f(x):
        if abs(x - 1) < 1e-9:
            return 1.0
        b1, b2 = (1 - alpha) / 2, (1 + alpha) / 2
        raw = (x - 1) ** 2 / ((x ** b1 - 1) * (x ** b2 - 1))
        return raw * b1 * b2
    return f


def accept(rn, sn, a, n):
    e = np.exp(n * a)
    w, v = np.linalg.eigh(rn - e * sn)
    scale = np.linalg.eigvalsh(rn).max() + e * np.linalg.eigvalsh(sn).max()
    p = v[:, w <= 1e-13 * scale]
    return float(np.trace(p.conj().T @ rn @ p).real)


def stein(r, s, n, eps):
    rn, sn = kron_pow(r, n), kron_pow(s, n)
    lo = int(np.floor((-dmax(s, r) - 0.05) / STEP))
    k = lo
    while accept(rn, sn, k * STEP, n) < 1 - eps:
        k += STRIDE
    for j in range(k - STRIDE + 1, k + 1):
        if accept(rn, sn, j * STEP, n) >= 1 - eps:
            return j * STEP


def sld_integral(r, s, nodes=256):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x, w = (x + 1) / 2, w / 2
    t = r - s
    total = 0.0
    for xi, wi in zip(x, w):
        m = xi * r + (1 - xi) * s
        lam, v = np.linalg.eigh(m)
        tt = v.conj().T @ t @ v
        total += wi * (1 - xi) * (np.abs(tt) ** 2 * 2 / (lam[:, None] + lam[None, :])).sum()
    return float(total)


def pos_part(h):
    w, v = np.linalg.eigh(h)
    w = np.where(w > 0, w, 0)
    return (v * w) @ v.conj().T


def trace_norm(m):
    return float(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2)).sum())


def roomfill(rn, sn, rate, n):
    e = np.exp(n * rate)
    b = pos_part(rn - pos_part(rn - e * sn))
    trb = np.trace(b).real
    mu = min(1.0, e / np.exp(dmax(b / trb, sn) + np.log(trb)))
    room = e * sn - mu * b
    return mu * b + (1 - mu * trb) * room / np.trace(room).real


def conversion(r0, s0, r, s, n, c):
    a = umegaki(r, s) + c
    r0n, s0n = kron_pow(r0, n), kron_pow(s0, n)
    w, v = np.linalg.eigh(r0n - np.exp(n * a) * s0n)
    p = v[:, w > 0]
    p = p @ p.conj().T
    p0 = np.trace(p @ r0n).real
    q0 = np.trace(p @ s0n).real
    rate = -np.log(q0) / n
    rn, sn = kron_pow(r, n), kron_pow(s, n)
    phi0 = roomfill(rn, sn, rate, n)
    phi1 = (sn - q0 * phi0) / (1 - q0)
    return float(trace_norm(p0 * phi0 + (1 - p0) * phi1 - rn))


def state_json(m):
    return {"dim": len(m), "matrix": [[[z.real, z.imag] for z in row] for row in arr(m)]}


def main():
    OUT.mkdir(exist_ok=True)
    values = {}
    for name, (rm, sm) in PAIRS.items():
        r, s = arr(rm), arr(sm)
        for tag, m in (("rho", rm), ("sigma", sm)):
            (OUT / f"{name}_{tag}.json").write_text(json.dumps(state_json(m)) + "\n")
        x = r - s
        (OUT / f"{name}_tangent.json").write_text(json.dumps(state_json(x)) + "\n")
        v = {
            "umegaki": umegaki(r, s),
            "rld": rld(r, s),
            "dmax": dmax(r, s),
            "dmax_reverse": dmax(s, r),
            "fidelity": fidelity(r, s),
            "metric_rho_diff": {k: petz(r, x, x, f).real for k, f in F.items()},
        }
        v["metric_rho_diff"]["alpha=0.5"] = petz(r, x, x, f_alpha(0.5)).real
        if r.shape[0] == 2:
            v["stein_eps_0.5"] = {str(n): stein(r, s, n, 0.5) for n in (2, 4, 6, 8)}
            v["sld_integral_per_copy"] = {
                str(n): sld_integral(kron_pow(r, n), kron_pow(s, n)) / n for n in (1, 6)
            }
        if name in SOURCES:
            r0, s0 = (arr(m) for m in SOURCES[name])
            for tag, m in zip(("rho0", "sigma0"), SOURCES[name]):
                (OUT / f"{name}_{tag}.json").write_text(json.dumps(state_json(m)) + "\n")
            gap = umegaki(r0, s0) - v["umegaki"]
            v["source_umegaki"] = umegaki(r0, s0)
            v["conversion_distance"] = {
                str(n): conversion(r0, s0, r, s, n, gap / 4) for n in (2, 8)
            }
        values[name] = v
    (OUT / "oracle_values.json").write_text(json.dumps(values, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
