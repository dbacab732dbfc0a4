"""Residue checks tying a built curve back to the data that defined it.

Every number that went into the model — temperature, filling fractions,
potential coefficients — is recoverable from the curve as a residue of a
one-form built out of neighbouring chain functions.  Recomputing them all
and comparing against the inputs is the strongest whole-curve self-test
available short of the correlator recursion itself.
"""

from dataclasses import dataclass

from ..algebra import INF, residue


@dataclass(frozen=True)
class ModuliRow:
    name: str
    expected: object
    got: object
    ok: bool


@dataclass(frozen=True)
class ModuliReport:
    rows: tuple

    @property
    def ok(self):
        return all(r.ok for r in self.rows)

    def failures(self):
        return tuple(r for r in self.rows if not r.ok)

    def __repr__(self):
        good = sum(1 for r in self.rows if r.ok)
        return f"ModuliReport({good}/{len(self.rows)} identities hold)"


def validate_moduli(curve, model, tol=1e-10):
    """Recompute T, the t_i and every g_j^{(k)} as residues on the curve.

    Exact rings must reproduce the inputs on the nose; the floating ring is
    held to `tol` relative.  The report lists one row per identity so a
    failure names exactly what broke.
    """
    R = curve.R
    xs = curve.xs
    n = model.n
    rows = []

    def chk(name, want, got):
        want = R.coerce(want)
        if R.exact:
            ok = R.is_zero(got - want)
        else:
            ok = R.mag(got - want) <= tol * (1.0 + R.mag(want))
        rows.append(ModuliRow(name, want, got, ok))

    T = R.coerce(model.T)
    # temperature leaks out of every consecutive pair, not just the first
    for k in range(1, n + 1):
        c = R.coerce(model.coupling(k))
        form = xs[k] * xs[k - 1].deriv() * c
        chk(f"T[x{k}]", T, residue(form, INF))
    # filling fractions at the marked points, plus the global residue sum
    w = xs[1] * xs[0].deriv() * R.coerce(model.coupling(1))
    total = residue(w, INF)
    for i, (_, fr) in enumerate(model.ext(), start=1):
        r = residue(w, curve.zetas[i - 1])
        chk(f"t[{i}]", -T * R.coerce(fr), r)
        total = total + r
    chk("t_sum", 0, total)
    # first potential, read off at infinity only (the tail T/x_1 + ... of
    # c_12 x_2 - V_1'(x_1) is a sum of exact forms there)
    d1 = model.d[0]
    for j in range(1, d1 + 2):
        got = -residue(xs[0] ** (-j) * w, INF)
        chk(f"g[1,{j}]", model.g(1, j), got)
    # interior potentials: the saddle identity holds exactly on the curve, so
    # x_k^{-j} V_k'(x_k) dx_k can be read at infinity (winding r_k) or at any
    # marked point (winding s_k)
    prof = model.profile()
    for k in range(2, n + 1):
        ck = R.coerce(model.coupling(k))
        ckm = R.coerce(model.coupling(k - 1))
        comb = (xs[k] * ck + xs[k - 2] * ckm) * xs[k - 1].deriv()
        rk = R.coerce(prof.r_k(k))
        sk = R.coerce(prof.s_k(k))
        for j in range(1, model.d[k - 1] + 2):
            base = xs[k - 1] ** (-j) * comb
            chk(f"g[{k},{j}]@inf", model.g(k, j),
                R.div(-residue(base, INF), rk))
            for i in range(1, model.s_count + 1):
                chk(f"g[{k},{j}]@zeta{i}", model.g(k, j),
                    R.div(-residue(base, curve.zetas[i - 1]), sk))
    # eigenvalue pins: x_{n+1}(zeta_i) weights the residue of x_n dx_{n+1}
    lam_form = xs[n - 1] * xs[n] * xs[n].deriv()
    for i, (lam, fr) in enumerate(model.ext(), start=1):
        chk(f"lambda[{i}]", R.coerce(lam) * T * R.coerce(fr),
            residue(lam_form, curve.zetas[i - 1]))
    return ModuliReport(tuple(rows))
