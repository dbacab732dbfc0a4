"""Engine smoke: frozen expected values on the exact Gaussian and n=2 chains."""
import time
from fractions import Fraction as Fr

from chaintr.model import ChainModel, build_curve
from chaintr.recursion import CorrelatorTable, moments, sheet_sum_check

t0 = time.time()
gauss = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]],
                              "couplings": [], "T": "1"})
cur = build_curve(gauss, ring="rational")
print("branch points:", cur.branch_points, "zetas:", cur.zetas)
tab = CorrelatorTable(cur, 3, 4)

# genus-1 one-point form vs the closed form z^3 dz/(z^2-1)^4
w11 = tab.omega(1, 1)
print("omega(1,1) terms:", dict(sorted(w11.terms.items())))
for z in (Fr(3), Fr(5, 2), Fr(-7, 3)):
    want = z**3 / (z**2 - 1) ** 4
    got = w11.density(z)
    assert got == want, (z, got, want)
print("OK omega(1,1) == z^3/(z^2-1)^4")

# planar one-point ladder: Catalan numbers
cats = [1, 2, 5, 14, 42]
for k, c in enumerate(cats, start=1):
    got = tab.moment(0, [2 * k])
    assert got == c, (2 * k, got, c)
print("OK planar moments are Catalan:", cats)

# higher-genus one-point moments
for (g, k, want) in [(1, 4, 1), (1, 6, 10), (1, 8, 70), (2, 8, 21)]:
    got = tab.moment(g, [k])
    assert got == want, (g, k, got, want)
print("OK m4^1=1, m6^1=10, m8^1=70, m8^2=21")

# multi-trace moments
for (g, ks, want) in [(0, [2, 2], 2), (0, [2, 2, 2], 8), (0, [2, 2, 2, 2], 48),
                      (1, [8, 4], 4760)]:
    got = tab.moment(g, ks)
    assert got == want, (g, ks, got, want)
print("OK m_{2,2}=2, m_{2,2,2}=8, m_{2,2,2,2}=48, m_{8,4}^1=4760")

# free energies
f2 = tab.free_energy(2)
f3 = tab.free_energy(3)
print("F2 =", f2, "   F3 =", f3)
assert f2 == Fr(-1, 240), f2
assert f3 == Fr(1, 1008), f3
print("OK F2=-1/240, F3=1/1008")

# slot symmetry of a stored two-point form
w12 = tab.omega(1, 2)
a, b = Fr(7, 2), Fr(-9, 4)
assert w12.density(a, b) == w12.density(b, a)
print("OK omega(1,2) slot symmetry; pole order", w12.max_pole_order(), "<=", 6 * 1 - 4 + 4)

# sheet sums vanish for h=1,2
for h in (1, 2):
    rep = sheet_sum_check(tab, h)
    print("sheet sums h=%d:" % h, rep)
    assert rep.ok, rep.rows

# module wrapper with (index, power) pairs
assert moments(tab, 0, [(1, 2), (1, 2)]) == 2

# variations on the Gaussian; t_1 = -T and t_inf = +T, so the pair derivative
# (d/dt_1 - d/dt_inf) F2 equals -dF2/dT = -1/120
dT = tab.variation("t:1:inf", "F:2")
print("dF2/dT via t:1:inf =", -dT)
assert dT == Fr(-1, 120), dT
dg8 = tab.variation("g:1:8", "F:2")
print("dF2/dg8 =", dg8)
dg4 = tab.variation("g:1:4", "F:2")
print("dF2/dg4 =", dg4)
dm = tab.variation("g:1:8", "omega:1:1")
print("dm4^1/dg8 =", tab.moment_form(dm, [4]))

# n=2 chain, c = 3/5, exact: planar two-matrix moment ladder starts at T^2/(1-c^2)
two = ChainModel.from_json({"n": 2, "potentials": [["0", "1"], ["0", "1"]],
                            "couplings": ["3/5"], "T": "1"})
cur2 = build_curve(two, ring="rational")
tab2 = CorrelatorTable(cur2, 2, 2)
m2 = tab2.moment(0, [2])
print("n=2 planar m2 =", m2)
assert m2 == Fr(25, 16), m2
f2b = tab2.free_energy(2)
print("n=2 F2 =", f2b)

print("all recursion smoke checks passed in %.1fs" % (time.time() - t0))
