from fractions import Fraction as F

from chaintr.algebra import RationalRing, FloatRing, SeriesRing, INF, local_expand
from chaintr.model import ChainModel, build_curve, SolverError
from chaintr.curve import SingularCurveError

RQ = RationalRing()
RF = FloatRing()

# 1. Gaussian n=1, T=1, exact, monic: x1 = z + 1/z, x2 = z, y = z
m = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "1"})
c = build_curve(m, RQ)
assert [c.xs[0].num.coeff(i) for i in range(3)] == [F(1), F(0), F(1)], c.xs[0].num.c
assert c.xs[0].den.c == (F(0), F(1))
assert c.xs[1].num.c == (F(0), F(1)) and c.xs[1].den.degree == 0
assert c.y.num.c == (F(0), F(1))
assert c.branch_points == (F(1), F(-1)) or set(c.branch_points) == {F(1), F(-1)}, c.branch_points
print("1. gaussian exact ok", c.branch_points)

# T=4 variant: x1 = z + 4/z
m4 = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "4"})
c4 = build_curve(m4, RQ)
assert c4.xs[0].num.c == (F(4), F(0), F(1)), c4.xs[0].num.c
print("2. gaussian T=4 ok")

# exact symmetric T=4: rho = 2, x1 = 2(z + 1/z)... a=1,c=4, rho=2: X~[j]=X[j]*2^{j-1}: [4*1/2, 0, 1*2] = [2,0,2]
c4s = build_curve(m4, RQ, gauge="symmetric")
assert c4s.xs[0].num.c == (F(2), F(0), F(2)), c4s.xs[0].num.c
print("3. gaussian T=4 symmetric exact ok")

# 3b. T=2 exact symmetric must fail (rho=sqrt2)
try:
    build_curve(ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "2"}), RQ, gauge="symmetric")
    raise AssertionError("should have raised")
except SolverError as e:
    print("4. T=2 exact symmetric raises:", e)

# 4. n=2 Gaussian chain c=3/5, T=1: monic x1 = z + (25/16)/z
m2 = ChainModel.from_json({"n": 2, "potentials": [["0", "1"], ["0", "1"]],
                           "couplings": ["3/5"], "T": "1"})
c2 = build_curve(m2, RQ)
x1, x2, x3 = c2.xs
assert x1.num.c == (F(25, 16), F(0), F(1)), x1.num.c
print("5. n=2 monic x1 ok:", x1.num.c)
# symmetric float: x1 = (5/4)(z+1/z), x2=(25/12)z+(3/4)/z, x3=(4/3)z
c2f = build_curve(m2, RF)
import cmath
def close(a, b, t=1e-9): return abs(a - b) <= t * (1 + abs(b))
assert close(c2f.xs[0].num.coeff(2) / c2f.xs[0].den.coeff(1), 1.25)
assert close(c2f.xs[0].num.coeff(0) / c2f.xs[0].den.coeff(1), 1.25)
assert close(c2f.xs[1].num.coeff(2) / c2f.xs[1].den.coeff(1), 25 / 12)
assert close(c2f.xs[1].num.coeff(0) / c2f.xs[1].den.coeff(1), 0.75)
assert close(c2f.xs[2].num.coeff(1) / c2f.xs[2].den.coeff(0), 4 / 3)
print("6. n=2 float symmetric ok")
# exact symmetric (rho = 5/4 rational!)
c2s = build_curve(m2, RQ, gauge="symmetric")
assert c2s.xs[0].num.c == (F(5, 4), F(0), F(5, 4)), c2s.xs[0].num.c
assert c2s.xs[2].num.c == (F(0), F(4, 3)), c2s.xs[2].num.c
print("7. n=2 exact symmetric ok")

# 5. float quartic n=1: V = x^2/2 + x^4/4 (g2=1, g4=1/5? use g4=1/20 criterion-9 base)
mq = ChainModel.from_json({"n": 1, "potentials": [["0", "1", "0", "1/20"]], "couplings": [], "T": "1"})
cq = build_curve(mq, RF)
# constraint: W0 = V'(x1) - y must be T/x1 + O(1/z^2) at infinity.
w0 = cq.xs[0] + cq.xs[0] ** 3 * (1 / 20) - cq.y
e = local_expand(w0, INF, 2)
for k in range(e.shift, 1):
    assert abs(e.coeff(k)) < 1e-9, (k, e.coeff(k))
gam = cq.xs[0].num.coeff(2) / cq.xs[0].den.coeff(1)
assert abs(e.coeff(1) - 1 / gam) < 1e-9, (e.coeff(1), 1 / gam)
print("8. quartic float built; branch points:", cq.branch_points)

# gamma^2: x1 = gamma(z+1/z) symmetric; V' with g4: gamma^2(1+3 g4 gamma^2)=T... known: g4=1/20: 1 = g^2 + (3/20) g^4 -> g^2 = (-1+sqrt(1+0.6))/0.3 = (sqrt(1.6)-1)/0.3
import math
g2v = (math.sqrt(1.6) - 1) / 0.3
a = cq.xs[0].num.coeff(2) / cq.xs[0].den.coeff(1)
assert close(a * a, g2v, 1e-8), (a * a, g2v)
print("9. quartic gamma matches closed form:", a * a, g2v)

# 6. criterion 11: g4 = -1/12 => singular (y'(a)=0); g4 = -1/11 => SolverError
ms = ChainModel.from_json({"n": 1, "potentials": [["0", "1", "0", "-1/12"]], "couplings": [], "T": "1"})
try:
    build_curve(ms, RF)
    raise AssertionError("should be singular")
except SingularCurveError as e:
    print("10. g4=-1/12 -> SingularCurveError:", e)
mb = ChainModel.from_json({"n": 1, "potentials": [["0", "1", "0", "-1/11"]], "couplings": [], "T": "1"})
try:
    build_curve(mb, RF)
    raise AssertionError("should fail to solve")
except SolverError as e:
    print("11. g4=-1/11 -> SolverError:", e)

# 7. series ring: quartic deformation g4, order 3
RS = SeriesRing("g4", 3)
mt = ChainModel.from_json({"n": 1, "potentials": [["0", "1", "0", "1"]], "couplings": [], "T": "1"})
ct = build_curve(mt, RS)
x1n = ct.xs[0].num
# x1 = z + u/z with gamma^2 = u: u satisfies u = T - 3 g4 u^2 *? V'=x+g4 x^3: saddle: u(1+3 g4 u) = T
# => u = 1 - 3t + 18t^2 - 135 t^3 + ... (t=g4)
u = x1n.coeff(0)
print("   series u =", u)
assert u.c[0] == F(1) and u.c[1] == F(-3) and u.c[2] == F(18) and u.c[3] == F(-135), u
print("12. series build ok")

# 8. external field: n=1, V=x^2/2, lambda = (1, -1), f = (1/2, 1/2), T=1
me = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "1",
                           "external": [{"lambda": "2", "fraction": "1/2"},
                                        {"lambda": "-2", "fraction": "1/2"}]})
ce = build_curve(me, RF)
print("13. external field built; zetas:", ce.zetas)
# check x2(zeta_i) = lambda_i
for zv, (lam, f) in zip(ce.zetas, me.ext()):
    got = ce.xs[1](complex(zv))
    assert close(got, complex(lam), 1e-8), (got, lam)
# moduli spot check: T = Res_inf c12 x2 dx1 = -[z^-1] of x2 * x1'
from chaintr.algebra import RationalFn
resid = local_expand(ce.xs[1] * ce.xs[0].deriv(), INF, 1)
tr = -resid.coeff(1) if False else None
# residue at INF of f dz = -[z^{-1}]f
from chaintr.algebra import residue
rr = residue(ce.xs[1] * ce.xs[0].deriv(), INF)
assert close(rr, 1.0, 1e-9), rr
print("14. external-field T identity ok:", rr)

# exact external: branch points are irrational -> informative rejection
from chaintr.algebra import IrrationalRootError
try:
    build_curve(me, RQ)
    raise AssertionError("expected irrational branch points")
except IrrationalRootError as e:
    print("15. exact external rejected cleanly:", str(e)[:72], "...")

# the two-cut merger (criticality) is detected on a real model
mcrit = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "1",
                              "external": [{"lambda": "1", "fraction": "1/2"},
                                           {"lambda": "-1", "fraction": "1/2"}]})
try:
    build_curve(mcrit, RF)
    raise AssertionError("expected branch collision")
except SingularCurveError as e:
    print("16. two-cut merger detected:", e)

print("ALL BUILD SMOKE OK")
