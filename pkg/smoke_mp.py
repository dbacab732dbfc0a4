from fractions import Fraction as F

from chaintr.algebra import RationalRing, FloatRing
from chaintr.model import (ChainModel, build_curve, validate_moduli,
                           compute_E0)

RQ, RF = RationalRing(), FloatRing()

# Gaussian n=1 exact
m = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "1"})
c = build_curve(m, RQ)
rep = validate_moduli(c, m)
print(rep)
for r in rep.rows:
    print("  ", r.name, "exp", r.expected, "got", r.got, "OK" if r.ok else "FAIL")
assert rep.ok

e0 = compute_E0(c)
print("E0 =", e0)
assert e0.degree("x1") == 1 and e0.degree("x2") == 2
assert e0.coeff((0, 2)) == F(1) and e0.coeff((1, 1)) == F(-1) and e0.coeff((0, 0)) == F(1)

# T=4: y^2 - xy + 4
c4 = build_curve(ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "4"}), RQ)
e04 = compute_E0(c4)
assert e04.coeff((0, 0)) == F(4), e04
print("E0(T=4) =", e04)

# n=2 chain c=3/5 exact monic
m2 = ChainModel.from_json({"n": 2, "potentials": [["0", "1"], ["0", "1"]],
                           "couplings": ["3/5"], "T": "1"})
c2 = build_curve(m2, RQ)
rep2 = validate_moduli(c2, m2)
print(rep2)
assert rep2.ok, rep2.failures()
e02 = compute_E0(c2)
print("E0(n=2) =", e02)
assert e02.degree("x1") == 2 and e02.degree("x2") == 2

# float quartic
mq = ChainModel.from_json({"n": 1, "potentials": [["0", "1", "0", "1/20"]], "couplings": [], "T": "1"})
cq = build_curve(mq, RF)
repq = validate_moduli(cq, mq)
print(repq)
assert repq.ok, repq.failures()
e0q = compute_E0(cq)
print("E0(quartic) deg:", e0q.degree("x1"), e0q.degree("x2"))
assert e0q.degree("x1") == 3 and e0q.degree("x2") == 2

# float external
me = ChainModel.from_json({"n": 1, "potentials": [["0", "1"]], "couplings": [], "T": "1",
                           "external": [{"lambda": "2", "fraction": "1/2"},
                                        {"lambda": "-2", "fraction": "1/2"}]})
ce = build_curve(me, RF)
repe = validate_moduli(ce, me)
print(repe)
assert repe.ok, repe.failures()
e0e = compute_E0(ce)
print("E0(external) deg:", e0e.degree("x1"), e0e.degree("x2"))

# n=2 float symmetric moduli
c2f = build_curve(m2, RF)
rep2f = validate_moduli(c2f, m2)
print(rep2f)
assert rep2f.ok, rep2f.failures()

print("MODULI+PLANE SMOKE OK")
