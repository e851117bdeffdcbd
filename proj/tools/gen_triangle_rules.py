#!/usr/bin/env python3
"""Refine symmetric positive-weight triangle quadrature rules to full precision.

Starting points are the classical Dunavant orbit layouts. Each rule is polished
with Gauss-Newton on the moment equations in extended precision and emitted as
a C++ table for include/esdg/detail/triangle_rules.hpp.

Weights are normalized to sum to one (unit-measure simplex); the C++ side
rescales to the reference triangle.
"""
import itertools
import sys

import mpmath as mp

mp.mp.dps = 50

# degree -> list of orbits; ("c", w) | ("s21", a, w) | ("s111", a, b, w)
SEEDS = {
    1: [("c", 1.0)],
    2: [("s21", 1 / 6, 1 / 3)],
    4: [("s21", 0.445948490915965, 0.223381589678011),
        ("s21", 0.091576213509771, 0.109951743655322)],
    5: [("c", 0.225),
        ("s21", 0.470142064105115, 0.132394152788506),
        ("s21", 0.101286507323456, 0.125939180544827)],
    6: [("s21", 0.249286745170910, 0.116786275726379),
        ("s21", 0.063089014491502, 0.050844906370207),
        ("s111", 0.310352451033784, 0.636502499121399, 0.082851075618374)],
    8: [("c", 0.144315607677787),
        ("s21", 0.170569307751760, 0.103217370534718),
        ("s21", 0.050547228317031, 0.032458497623198),
        ("s21", 0.459292588292723, 0.095091634267285),
        ("s111", 0.263112829634638, 0.728492392955404, 0.027230314174435)],
    9: [("c", 0.097135796282799),
        ("s21", 0.489682519198738, 0.031334700227139),
        ("s21", 0.437089591492937, 0.077827541004774),
        ("s21", 0.188203535619033, 0.079647738927210),
        ("s21", 0.044729513394453, 0.025577675658698),
        ("s111", 0.221962989160766, 0.741198598784498, 0.043283539377289)],
    10: [("c", 0.090817990382754),
         ("s21", 0.485577633383657, 0.036725957756467),
         ("s21", 0.109481575485037, 0.045321059435528),
         ("s111", 0.141707219414880, 0.307939838764121, 0.072757916845420),
         ("s111", 0.025003534762686, 0.246672560639903, 0.028327242531057),
         ("s111", 0.009540815400299, 0.066803251012200, 0.009421666963733)],
    12: [("s21", 0.488217389773805, 0.025731066440455),
         ("s21", 0.439724392294460, 0.043692544538038),
         ("s21", 0.271210385012116, 0.062858224217885),
         ("s21", 0.127576145541586, 0.034796112930709),
         ("s21", 0.021317350453210, 0.006166261051559),
         ("s111", 0.115343494534698, 0.275713269685514, 0.040371557766381),
         ("s111", 0.022838332222257, 0.281325580989940, 0.022356773202303),
         ("s111", 0.025734050548330, 0.116251915907597, 0.017316231108659)],
}


def expand(orbits, params):
    pts, wts = [], []
    it = iter(params)
    for orb in orbits:
        kind = orb[0]
        if kind == "c":
            w = next(it)
            pts.append((mp.mpf(1) / 3, mp.mpf(1) / 3, mp.mpf(1) / 3))
            wts.append(w)
        elif kind == "s21":
            a, w = next(it), next(it)
            c = 1 - 2 * a
            for p in set(itertools.permutations((0, 0, 1))):
                pts.append(tuple(c if q else a for q in p))
                wts.append(w / 3)
        else:
            a, b, w = next(it), next(it), next(it)
            c = 1 - a - b
            for p in itertools.permutations((a, b, c)):
                pts.append(p)
                wts.append(w / 6)
    return pts, wts


def flat(orbits):
    out = []
    for orb in orbits:
        out.extend(mp.mpf(x) for x in orb[1:])
    return out


def residual(orbits, params, degree):
    pts, wts = expand(orbits, params)
    res = []
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            exact = 2 * mp.factorial(i) * mp.factorial(j) / mp.factorial(i + j + 2)
            s = mp.fsum(w * p[0] ** i * p[1] ** j for p, w in zip(pts, wts))
            res.append(s - exact)
    return res


def refine(orbits, degree):
    x = flat(orbits)
    for _ in range(60):
        r = residual(orbits, x, degree)
        nrm = max(abs(v) for v in r)
        if nrm < mp.mpf(10) ** -45:
            break
        h = mp.mpf(10) ** -25
        cols = []
        for k in range(len(x)):
            xp = list(x)
            xp[k] += h
            rp = residual(orbits, xp, degree)
            cols.append([(a - b) / h for a, b in zip(rp, r)])
        J = mp.matrix(len(r), len(x))
        for k, col in enumerate(cols):
            for i, v in enumerate(col):
                J[i, k] = v
        dx = mp.lu_solve(J.T * J, -(J.T * mp.matrix(r)))
        x = [xi + dx[k] for k, xi in enumerate(x)]
    return x, max(abs(v) for v in residual(orbits, x, degree))


def main():
    print("// Generated by tools/gen_triangle_rules.py; do not edit by hand.")
    for degree, orbits in SEEDS.items():
        x, err = refine(orbits, degree)
        pts, wts = expand(orbits, x)
        assert err < 1e-30, (degree, err)
        assert all(w > 0 for w in wts), degree
        assert all(min(p) > 0 for p in pts), degree
        sys.stderr.write(f"degree {degree}: {len(pts)} points, residual {mp.nstr(err, 3)}\n")
        print(f"inline constexpr TriangleOrbit kDegree{degree}[] = {{")
        it = iter(x)
        for orb in orbits:
            kind = orb[0]
            if kind == "c":
                w = next(it)
                print(f"    {{OrbitKind::centroid, 0.0, 0.0, {mp.nstr(w, 20)}}},")
            elif kind == "s21":
                a, w = next(it), next(it)
                print(f"    {{OrbitKind::s21, {mp.nstr(a, 20)}, 0.0, {mp.nstr(w, 20)}}},")
            else:
                a, b, w = next(it), next(it), next(it)
                print(f"    {{OrbitKind::s111, {mp.nstr(a, 20)}, {mp.nstr(b, 20)}, {mp.nstr(w, 20)}}},")
        print("};")


if __name__ == "__main__":
    main()
