"""Generate the frozen K_1 reference table used by tests/test_special.py.

The oracle is the integral representation

    K_1(x) = int_0^inf e^{-x cosh t} cosh t dt
           = e^{-x} int_0^inf e^{-x (sqrt(1+u^2) - 1)} du   (u = sinh t),

evaluated with mpmath quadrature at 30 significant digits.  The second form
keeps the integrand O(1) so the rule converges uniformly over the whole x
range.  Every point is cross-checked against mpmath.besselk(1, x) before it
is written, so a quadrature failure cannot silently poison the table.  The
production code in src/orbitcount/special.py never sees mpmath; it only has
to reproduce the frozen CSV to 1e-12 relative.

Usage: python3 tools/gen_k1_reference.py [out_csv]
"""

import sys

import mpmath as mp


def k1_integral(x: mp.mpf) -> mp.mpf:
    def g(u):
        s = mp.sqrt(1 + u * u)
        # sqrt(1+u^2) - 1 written without cancellation
        return mp.e ** (-x * u * u / (s + 1))

    cuts = sorted({mp.mpf(1), 1 / mp.sqrt(x), 20 / mp.sqrt(x), 20 / x})
    return mp.e ** (-x) * mp.quad(g, [0] + cuts + [mp.inf])


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/k1_reference.csv"
    mp.mp.dps = 30

    n = 1000
    lo, hi = mp.mpf("1e-6"), mp.mpf(700)
    ratio = (hi / lo) ** (mp.mpf(1) / (n - 1))

    rows = []
    worst = mp.mpf(0)
    for k in range(n):
        x = lo * ratio**k
        via_quad = k1_integral(x)
        via_besselk = mp.besselk(1, x)
        rel = abs(via_quad - via_besselk) / abs(via_besselk)
        worst = max(worst, rel)
        if rel > mp.mpf("1e-24"):
            raise SystemExit(f"oracle disagreement at x={mp.nstr(x, 20)}: rel={mp.nstr(rel, 5)}")
        rows.append((x, via_quad))

    with open(out, "w") as fh:
        fh.write("x,k1\n")
        for x, v in rows:
            fh.write(f"{mp.nstr(x, 20, strip_zeros=False)},{mp.nstr(v, 20, strip_zeros=False)}\n")
    print(f"wrote {len(rows)} rows to {out}; worst cross-check rel err {mp.nstr(worst, 3)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
