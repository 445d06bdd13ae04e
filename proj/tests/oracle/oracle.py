"""High-precision reference values for the unit and acceptance tests.

Each quantity is computed here from its defining series with mpmath at 50
digits, independently of the C++ sources, and the printed values are pasted
into the tests as frozen constants. Run: python3 tests/oracle/oracle.py
"""
from fractions import Fraction

from mpmath import mp, mpf, exp, floor, nsum, inf

mp.dps = 50


def alpha(q, d, b):
    q, b = mpf(q), mpf(b)
    return (q ** (b + d) - 1) / ((q ** d - 1) * q ** b)


def charfn(q, d, b, j):
    """1 - alpha ||y||^b at ||y|| = q^-j (j = None for y = 0)."""
    return mpf(1) if j is None else 1 - alpha(q, d, b) * mpf(q) ** (-j * b)


def nstep_cdf(q, d, b, n, k):
    """P(||S_n|| <= q^k) = q^(kd) * integral of charfn^n over ||y|| <= q^-k."""
    k = max(k, 0)
    q = mpf(q)
    return nsum(lambda j: charfn(q, d, b, int(j)) ** n * (1 - q ** -d) * q ** ((k - j) * d), [k, inf])


def nstep_pmf_shell(q, d, b, n, k):
    """Point mass at an element of norm q^k, by differencing the cdf."""
    q_ = mpf(q)
    if k == 0:
        return nstep_cdf(q, d, b, n, 0)
    return (nstep_cdf(q, d, b, n, k) - nstep_cdf(q, d, b, n, k - 1)) / (q_ ** (k * d) * (1 - q_ ** -d))


def moment(q, d, b, n, r):
    q_ = mpf(q)
    return nsum(lambda k: q_ ** (k * r) * (nstep_cdf(q, d, b, n, int(k)) - nstep_cdf(q, d, b, n, int(k) - 1)), [1, inf])


def ball0(q, d, b, sigma, t, n):
    """P(||X_t|| <= q^n) for the limit diffusion."""
    q = mpf(q)
    return nsum(lambda j: exp(-sigma * t * q ** (-j * b)) * (1 - q ** -d) * q ** ((n - j) * d), [n, inf])


def steps(q, d, b, sigma, m, t):
    tau = alpha(q, d, b) / sigma * mpf(q) ** (-m * b)
    return int(floor(t / tau))


def epsilon(q, d, b, sigma, m, t):
    """Shell sum of |E_m - exp(-sigma t ||y||^b)| times the shell measure."""
    q_ = mpf(q)
    n = steps(q, d, b, sigma, m, t)
    a = alpha(q, d, b)
    def shell(j):
        j = int(j)
        em = (1 - a * q_ ** ((j - m) * b)) ** n if j <= m else mpf(0)
        return abs(em - exp(-sigma * t * q_ ** (j * b))) * q_ ** (j * d) * (1 - q_ ** -d)
    low = nsum(shell, [-inf, 0])
    return low + sum(shell(j) for j in range(1, m + 1)) + nsum(shell, [m + 1, inf])


def brute_convolution(q, b, n, M):
    """n-fold convolution on Z[1/p]/Z truncated to B(M), d = 1, q = p prime; exact rationals."""
    size = q ** M
    step = {}

    # element x/q^M has depth M - v_q(x)
    def depth(x):
        if x == 0:
            return 0
        v = 0
        while x % q == 0:
            x //= q
            v += 1
        return M - v
    for x in range(size):
        k = depth(x)
        step[x] = Fraction(0) if k == 0 else Fraction(q ** b - 1, q ** (k * b)) / (q ** k - q ** (k - 1))
    law = dict(step)
    for _ in range(n - 1):
        out = {x: Fraction(0) for x in range(size)}
        for x, px in law.items():
            if px:
                for y, py in step.items():
                    if py:
                        out[(x + y) % size] += px * py
        law = out
    return law


if __name__ == "__main__":
    print("alpha(2,1,1) =", alpha(2, 1, 1))
    print("charfn(2,1,1,||y||=1) =", charfn(2, 1, 1, 0))
    for n in (1, 2, 3):
        print(f"nstep_pmf_shell q=2 d=1 b=1 n={n}:", [mp.nstr(nstep_pmf_shell(2, 1, 1, n, k), 17) for k in range(4)])
    print("nstep_pmf_shell q=3 d=2 b=1.5 n=2:", [mp.nstr(nstep_pmf_shell(3, 2, 1.5, 2, k), 17) for k in range(3)])
    print("nstep_cdf q=2 d=1 b=1 n=10:", [mp.nstr(nstep_cdf(2, 1, 1, 10, k), 17) for k in range(6)])
    print("moment q=2 d=1 b=1 n=1 r=1/2:", mp.nstr(moment(2, 1, 1, 1, mpf(1) / 2), 17))
    print("moment q=2 d=1 b=1 n=5 r=1/2:", mp.nstr(moment(2, 1, 1, 5, mpf(1) / 2), 17))
    print("moment q=3 d=2 b=2 n=7 r=1:", mp.nstr(moment(3, 2, 2, 7, 1), 17))
    law = brute_convolution(2, 1, 2, 6)
    print("brute n=2 M=6 identity:", float(law[0]), " depth-1:", float(law[32]), " depth-3:", float(law[8]))
    a0 = ball0(2, 1, 1, 1, mpf(1) / 2, 0)
    print("ball_prob t=0.5 B(0):", mp.nstr(a0, 17))
    b0, b1 = ball0(2, 1, 1, 1, mpf(1) / 4, 0), ball0(2, 1, 1, 1, mpf(1) / 4, 1)
    print("nested limit:", mp.nstr(b0 * b0 + (b1 - b0) ** 2, 17))
    print("shell_prob t=1 k=0..2:", [mp.nstr(ball0(2, 1, 1, 1, 1, k) - ball0(2, 1, 1, 1, 1, k - 1), 17) for k in range(3)])
    for k in (-2, 0, 3):
        # rho(t, q^k) = sum_{n <= -k} (e^{-t q^{nb}} - e^{-t q^{(n+1)b}}) q^{nd}
        r = nsum(lambda n: (exp(-mpf(1) / 2 * mpf(2) ** n) - exp(-mpf(1) / 2 * mpf(2) ** (n + 1))) * mpf(2) ** n, [-inf, -k])
        print(f"rho q=2 d=1 b=1 t=0.5 k={k}:", mp.nstr(r, 17))
    print("epsilon_m m=1..14:", [mp.nstr(epsilon(2, 1, 1, 1, m, mpf(1) / 2), 12) for m in range(1, 15)])
    print("cylinder single m=1..6:", [mp.nstr(nstep_cdf(2, 1, 1, steps(2, 1, 1, 1, m, mpf(1) / 2), m), 17) for m in range(1, 7)])
