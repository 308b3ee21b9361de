"""Independent reference values for the C++ tests.

Kernels are written from their textbook definitions and differentiated
numerically with mpmath at 50 digits; chi-squared values come from scipy.
"""
import mpmath as mp
import numpy as np
from scipy.stats import chi2, norm

mp.mp.dps = 50


def h_se(l):
    return lambda t: mp.exp(-t / l**2)


def h_rq(l, a):
    return lambda t: (1 + t / (2 * a * l**2)) ** (-a)


def h_m52(l):
    def h(t):
        r = mp.sqrt(t)
        s = mp.sqrt(5) * r / l
        return (1 + s + s**2 / 3) * mp.exp(-s)
    return h


def derivs(h, t):
    return [h(t), mp.diff(h, t, 1), mp.diff(h, t, 2)]


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


for name, h, t in [("se l=2 t=4", h_se(2), 4), ("rq l=1.5 a=2 t=0.7", h_rq(1.5, 2), 0.7),
                   ("m52 l=1 t=1", h_m52(1), 1), ("m52 l=0.8 t=0.3", h_m52(0.8), 0.3)]:
    for k, v in enumerate(derivs(h, mp.mpf(t))):
        show(f"{name} d{k}", v)

# Field quantities for SE l=1, written directly from the covariance definitions.
h = h_se(1)
hp = lambda t: mp.diff(h, t, 1)
hpp = lambda t: mp.diff(h, t, 2)


def sq(v):
    return sum(mp.mpf(c) ** 2 for c in v)


def cov_skew(x1, x2, y1, y2):
    return 2 * (h(sq(np.subtract(x1, y1)) + sq(np.subtract(x2, y2)))
                - h(sq(np.subtract(x1, y2)) + sq(np.subtract(x2, y1))))


show("cov_skew ((0.3,-0.2),(1,0.5)) vs ((0.1,0.4),(-0.6,0.2))",
     cov_skew([0.3, -0.2], [1, 0.5], [0.1, 0.4], [-0.6, 0.2]))


def var_pointwise(d1, d2):
    d1 = [mp.mpf(c) for c in d1]
    d2 = [mp.mpf(c) for c in d2]
    s = sq(d1) + sq(d2)
    m = sq([a - b for a, b in zip(d1, d2)])
    p = sq([a + b for a, b in zip(d1, d2)])
    return 2 * (h(0) - h(2 * m)) + 4 * (-hp(0) + 2 * hp(s)) * m + 4 * (hpp(0) - 2 * hpp(s)) * m * p


show("var_pointwise ((1),(-1))", var_pointwise([1], [-1]))
show("var_pointwise ((0.4,-0.1),(0.2,0.3))", var_pointwise([0.4, -0.1], [0.2, 0.3]))


def cov_model(dx1, dx2, dy1, dy2):
    a = sum(mp.mpf(p) * q for p, q in zip(dx1 + dx2, dy1 + dy2))
    b = sum(mp.mpf(p) * q for p, q in zip(dx1 + dx2, dy2 + dy1))
    return -4 * hp(0) * (a - b) + 4 * hpp(0) * (a * a - b * b)


show("cov_model ((0.3,-0.2),(1,0.5)) vs ((0.1,0.4),(-0.6,0.2))",
     cov_model([0.3, -0.2], [1, 0.5], [0.1, 0.4], [-0.6, 0.2]))

# Bounds, SE l=1.
phi = lambda r2: 2 * (h(0) - h(8 * r2))
psi = lambda r2: phi(r2) + 4 * (-hp(0) + 2 * hp(2 * r2)) * 4 * r2 + 4 * (hpp(0) - 2 * hpp(2 * r2)) * 4 * r2**2
show("phi(R^2=0.25)", phi(mp.mpf("0.25")))
show("psi(R^2=4)", psi(mp.mpf(4)))
q = mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.95") - 1)
show("b_uniform R^2=0.25 p=0.95", q * mp.sqrt(phi(mp.mpf("0.25"))))
show("rc RQ l=1 a=1", mp.findroot(lambda t: -mp.diff(h_rq(1, 1), 0, 1) + 2 * mp.diff(h_rq(1, 1), t, 1), 0.8))
show("rc2 RQ l=1 a=1", mp.findroot(lambda t: mp.diff(h_rq(1, 1), 0, 2) - 2 * mp.diff(h_rq(1, 1), t, 2), 0.5))
show("rc1 M52 l=1", mp.findroot(lambda t: -mp.diff(h_m52(1), mp.mpf("1e-30"), 1) + 2 * mp.diff(h_m52(1), t, 1), 0.5))

for d, p in [(1, 0.95), (30, 0.95), (100, 0.9), (1000, 0.99), (3000, 0.95), (7, 0.5), (2, float(np.sqrt(0.95)))]:
    print(f"chi2({d}, {p!r}) = {chi2.ppf(p, d)!r}")
print("norm(0.975) =", repr(norm.ppf(0.975)))
